#include <doctest.h>

#include <cmath>
#include <limits>

#include "hetnet/b3b3.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/ext_real.hpp"
#include "hetnet/spec.hpp"

using namespace hetnet;

namespace {
B3B3Spec p0() {
    B3B3Spec s;
    s.e12 = 1, s.e23 = 2, s.e24 = 1, s.e31 = 1, s.e41 = 1;
    s.c13 = 1.2, s.c14 = 0.8, s.c21 = 1.5, s.c32 = 1.5, s.c34 = 1.0, s.c42 = 1.5, s.c43 = 1.0;
    return s;
}
}  // namespace

TEST_CASE("ExtReal ordering and formatting") {
    const ExtReal a(1.5), pi = ExtReal::pos_inf(), ni = ExtReal::neg_inf();
    CHECK(ni < a);
    CHECK(a < pi);
    CHECK(-pi == ni);
    CHECK(pi.str() == "inf");
    CHECK(ni.str() == "-inf");
    CHECK(ExtReal(1.0 / 3.0).str() == "0.333333333333");
    CHECK(ExtReal::parse("-inf").is_neg_inf());
    CHECK(ExtReal::parse("+inf").is_pos_inf());
    CHECK(ExtReal::parse("0.25").value() == 0.25);
    CHECK(ExtReal::from_double(HUGE_VAL).is_pos_inf());
    CHECK_THROWS(ExtReal::from_double(std::nan("")));
    CHECK_THROWS(pi.value());
    CHECK(min(a, ni).is_neg_inf());
    CHECK(max(a, pi).is_pos_inf());
    CHECK(add(a, pi).is_pos_inf());
    CHECK_THROWS(add(pi, ni));
    CHECK(ExtReal(-2).sign() == -1);
    CHECK(ExtReal(0).sign() == 0);
}

TEST_CASE("require_generic rejects boundary values") {
    CHECK_THROWS_AS(require_generic(1.0 + 1e-12, 1.0, "rho"), NonGeneric);
    CHECK_NOTHROW(require_generic(1.001, 1.0, "rho"));
    CHECK_THROWS_AS(require_generic(0.0, 0.0, "delta"), NonGeneric);
}

TEST_CASE("exit codes by error class") {
    CHECK(ConfigError("x").exit_code() == 1);
    CHECK(PositivityViolation("x").exit_code() == 1);
    CHECK(UnsupportedRegime("x").exit_code() == 2);
    CHECK(UnsupportedForm("x").exit_code() == 2);
    CHECK(InsufficientSamples("x").exit_code() == 3);
    CHECK(SearchFailed("x").exit_code() == 3);
}

TEST_CASE("validate_spec on P0 and its perturbations") {
    AssumptionFlags a1;
    a1.a1 = true;
    const auto v = validate_spec(p0(), a1);
    CHECK(v.tags.delta == 1);
    CHECK(v.tags.delta_t == 1);
    CHECK(v.tags.sigma == 1);
    CHECK(v.tags.sigma_vs_1 == -1);
    CHECK(v.tags.sigma_t == -1);

    B3B3Spec s = p0();
    s.e23 = 0.5;
    CHECK_THROWS_AS(validate_spec(s, a1), AssumptionViolation);

    s = p0();
    s.c13 = 0;
    CHECK_THROWS_AS(validate_spec(s, a1), PositivityViolation);

    s = p0();
    s.c21 = -1;
    CHECK_THROWS_AS(validate_spec(s, a1), PositivityViolation);
}

TEST_CASE("spec map round trip") {
    const B3B3Spec s = p0();
    const B3B3Spec t = B3B3Spec::from_map(s.to_map());
    CHECK(t.to_map() == s.to_map());
    CHECK_THROWS(B3B3Spec::from_map({{"bogus", 1.0}}));
}

TEST_CASE("B2B2 validation") {
    B2B2Spec q;
    q.ea2 = 1, q.ca3 = 1.5, q.ca4 = 1.0, q.eb3 = 2, q.eb4 = 1, q.cb2 = 1.5;
    AssumptionFlags a1;
    a1.a1 = true;
    CHECK_NOTHROW(validate_spec(q, a1));
    q.eb4 = 2;  // eb3 = eb4
    CHECK_THROWS(validate_spec(q, a1));
}
