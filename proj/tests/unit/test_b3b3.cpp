#include <doctest.h>

#include <random>

#include "hetnet/b3b3.hpp"
#include "hetnet/errors.hpp"

using namespace hetnet;
using namespace hetnet::b3b3;

namespace {

B3B3Spec p0() {
    B3B3Spec s;
    s.e12 = 1, s.e23 = 2, s.e24 = 1, s.e31 = 1, s.e41 = 1;
    s.c13 = 1.2, s.c14 = 0.8, s.c21 = 1.5, s.c32 = 1.5, s.c34 = 1.0, s.c42 = 1.5, s.c43 = 1.0;
    return s;
}
B3B3Spec p1() {
    B3B3Spec s = p0();
    s.c34 = -0.5;
    return s;
}
B3B3Spec p2() {
    B3B3Spec s = p0();
    s.c34 = -0.1;
    return s;
}
B3B3Spec p3() {
    B3B3Spec s;
    s.e12 = 1, s.e23 = 2, s.e24 = 1, s.e31 = 1, s.e41 = 1.5;
    s.c13 = 0.1, s.c14 = 0.4, s.c21 = 4, s.c32 = 6, s.c34 = -0.5, s.c42 = 1.5, s.c43 = 1.2;
    return s;
}

void check_value(const ExtReal& got, double want) {
    REQUIRE(got.is_finite());
    CHECK(got.value() == doctest::Approx(want).epsilon(1e-9));
}

}  // namespace

TEST_CASE("derived quantities of P0 and P1") {
    const DerivedQuantities d = derived(p0());
    CHECK(d.rho == doctest::Approx(1.8));
    CHECK(d.rho_t == doctest::Approx(1.35));
    CHECK(d.delta == doctest::Approx(0.4));
    CHECK(d.delta_t == doctest::Approx(1.3));
    CHECK(d.tau == doctest::Approx(0.8));
    CHECK(d.tau_t == doctest::Approx(1.1));
    CHECK(d.sigma == doctest::Approx(0.4));
    CHECK(d.sigma_t == doctest::Approx(-0.2));

    const DerivedQuantities e = derived(p1());
    CHECK(e.delta_t == doctest::Approx(-0.2));
    CHECK(e.alpha == doctest::Approx(0.875));
    CHECK(e.nu_t == doctest::Approx(0.025));
}

TEST_CASE("delta and rho agree with the per-node products") {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> pos(0.2, 3.0), sgn(-2.0, 2.0);
    for (int k = 0; k < 500; ++k) {
        B3B3Spec s;
        s.e12 = pos(g), s.e23 = pos(g), s.e24 = pos(g), s.e31 = pos(g), s.e41 = pos(g);
        s.c13 = pos(g), s.c14 = pos(g), s.c21 = pos(g), s.c32 = pos(g), s.c42 = pos(g);
        s.c34 = sgn(g), s.c43 = sgn(g);
        const DerivedQuantities d = derived(s);
        const CycleParams c = cycle_params(s);
        auto check = [](const std::array<CycleNodeParams, 3>& p, double rho, double delta) {
            CHECK(p[0].a * p[1].a * p[2].a == doctest::Approx(rho).epsilon(1e-12));
            CHECK(p[0].b * p[1].a * p[2].a + p[2].b * p[1].a + p[1].b == doctest::Approx(delta).epsilon(1e-12));
        };
        check(c.xi3, d.rho_t, d.delta_t);
        check(c.xi4, d.rho, d.delta);
    }
}

TEST_CASE("c-indices of the fixtures") {
    const CIndices a = c_indices(p0());
    check_value(a.t12, 1.0);
    CHECK(a.t23.is_pos_inf());
    CHECK(a.t31.is_pos_inf());
    check_value(a.s12, -1.0);
    CHECK(a.s24.is_pos_inf());
    check_value(a.s41, 1.5);

    const CIndices b = c_indices(p1());
    CHECK(b.t12.is_neg_inf());
    CHECK(b.t23.is_neg_inf());
    CHECK(b.t31.is_neg_inf());
    // c34 does not enter the xi4-cycle, so P1 shares P0's xi4 indices.
    CHECK(b.s12 < ExtReal(0.0));
    CHECK(b.s24.is_pos_inf());
    CHECK(b.s12 == a.s12);
    CHECK(b.s41 == a.s41);

    const CIndices c = c_indices(p2());
    check_value(c.t12, 1 / 0.575 - 1);
    check_value(c.t23, 9.0);
    CHECK(c.t31.is_pos_inf());
    check_value(c.s12, -1.0);
    CHECK(c.s24.is_pos_inf());
    check_value(c.s41, 1.5);
}

TEST_CASE("escape engine reproduces the c-indices") {
    for (const B3B3Spec& s : {p0(), p1(), p2(), p3()}) {
        const CIndices c = c_indices(s);
        auto same = [](const ExtReal& x, const ExtReal& y) {
            if (x.is_finite() && y.is_finite()) return std::fabs(x.value() - y.value()) < 1e-9;
            return x == y;
        };
        CHECK(same(skeleton_index(s, Conn::C12, kXi3).sigma, c.t12));
        CHECK(same(skeleton_index(s, Conn::C23, kXi3).sigma, c.t23));
        CHECK(same(skeleton_index(s, Conn::C31, kXi3).sigma, c.t31));
        CHECK(same(skeleton_index(s, Conn::C12, kXi4).sigma, c.s12));
        CHECK(same(skeleton_index(s, Conn::C24, kXi4).sigma, c.s24));
        CHECK(same(skeleton_index(s, Conn::C41, kXi4).sigma, c.s41));
    }
}

TEST_CASE("n-indices of P0, P1 and P3") {
    const NIndices a = n_indices(p0());
    CHECK(a.regime == "contracting");
    for (Conn c : kConnections) CHECK(a.n.at(c).value > ExtReal(0.0));
    CHECK(a.n.at(Conn::C23).value.is_pos_inf());
    CHECK(a.n.at(Conn::C24).value.is_pos_inf());
    CHECK(a.n.at(Conn::C31).value.is_pos_inf());
    CHECK(a.n.at(Conn::C41).value.is_finite());
    CHECK(a.n.at(Conn::C12).value.is_finite());

    const NIndices b = n_indices(p3());
    CHECK(b.n.at(Conn::C31).value.is_pos_inf());
    CHECK(b.n.at(Conn::C24).value.is_pos_inf());
    CHECK(b.n.at(Conn::C23).value > ExtReal(0.0));
    CHECK(b.n.at(Conn::C41).value > ExtReal(0.0));
    CHECK(b.n.at(Conn::C12).value < ExtReal(0.0));

    const NIndices c = n_indices(p1());
    CHECK(c.regime == "xi3-expanding");
    CHECK(c.n.at(Conn::C12).value < ExtReal(0.0));
}

TEST_CASE("n-index is never below the c-index") {
    for (const B3B3Spec& s : {p0(), p1(), p2(), p3()}) {
        const CIndices c = c_indices(s);
        const NIndices n = n_indices(s);
        CHECK(n.n.at(Conn::C12).value >= max(c.t12, c.s12));
        CHECK(n.n.at(Conn::C23).value >= c.t23);
        CHECK(n.n.at(Conn::C31).value >= c.t31);
        CHECK(n.n.at(Conn::C24).value >= c.s24);
        CHECK(n.n.at(Conn::C41).value >= c.s41);
    }
}

TEST_CASE("gamma sequences of P1") {
    const SequenceReport r = escape_sequences(p1());
    REQUIRE(r.gamma.upper.size() >= 2);
    CHECK(r.gamma.upper[0] == doctest::Approx(0.875));
    CHECK(r.gamma.lower[0] == doctest::Approx(0.5));
    CHECK(r.gamma.upper[1] == doctest::Approx(1.15625));
    CHECK(r.gamma.lower[1] == doctest::Approx(0.65));
    REQUIRE(r.gamma.crossing.has_value());
    CHECK(*r.gamma.crossing == 1);
    CHECK(r.gamma.monotone);
    CHECK(gamma_increment_residual(p1(), NuConvention::Composed) < 1e-12);
    CHECK_THROWS(escape_sequences(p0()));
}

TEST_CASE("p.a.s. flags") {
    PasReport a = pas_report(c_indices(p0()), n_indices(p0()));
    CHECK(a.pas_xi3);
    CHECK_FALSE(a.pas_xi4);
    CHECK(a.pas_network);

    PasReport b = pas_report(c_indices(p1()), n_indices(p1()));
    CHECK_FALSE(b.pas_xi3);
    CHECK_FALSE(b.pas_xi4);
    CHECK_FALSE(b.pas_network);
}

TEST_CASE("regime dispatch") {
    B3B3Spec s = p0();
    s.c34 = -0.5;
    s.c43 = -0.5;
    try {
        classify_regime(s);
        FAIL("expected UnsupportedRegime");
    } catch (const UnsupportedRegime& e) {
        CHECK(e.exit_code() == 2);
    }
    CHECK(classify_regime(p0()) == "contracting");
}

TEST_CASE("stabilising specs") {
    CHECK_FALSE(stabilization_condition(p1()));
    const B3B3Spec s = find_stabilizing_spec(default_stabilizing_box(), 1);
    CHECK(stabilization_condition(s));
    const NIndices n = n_indices(s);
    for (Conn c : kConnections) CHECK(n.n.at(c).value > ExtReal(0.0));
    const PasReport p = pas_report(c_indices(s), n);
    CHECK(p.pas_network);
}

TEST_CASE("non-p.a.s. witness") {
    const B3B3Spec s = find_nonpas_witness(default_witness_box(), 1);
    const PasReport p = pas_report(c_indices(s), n_indices(s));
    CHECK(p.pas_xi3);
    CHECK_FALSE(p.pas_network);
    CHECK(witness_inequalities(s));
    AssumptionFlags f;
    f.a1 = true;
    CHECK_NOTHROW(validate_spec(s, f));

    // sigma = 0.4 everywhere in this box.
    ParamBox box;
    for (const auto& [k, v] : p0().to_map()) box[k] = {v, v};
    box["c34"] = {-1.0, -0.05};
    CHECK_THROWS_AS(find_nonpas_witness(box, 1, 2000), SearchFailed);
}
