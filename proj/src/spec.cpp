#include "hetnet/spec.hpp"

#include <cmath>

#include "hetnet/b2b2.hpp"
#include "hetnet/b3b3.hpp"
#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

template <class S, class Fields>
S spec_from_map(const std::map<std::string, double>& m, const Fields& fields, const char* kind) {
    S s;
    for (const auto& [k, v] : m) {
        bool found = false;
        for (const auto& [name, ptr] : fields)
            if (k == name) {
                s.*ptr = v;
                found = true;
            }
        if (!found) throw ConfigError(std::string("unknown ") + kind + " eigenvalue key '" + k + "'");
    }
    return s;
}

const std::vector<std::pair<std::string, double B3B3Spec::*>>& b3_fields() {
    static const std::vector<std::pair<std::string, double B3B3Spec::*>> f{
        {"e12", &B3B3Spec::e12}, {"e23", &B3B3Spec::e23}, {"e24", &B3B3Spec::e24}, {"e31", &B3B3Spec::e31},
        {"e41", &B3B3Spec::e41}, {"c13", &B3B3Spec::c13}, {"c14", &B3B3Spec::c14}, {"c21", &B3B3Spec::c21},
        {"c32", &B3B3Spec::c32}, {"c42", &B3B3Spec::c42}, {"c34", &B3B3Spec::c34}, {"c43", &B3B3Spec::c43},
        {"r1", &B3B3Spec::r1},   {"r2", &B3B3Spec::r2},   {"r3", &B3B3Spec::r3},   {"r4", &B3B3Spec::r4}};
    return f;
}

const std::vector<std::pair<std::string, double B2B2Spec::*>>& b2_fields() {
    static const std::vector<std::pair<std::string, double B2B2Spec::*>> f{
        {"ea2", &B2B2Spec::ea2}, {"eb3", &B2B2Spec::eb3}, {"eb4", &B2B2Spec::eb4}, {"ca3", &B2B2Spec::ca3},
        {"ca4", &B2B2Spec::ca4}, {"cb2", &B2B2Spec::cb2}, {"ra", &B2B2Spec::ra},   {"rb", &B2B2Spec::rb}};
    return f;
}

void positive(double v, const char* name) {
    if (!(v > 0)) throw PositivityViolation(std::string(name) + " must be positive");
}

int sgn(double v) { return (v > 0) - (v < 0); }

}  // namespace

B3B3Spec B3B3Spec::from_map(const std::map<std::string, double>& m) {
    return spec_from_map<B3B3Spec>(m, b3_fields(), "B3B3");
}

std::map<std::string, double> B3B3Spec::to_map() const {
    std::map<std::string, double> m;
    for (const auto& [name, ptr] : b3_fields()) m[name] = this->*ptr;
    return m;
}

B2B2Spec B2B2Spec::from_map(const std::map<std::string, double>& m) {
    return spec_from_map<B2B2Spec>(m, b2_fields(), "B2B2");
}

std::map<std::string, double> B2B2Spec::to_map() const {
    std::map<std::string, double> m;
    for (const auto& [name, ptr] : b2_fields()) m[name] = this->*ptr;
    return m;
}

Validated<B3B3Spec> validate_spec(const B3B3Spec& s, AssumptionFlags f) {
    for (const auto& [name, ptr] : b3_fields())
        if (name != "c34" && name != "c43") positive(s.*ptr, name.c_str());
    require_generic(s.c34, 0.0, "c34");
    require_generic(s.c43, 0.0, "c43");
    require_generic(s.e23, s.e24, "e23 (against e24)");

    const b3b3::DerivedQuantities d = b3b3::derived(s);
    require_generic(d.delta, 0.0, "delta");
    require_generic(d.delta_t, 0.0, "delta~");
    require_generic(d.sigma, 0.0, "sigma");
    require_generic(d.sigma_t, 0.0, "sigma~");
    require_generic(d.sigma, 1.0, "sigma");
    require_generic(d.sigma_t, 1.0, "sigma~");
    require_generic(d.rho, 1.0, "rho");
    require_generic(d.rho_t, 1.0, "rho~");
    require_generic(d.tau, 0.0, "tau");
    require_generic(d.tau_t, 0.0, "tau~");
    if (s.c34 < 0) require_generic(d.alpha, 1.0, "alpha");
    const b3b3::CycleParams p = b3b3::cycle_params(s);
    require_generic(p.xi3[0].b + p.xi3[1].b * p.xi3[0].a, -1.0, "b~1 + b~2 a~1");
    require_generic(p.xi4[0].b + p.xi4[1].b * p.xi4[0].a, -1.0, "b1 + b2 a1");

    if (f.a1) {
        if (!(d.rho > 1)) throw AssumptionViolation("assumption fails: rho > 1");
        if (!(d.rho_t > 1)) throw AssumptionViolation("assumption fails: rho~ > 1");
        if (!(s.e24 / s.e23 < 1)) throw AssumptionViolation("assumption fails: 0 < e24/e23 < 1");
    }
    if (f.a2) {
        if (!(d.tau > 0)) throw AssumptionViolation("assumption fails: tau > 0");
        if (!(d.tau_t > 0)) throw AssumptionViolation("assumption fails: tau~ > 0");
        if (!(d.delta > 0)) throw AssumptionViolation("assumption fails: delta > 0");
        if (!(d.delta_t > 0)) throw AssumptionViolation("assumption fails: delta~ > 0");
        // Only a negative transverse coefficient is bounded by the expanding rate.
        if (s.c34 < 0 && !(-s.c34 < s.e31)) throw AssumptionViolation("assumption fails: |c34| < e31");
        if (s.c43 < 0 && !(-s.c43 < s.e41)) throw AssumptionViolation("assumption fails: |c43| < e41");
    }
    Validated<B3B3Spec> v{s, f, {}};
    v.tags.c34 = sgn(s.c34);
    v.tags.c43 = sgn(s.c43);
    v.tags.delta = sgn(d.delta);
    v.tags.delta_t = sgn(d.delta_t);
    v.tags.sigma = sgn(d.sigma);
    v.tags.sigma_t = sgn(d.sigma_t);
    v.tags.sigma_vs_1 = sgn(d.sigma - 1);
    v.tags.sigma_t_vs_1 = sgn(d.sigma_t - 1);
    return v;
}

Validated<B2B2Spec> validate_spec(const B2B2Spec& s, AssumptionFlags f) {
    for (const auto& [name, ptr] : b2_fields()) positive(s.*ptr, name.c_str());
    require_generic(s.eb3, s.eb4, "eb3 (against eb4)");
    if (!(s.eb3 > s.eb4)) throw AssumptionViolation("assumption fails: eb3 > eb4");
    const b2b2::B2DerivedQuantities d = b2b2::derived_b2(s);
    require_generic(d.delta, 0.0, "delta");
    require_generic(d.delta_t, 0.0, "delta~");
    require_generic(d.rho, 1.0, "rho");
    require_generic(d.rho_t, 1.0, "rho~");
    if (f.a1) {
        if (!(d.rho > 1)) throw AssumptionViolation("assumption fails: rho > 1");
        if (!(d.rho_t > 1)) throw AssumptionViolation("assumption fails: rho~ > 1");
    }
    Validated<B2B2Spec> v{s, f, {}};
    v.tags.delta = sgn(d.delta);
    v.tags.delta_t = sgn(d.delta_t);
    return v;
}

}  // namespace hetnet
