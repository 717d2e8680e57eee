#pragma once

#include <map>
#include <string>
#include <vector>

namespace hetnet {

struct B3B3Spec {
    double e12 = 1, e23 = 2, e24 = 1, e31 = 1, e41 = 1;
    double c13 = 1, c14 = 1, c21 = 1, c32 = 1, c42 = 1;
    double c34 = 1, c43 = 1;
    double r1 = 1, r2 = 1, r3 = 1, r4 = 1;

    // Keys are the field names above.
    static B3B3Spec from_map(const std::map<std::string, double>& m);
    std::map<std::string, double> to_map() const;
};

struct B2B2Spec {
    double ea2 = 1, eb3 = 2, eb4 = 1;
    double ca3 = 1, ca4 = 1, cb2 = 1;
    double ra = 1, rb = 1;

    static B2B2Spec from_map(const std::map<std::string, double>& m);
    std::map<std::string, double> to_map() const;
};

struct AssumptionFlags {
    bool a1 = false;  // rho, rho~ > 1 and 0 < e24/e23 < 1 (for B2B2: rho, rho~ > 1)
    bool a2 = false;  // tau, tau~, delta, delta~ > 0; -c34 < e31 if c34 < 0, -c43 < e41 if c43 < 0
};

// Regime tags: the signs that drive case dispatch.
struct RegimeTags {
    int c34 = 0, c43 = 0;
    int delta = 0, delta_t = 0;
    int sigma = 0, sigma_t = 0;          // sign of the quantity
    int sigma_vs_1 = 0, sigma_t_vs_1 = 0;  // sign of (quantity - 1)
};

template <class S>
struct Validated {
    S spec;
    AssumptionFlags flags;
    RegimeTags tags;
};

// Rejects non-positive rates (PositivityViolation), failed flagged
// assumptions (AssumptionViolation, naming the inequality) and inputs on a
// case boundary (NonGeneric).
Validated<B3B3Spec> validate_spec(const B3B3Spec& s, AssumptionFlags f);
Validated<B2B2Spec> validate_spec(const B2B2Spec& s, AssumptionFlags f);

}  // namespace hetnet
