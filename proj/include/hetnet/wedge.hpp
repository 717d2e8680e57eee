#pragma once

#include <array>
#include <vector>

#include "hetnet/ext_real.hpp"

namespace hetnet {

// (x, y) -> (k1 x^p11 y^p12, k2 x^p21 y^p22) on (0,1)^2.
struct MonomialMap2 {
    std::array<std::array<double, 2>, 2> p{{{1.0, 0.0}, {0.0, 1.0}}};
    double k1 = 1.0;
    double k2 = 1.0;

    std::array<double, 2> operator()(double x, double y) const;
    double det() const { return p[0][0] * p[1][1] - p[0][1] * p[1][0]; }
};

// {(x, y) in (0,1)^2 : lo_const x^lo_exponent <= y <= hi_const x^hi_exponent}.
// lo_exponent may be +infinity (no lower bound).
struct Wedge {
    double lo_exponent = 2.0;
    double hi_exponent = 0.5;
    double lo_const = 1.0;
    double hi_const = 1.0;

    bool contains(double x, double y) const;
    // Exponents straddle 1: the wedge occupies a fixed fraction of small boxes.
    bool thick() const { return hi_exponent < 1.0 && lo_exponent > 1.0; }
};

// Exact preimage of w under m, again a wedge. Supports every exponent matrix
// for which both bounds pull back to bounds on y with positive exponent on y;
// throws UnsupportedForm otherwise.
Wedge preimage(const MonomialMap2& m, const Wedge& w);

struct IndexDetail {
    ExtReal sigma;
    ExtReal sigma_plus;   // decay exponent of the escaping fraction
    ExtReal sigma_minus;  // decay exponent of the attracted fraction
    bool extrapolated = false;  // produced by the thick-wedge rule
};

// Local stability index of a point whose escaping set near it is the union
// of the given wedges. Only exponents matter; constants are ignored.
ExtReal wedge_index(const std::vector<Wedge>& ws);
IndexDetail wedge_index_detail(const std::vector<Wedge>& ws);

// Area of w inside [0,eps]^2 divided by eps^2 (adaptive Gauss-Kronrod).
double wedge_measure_fraction(const Wedge& w, double eps);

// Closed exponent interval [lo, hi] with 0 <= lo <= hi <= +inf. A point
// (x, y) near the origin belongs to the set when ln y / ln x lies in it.
struct ExponentInterval {
    double lo;
    double hi;
};

// Union of exponent intervals, kept sorted and merged.
class ExponentSet {
public:
    void add(double lo, double hi);
    void add(const ExponentSet& o);
    bool empty() const { return iv_.empty(); }
    const std::vector<ExponentInterval>& intervals() const { return iv_; }
    bool contains(double r) const;
    bool same_as(const ExponentSet& o, double tol) const;
    std::vector<Wedge> wedges() const;

private:
    std::vector<ExponentInterval> iv_;
};

IndexDetail exponent_set_index(const ExponentSet& s);

}  // namespace hetnet
