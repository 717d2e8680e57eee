#include "hetnet/wedge.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::array<double, 2> MonomialMap2::operator()(double x, double y) const {
    return {k1 * std::pow(x, p[0][0]) * std::pow(y, p[0][1]),
            k2 * std::pow(x, p[1][0]) * std::pow(y, p[1][1])};
}

bool Wedge::contains(double x, double y) const {
    if (std::isfinite(lo_exponent) && y < lo_const * std::pow(x, lo_exponent)) return false;
    return y <= hi_const * std::pow(x, hi_exponent);
}

namespace {

// Pull back "Y >= c X^g" (lower = true) or "Y <= c X^g" through m.
// Result: y >= C x^e or y <= C x^e, reported via `is_lower`.
struct Bound {
    bool is_lower;
    double exponent;
    double constant;
};

Bound pull_back(const MonomialMap2& m, double g, double c, bool lower) {
    const auto& p = m.p;
    const double q = p[1][1] - p[0][1] * g;
    if (std::fabs(q) < 1e-14) throw UnsupportedForm("preimage: bound degenerates (no y-dependence)");
    // k2 x^p21 y^p22 (>= or <=) c k1^g x^(p11 g) y^(p12 g)
    // y^q (>= or <=) (c k1^g / k2) x^(p11 g - p21)
    const double e = (p[0][0] * g - p[1][0]) / q;
    const double cc = std::pow(c * std::pow(m.k1, g) / m.k2, 1.0 / q);
    return {q > 0 ? lower : !lower, e, cc};
}

}  // namespace

Wedge preimage(const MonomialMap2& m, const Wedge& w) {
    if (std::fabs(m.det()) < 1e-14) throw UnsupportedForm("preimage: singular exponent matrix");
    Wedge out;
    bool have_lo = false, have_hi = false;
    auto place = [&](const Bound& b) {
        if (b.is_lower) {
            if (have_lo) throw UnsupportedForm("preimage: both bounds pull back to lower bounds");
            out.lo_exponent = b.exponent;
            out.lo_const = b.constant;
            have_lo = true;
        } else {
            if (have_hi) throw UnsupportedForm("preimage: both bounds pull back to upper bounds");
            out.hi_exponent = b.exponent;
            out.hi_const = b.constant;
            have_hi = true;
        }
    };
    if (std::isfinite(w.lo_exponent)) place(pull_back(m, w.lo_exponent, w.lo_const, true));
    place(pull_back(m, w.hi_exponent, w.hi_const, false));
    if (!have_lo) {
        if (m.p[0][1] != 0.0 || m.p[1][1] <= 0.0)
            throw UnsupportedForm("preimage: open lower bound does not pull back to y >= 0");
        out.lo_exponent = kInf;
        out.lo_const = 1.0;
    }
    if (!have_hi) {
        out.hi_exponent = 0.0;
        out.hi_const = 1.0;
    }
    return out;
}

double wedge_measure_fraction(const Wedge& w, double eps) {
    const bool has_lo = std::isfinite(w.lo_exponent);
    auto upper = [&](double x) { return std::min(eps, w.hi_const * std::pow(x, w.hi_exponent)); };
    auto lower = [&](double x) { return has_lo ? w.lo_const * std::pow(x, w.lo_exponent) : 0.0; };
    auto g = [&](double x) { return std::max(0.0, upper(x) - lower(x)); };

    std::vector<double> cuts{0.0, eps};
    auto add_cut = [&](double x) {
        if (std::isfinite(x) && x > 0 && x < eps) cuts.push_back(x);
    };
    if (w.hi_exponent != 0) add_cut(std::pow(eps / w.hi_const, 1.0 / w.hi_exponent));
    if (has_lo && w.lo_exponent != 0) add_cut(std::pow(eps / w.lo_const, 1.0 / w.lo_exponent));
    if (has_lo && w.lo_exponent != w.hi_exponent)
        add_cut(std::pow(w.hi_const / w.lo_const, 1.0 / (w.lo_exponent - w.hi_exponent)));
    std::sort(cuts.begin(), cuts.end());

    // Each piece is mapped onto [0, 1]: the adaptive error test compares an
    // unscaled local error with a width-scaled tolerance, so very narrow
    // intervals would otherwise recurse to the depth limit.
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], w = cuts[i + 1] - cuts[i];
        if (w <= 0) continue;
        auto h = [&](double s) { return g(a + w * s); };
        area += w * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(h, 0.0, 1.0, 20, 1e-10);
    }
    return area / (eps * eps);
}

void ExponentSet::add(double lo, double hi) {
    lo = std::max(0.0, lo);
    if (hi < lo) return;
    iv_.push_back({lo, hi});
    std::sort(iv_.begin(), iv_.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    std::vector<ExponentInterval> merged;
    for (const auto& i : iv_) {
        if (!merged.empty() && i.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, i.hi);
        else
            merged.push_back(i);
    }
    iv_ = std::move(merged);
}

void ExponentSet::add(const ExponentSet& o) {
    for (const auto& i : o.iv_) add(i.lo, i.hi);
}

bool ExponentSet::contains(double r) const {
    for (const auto& i : iv_)
        if (r >= i.lo && r <= i.hi) return true;
    return false;
}

bool ExponentSet::same_as(const ExponentSet& o, double tol) const {
    if (iv_.size() != o.iv_.size()) return false;
    auto close = [tol](double a, double b) {
        if (std::isinf(a) || std::isinf(b)) return a == b;
        return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(a));
    };
    for (std::size_t i = 0; i < iv_.size(); ++i)
        if (!close(iv_[i].lo, o.iv_[i].lo) || !close(iv_[i].hi, o.iv_[i].hi)) return false;
    return true;
}

std::vector<Wedge> ExponentSet::wedges() const {
    std::vector<Wedge> out;
    for (const auto& i : iv_) out.push_back(Wedge{i.hi, i.lo, 1.0, 1.0});
    return out;
}

IndexDetail exponent_set_index(const ExponentSet& s) {
    IndexDetail d;
    for (const auto& i : s.intervals()) {
        if (std::isfinite(i.lo)) require_generic(i.lo, 1.0, "wedge exponent");
        if (std::isfinite(i.hi)) require_generic(i.hi, 1.0, "wedge exponent");
    }
    for (const auto& i : s.intervals()) {
        if (i.lo < 1.0 && i.hi > 1.0) {
            // Escaping set has positive density; the attracted set is bounded by
            // the nearest exponents outside the straddling component.
            ExtReal below = i.lo > 0 ? ExtReal(1.0 / i.lo - 1.0) : ExtReal::pos_inf();
            ExtReal above = std::isfinite(i.hi) ? ExtReal(i.hi - 1.0) : ExtReal::pos_inf();
            d.sigma_plus = ExtReal(0.0);
            d.sigma_minus = min(below, above);
            d.sigma = -d.sigma_minus;
            d.extrapolated = true;
            return d;
        }
    }
    double a_max = -1.0, a_min = kInf;
    for (const auto& i : s.intervals()) {
        for (double e : {i.lo, i.hi}) {
            if (e > 0 && e < 1) a_max = std::max(a_max, e);
            if (e > 1 && std::isfinite(e)) a_min = std::min(a_min, e);
        }
    }
    ExtReal sp = ExtReal::pos_inf();
    if (a_max > 0) sp = min(sp, ExtReal(1.0 / a_max - 1.0));
    if (std::isfinite(a_min)) sp = min(sp, ExtReal(a_min - 1.0));
    d.sigma_plus = sp;
    d.sigma_minus = ExtReal(0.0);
    d.sigma = sp;
    return d;
}

IndexDetail wedge_index_detail(const std::vector<Wedge>& ws) {
    ExponentSet s;
    for (const auto& w : ws) {
        if (w.hi_exponent > w.lo_exponent) continue;  // empty near the origin
        if (w.hi_exponent == w.lo_exponent && !(w.hi_const > w.lo_const)) continue;
        s.add(std::max(0.0, w.hi_exponent), std::max(0.0, w.lo_exponent));
    }
    return exponent_set_index(s);
}

ExtReal wedge_index(const std::vector<Wedge>& ws) { return wedge_index_detail(ws).sigma; }

}  // namespace hetnet
