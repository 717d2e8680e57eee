#include "hetnet/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int Skeleton::section_index(const std::string& name) const {
    for (std::size_t i = 0; i < sections.size(); ++i)
        if (sections[i] == name) return static_cast<int>(i);
    throw UnknownMap("unknown section '" + name + "'");
}

int Skeleton::map_index(const std::string& name) const {
    for (std::size_t i = 0; i < maps.size(); ++i)
        if (maps[i].name == name) return static_cast<int>(i);
    throw UnknownMap("unknown map '" + name + "'");
}

std::vector<int> Skeleton::outgoing(int section, unsigned cycles) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < maps.size(); ++i)
        if (maps[i].from == section && (maps[i].cycles & cycles)) out.push_back(static_cast<int>(i));
    return out;
}

Mat2 compose(const Mat2& A, const Mat2& B) {
    Mat2 C{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) C[i][j] = A[i][0] * B[0][j] + A[i][1] * B[1][j];
    return C;
}

ExponentInterval admissible_interval(const Mat2& P) {
    double lo = 0.0, hi = kInf;
    for (int i = 0; i < 2; ++i) {
        const double c0 = P[i][0], c1 = P[i][1];
        if (c1 == 0.0) {
            if (!(c0 > 0)) return {0.0, 0.0};
        } else if (c1 > 0) {
            lo = std::max(lo, -c0 / c1);
        } else {
            hi = std::min(hi, -c0 / c1);
        }
    }
    return {lo, hi};
}

double ratio_image(const Mat2& P, double r) {
    if (std::isinf(r)) {
        if (P[0][1] != 0.0) return P[1][1] / P[0][1];
        return P[1][1] / P[0][0] > 0 ? kInf : 0.0;
    }
    const double num = P[1][0] + P[1][1] * r;
    const double den = P[0][0] + P[0][1] * r;
    const double scale_d = std::fabs(P[0][0]) + std::fabs(P[0][1] * r);
    const double scale_n = std::fabs(P[1][0]) + std::fabs(P[1][1] * r);
    if (std::fabs(den) <= 1e-13 * scale_d) return kInf;
    if (std::fabs(num) <= 1e-13 * scale_n) return 0.0;
    return num / den;
}

namespace {

double ratio_inverse(const Mat2& P, double y) {
    if (std::isinf(y)) return P[0][1] != 0.0 ? -P[0][0] / P[0][1] : kInf;
    const double den = P[0][1] * y - P[1][1];
    if (den == 0.0) return kInf;
    return (P[1][0] - P[0][0] * y) / den;
}

// {r in dom : lo <= f(r) <= hi} for the Moebius map of P.
void add_preimage(const Mat2& P, const ExponentInterval& dom, const ExponentInterval& iv, ExponentSet& out) {
    if (!(dom.hi > dom.lo)) return;
    const double det = P[0][0] * P[1][1] - P[0][1] * P[1][0];
    const double f_lo = ratio_image(P, dom.lo), f_hi = ratio_image(P, dom.hi);
    double r_a, r_b;
    if (det > 0) {
        if (iv.hi < f_lo || iv.lo > f_hi) return;
        r_a = iv.lo <= f_lo ? dom.lo : ratio_inverse(P, iv.lo);
        r_b = iv.hi >= f_hi ? dom.hi : ratio_inverse(P, iv.hi);
    } else {
        if (iv.hi < f_hi || iv.lo > f_lo) return;
        r_a = iv.hi >= f_lo ? dom.lo : ratio_inverse(P, iv.hi);
        r_b = iv.lo <= f_hi ? dom.hi : ratio_inverse(P, iv.lo);
    }
    r_a = std::max(r_a, dom.lo);
    r_b = std::min(r_b, dom.hi);
    if (r_b >= r_a) out.add(r_a, r_b);
}

ExponentSet normalise(const ExponentSet& s, const EscapeOptions& opt) {
    ExponentSet out;
    std::vector<ExponentInterval> kept;
    for (auto iv : s.intervals()) {
        if (iv.lo > opt.exponent_cap) continue;
        if (iv.hi <= 0.0) continue;
        if (iv.hi > opt.exponent_cap) iv.hi = kInf;
        if (!kept.empty() && iv.lo <= kept.back().hi + opt.merge_tol * std::max(1.0, kept.back().hi))
            kept.back().hi = std::max(kept.back().hi, iv.hi);
        else
            kept.push_back(iv);
    }
    for (const auto& iv : kept) out.add(iv.lo, iv.hi);
    return out;
}

}  // namespace

EscapeResult escape_sets(const Skeleton& sk, unsigned cycles, const EscapeOptions& opt) {
    const std::size_t n = sk.sections.size();
    std::vector<ExponentSet> viol(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<ExponentInterval> doms;
        for (int m : sk.outgoing(static_cast<int>(s), cycles)) doms.push_back(admissible_interval(sk.maps[m].P));
        std::sort(doms.begin(), doms.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
        double cur = 0.0;
        bool first = true;
        for (const auto& d : doms) {
            if (!(d.hi > d.lo)) continue;
            if (d.lo > cur || (d.lo == cur && !first)) viol[s].add(cur, d.lo);
            cur = std::max(cur, d.hi);
            first = false;
        }
        if (first) viol[s].add(0.0, kInf);
        else if (cur < kInf) viol[s].add(cur, kInf);
        viol[s] = normalise(viol[s], opt);
    }

    EscapeResult res;
    std::vector<ExponentSet> E = viol;
    for (int it = 1; it <= opt.max_iter; ++it) {
        std::vector<ExponentSet> next = viol;
        for (std::size_t s = 0; s < n; ++s) {
            for (int m : sk.outgoing(static_cast<int>(s), cycles)) {
                const auto& lm = sk.maps[m];
                const ExponentInterval dom = admissible_interval(lm.P);
                for (const auto& iv : E[lm.to].intervals()) add_preimage(lm.P, dom, iv, next[s]);
            }
            next[s] = normalise(next[s], opt);
        }
        bool same = true;
        for (std::size_t s = 0; s < n && same; ++s) same = next[s].same_as(E[s], 1e-10);
        E = std::move(next);
        if (same) {
            res.per_section = E;
            res.iterations = it;
            return res;
        }
    }
    throw CapExceeded("escape-set iteration did not settle within " + std::to_string(opt.max_iter) + " steps");
}

}  // namespace hetnet
