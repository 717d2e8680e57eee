#include "hetnet/index_kernel.hpp"

#include <cmath>
#include <sstream>

#include "hetnet/errors.hpp"

namespace hetnet {

void require_generic(double x, double boundary, const std::string& what) {
    double scale = std::max(1.0, std::fabs(boundary));
    if (std::fabs(x - boundary) < kTolGeneric * scale) {
        std::ostringstream os;
        os.precision(12);
        os << "non-generic input: " << what << " = " << x << " lies on the boundary " << boundary;
        throw NonGeneric(os.str());
    }
}

ExtReal f_index(double alpha) {
    require_generic(alpha, -1.0, "f_index argument");
    if (alpha >= 0) return ExtReal::pos_inf();
    if (alpha > -1) return ExtReal(-1.0 / alpha - 1.0);
    return ExtReal(alpha + 1.0);
}

CycleNodeParams node_ab(const NodeEigenvalues& n) {
    if (!(n.r > 0) || !(n.c > 0) || !(n.e > 0))
        throw PositivityViolation("node rates r, c, e must be positive");
    require_generic(n.t, 0.0, "transverse eigenvalue t");
    const double m[4] = {n.r, n.c, n.e, std::fabs(n.t)};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::fabs(m[i] - m[j]) < kTolGeneric * std::max(m[i], m[j]))
                throw NonGeneric("node has two eigenvalues of equal magnitude");
    return {n.c / n.e, -n.t / n.e};
}

namespace {

template <std::size_t N>
std::array<ExtReal, N> all(ExtReal v) {
    std::array<ExtReal, N> out;
    out.fill(v);
    return out;
}

template <std::size_t N>
void check_bs(const std::array<CycleNodeParams, N>& p) {
    for (std::size_t i = 0; i < N; ++i) {
        if (!(p[i].a > 0)) throw PositivityViolation("cycle parameter a must be positive");
        require_generic(p[i].b, 0.0, "b" + std::to_string(i + 1));
    }
}

}  // namespace

CycleIndices2 b2_cycle_indices(const std::array<CycleNodeParams, 2>& in) {
    check_bs(in);
    CycleIndices2 out;
    const double prod = in[0].a * in[1].a;
    require_generic(prod, 1.0, "a1*a2");
    const bool n0 = in[0].b < 0, n1 = in[1].b < 0;
    if (n0 && n1) {
        out.sigma = all<2>(ExtReal::neg_inf());
        out.branch = "i";
        return out;
    }
    if (!n0 && !n1) {
        bool attr = prod > 1;
        out.sigma = all<2>(attr ? ExtReal::pos_inf() : ExtReal::neg_inf());
        out.branch = attr ? "ii.b" : "ii.a";
        return out;
    }
    const int k = n0 ? 0 : 1;  // the negative-b node becomes node 1
    out.rotation = k;
    const CycleNodeParams& p1 = in[k];
    const CycleNodeParams& p2 = in[1 - k];
    const double d = p1.b * p2.a + p2.b;
    require_generic(d, 0.0, "b1*a2+b2");
    if (prod < 1 || d < 0) {
        out.sigma = all<2>(ExtReal::neg_inf());
        out.branch = "iii.a";
        return out;
    }
    out.sigma[k] = f_index(p1.b);
    out.sigma[1 - k] = ExtReal::pos_inf();
    out.branch = "iii.b";
    return out;
}

CycleIndices3 b3_cycle_indices(const std::array<CycleNodeParams, 3>& in) {
    check_bs(in);
    CycleIndices3 out;
    const double prod = in[0].a * in[1].a * in[2].a;
    require_generic(prod, 1.0, "a1*a2*a3");
    int neg = 0;
    for (const auto& p : in) neg += p.b < 0;
    if (neg == 3) {
        out.sigma = all<3>(ExtReal::neg_inf());
        out.branch = "i";
        return out;
    }
    if (neg == 0) {
        bool attr = prod > 1;
        out.sigma = all<3>(attr ? ExtReal::pos_inf() : ExtReal::neg_inf());
        out.branch = attr ? "ii.b" : "ii.a";
        return out;
    }
    // Rotate so that the pattern is (-,+,+) or (-,-,+).
    int k = -1;
    for (int s = 0; s < 3; ++s) {
        bool b1n = in[s].b < 0, b2n = in[(s + 1) % 3].b < 0, b3n = in[(s + 2) % 3].b < 0;
        if (neg == 1 && b1n && !b2n && !b3n) k = s;
        if (neg == 2 && b1n && b2n && !b3n) k = s;
    }
    if (k < 0) throw InvalidSignPattern("sign pattern of b matches no case");
    out.rotation = k;
    const CycleNodeParams& p1 = in[k];
    const CycleNodeParams& p2 = in[(k + 1) % 3];
    const CycleNodeParams& p3 = in[(k + 2) % 3];
    const double delta = p1.b * p2.a * p3.a + p3.b * p2.a + p2.b;
    require_generic(delta, 0.0, "b1*a2*a3+b3*a2+b2");
    std::array<ExtReal, 3> s;
    if (neg == 1) {
        if (prod < 1 || delta < 0) {
            out.sigma = all<3>(ExtReal::neg_inf());
            out.branch = "iii.a";
            return out;
        }
        s = {f_index(p1.b), ExtReal::pos_inf(), f_index(p3.b + p1.b * p3.a)};
        out.branch = "iii.b";
    } else {
        const double tau = p2.b * p1.a * p3.a + p1.b * p3.a + p3.b;
        require_generic(tau, 0.0, "b2*a1*a3+b1*a3+b3");
        if (prod < 1 || tau < 0 || delta < 0) {
            out.sigma = all<3>(ExtReal::neg_inf());
            out.branch = "iv.a";
            return out;
        }
        s = {min(f_index(p1.b), f_index(p1.b + p2.b * p1.a)), f_index(p2.b), ExtReal::pos_inf()};
        out.branch = "iv.b";
    }
    for (int j = 0; j < 3; ++j) out.sigma[(k + j) % 3] = s[j];
    return out;
}

}  // namespace hetnet
