#include "hetnet/b3b3.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "hetnet/errors.hpp"
#include "hetnet/rng.hpp"

namespace hetnet::b3b3 {

DerivedQuantities derived(const B3B3Spec& s, NuConvention conv) {
    DerivedQuantities d{};
    const double sgn = conv == NuConvention::Composed ? -1.0 : 1.0;
    d.rho = s.c42 * s.c14 * s.c21 / (s.e24 * s.e41 * s.e12);
    d.rho_t = s.c32 * s.c13 * s.c21 / (s.e23 * s.e31 * s.e12);
    d.nu = sgn * s.e23 / s.e24 + s.c21 * s.c43 / (s.e24 * s.e41) + s.c13 * s.c42 * s.c21 / (s.e41 * s.e24 * s.e12);
    d.nu_t = sgn * s.e24 / s.e23 + s.c21 * s.c34 / (s.e23 * s.e31) + s.c14 * s.c32 * s.c21 / (s.e31 * s.e23 * s.e12);
    d.delta = s.c43 / s.e41 + s.c13 * s.c42 / (s.e12 * s.e41) - s.e23 * s.c14 * s.c42 / (s.e12 * s.e41 * s.e24);
    d.delta_t = s.c34 / s.e31 + s.c14 * s.c32 / (s.e12 * s.e31) - s.e24 * s.c13 * s.c32 / (s.e12 * s.e31 * s.e23);
    d.tau = s.c13 / s.e12 - s.e23 * s.c14 / (s.e12 * s.e24) + s.c14 * s.c21 * s.c43 / (s.e12 * s.e41 * s.e24);
    d.tau_t = s.c14 / s.e12 - s.e24 * s.c13 / (s.e12 * s.e23) + s.c13 * s.c21 * s.c34 / (s.e12 * s.e31 * s.e23);
    d.sigma = (s.c14 / s.e12) * (s.e23 / s.e24 - s.c13 / s.c14);
    d.sigma_t = (s.c13 / s.e12) * (s.e24 / s.e23 - s.c14 / s.c13);
    d.alpha = s.e24 / s.e23 - s.c21 * s.c34 / (s.e23 * s.e31);
    d.beta = d.tau_t / d.alpha;
    return d;
}

CycleParams cycle_params(const B3B3Spec& s) {
    CycleParams p;
    p.xi3 = {CycleNodeParams{s.c21 / s.e23, -s.e24 / s.e23}, CycleNodeParams{s.c32 / s.e31, s.c34 / s.e31},
             CycleNodeParams{s.c13 / s.e12, s.c14 / s.e12}};
    p.xi4 = {CycleNodeParams{s.c21 / s.e24, -s.e23 / s.e24}, CycleNodeParams{s.c42 / s.e41, s.c43 / s.e41},
             CycleNodeParams{s.c14 / s.e12, s.c13 / s.e12}};
    return p;
}

std::string conn_name(Conn c) {
    switch (c) {
        case Conn::C12: return "12";
        case Conn::C23: return "23";
        case Conn::C31: return "31";
        case Conn::C24: return "24";
        case Conn::C41: return "41";
    }
    return "?";
}

std::string conn_section(Conn c) {
    switch (c) {
        case Conn::C12: return "H1out2";
        case Conn::C23: return "H2out3";
        case Conn::C31: return "H3out1";
        case Conn::C24: return "H2out4";
        case Conn::C41: return "H4out1";
    }
    return "?";
}

CIndices c_indices(const B3B3Spec& s) {
    const CycleParams p = cycle_params(s);
    const CycleIndices3 x3 = b3_cycle_indices(p.xi3);
    const CycleIndices3 x4 = b3_cycle_indices(p.xi4);
    CIndices c;
    c.t12 = x3.sigma[0];
    c.t23 = x3.sigma[1];
    c.t31 = x3.sigma[2];
    c.s12 = x4.sigma[0];
    c.s24 = x4.sigma[1];
    c.s41 = x4.sigma[2];
    c.branch_xi3 = x3.branch;
    c.branch_xi4 = x4.branch;
    return c;
}

Skeleton skeleton(const B3B3Spec& s) {
    Skeleton sk;
    sk.sections = {"H1out2", "H2out3", "H3out1", "H2out4", "H4out1"};
    sk.cycle_names = {"xi3", "xi4"};
    // Reduced coordinates: H1out2 (x3, x4), H2out3 (x1, x4), H3out1 (x2, x4),
    // H2out4 (x1, x3), H4out1 (x2, x3).
    sk.maps = {
        {"phi123", 0, 1, Mat2{{{s.c21 / s.e23, 0.0}, {-s.e24 / s.e23, 1.0}}}, kXi3, "x4 < x3^(e24/e23)"},
        {"phi231", 1, 2, Mat2{{{s.c32 / s.e31, 0.0}, {s.c34 / s.e31, 1.0}}}, kXi3, "x4 < x1^(-c34/e31)"},
        {"phi312", 2, 0, Mat2{{{s.c13 / s.e12, 0.0}, {s.c14 / s.e12, 1.0}}}, kXi3, "none"},
        {"phi124", 0, 3, Mat2{{{0.0, s.c21 / s.e24}, {1.0, -s.e23 / s.e24}}}, kXi4, "x3 < x4^(e23/e24)"},
        {"phi241", 3, 4, Mat2{{{s.c42 / s.e41, 0.0}, {s.c43 / s.e41, 1.0}}}, kXi4, "x3 < x1^(-c43/e41)"},
        {"phi412", 4, 0, Mat2{{{s.c13 / s.e12, 1.0}, {s.c14 / s.e12, 0.0}}}, kXi4, "none"},
    };
    return sk;
}

IndexDetail skeleton_index(const B3B3Spec& s, Conn c, unsigned cycles) {
    const Skeleton sk = skeleton(s);
    const EscapeResult er = escape_sets(sk, cycles);
    return exponent_set_index(er.per_section[sk.section_index(conn_section(c))]);
}

namespace {

bool assumption1(const B3B3Spec& s, const DerivedQuantities& d) {
    return d.rho > 1 && d.rho_t > 1 && s.e24 / s.e23 > 0 && s.e24 / s.e23 < 1;
}

bool assumption2(const B3B3Spec& s, const DerivedQuantities& d) {
    // The magnitude bounds only constrain a negative transverse coefficient.
    return d.tau > 0 && d.tau_t > 0 && d.delta > 0 && d.delta_t > 0 && (s.c34 > 0 || -s.c34 < s.e31) &&
           (s.c43 > 0 || -s.c43 < s.e41);
}

}  // namespace

std::string classify_regime(const B3B3Spec& s) {
    const DerivedQuantities d = derived(s);
    if (!assumption1(s, d))
        throw UnsupportedRegime("regime not covered: requires rho > 1, rho~ > 1 and 0 < e24/e23 < 1");
    if (s.c34 < 0 && s.c43 < 0) throw UnsupportedRegime("regime not covered: c34 < 0 and c43 < 0 together");
    if (s.c34 > 0 && s.c43 > 0) return d.delta > 0 && d.delta_t > 0 ? "contracting" : "competing";
    if (s.c34 < 0) {
        if (d.delta_t < 0 && d.delta > 0) return "xi3-expanding";
        if (assumption2(s, d)) return "c34-negative";
        throw UnsupportedRegime("regime not covered: c34 < 0 requires either delta~ < 0 < delta or "
                                "tau, tau~, delta, delta~ > 0 with -c34 < e31");
    }
    if (assumption2(s, d)) return "c43-negative";
    throw UnsupportedRegime("regime not covered: c43 < 0 requires tau, tau~, delta, delta~ > 0 with -c43 < e41");
}

NIndices n_indices(const B3B3Spec& s) {
    NIndices out;
    out.regime = classify_regime(s);
    const Skeleton sk = skeleton(s);
    const EscapeResult er = escape_sets(sk, kNetwork);
    for (Conn c : kConnections) {
        const IndexDetail d = exponent_set_index(er.per_section[sk.section_index(conn_section(c))]);
        out.n[c] = IndexValue{d.sigma, out.regime + "/escape-set", d.extrapolated};
    }
    if (out.regime == "xi3-expanding") {
        const SequenceReport sr = escape_sequences(s);
        const bool cross = sr.gamma.crossing.has_value();
        const bool neg = out.n[Conn::C12].value < ExtReal(0.0);
        if (cross != neg) out.notes.push_back("gamma-sequence crossing disagrees with the escape-set sign at 12");
        if (cross) out.notes.push_back("gamma-sequence crossing at n = " + std::to_string(*sr.gamma.crossing));
    }
    if (out.regime == "c34-negative")
        out.notes.push_back("the index written sigma_14 in the c34 < 0 statement is read as sigma_24");
    const CIndices c = c_indices(s);
    auto check = [&](Conn k, const ExtReal& ci) {
        if (out.n[k].value < ci)
            out.notes.push_back("n-index below c-index at " + conn_name(k));
    };
    check(Conn::C12, max(c.t12, c.s12));
    check(Conn::C23, c.t23);
    check(Conn::C31, c.t31);
    check(Conn::C24, c.s24);
    check(Conn::C41, c.s41);
    return out;
}

namespace {

SequencePair make_pair(const std::function<double(int)>& lower, const std::function<double(int)>& upper, int n_cap,
                       const char* name, bool strict) {
    SequencePair p;
    for (int n = 0;; ++n) {
        if (n >= n_cap) throw CapExceeded(std::string(name) + " sequence did not pass 1 within n_cap terms");
        const double lo = lower(n), hi = upper(n);
        require_generic(lo, 1.0, std::string(name) + "-bar term");
        require_generic(hi, 1.0, std::string(name) + " term");
        if (!p.lower.empty() && (lo <= p.lower.back() || hi <= p.upper.back())) {
            p.monotone = false;
            if (strict) throw CapExceeded(std::string(name) + " sequence is not increasing");
        }
        p.lower.push_back(lo);
        p.upper.push_back(hi);
        if (!p.crossing && lo < 1 && 1 < hi) p.crossing = n;
        if (lo > 1) break;
    }
    return p;
}

}  // namespace

SequenceReport escape_sequences(const B3B3Spec& s, int n_cap, NuConvention conv) {
    const DerivedQuantities d = derived(s, conv);
    if (!(s.c34 < 0 && d.delta_t < 0 && d.delta > 0))
        throw UnsupportedRegime("escape sequences require c34 < 0 and delta~ < 0 < delta");
    const double rt = d.rho_t, a = s.e24 / s.e23;
    auto pw = [rt](int n) { return std::pow(rt, n); };
    auto sum_lt = [rt](int n) { return n == 0 ? 0.0 : (std::pow(rt, n) - 1.0) / (rt - 1.0); };  // k < n
    auto sum_le = [&](int n) { return sum_lt(n + 1); };
    const bool strict = conv == NuConvention::Composed;
    SequenceReport r;
    r.gamma = make_pair([&](int n) { return pw(n) * a - d.nu_t * sum_lt(n); },
                        [&](int n) { return pw(n) * d.alpha - d.nu_t * sum_lt(n); }, n_cap, "gamma", strict);
    r.zeta = make_pair([&](int n) { return pw(n) * d.sigma_t - d.tau_t * sum_lt(n); },
                       [&](int n) { return -d.tau_t * sum_le(n); }, n_cap, "zeta", strict);
    r.eta = make_pair([&](int n) { return -d.delta_t * sum_le(n); },
                      [&](int n) { return -(s.c34 / s.e31) * pw(n) - d.delta_t * sum_le(n); }, n_cap, "eta", strict);
    return r;
}

double gamma_increment_residual(const B3B3Spec& s, NuConvention conv, int n_terms) {
    const DerivedQuantities d = derived(s, conv);
    const DerivedQuantities ref = derived(s);
    const double q = s.e24 / s.e23;
    double worst = 0.0, pw = 1.0, sum = 0.0;  // rho~^n, sum_{k<n} rho~^k
    double prev = d.alpha;
    for (int n = 0; n < n_terms; ++n) {
        sum += pw;
        pw *= d.rho_t;
        const double next = pw * d.alpha - d.nu_t * sum;
        const double lhs = next - prev;
        const double rhs = (pw / d.rho_t) * ((d.rho_t - 1) * (d.alpha - q) - (s.c21 / s.e23) * ref.delta_t);
        worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
        prev = next;
    }
    return worst;
}

PasReport pas_report(const CIndices& c, const NIndices& n) {
    const ExtReal z(0.0);
    PasReport p;
    p.pas_xi3 = c.t12 > z && c.t23 > z && c.t31 > z;
    p.pas_xi4 = c.s12 > z && c.s24 > z && c.s41 > z;
    p.pas_network = !n.n.empty();
    for (const auto& [k, v] : n.n) p.pas_network = p.pas_network && v.value > z;
    return p;
}

bool stabilization_condition(const B3B3Spec& s) {
    const DerivedQuantities d = derived(s);
    if (!(s.c34 < 0 && -s.c34 < s.e31))
        throw AssumptionViolation("stabilization condition requires c34 < 0 and -c34 < e31");
    if (!assumption1(s, d)) throw AssumptionViolation("stabilization condition requires rho, rho~ > 1, 0 < e24/e23 < 1");
    const double bound = std::min(-s.e23 / s.e24, -s.e23 * (s.e31 + s.c34) / (s.e24 * s.c32));
    const double q = s.e24 / s.e23;
    return d.sigma < bound && 1 - s.c21 / s.e23 < q && q < 1 - (s.c21 / s.e23) * (-s.c34 / s.e31);
}

namespace {

B3B3Spec draw(const ParamBox& box, CounterRng& rng) {
    B3B3Spec s;
    auto m = s.to_map();
    for (auto& [k, v] : m) {
        auto it = box.find(k);
        if (it != box.end()) v = rng.uniform(it->second.lo, it->second.hi);
    }
    return B3B3Spec::from_map(m);
}

}  // namespace

bool witness_inequalities(const B3B3Spec& s) {
    const DerivedQuantities d = derived(s);
    const CycleParams p = cycle_params(s);
    const double q = p.xi3[0].b + p.xi3[1].b * p.xi3[0].a;
    // The preimage of the gap between dom(h1) and dom(h1~) in H4out1 is
    // x^sigma < y < x^(tau~/alpha); it is thick once tau~/alpha < 1 < sigma.
    return s.c34 < 0 && assumption1(s, d) && assumption2(s, d) && q > -1 && q < 0 && d.sigma > 1 &&
           -d.tau_t > -s.e24 / s.e23 + s.c34 * s.c21 / (s.e31 * s.e23);
}

ParamBox default_witness_box() {
    return {{"e12", {1, 1}},     {"e23", {1, 3}},      {"e24", {0.2, 1}},   {"e31", {1, 3}},
            {"e41", {1, 3}},     {"c13", {0.1, 2}},    {"c14", {0.5, 4}},   {"c21", {1, 6}},
            {"c32", {0.5, 6}},   {"c34", {-1, -0.05}}, {"c42", {0.1, 1}},   {"c43", {0.2, 3}}};
}

ParamBox default_stabilizing_box() {
    return {{"e12", {1, 1}},     {"e23", {1.5, 3}},     {"e24", {0.5, 1.4}}, {"e31", {1, 2}},
            {"e41", {1, 2}},     {"c13", {2, 6}},       {"c14", {0.1, 0.5}}, {"c21", {0.5, 2}},
            {"c32", {0.5, 3}},   {"c34", {-0.9, -0.05}}, {"c42", {1, 10}},   {"c43", {0.1, 2}}};
}

B3B3Spec find_nonpas_witness(const ParamBox& box, std::uint64_t seed, int max_draws) {
    for (int i = 0; i < max_draws; ++i) {
        CounterRng rng(seed, 0x57, static_cast<std::uint64_t>(i));
        B3B3Spec s = draw(box, rng);
        try {
            if (!witness_inequalities(s)) continue;
            const CIndices c = c_indices(s);
            const NIndices n = n_indices(s);
            const PasReport p = pas_report(c, n);
            if (p.pas_xi3 && n.n.at(Conn::C41).value < ExtReal(0.0)) return s;
        } catch (const NonGeneric&) {
        }
    }
    throw SearchFailed("no non-p.a.s. witness found in " + std::to_string(max_draws) + " draws");
}

B3B3Spec find_stabilizing_spec(const ParamBox& box, std::uint64_t seed, int max_draws) {
    for (int i = 0; i < max_draws; ++i) {
        CounterRng rng(seed, 0x5b, static_cast<std::uint64_t>(i));
        B3B3Spec s = draw(box, rng);
        const DerivedQuantities d = derived(s);
        if (!(s.c34 < 0 && -s.c34 < s.e31 && s.c43 > 0 && assumption1(s, d) && d.delta_t < 0 && d.delta > 0))
            continue;
        try {
            if (stabilization_condition(s)) return s;
        } catch (const Error&) {
        }
    }
    throw SearchFailed("no stabilising spec found in " + std::to_string(max_draws) + " draws");
}

}  // namespace hetnet::b3b3
