#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/ext_real.hpp"
#include "hetnet/index_kernel.hpp"
#include "hetnet/skeleton.hpp"
#include "hetnet/spec.hpp"

namespace hetnet::b3b3 {

enum class NuConvention { Composed, Display };

struct DerivedQuantities {
    double rho, nu, delta, tau, sigma;            // xi4-cycle
    double rho_t, nu_t, delta_t, tau_t, sigma_t;  // xi3-cycle
    double alpha;  // e24/e23 - c21 c34 / (e23 e31)
    double beta;   // tau_t / alpha
};

DerivedQuantities derived(const B3B3Spec& s, NuConvention nu = NuConvention::Composed);

// Per-node (a, b) of each cycle, nodes ordered xi2, xi3|xi4, xi1.
struct CycleParams {
    std::array<CycleNodeParams, 3> xi3;
    std::array<CycleNodeParams, 3> xi4;
};
CycleParams cycle_params(const B3B3Spec& s);

// Connections of the network. C12 is shared by both cycles.
enum class Conn { C12, C23, C31, C24, C41 };
inline constexpr std::array<Conn, 5> kConnections{Conn::C12, Conn::C23, Conn::C31, Conn::C24, Conn::C41};
std::string conn_name(Conn c);  // "12", "23", ...

struct CIndices {
    ExtReal t12, t23, t31;  // xi3-cycle
    ExtReal s12, s24, s41;  // xi4-cycle
    std::string branch_xi3, branch_xi4;
};

CIndices c_indices(const B3B3Spec& s);

struct IndexValue {
    ExtReal value;
    std::string source;  // regime / rule tag
    bool extrapolated = false;
};

struct NIndices {
    std::string regime;
    std::map<Conn, IndexValue> n;
    std::vector<std::string> notes;
};

// Regime names returned by classify_regime.
//   "contracting"       c34, c43 > 0 and delta, delta~ > 0
//   "competing"         c34, c43 > 0 and delta * delta~ < 0
//   "c34-negative"      c34 < 0 under both standing assumption sets
//   "c43-negative"      c43 < 0 under both standing assumption sets
//   "xi3-expanding"     c34 < 0 and delta~ < 0 < delta
// Throws UnsupportedRegime otherwise.
std::string classify_regime(const B3B3Spec& s);

NIndices n_indices(const B3B3Spec& s);

// The network map skeleton: sections H1out2, H2out3, H3out1, H2out4, H4out1.
// Cycle bit 1 is the xi3-cycle, bit 2 the xi4-cycle.
Skeleton skeleton(const B3B3Spec& s);
inline constexpr unsigned kXi3 = 1u, kXi4 = 2u, kNetwork = 3u;
std::string conn_section(Conn c);

// Index from the asymptotic escape sets at the connection's section.
IndexDetail skeleton_index(const B3B3Spec& s, Conn c, unsigned cycles);

struct SequencePair {
    std::vector<double> lower, upper;  // lower < upper termwise
    std::optional<int> crossing;       // first n with lower < 1 < upper
    bool monotone = true;
};

struct SequenceReport {
    SequencePair gamma;  // lower = gamma-bar, upper = gamma
    SequencePair zeta;   // lower = zeta-bar,  upper = zeta
    SequencePair eta;    // lower = eta-bar,   upper = eta
};

// Requires c34 < 0 and delta~ < 0 < delta. Each pair is generated until its
// lower term exceeds 1; CapExceeded if that takes more than n_cap terms.
SequenceReport escape_sequences(const B3B3Spec& s, int n_cap = 10000,
                                NuConvention nu = NuConvention::Composed);

// Largest |(gamma[n+1] - gamma[n]) - rho~^n ((rho~ - 1)(alpha - e24/e23) - (c21/e23) delta~)|
// over n < n_terms, relative to max(1, |gamma[n+1] - gamma[n]|), for the
// gamma sequence generated with the given convention.
double gamma_increment_residual(const B3B3Spec& s, NuConvention nu, int n_terms = 20);

struct PasReport {
    bool pas_xi3 = false;
    bool pas_xi4 = false;
    bool pas_network = false;
};

PasReport pas_report(const CIndices& c, const NIndices& n);

bool stabilization_condition(const B3B3Spec& s);

struct Range {
    double lo, hi;
};
using ParamBox = std::map<std::string, Range>;

// Default search box inside the c34 < 0 regime.
ParamBox default_witness_box();

// c34 < 0 under both standing assumption sets, with
// b~1 + b~2 a~1 in (-1, 0), sigma > 1 and -tau~ > -e24/e23 + c34 c21 / (e31 e23)
// (equivalently tau~ < alpha).
bool witness_inequalities(const B3B3Spec& s);

// Rejection sampling for a spec whose xi3-cycle is p.a.s. while the network
// is not. Throws SearchFailed after max_draws draws.
B3B3Spec find_nonpas_witness(const ParamBox& box, std::uint64_t seed, int max_draws = 200000);

// Rejection sampling for specs showing the stabilising effect.
B3B3Spec find_stabilizing_spec(const ParamBox& box, std::uint64_t seed, int max_draws = 200000);
ParamBox default_stabilizing_box();

}  // namespace hetnet::b3b3
