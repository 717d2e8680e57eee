#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "hetnet/ext_real.hpp"
#include "hetnet/index_kernel.hpp"
#include "hetnet/skeleton.hpp"
#include "hetnet/spec.hpp"

namespace hetnet::b2b2 {

struct B2DerivedQuantities {
    double rho, delta;      // C4
    double rho_t, delta_t;  // C3
};

B2DerivedQuantities derived_b2(const B2B2Spec& s);

// Per-node (a, b) of each cycle, nodes ordered b, a. The connection
// arriving at node b is [a -> b], the one arriving at node a is [b -> a].
struct B2CycleParams {
    std::array<CycleNodeParams, 2> c3;
    std::array<CycleNodeParams, 2> c4;
};
B2CycleParams cycle_params(const B2B2Spec& s);

// Connections: [a -> b] in P12 is shared; [b -> a] runs in P13 or P14.
enum class Conn { AB, BA3, BA4 };
inline constexpr std::array<Conn, 3> kConnections{Conn::AB, Conn::BA3, Conn::BA4};
std::string conn_name(Conn c);     // "ab", "ba3", "ba4"
std::string conn_section(Conn c);  // "Ha2out", "Hb3out", "Hb4out"

struct B2Indices {
    // Cycle indices.
    ExtReal ab3, ba3;  // C3
    ExtReal ab4, ba4;  // C4
    std::string branch_c3, branch_c4;
    // Network indices.
    std::map<Conn, ExtReal> n;
    int case_id = 0;  // 1 when delta < 0, 2 when delta > 0
    std::vector<std::string> notes;
};

// Requires rho, rho~ > 1 (AssumptionViolation otherwise).
B2Indices b2_network_indices(const B2B2Spec& s);

struct B2PasReport {
    bool pas_c3 = false;
    bool pas_c4 = false;
    bool pas_network = false;
};
B2PasReport pas_report(const B2Indices& ix);

// Sections Ha2out (x3, x4), Hb3out (x2, x4), Hb4out (x2, x3).
// Cycle bit 1 is C3, bit 2 is C4.
Skeleton skeleton(const B2B2Spec& s);
inline constexpr unsigned kC3 = 1u, kC4 = 2u, kNetwork = 3u;

// Exponents of the thin escaping wedges in the case delta > 0, n = 0 .. n_terms-1:
//   alpha[n] = -delta~ sum_{j<=n} rho~^j                        at Hb3out
//   beta[n]  = (eb4/eb3) (rho~^n - (rho - 1) sum_{j<n} rho~^j)  at Ha2out
// beta[n+1] - beta[n] = (eb4/eb3) rho~^n (rho~ - rho).
struct WedgeSequences {
    std::vector<double> alpha, beta;
};
WedgeSequences wedge_sequences(const B2B2Spec& s, int n_terms);

// ---------------------------------------------------------------------------
// Planar system in P1j and the 4-D equivariant field.

struct PlanarFieldCoeffs {
    double a1 = 0, b1 = 0, c1 = 0;  // x1-equation
    double a2 = 0, b2 = 0, d1 = 0;  // xj-equation
};

// Right-hand side of the planar system at (x1, xj).
std::array<double, 2> planar_rhs(const PlanarFieldCoeffs& k, double x1, double xj);

struct AxisEquilibria {
    double xi_a;  // < 0
    double xi_b;  // > 0
};
// Roots of a1 + b1 x + c1 x^2. Throws NoSaddlePair unless they are real
// and of opposite sign.
AxisEquilibria planar_equilibria(const PlanarFieldCoeffs& k);

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

// Extra monomial c * x1^p0 x2^p1 x3^p2 x4^p3 added to one component.
struct Monomial {
    int component = 0;
    double coeff = 0;
    std::array<int, 4> powers{};
};

// x1' = a1 x1 + b1 x1^2 + c1 x1^3 + sum_j q_j xj^2
// xj' = xj (alpha_j + beta_j x1 + g1_j x1^2 + sum_k g_jk xk^2),  j = 2, 3, 4
// Arrays indexed by j - 2.
struct Field {
    double a1 = 0, b1 = 0, c1 = 0;
    std::array<double, 3> q{}, alpha{}, beta{}, g1{};
    std::array<std::array<double, 3>, 3> g{};
    std::vector<Monomial> extra;

    Vec4 operator()(const Vec4& x) const;
    Mat4 jacobian(const Vec4& x) const;
};

// One planar coefficient set per plane P12, P13, P14; the x1-axis
// coefficients must agree (ConfigError otherwise).
Field field_from_planar(const std::array<PlanarFieldCoeffs, 3>& planes);

// Plain-text table, one "name value" pair per line, '#' starts a comment.
// Names: a1 b1 c1, q2..q4, alpha2..alpha4, beta2..beta4, g12..g14 (x1^2
// coefficient in the xj equation), gjk for j, k in 2..4, and any number of
// "term <component 1-4> <coeff> <p1> <p2> <p3> <p4>" lines.
Field load_field(const std::string& path);
Field parse_field(const std::string& text);

// Every monomial must be odd in xj for the xj-component and even in each
// other of x2, x3, x4. Throws EquivarianceViolation naming the first offender.
void check_equivariance(const Field& f);

// Diagonal rates at the two axis equilibria, returned as a B2B2 spec.
// Throws NoSaddlePair if the equilibria are missing and InvalidSignPattern
// if the rates do not give a saddle/sink pair in the required planes.
struct FieldNodes {
    AxisEquilibria eq;
    Vec4 diag_a, diag_b;  // Jacobian diagonals at xi_a and xi_b
    B2B2Spec spec;
};
FieldNodes jacobian_eigs(const Field& f);

}  // namespace hetnet::b2b2
