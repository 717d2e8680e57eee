#include "hetnet/b2b2.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hetnet/errors.hpp"

namespace hetnet::b2b2 {

B2DerivedQuantities derived_b2(const B2B2Spec& s) {
    B2DerivedQuantities d{};
    d.rho = s.ca4 * s.cb2 / (s.ea2 * s.eb4);
    d.delta = s.ca3 / s.ea2 - s.eb3 * s.ca4 / (s.ea2 * s.eb4);
    d.rho_t = s.ca3 * s.cb2 / (s.ea2 * s.eb3);
    d.delta_t = s.ca4 / s.ea2 - s.eb4 * s.ca3 / (s.ea2 * s.eb3);
    return d;
}

B2CycleParams cycle_params(const B2B2Spec& s) {
    B2CycleParams p;
    p.c3 = {CycleNodeParams{s.cb2 / s.eb3, -s.eb4 / s.eb3}, CycleNodeParams{s.ca3 / s.ea2, s.ca4 / s.ea2}};
    p.c4 = {CycleNodeParams{s.cb2 / s.eb4, -s.eb3 / s.eb4}, CycleNodeParams{s.ca4 / s.ea2, s.ca3 / s.ea2}};
    return p;
}

std::string conn_name(Conn c) {
    switch (c) {
        case Conn::AB: return "ab";
        case Conn::BA3: return "ba3";
        case Conn::BA4: return "ba4";
    }
    return "?";
}

std::string conn_section(Conn c) {
    switch (c) {
        case Conn::AB: return "Ha2out";
        case Conn::BA3: return "Hb3out";
        case Conn::BA4: return "Hb4out";
    }
    return "?";
}

Skeleton skeleton(const B2B2Spec& s) {
    Skeleton sk;
    sk.sections = {"Ha2out", "Hb3out", "Hb4out"};
    sk.cycle_names = {"C3", "C4"};
    sk.maps = {
        {"phi_b3", 0, 1, Mat2{{{s.cb2 / s.eb3, 0.0}, {-s.eb4 / s.eb3, 1.0}}}, kC3, "x4 < x3^(eb4/eb3)"},
        {"phi_a3", 1, 0, Mat2{{{s.ca3 / s.ea2, 0.0}, {s.ca4 / s.ea2, 1.0}}}, kC3, "none"},
        {"phi_b4", 0, 2, Mat2{{{0.0, s.cb2 / s.eb4}, {1.0, -s.eb3 / s.eb4}}}, kC4, "x3 < x4^(eb3/eb4)"},
        {"phi_a4", 2, 0, Mat2{{{s.ca3 / s.ea2, 1.0}, {s.ca4 / s.ea2, 0.0}}}, kC4, "none"},
    };
    return sk;
}

B2Indices b2_network_indices(const B2B2Spec& s) {
    const B2DerivedQuantities d = derived_b2(s);
    require_generic(d.rho, 1.0, "rho");
    require_generic(d.rho_t, 1.0, "rho~");
    if (!(d.rho > 1)) throw AssumptionViolation("assumption fails: rho > 1");
    if (!(d.rho_t > 1)) throw AssumptionViolation("assumption fails: rho~ > 1");
    require_generic(d.delta, 0.0, "delta");
    require_generic(d.delta_t, 0.0, "delta~");

    B2Indices ix;
    const B2CycleParams p = cycle_params(s);
    const CycleIndices2 c3 = b2_cycle_indices(p.c3);
    const CycleIndices2 c4 = b2_cycle_indices(p.c4);
    ix.ab3 = c3.sigma[0];
    ix.ba3 = c3.sigma[1];
    ix.ab4 = c4.sigma[0];
    ix.ba4 = c4.sigma[1];
    ix.branch_c3 = c3.branch;
    ix.branch_c4 = c4.branch;
    ix.case_id = d.delta < 0 ? 1 : 2;

    const Skeleton sk = skeleton(s);
    const EscapeResult er = escape_sets(sk, kNetwork);
    for (Conn c : kConnections)
        ix.n[c] = exponent_set_index(er.per_section[sk.section_index(conn_section(c))]).sigma;

    if (ix.n[Conn::AB] < max(ix.ab3, ix.ab4)) ix.notes.push_back("n-index below c-index at ab");
    if (ix.n[Conn::BA3] < ix.ba3) ix.notes.push_back("n-index below c-index at ba3");
    if (ix.n[Conn::BA4] < ix.ba4) ix.notes.push_back("n-index below c-index at ba4");
    return ix;
}

B2PasReport pas_report(const B2Indices& ix) {
    const ExtReal z(0.0);
    B2PasReport r;
    r.pas_c3 = ix.ab3 > z && ix.ba3 > z;
    r.pas_c4 = ix.ab4 > z && ix.ba4 > z;
    r.pas_network = !ix.n.empty();
    for (const auto& [k, v] : ix.n) r.pas_network = r.pas_network && v > z;
    return r;
}

WedgeSequences wedge_sequences(const B2B2Spec& s, int n_terms) {
    const B2DerivedQuantities d = derived_b2(s);
    WedgeSequences w;
    double sum = 0.0, pw = 1.0;  // sum_{j<n} rho~^j, rho~^n
    for (int n = 0; n < n_terms; ++n) {
        w.beta.push_back((s.eb4 / s.eb3) * (pw - (d.rho - 1.0) * sum));
        sum += pw;
        pw *= d.rho_t;
        w.alpha.push_back(-d.delta_t * sum);
    }
    return w;
}

// ---------------------------------------------------------------------------

std::array<double, 2> planar_rhs(const PlanarFieldCoeffs& k, double x1, double xj) {
    const double r2 = x1 * x1 + xj * xj;
    return {k.a1 * x1 + k.b1 * r2 + k.c1 * x1 * x1 * x1, k.a2 * xj + k.b2 * r2 * xj + k.d1 * x1 * xj};
}

AxisEquilibria planar_equilibria(const PlanarFieldCoeffs& k) {
    if (k.c1 == 0.0) throw NoSaddlePair("c1 must be nonzero for two axis equilibria");
    const double disc = k.b1 * k.b1 - 4.0 * k.a1 * k.c1;
    if (!(disc > 0)) throw NoSaddlePair("b1^2 - 4 a1 c1 must be positive");
    const double sq = std::sqrt(disc);
    // Stable form of the quadratic formula.
    const double qq = -0.5 * (k.b1 + std::copysign(sq, k.b1 == 0.0 ? 1.0 : k.b1));
    double r1 = qq / k.c1, r2 = k.a1 / qq;
    if (r1 > r2) std::swap(r1, r2);
    if (!(r1 < 0 && r2 > 0)) throw NoSaddlePair("axis equilibria are not of opposite sign");
    return {r1, r2};
}

namespace {

double monomial(const Monomial& m, const Vec4& x) {
    double v = m.coeff;
    for (int i = 0; i < 4; ++i) v *= std::pow(x[i], m.powers[i]);
    return v;
}

}  // namespace

Vec4 Field::operator()(const Vec4& x) const {
    Vec4 f{};
    const double x1 = x[0];
    f[0] = a1 * x1 + b1 * x1 * x1 + c1 * x1 * x1 * x1;
    for (int j = 0; j < 3; ++j) f[0] += q[j] * x[j + 1] * x[j + 1];
    for (int j = 0; j < 3; ++j) {
        double s = alpha[j] + beta[j] * x1 + g1[j] * x1 * x1;
        for (int k = 0; k < 3; ++k) s += g[j][k] * x[k + 1] * x[k + 1];
        f[j + 1] = x[j + 1] * s;
    }
    for (const auto& m : extra) f[m.component] += monomial(m, x);
    return f;
}

Mat4 Field::jacobian(const Vec4& x) const {
    Mat4 J{};
    const double x1 = x[0];
    J[0][0] = a1 + 2 * b1 * x1 + 3 * c1 * x1 * x1;
    for (int j = 0; j < 3; ++j) J[0][j + 1] = 2 * q[j] * x[j + 1];
    for (int j = 0; j < 3; ++j) {
        const double xj = x[j + 1];
        double s = alpha[j] + beta[j] * x1 + g1[j] * x1 * x1;
        for (int k = 0; k < 3; ++k) s += g[j][k] * x[k + 1] * x[k + 1];
        J[j + 1][0] = xj * (beta[j] + 2 * g1[j] * x1);
        for (int k = 0; k < 3; ++k) J[j + 1][k + 1] = 2 * g[j][k] * xj * x[k + 1];
        J[j + 1][j + 1] += s;
    }
    for (const auto& m : extra) {
        for (int i = 0; i < 4; ++i) {
            if (m.powers[i] == 0) continue;
            Monomial d = m;
            d.coeff *= m.powers[i];
            d.powers[i] -= 1;
            J[m.component][i] += monomial(d, x);
        }
    }
    return J;
}

Field field_from_planar(const std::array<PlanarFieldCoeffs, 3>& planes) {
    for (int j = 1; j < 3; ++j)
        if (planes[j].a1 != planes[0].a1 || planes[j].b1 != planes[0].b1 || planes[j].c1 != planes[0].c1)
            throw ConfigError("planar coefficient sets disagree on the x1-axis dynamics");
    Field f;
    f.a1 = planes[0].a1;
    f.b1 = planes[0].b1;
    f.c1 = planes[0].c1;
    for (int j = 0; j < 3; ++j) {
        f.q[j] = planes[j].b1;
        f.alpha[j] = planes[j].a2;
        f.beta[j] = planes[j].d1;
        f.g1[j] = planes[j].b2;
        f.g[j][j] = planes[j].b2;
    }
    return f;
}

Field parse_field(const std::string& text) {
    Field f;
    std::map<std::string, double*> slots{{"a1", &f.a1}, {"b1", &f.b1}, {"c1", &f.c1}};
    for (int j = 0; j < 3; ++j) {
        const std::string s = std::to_string(j + 2);
        slots["q" + s] = &f.q[j];
        slots["alpha" + s] = &f.alpha[j];
        slots["beta" + s] = &f.beta[j];
        slots["g1" + s] = &f.g1[j];
        for (int k = 0; k < 3; ++k) slots["g" + s + std::to_string(k + 2)] = &f.g[j][k];
    }
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> name)) continue;
        auto fail = [&](const std::string& why) {
            throw ConfigError("field table line " + std::to_string(lineno) + ": " + why);
        };
        if (name == "term") {
            Monomial m;
            if (!(ls >> m.component >> m.coeff >> m.powers[0] >> m.powers[1] >> m.powers[2] >> m.powers[3]))
                fail("term needs component, coefficient and four powers");
            if (m.component < 1 || m.component > 4) fail("component must be 1..4");
            for (int p : m.powers)
                if (p < 0) fail("negative power");
            m.component -= 1;
            f.extra.push_back(m);
        } else {
            auto it = slots.find(name);
            if (it == slots.end()) fail("unknown coefficient '" + name + "'");
            if (!(ls >> *it->second)) fail("missing value for '" + name + "'");
        }
        std::string rest;
        if (ls >> rest) fail("trailing text '" + rest + "'");
    }
    return f;
}

Field load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open field table '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_field(ss.str());
}

void check_equivariance(const Field& f) {
    for (const auto& m : f.extra) {
        for (int i = 1; i < 4; ++i) {
            const bool odd = m.powers[i] % 2 != 0;
            const bool want_odd = i == m.component;
            if (odd != want_odd) {
                std::ostringstream os;
                os << "term in component " << m.component + 1 << " with powers (" << m.powers[0] << ','
                   << m.powers[1] << ',' << m.powers[2] << ',' << m.powers[3] << ") breaks x" << i + 1
                   << " -> -x" << i + 1 << " symmetry";
                throw EquivarianceViolation(os.str());
            }
        }
    }
}

FieldNodes jacobian_eigs(const Field& f) {
    check_equivariance(f);
    FieldNodes out;
    out.eq = planar_equilibria(PlanarFieldCoeffs{f.a1, f.b1, f.c1, 0, 0, 0});
    const Mat4 Ja = f.jacobian(Vec4{out.eq.xi_a, 0, 0, 0});
    const Mat4 Jb = f.jacobian(Vec4{out.eq.xi_b, 0, 0, 0});
    for (int i = 0; i < 4; ++i) {
        out.diag_a[i] = Ja[i][i];
        out.diag_b[i] = Jb[i][i];
    }
    const Vec4& A = out.diag_a;
    const Vec4& B = out.diag_b;
    if (!(A[0] < 0 && A[1] > 0 && A[2] < 0 && A[3] < 0))
        throw InvalidSignPattern("xi_a needs eigenvalue signs (-, +, -, -) in (x1, x2, x3, x4)");
    if (!(B[0] < 0 && B[1] < 0 && B[2] > 0 && B[3] > 0))
        throw InvalidSignPattern("xi_b needs eigenvalue signs (-, -, +, +) in (x1, x2, x3, x4)");
    out.spec.ra = -A[0];
    out.spec.ea2 = A[1];
    out.spec.ca3 = -A[2];
    out.spec.ca4 = -A[3];
    out.spec.rb = -B[0];
    out.spec.cb2 = -B[1];
    out.spec.eb3 = B[2];
    out.spec.eb4 = B[3];
    return out;
}

}  // namespace hetnet::b2b2
