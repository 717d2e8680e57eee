#include "hetnet/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hetnet/b2b2.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/simkit.hpp"

namespace hetnet::app {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(const ExtReal& v) { return v.str(); }

namespace {

double r12(double v) { return std::strtod(fmt(v).c_str(), nullptr); }

ExtReal r12(const ExtReal& v) { return v.is_finite() ? ExtReal(r12(v.value())) : v; }

void check_keys(const ojson& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

double num(const ojson& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + " must be a number");
    return j.get<double>();
}

std::int64_t integer(const ojson& j, const std::string& what) {
    if (!j.is_number_integer()) throw ConfigError(what + " must be an integer");
    return j.get<std::int64_t>();
}

bool is_radial(const std::string& k) { return k == "r1" || k == "r2" || k == "r3" || k == "r4" || k == "ra" || k == "rb"; }

}  // namespace

B3B3Spec RunConfig::b3() const { return B3B3Spec::from_map(eigenvalues); }
B2B2Spec RunConfig::b2() const { return B2B2Spec::from_map(eigenvalues); }

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col));
    }
    check_keys(j, {"network", "eigenvalues", "assumptions", "options", "sweep"}, "config");

    RunConfig c;
    if (!j.contains("network") || !j["network"].is_string()) throw ConfigError("config needs \"network\": \"B3B3\" or \"B2B2\"");
    c.network = j["network"].get<std::string>();
    if (c.network != "B3B3" && c.network != "B2B2") throw ConfigError("network must be \"B3B3\" or \"B2B2\"");

    if (!j.contains("eigenvalues")) throw ConfigError("config needs an \"eigenvalues\" object");
    const ojson& ev = j["eigenvalues"];
    if (!ev.is_object()) throw ConfigError("eigenvalues must be a JSON object");
    for (auto it = ev.begin(); it != ev.end(); ++it) c.eigenvalues[it.key()] = num(it.value(), "eigenvalue " + it.key());

    if (j.contains("assumptions")) {
        if (!j["assumptions"].is_array()) throw ConfigError("assumptions must be a list such as [\"A1\", \"A2\"]");
        for (const auto& a : j["assumptions"]) {
            const std::string s = a.is_string() ? a.get<std::string>() : "";
            if (s == "A1") c.assumptions.a1 = true;
            else if (s == "A2") c.assumptions.a2 = true;
            else throw ConfigError("unknown assumption '" + a.dump() + "' (expected \"A1\" or \"A2\")");
        }
    }

    if (j.contains("options")) {
        const ojson& o = j["options"];
        check_keys(o, {"eps_grid", "samples", "seed", "n_cap", "nu_convention", "out_dir", "margin", "tolerance", "field"},
                   "options");
        if (o.contains("eps_grid")) {
            if (!o["eps_grid"].is_array()) throw ConfigError("eps_grid must be a list of numbers");
            c.eps_grid.clear();
            for (const auto& e : o["eps_grid"]) c.eps_grid.push_back(num(e, "eps_grid entry"));
        }
        if (o.contains("samples")) c.samples = integer(o["samples"], "samples");
        if (o.contains("seed")) c.seed = static_cast<std::uint64_t>(integer(o["seed"], "seed"));
        if (o.contains("n_cap")) c.n_cap = static_cast<int>(integer(o["n_cap"], "n_cap"));
        if (o.contains("nu_convention")) {
            const std::string s = o["nu_convention"].is_string() ? o["nu_convention"].get<std::string>() : "";
            if (s == "composed") c.nu = b3b3::NuConvention::Composed;
            else if (s == "display") c.nu = b3b3::NuConvention::Display;
            else throw ConfigError("nu_convention must be \"composed\" or \"display\"");
        }
        if (o.contains("out_dir")) {
            if (!o["out_dir"].is_string()) throw ConfigError("out_dir must be a string");
            c.out_dir = o["out_dir"].get<std::string>();
        }
        if (o.contains("margin")) c.margin = num(o["margin"], "margin");
        if (o.contains("tolerance")) c.tolerance = num(o["tolerance"], "tolerance");
        if (o.contains("field")) {
            if (!o["field"].is_string()) throw ConfigError("field must be a path string");
            fs::path p = o["field"].get<std::string>();
            if (p.is_relative()) p = fs::path(base_dir) / p;
            c.field = p.string();
        }
    }
    if (!(c.margin > 0 && c.margin < 1)) throw ConfigError("margin must lie in (0, 1)");

    if (j.contains("sweep")) {
        const ojson& s = j["sweep"];
        if (!s.is_object()) throw ConfigError("sweep must be a JSON object");
        for (auto it = s.begin(); it != s.end(); ++it) {
            check_keys(it.value(), {"from", "to", "steps"}, "sweep." + it.key());
            SweepAxis a;
            a.name = it.key();
            for (const char* k : {"from", "to", "steps"})
                if (!it.value().contains(k)) throw ConfigError("sweep." + a.name + " needs from, to and steps");
            a.from = num(it.value()["from"], "sweep." + a.name + ".from");
            a.to = num(it.value()["to"], "sweep." + a.name + ".to");
            a.steps = static_cast<int>(integer(it.value()["steps"], "sweep." + a.name + ".steps"));
            if (a.steps < 0) throw ConfigError("sweep." + a.name + ".steps must be non-negative");
            c.sweep.push_back(a);
        }
    }

    // Key check against the network's parameter list; radial rates default to 1.
    const std::map<std::string, double> full = c.network == "B3B3" ? B3B3Spec{}.to_map() : B2B2Spec{}.to_map();
    if (c.network == "B3B3") (void)c.b3();
    else (void)c.b2();
    for (const auto& a : c.sweep)
        if (!full.count(a.name)) throw ConfigError("sweep parameter '" + a.name + "' is not a " + c.network + " eigenvalue");
    for (const auto& [k, v] : full) {
        if (c.eigenvalues.count(k) || is_radial(k)) continue;
        bool swept = false;
        for (const auto& a : c.sweep) swept = swept || a.name == k;
        if (!swept) throw ConfigError("missing eigenvalue '" + k + "'");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const fs::path parent = fs::path(path).parent_path();
    return parse_config(ss.str(), parent.empty() ? "." : parent.string());
}

// ---------------------------------------------------------------------------

IndexReport analyze_b3b3(const B3B3Spec& s, AssumptionFlags f, b3b3::NuConvention nu) {
    (void)validate_spec(s, f);
    IndexReport r;
    r.network = "B3B3";
    r.regime = b3b3::classify_regime(s);
    for (const auto& [k, v] : s.to_map()) r.eigenvalues[k] = r12(v);
    const b3b3::DerivedQuantities d = b3b3::derived(s, nu);
    r.derived = {{"rho", d.rho},         {"nu", d.nu},         {"delta", d.delta},     {"tau", d.tau},
                 {"sigma", d.sigma},     {"rho_t", d.rho_t},   {"nu_t", d.nu_t},       {"delta_t", d.delta_t},
                 {"tau_t", d.tau_t},     {"sigma_t", d.sigma_t}, {"alpha", d.alpha}};
    for (auto& [k, v] : r.derived) v = r12(v);

    const b3b3::CIndices c = b3b3::c_indices(s);
    const b3b3::NIndices n = b3b3::n_indices(s);
    const b3b3::PasReport p = b3b3::pas_report(c, n);
    r.branches = {{"xi3", c.branch_xi3}, {"xi4", c.branch_xi4}};
    using b3b3::Conn;
    const std::map<Conn, std::map<std::string, ExtReal>> cmap{
        {Conn::C12, {{"xi3", c.t12}, {"xi4", c.s12}}},
        {Conn::C23, {{"xi3", c.t23}}},
        {Conn::C31, {{"xi3", c.t31}}},
        {Conn::C24, {{"xi4", c.s24}}},
        {Conn::C41, {{"xi4", c.s41}}}};
    for (Conn k : b3b3::kConnections) {
        ReportRow row;
        row.connection = b3b3::conn_name(k);
        for (const auto& [cyc, v] : cmap.at(k)) row.c_index[cyc] = r12(v);
        const auto& iv = n.n.at(k);
        row.n_index = r12(iv.value);
        row.source = iv.source;
        row.extrapolated = iv.extrapolated;
        if (iv.extrapolated)
            r.caveats.push_back("n-index at " + row.connection +
                                " comes from an escaping set of positive density; its magnitude is the exponent of "
                                "the nearest boundary");
        r.rows.push_back(row);
    }
    r.pas = {{"xi3", p.pas_xi3}, {"xi4", p.pas_xi4}, {"network", p.pas_network}};
    for (const auto& note : n.notes) r.caveats.push_back(note);
    if (nu == b3b3::NuConvention::Display)
        r.caveats.push_back("nu and nu_t use the display sign convention; the return maps use the composed one");
    return r;
}

IndexReport analyze_b2b2(const B2B2Spec& s, AssumptionFlags f) {
    (void)validate_spec(s, f);
    IndexReport r;
    r.network = "B2B2";
    const b2b2::B2Indices ix = b2b2::b2_network_indices(s);
    r.regime = ix.case_id == 1 ? "delta-negative" : "delta-positive";
    for (const auto& [k, v] : s.to_map()) r.eigenvalues[k] = r12(v);
    const b2b2::B2DerivedQuantities d = b2b2::derived_b2(s);
    r.derived = {{"rho", r12(d.rho)}, {"delta", r12(d.delta)}, {"rho_t", r12(d.rho_t)}, {"delta_t", r12(d.delta_t)}};
    r.branches = {{"C3", ix.branch_c3}, {"C4", ix.branch_c4}};
    using b2b2::Conn;
    r.rows.push_back({"ab", {{"C3", r12(ix.ab3)}, {"C4", r12(ix.ab4)}}, r12(ix.n.at(Conn::AB)), "escape-set", false});
    r.rows.push_back({"ba3", {{"C3", r12(ix.ba3)}}, r12(ix.n.at(Conn::BA3)), "escape-set", false});
    r.rows.push_back({"ba4", {{"C4", r12(ix.ba4)}}, r12(ix.n.at(Conn::BA4)), "escape-set", false});
    const b2b2::B2PasReport p = b2b2::pas_report(ix);
    r.pas = {{"C3", p.pas_c3}, {"C4", p.pas_c4}, {"network", p.pas_network}};
    r.caveats = ix.notes;
    return r;
}

IndexReport analyze(const RunConfig& c) {
    if (c.network == "B3B3") return analyze_b3b3(c.b3(), c.assumptions, c.nu);
    return analyze_b2b2(c.b2(), c.assumptions);
}

namespace {

ojson ext_json(const ExtReal& v) {
    if (v.is_finite()) return v.value();
    return v.str();
}

ExtReal ext_from(const ojson& j) {
    if (j.is_string()) return ExtReal::parse(j.get<std::string>());
    return ExtReal(j.get<double>());
}

}  // namespace

std::string report_to_json(const IndexReport& r) {
    ojson j;
    j["network"] = r.network;
    j["regime"] = r.regime;
    j["eigenvalues"] = r.eigenvalues;
    j["derived"] = r.derived;
    j["branches"] = r.branches;
    j["rows"] = ojson::array();
    for (const auto& row : r.rows) {
        ojson x;
        x["connection"] = row.connection;
        x["c_index"] = ojson::object();
        for (const auto& [k, v] : row.c_index) x["c_index"][k] = ext_json(v);
        x["n_index"] = ext_json(row.n_index);
        x["source"] = row.source;
        x["extrapolated"] = row.extrapolated;
        j["rows"].push_back(x);
    }
    j["pas"] = r.pas;
    j["caveats"] = r.caveats;
    return j.dump(2) + "\n";
}

IndexReport report_from_json(const std::string& text) {
    const ojson j = ojson::parse(text);
    IndexReport r;
    r.network = j.at("network").get<std::string>();
    r.regime = j.at("regime").get<std::string>();
    r.eigenvalues = j.at("eigenvalues").get<std::map<std::string, double>>();
    r.derived = j.at("derived").get<std::map<std::string, double>>();
    r.branches = j.at("branches").get<std::map<std::string, std::string>>();
    for (const auto& x : j.at("rows")) {
        ReportRow row;
        row.connection = x.at("connection").get<std::string>();
        for (auto it = x.at("c_index").begin(); it != x.at("c_index").end(); ++it) row.c_index[it.key()] = ext_from(it.value());
        row.n_index = ext_from(x.at("n_index"));
        row.source = x.at("source").get<std::string>();
        row.extrapolated = x.at("extrapolated").get<bool>();
        r.rows.push_back(row);
    }
    r.pas = j.at("pas").get<std::map<std::string, bool>>();
    r.caveats = j.at("caveats").get<std::vector<std::string>>();
    return r;
}

std::string report_table(const IndexReport& r) {
    std::ostringstream os;
    os << "network " << r.network << "   regime " << r.regime << "\n\n";
    for (const auto& [k, v] : r.derived) os << "  " << std::left << std::setw(9) << k << fmt(v) << "\n";
    os << "\n";
    std::vector<std::string> cycles;
    for (const auto& [k, v] : r.pas)
        if (k != "network") cycles.push_back(k);
    os << std::left << std::setw(12) << "connection";
    for (const auto& c : cycles) os << std::setw(18) << ("c-index " + c);
    os << std::setw(18) << "n-index" << "source\n";
    for (const auto& row : r.rows) {
        os << std::setw(12) << row.connection;
        for (const auto& c : cycles) {
            auto it = row.c_index.find(c);
            os << std::setw(18) << (it == row.c_index.end() ? std::string("-") : fmt(it->second));
        }
        os << std::setw(18) << (fmt(row.n_index) + (row.extrapolated ? " *" : "")) << row.source << "\n";
    }
    os << "\np.a.s.:";
    for (const auto& [k, v] : r.pas) os << "  " << k << "=" << (v ? "yes" : "no");
    os << "\n";
    for (const auto& [k, v] : r.branches) os << "branch " << k << ": " << v << "\n";
    for (const auto& c : r.caveats) os << "note: " << c << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

struct Level {
    std::string connection, level, section;
    unsigned mask;
    ExtReal analytic;
    bool extrapolated;
};

bool monotone_toward(const sim::IndexEstimate& e, bool up) {
    for (std::size_t k = 1; k < e.cells.size(); ++k) {
        const double a = e.cells[k - 1].sigma_hat(), b = e.cells[k].sigma_hat();
        const double slack = 3 * std::max({e.cells[k - 1].std_error(), e.cells[k].std_error(),
                                           1.0 / static_cast<double>(e.samples)});
        if (up ? b < a - slack : b > a + slack) return false;
    }
    return true;
}

VerifyRow run_level(const sim::MapModel& m, const Level& L, const RunConfig& c) {
    VerifyRow row;
    row.connection = L.connection;
    row.level = L.level;
    row.analytic = L.analytic;
    row.extrapolated = L.extrapolated;
    sim::McOptions o;
    o.eps_grid = c.eps_grid;
    o.samples = c.samples;
    o.seed = c.seed;
    const sim::IndexEstimate e = sim::estimate_sigma_mc(m, L.section, L.mask, o);
    for (const auto& cell : e.cells) row.sigma_hat.push_back(cell.sigma_hat());
    try {
        row.estimate = e.sigma();
    } catch (const InsufficientSamples& ex) {
        row.note = ex.what();
    }
    if (!e.undecided_ok) row.note += (row.note.empty() ? "" : "; ") + std::string("undecided above 0.1%");
    const double last = e.cells.back().sigma_hat();
    if (L.analytic.is_pos_inf()) {
        row.rule = "Sigma_eps rises toward 1";
        row.pass = monotone_toward(e, true) && last >= 0.99;
    } else if (L.analytic.is_neg_inf()) {
        row.rule = "Sigma_eps falls toward 0";
        row.pass = monotone_toward(e, false) && last <= 0.01;
    } else if (!row.estimate) {
        row.rule = "no estimate";
        row.pass = false;
    } else if (L.extrapolated) {
        row.rule = "sign";
        row.pass = row.estimate->sign() == L.analytic.sign() && L.analytic.sign() != 0;
        if (row.estimate->is_finite()) row.delta = std::fabs(row.estimate->value() - L.analytic.value());
    } else {
        row.rule = "|diff| <= " + fmt(c.tolerance);
        row.pass = row.estimate->is_finite() &&
                   (row.delta = std::fabs(row.estimate->value() - L.analytic.value())) <= c.tolerance;
    }
    if (!e.undecided_ok) row.pass = false;
    return row;
}

// Statistical form of "n-index >= c-index": network estimate may not fall
// more than 0.1 below a cycle estimate.
void ordering_checks(VerifyReport& v) {
    for (const auto& net : v.rows) {
        if (net.level != "network") continue;
        for (const auto& cyc : v.rows) {
            if (cyc.connection != net.connection || cyc.level == "network") continue;
            if (!net.estimate || !cyc.estimate) continue;
            bool ok;
            if (net.estimate->is_pos_inf() || cyc.estimate->is_neg_inf()) ok = true;
            else if (cyc.estimate->is_pos_inf() || net.estimate->is_neg_inf()) ok = false;
            else ok = net.estimate->value() >= cyc.estimate->value() - 0.1;
            v.checks.push_back(std::string(ok ? "PASS" : "FAIL") + "  n >= c - 0.1 at " + net.connection + " vs " +
                               cyc.level + ": " + fmt(*net.estimate) + " vs " + fmt(*cyc.estimate));
            v.pass = v.pass && ok;
        }
    }
}

}  // namespace

VerifyReport verify(const RunConfig& c) {
    const IndexReport rep = analyze(c);
    VerifyReport v;
    std::vector<Level> levels;
    sim::MapModel model;
    if (c.network == "B3B3") {
        const B3B3Spec s = c.b3();
        model = sim::model_b3b3(s, c.margin);
        const std::map<std::string, std::string> sec{
            {"12", "H1out2"}, {"23", "H2out3"}, {"31", "H3out1"}, {"24", "H2out4"}, {"41", "H4out1"}};
        for (const auto& row : rep.rows) {
            for (const auto& [cyc, val] : row.c_index)
                levels.push_back({row.connection, cyc, sec.at(row.connection), cyc == "xi3" ? b3b3::kXi3 : b3b3::kXi4,
                                  val, false});
            levels.push_back({row.connection, "network", sec.at(row.connection), b3b3::kNetwork, row.n_index,
                              row.extrapolated});
        }
    } else {
        const B2B2Spec s = c.b2();
        model = sim::model_b2b2(s, c.margin);
        const std::map<std::string, std::string> sec{{"ab", "Ha2out"}, {"ba3", "Hb3out"}, {"ba4", "Hb4out"}};
        for (const auto& row : rep.rows) {
            for (const auto& [cyc, val] : row.c_index)
                levels.push_back({row.connection, cyc, sec.at(row.connection), cyc == "C3" ? b2b2::kC3 : b2b2::kC4,
                                  val, false});
            levels.push_back({row.connection, "network", sec.at(row.connection), b2b2::kNetwork, row.n_index, false});
        }
    }
    for (const auto& L : levels) {
        v.rows.push_back(run_level(model, L, c));
        v.pass = v.pass && v.rows.back().pass;
    }
    ordering_checks(v);

    if (c.network == "B3B3") {
        const B3B3Spec s = c.b3();
        const double rc = b3b3::gamma_increment_residual(s, b3b3::NuConvention::Composed);
        const double rd = b3b3::gamma_increment_residual(s, b3b3::NuConvention::Display);
        const bool ok = rc <= 1e-12;
        v.checks.push_back(std::string(ok ? "PASS" : "FAIL") +
                           "  gamma increment identity, composed nu_t: max residual " + fmt(rc));
        v.checks.push_back(std::string(rd > 1e-6 ? "INFO" : "NOTE") +
                           "  gamma increment identity, display nu_t: max residual " + fmt(rd) +
                           (rd > 1e-6 ? " (identity does not hold)" : " (identity holds)"));
        v.pass = v.pass && ok;
    }
    if (c.network == "B2B2" && !c.field.empty()) {
        const b2b2::Field f = b2b2::load_field(c.field);
        const b2b2::FieldNodes nodes = b2b2::jacobian_eigs(f);
        const B2B2Spec s = c.b2();
        double worst = 0;
        for (const auto& [k, val] : s.to_map()) worst = std::max(worst, std::fabs(nodes.spec.to_map().at(k) - val));
        const bool match = worst <= 1e-9;
        v.checks.push_back(std::string(match ? "PASS" : "FAIL") + "  field rates match the eigenvalues (max diff " +
                           fmt(worst) + ")");
        const b2b2::Vec4 x0{nodes.eq.xi_a + 1e-3, 1e-3, 1e-4, 5e-4};
        sim::Rk4Options ro;
        ro.store_every = 10;
        const sim::Trajectory tr = sim::integrate_rk4(f, x0, 1e-3, 400.0, ro);
        int crossings = 0;
        double tube = 0;
        for (std::size_t i = 0; i < tr.x.size(); ++i) {
            const auto& x = tr.x[i];
            tube = std::max(tube, std::min(std::hypot(x[2], x[3]), std::hypot(x[1], x[3])));
            if (i > 0 && (tr.x[i - 1][0] < 0) != (x[0] < 0)) ++crossings;
        }
        const int loops = crossings / 2;
        const bool ok = loops >= 3 && tube < 0.1;
        v.checks.push_back(std::string(ok ? "PASS" : "FAIL") + "  ODE: " + std::to_string(loops) +
                           " loops around C3, largest distance from P12 u P13 " + fmt(tube));
        v.pass = v.pass && match && ok;
    }
    return v;
}

std::string verify_table(const VerifyReport& v) {
    std::ostringstream os;
    os << std::left << std::setw(12) << "connection" << std::setw(10) << "level" << std::setw(16) << "analytic"
       << std::setw(16) << "MC" << std::setw(14) << "|diff|" << std::setw(28) << "rule" << "result\n";
    for (const auto& r : v.rows) {
        os << std::setw(12) << r.connection << std::setw(10) << r.level << std::setw(16)
           << (fmt(r.analytic) + (r.extrapolated ? " *" : "")) << std::setw(16)
           << (r.estimate ? fmt(*r.estimate) : std::string("n/a")) << std::setw(14)
           << (r.analytic.is_finite() && r.estimate && r.estimate->is_finite() ? fmt(r.delta) : std::string("-"))
           << std::setw(28) << r.rule << (r.pass ? "pass" : "FAIL");
        if (!r.note.empty()) os << "  (" << r.note << ")";
        os << "\n      Sigma_eps:";
        for (double s : r.sigma_hat) os << ' ' << fmt(s);
        os << "\n";
    }
    os << "\n";
    for (const auto& l : v.checks) os << l << "\n";
    os << "\noverall: " << (v.pass ? "pass" : "FAIL") << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string sweep_row_b3(const RunConfig& c, const std::map<std::string, double>& values) {
    auto m = c.eigenvalues;
    for (const auto& [k, v] : values) m[k] = v;
    const B3B3Spec s = B3B3Spec::from_map(m);
    const b3b3::DerivedQuantities d = b3b3::derived(s, c.nu);
    std::vector<std::string> cols;
    for (const auto& a : c.sweep) cols.push_back(fmt(values.at(a.name)));
    for (double x : {d.delta, d.delta_t, d.sigma, d.sigma_t}) cols.push_back(fmt(x));
    std::string err, regime;
    std::vector<std::string> ci(6), ni(5), pas(3);
    try {
        (void)validate_spec(s, c.assumptions);
        const b3b3::CIndices ct = b3b3::c_indices(s);
        ci = {fmt(ct.t12), fmt(ct.t23), fmt(ct.t31), fmt(ct.s12), fmt(ct.s24), fmt(ct.s41)};
        const ExtReal z(0.0);
        pas[0] = ct.t12 > z && ct.t23 > z && ct.t31 > z ? "1" : "0";
        pas[1] = ct.s12 > z && ct.s24 > z && ct.s41 > z ? "1" : "0";
        const b3b3::NIndices n = b3b3::n_indices(s);
        regime = n.regime;
        for (std::size_t i = 0; i < b3b3::kConnections.size(); ++i) ni[i] = fmt(n.n.at(b3b3::kConnections[i]).value);
        pas[2] = b3b3::pas_report(ct, n).pas_network ? "1" : "0";
    } catch (const Error& e) {
        err = e.what();
    }
    for (auto* v : {&ci, &ni, &pas})
        for (const auto& x : *v) cols.push_back(x);
    cols.push_back(regime);
    cols.push_back(csv_field(err));
    std::string line;
    for (std::size_t i = 0; i < cols.size(); ++i) line += (i ? "," : "") + cols[i];
    return line;
}

std::string sweep_row_b2(const RunConfig& c, const std::map<std::string, double>& values) {
    auto m = c.eigenvalues;
    for (const auto& [k, v] : values) m[k] = v;
    const B2B2Spec s = B2B2Spec::from_map(m);
    const b2b2::B2DerivedQuantities d = b2b2::derived_b2(s);
    std::vector<std::string> cols;
    for (const auto& a : c.sweep) cols.push_back(fmt(values.at(a.name)));
    for (double x : {d.rho, d.delta, d.rho_t, d.delta_t}) cols.push_back(fmt(x));
    std::string err, regime;
    std::vector<std::string> ci(4), ni(3), pas(3);
    try {
        (void)validate_spec(s, c.assumptions);
        const b2b2::B2Indices ix = b2b2::b2_network_indices(s);
        ci = {fmt(ix.ab3), fmt(ix.ba3), fmt(ix.ab4), fmt(ix.ba4)};
        for (std::size_t i = 0; i < b2b2::kConnections.size(); ++i) ni[i] = fmt(ix.n.at(b2b2::kConnections[i]));
        const b2b2::B2PasReport p = b2b2::pas_report(ix);
        pas = {p.pas_c3 ? "1" : "0", p.pas_c4 ? "1" : "0", p.pas_network ? "1" : "0"};
        regime = ix.case_id == 1 ? "delta-negative" : "delta-positive";
    } catch (const Error& e) {
        err = e.what();
    }
    for (auto* v : {&ci, &ni, &pas})
        for (const auto& x : *v) cols.push_back(x);
    cols.push_back(regime);
    cols.push_back(csv_field(err));
    std::string line;
    for (std::size_t i = 0; i < cols.size(); ++i) line += (i ? "," : "") + cols[i];
    return line;
}

}  // namespace

std::string sweep_csv(const RunConfig& c) {
    std::vector<std::string> header;
    for (const auto& a : c.sweep) header.push_back(a.name);
    if (c.network == "B3B3") {
        for (const char* h : {"delta", "delta_t", "sigma", "sigma_t", "c_t12", "c_t23", "c_t31", "c_s12", "c_s24",
                              "c_s41", "n_12", "n_23", "n_31", "n_24", "n_41", "pas_xi3", "pas_xi4", "pas_network",
                              "regime", "error"})
            header.push_back(h);
    } else {
        for (const char* h : {"rho", "delta", "rho_t", "delta_t", "c_ab3", "c_ba3", "c_ab4", "c_ba4", "n_ab", "n_ba3",
                              "n_ba4", "pas_c3", "pas_c4", "pas_network", "regime", "error"})
            header.push_back(h);
    }
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";

    std::int64_t total = c.sweep.empty() ? 0 : 1;
    for (const auto& a : c.sweep) total *= a.steps;
    std::vector<std::string> lines(static_cast<std::size_t>(total));
    auto row_values = [&](std::int64_t idx) {
        std::map<std::string, double> v;
        for (auto it = c.sweep.rbegin(); it != c.sweep.rend(); ++it) {
            const int k = static_cast<int>(idx % it->steps);
            idx /= it->steps;
            v[it->name] = it->steps == 1 ? it->from : it->from + (it->to - it->from) * k / (it->steps - 1);
        }
        return v;
    };
    const int nw = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(sim::worker_count(), total)));
    auto work = [&](int w) {
        for (std::int64_t i = w; i < total; i += nw) {
            const auto v = row_values(i);
            lines[static_cast<std::size_t>(i)] = c.network == "B3B3" ? sweep_row_b3(c, v) : sweep_row_b2(c, v);
        }
    };
    if (nw == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& l : lines) out += l + "\n";
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
    fs::create_directories(dir);
    const fs::path p = fs::path(dir) / name;
    std::ofstream os(p);
    if (!os) throw ConfigError("cannot write '" + p.string() + "'");
    os << body;
}

}  // namespace

int cmd_analyze(const RunConfig& c, std::ostream& out) {
    const IndexReport r = analyze(c);
    write_file(c.out_dir, "report.json", report_to_json(r));
    const std::string table = report_table(r);
    write_file(c.out_dir, "report.txt", table);
    out << table;
    return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    const VerifyReport v = verify(c);
    const std::string table = verify_table(v);
    write_file(c.out_dir, "verify.txt", table);
    out << table;
    return v.pass ? 0 : 3;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
    const std::string csv = sweep_csv(c);
    write_file(c.out_dir, "sweep.csv", csv);
    out << csv;
    return 0;
}

int cmd_witness(std::uint64_t seed, int count, const std::string& out_dir, std::ostream& out) {
    ojson j;
    bool ok = true;
    const B3B3Spec w = b3b3::find_nonpas_witness(b3b3::default_witness_box(), seed);
    const IndexReport rw = analyze_b3b3(w, AssumptionFlags{true, true});
    const bool w_ok = rw.pas.at("xi3") && !rw.pas.at("network");
    ok = ok && w_ok;
    j["non_pas_network"] = ojson::parse(report_to_json(rw));
    j["stabilizing"] = ojson::array();
    out << "non-p.a.s. network from a p.a.s. cycle: " << (w_ok ? "found" : "FAILED") << "\n";
    out << report_table(rw) << "\n";
    for (int i = 0; i < count; ++i) {
        const B3B3Spec s = b3b3::find_stabilizing_spec(b3b3::default_stabilizing_box(), seed + static_cast<std::uint64_t>(i));
        const IndexReport r = analyze_b3b3(s, AssumptionFlags{true, false});
        const bool s_ok = r.pas.at("network") && !r.pas.at("xi3") && !r.pas.at("xi4");
        ok = ok && s_ok;
        j["stabilizing"].push_back(ojson::parse(report_to_json(r)));
        out << "stabilising spec " << i + 1 << ": " << (s_ok ? "network p.a.s., neither cycle p.a.s." : "FAILED") << "\n";
    }
    write_file(out_dir, "witness.json", j.dump(2) + "\n");
    return ok ? 0 : 3;
}

}  // namespace hetnet::app
