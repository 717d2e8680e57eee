#include "hetnet/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "hetnet/errors.hpp"
#include "hetnet/rng.hpp"

namespace hetnet::sim {

int MapModel::section_index(const std::string& name) const {
    for (std::size_t i = 0; i < sections.size(); ++i)
        if (sections[i] == name) return static_cast<int>(i);
    throw UnknownMap("unknown section '" + name + "'");
}

const ReducedMap& MapModel::find(const std::string& name) const {
    for (const auto& m : local)
        if (m.name == name) return m;
    for (const auto& m : returns)
        if (m.name == name) return m;
    throw UnknownMap("unknown map '" + name + "'");
}

namespace {

ReducedMap from_local(const LocalMap& lm, const std::vector<std::string>& coords) {
    ReducedMap r{lm.name, lm.from, lm.to, lm.P, {}, lm.cycles};
    const std::string& c0 = coords[static_cast<std::size_t>(lm.to) * 2];
    const std::string& c1 = coords[static_cast<std::size_t>(lm.to) * 2 + 1];
    r.domain.push_back({lm.P[0][0], lm.P[0][1], c0 + "' < margin"});
    const bool named = lm.domain_text != "none" && !lm.domain_text.empty();
    r.domain.push_back({lm.P[1][0], lm.P[1][1], named ? lm.domain_text : c1 + "' < margin"});
    return r;
}

// Return map with its displayed domain plus the output rows.
ReducedMap make_return(const std::string& name, int sec, const Mat2& P, unsigned cycles,
                       std::vector<Inequality> dom) {
    ReducedMap r{name, sec, sec, P, std::move(dom), cycles};
    r.domain.push_back({P[0][0], P[0][1], "x' < margin"});
    r.domain.push_back({P[1][0], P[1][1], "y' < margin"});
    return r;
}

}  // namespace

MapModel model_b3b3(const B3B3Spec& s, double margin) {
    const Skeleton sk = b3b3::skeleton(s);
    const std::vector<std::string> coords{"x3", "x4", "x1", "x4", "x2", "x4", "x1", "x3", "x2", "x3"};
    MapModel m;
    m.sections = sk.sections;
    m.cycle_names = sk.cycle_names;
    m.margin = margin;
    for (const auto& lm : sk.maps) m.local.push_back(from_local(lm, coords));

    const b3b3::DerivedQuantities d = b3b3::derived(s);
    const double q = s.e24 / s.e23;
    const double q34 = s.e24 / s.e23 - s.c21 * s.c34 / (s.e23 * s.e31);
    std::vector<Inequality> d1t{{-q, 1, "y < x^(e24/e23)"}};
    std::vector<Inequality> d2t;
    std::vector<Inequality> d3t{{-d.sigma_t, 1, "y < x^(sigma~)"}};
    if (s.c34 < 0) {
        d1t.push_back({-q34, 1, "y < x^(e24/e23 - c21 c34/(e23 e31))"});
        d2t.push_back({s.c34 / s.e31, 1, "y < x^(-c34/e31)"});
    }
    std::vector<Inequality> d1{{1, -1 / q, "x < y^(e23/e24)"}};
    std::vector<Inequality> d2;
    std::vector<Inequality> d4{{-d.sigma, 1, "y < x^(sigma)"}};
    if (s.c43 < 0) {
        d1.push_back({1, s.c21 * s.c43 / (s.e24 * s.e41) - 1 / q, "x < y^(e23/e24 - c21 c43/(e24 e41))"});
        d2.push_back({s.c43 / s.e41, 1, "y < x^(-c43/e41)"});
    }
    using b3b3::kXi3;
    using b3b3::kXi4;
    m.returns = {
        make_return("h1t", 0, Mat2{{{d.rho_t, 0}, {d.nu_t, 1}}}, kXi3, d1t),
        make_return("h2t", 1, Mat2{{{d.rho_t, 0}, {d.delta_t, 1}}}, kXi3, d2t),
        make_return("h3t", 2, Mat2{{{d.rho_t, 0}, {d.tau_t, 1}}}, kXi3, d3t),
        make_return("h1", 0, Mat2{{{1, d.nu}, {0, d.rho}}}, kXi4, d1),
        make_return("h2", 3, Mat2{{{d.rho, 0}, {d.delta, 1}}}, kXi4, d2),
        make_return("h4", 4, Mat2{{{d.rho, 0}, {d.tau, 1}}}, kXi4, d4),
    };
    return m;
}

MapModel model_b2b2(const B2B2Spec& s, double margin) {
    const Skeleton sk = b2b2::skeleton(s);
    const std::vector<std::string> coords{"x3", "x4", "x2", "x4", "x2", "x3"};
    MapModel m;
    m.sections = sk.sections;
    m.cycle_names = sk.cycle_names;
    m.margin = margin;
    for (const auto& lm : sk.maps) m.local.push_back(from_local(lm, coords));

    const b2b2::B2DerivedQuantities d = b2b2::derived_b2(s);
    const double k = s.eb4 / s.eb3;
    using b2b2::kC3;
    using b2b2::kC4;
    m.returns = {
        make_return("g3a", 1, Mat2{{{d.rho_t, 0}, {d.delta_t, 1}}}, kC3, {}),
        make_return("g3b", 0, Mat2{{{d.rho_t, 0}, {k * (d.rho - 1), 1}}}, kC3, {{-k, 1, "x4 < x3^(eb4/eb3)"}}),
        make_return("g4a", 2, Mat2{{{d.rho, 0}, {d.delta, 1}}}, kC4, {}),
        make_return("g4b", 0, Mat2{{{1, (d.rho_t - 1) / k}, {0, d.rho}}}, kC4, {{1, -1 / k, "x3 < x4^(eb3/eb4)"}}),
    };
    return m;
}

SectionPoint SectionPoint::from_xy(int section, double x, double y) {
    if (!(x > 0 && y > 0)) throw ConfigError("section coordinates must be positive");
    return SectionPoint{section, std::log(x), std::log(y)};
}

double SectionPoint::x() const { return std::exp(lx); }
double SectionPoint::y() const { return std::exp(ly); }

ApplyResult apply_map(const MapModel& m, const ReducedMap& map, const SectionPoint& p) {
    if (p.section != map.from)
        throw ConfigError("point lies on " + m.sections.at(p.section) + ", map " + map.name + " starts on " +
                          m.sections.at(map.from));
    ApplyResult r;
    const double lm = std::log(m.margin);
    for (const auto& q : map.domain) {
        if (!(q.cu * p.lx + q.cv * p.ly < lm)) {
            r.escaped = true;
            r.violated = q.text;
            r.p = p;
            return r;
        }
    }
    r.p.section = map.to;
    r.p.lx = map.P[0][0] * p.lx + map.P[0][1] * p.ly;
    r.p.ly = map.P[1][0] * p.lx + map.P[1][1] * p.ly;
    return r;
}

ApplyResult apply_map(const MapModel& m, const std::string& name, const SectionPoint& p) {
    return apply_map(m, m.find(name), p);
}

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Attracted: return "attracted";
        case Outcome::Escaped: return "escaped";
        case Outcome::Undecided: return "undecided";
    }
    return "?";
}

Itinerary follow(const MapModel& m, const SectionPoint& start, const FollowCaps& caps) {
    Itinerary it;
    SectionPoint p = start;
    if (caps.record) it.points.push_back(p);
    const double lm = std::log(m.margin);
    unsigned last_cycle = 0;
    for (int step = 0;; ++step) {
        it.steps = step;
        if (p.lx < caps.log_floor && p.ly < caps.log_floor) {
            it.outcome = Outcome::Attracted;
            it.cycle = last_cycle;
            return it;
        }
        if (step >= caps.max_steps) {
            it.outcome = Outcome::Undecided;
            return it;
        }
        const ReducedMap* chosen = nullptr;
        std::string why;
        for (const auto& map : m.local) {
            if (map.from != p.section || !(map.cycles & caps.cycles)) continue;
            bool ok = true;
            for (const auto& q : map.domain) {
                if (!(q.cu * p.lx + q.cv * p.ly < lm)) {
                    ok = false;
                    if (!why.empty()) why += " / ";
                    why += map.name + ": " + q.text;
                    break;
                }
            }
            if (ok) {
                chosen = &map;
                break;
            }
        }
        if (!chosen) {
            it.outcome = Outcome::Escaped;
            it.reason = why.empty() ? "no admissible map at " + m.sections[p.section] : why;
            return it;
        }
        const double u = p.lx, v = p.ly;
        p.section = chosen->to;
        p.lx = chosen->P[0][0] * u + chosen->P[0][1] * v;
        p.ly = chosen->P[1][0] * u + chosen->P[1][1] * v;
        last_cycle = chosen->cycles;
        if (caps.record) it.points.push_back(p);
    }
}

double EpsCell::sigma_hat() const {
    const auto decided = attracted + escaped;
    return decided > 0 ? static_cast<double>(attracted) / static_cast<double>(decided) : 0.0;
}

double EpsCell::std_error() const {
    const auto decided = attracted + escaped;
    if (decided == 0) return 0.0;
    const double p = sigma_hat();
    return std::sqrt(p * (1 - p) / static_cast<double>(decided));
}

ExtReal IndexEstimate::sigma() const {
    if (!regression_error.empty() || !sigma_plus || !sigma_minus) throw InsufficientSamples(regression_error);
    return add(*sigma_plus, -*sigma_minus);
}

int worker_count(int requested) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HETNET_THREADS")) {
        const int e = std::atoi(env);
        if (e > 0) n = e;
    }
    if (n < 1) n = 1;
    if (requested > 0) n = std::min(n, requested);
    return n;
}

namespace {

struct Fit {
    double slope = 0, se = 0;
    int n = 0;
};

Fit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
    Fit f;
    f.n = static_cast<int>(xs.size());
    double mx = 0, my = 0;
    for (int i = 0; i < f.n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= f.n;
    my /= f.n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < f.n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    f.slope = sxy / sxx;
    if (f.n > 2) {
        double ssr = 0;
        for (int i = 0; i < f.n; ++i) {
            const double r = ys[i] - my - f.slope * (xs[i] - mx);
            ssr += r * r;
        }
        f.se = std::sqrt(ssr / (f.n - 2) / sxx);
    }
    return f;
}

struct SampleRecord {
    double lx, ly;
    Outcome outcome;
    int steps;
    std::string reason;
};

}  // namespace

IndexEstimate estimate_sigma_mc(const MapModel& m, const std::string& section, unsigned cycles,
                                const McOptions& opt) {
    const int sec = m.section_index(section);
    if (opt.samples < 1000) throw ConfigError("at least 1000 samples per eps are required");
    if (opt.eps_grid.size() < 2) throw ConfigError("eps grid needs at least two values");
    for (std::size_t i = 0; i < opt.eps_grid.size(); ++i) {
        const double e = opt.eps_grid[i];
        if (!(e > 0 && e < m.margin)) throw ConfigError("eps values must lie in (0, margin)");
        if (i > 0 && !(e < opt.eps_grid[i - 1])) throw ConfigError("eps grid must be strictly descending");
    }

    const std::size_t ne = opt.eps_grid.size();
    const std::int64_t ns = opt.samples;
    const bool dump = !opt.dump_csv.empty();
    FollowCaps caps = opt.caps;
    caps.cycles = cycles;
    caps.record = false;

    const int nw = static_cast<int>(std::min<std::int64_t>(worker_count(opt.threads), ns));
    std::vector<std::vector<EpsCell>> partial(nw, std::vector<EpsCell>(ne));
    std::vector<std::vector<SampleRecord>> records(dump ? ne : 0);
    if (dump)
        for (auto& r : records) r.resize(static_cast<std::size_t>(ns));

    auto work = [&](int w) {
        const std::int64_t lo = ns * w / nw, hi = ns * (w + 1) / nw;
        for (std::size_t e = 0; e < ne; ++e) {
            const double le = std::log(opt.eps_grid[e]);
            EpsCell& cell = partial[w][e];
            for (std::int64_t i = lo; i < hi; ++i) {
                CounterRng rng(opt.seed, e, static_cast<std::uint64_t>(i));
                SectionPoint p{sec, le + std::log(rng.uniform()), le + std::log(rng.uniform())};
                const Itinerary it = follow(m, p, caps);
                switch (it.outcome) {
                    case Outcome::Attracted: ++cell.attracted; break;
                    case Outcome::Escaped: ++cell.escaped; break;
                    case Outcome::Undecided: ++cell.undecided; break;
                }
                if (dump) records[e][static_cast<std::size_t>(i)] = {p.lx, p.ly, it.outcome, it.steps, it.reason};
            }
        }
    };
    if (nw == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    IndexEstimate est;
    est.seed = opt.seed;
    est.samples = ns;
    est.cells.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        est.cells[e].eps = opt.eps_grid[e];
        for (int w = 0; w < nw; ++w) {
            est.cells[e].attracted += partial[w][e].attracted;
            est.cells[e].escaped += partial[w][e].escaped;
            est.cells[e].undecided += partial[w][e].undecided;
        }
        if (est.cells[e].undecided * 1000 >= ns) est.undecided_ok = false;
    }

    auto fit_side = [&](bool plus, std::optional<ExtReal>& out, double& se) {
        bool all_zero = true;
        std::vector<double> xs, ys;
        for (const auto& c : est.cells) {
            const std::int64_t k = plus ? c.escaped : c.attracted;
            const double frac = plus ? 1.0 - c.sigma_hat() : c.sigma_hat();
            if (k > 0) all_zero = false;
            if (k >= opt.min_cell_count) {
                xs.push_back(std::log(c.eps));
                ys.push_back(std::log(frac));
            }
        }
        if (all_zero) {
            out = ExtReal::pos_inf();
            return;
        }
        if (xs.size() < 2) {
            est.regression_error = std::string("fewer than two eps cells with ") + std::to_string(opt.min_cell_count) +
                                   (plus ? " escaping" : " attracted") + " points; increase the sample count";
            return;
        }
        const Fit f = ols(xs, ys);
        out = ExtReal(f.slope);
        se = f.se;
    };
    fit_side(true, est.sigma_plus, est.se_plus);
    fit_side(false, est.sigma_minus, est.se_minus);

    if (dump) {
        std::ofstream os(opt.dump_csv);
        if (!os) throw ConfigError("cannot write '" + opt.dump_csv + "'");
        os << "eps,x,y,outcome,steps,exit_reason\n";
        char buf[128];
        for (std::size_t e = 0; e < ne; ++e) {
            for (const auto& r : records[e]) {
                std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,", opt.eps_grid[e], std::exp(r.lx), std::exp(r.ly));
                os << buf << outcome_name(r.outcome) << ',' << r.steps << ",\"" << r.reason << "\"\n";
            }
        }
    }
    return est;
}

Trajectory integrate_rk4(const b2b2::Field& f, const b2b2::Vec4& x0, double dt, double T, const Rk4Options& opt) {
    if (!(dt > 0) || !(T > dt)) throw ConfigError("integrate_rk4 needs dt > 0 and T > dt");
    using b2b2::Vec4;
    std::array<bool, 4> zero{};
    for (int i = 0; i < 4; ++i) zero[i] = x0[i] == 0.0;
    auto axpy = [](const Vec4& x, double a, const Vec4& k) {
        Vec4 r;
        for (int i = 0; i < 4; ++i) r[i] = x[i] + a * k[i];
        return r;
    };
    Trajectory tr;
    Vec4 x = x0;
    tr.t.push_back(0.0);
    tr.x.push_back(x);
    const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
    const int every = std::max(1, opt.store_every);
    for (long n = 1; n <= steps; ++n) {
        const Vec4 k1 = f(x);
        const Vec4 k2 = f(axpy(x, dt / 2, k1));
        const Vec4 k3 = f(axpy(x, dt / 2, k2));
        const Vec4 k4 = f(axpy(x, dt, k3));
        double norm2 = 0;
        for (int i = 0; i < 4; ++i) {
            x[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            if (zero[i] && std::fabs(x[i]) < 1e-14) x[i] = 0.0;
            norm2 += x[i] * x[i];
        }
        if (!(norm2 <= 1e12)) throw Blowup("trajectory left the ball of radius 1e6 at t = " + std::to_string(n * dt));
        if (n % every == 0 || n == steps) {
            tr.t.push_back(n * dt);
            tr.x.push_back(x);
        }
    }
    return tr;
}

}  // namespace hetnet::sim
