#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/b2b2.hpp"
#include "hetnet/b3b3.hpp"
#include "hetnet/ext_real.hpp"
#include "hetnet/skeleton.hpp"

namespace hetnet::sim {

// Domain inequality cu * ln x + cv * ln y < ln(margin).
struct Inequality {
    double cu = 0, cv = 0;
    std::string text;
};

// Monomial map between reduced sections, acting linearly on logarithms.
struct ReducedMap {
    std::string name;
    int from = 0, to = 0;
    Mat2 P{};
    std::vector<Inequality> domain;
    unsigned cycles = 0;
};

// Local maps drive the simulation; return maps are the closed forms around
// each cycle and are kept for cross-checking.
struct MapModel {
    std::vector<std::string> sections;
    std::vector<std::string> cycle_names;
    std::vector<ReducedMap> local;
    std::vector<ReducedMap> returns;
    double margin = 0.95;

    int section_index(const std::string& name) const;
    const ReducedMap& find(const std::string& name) const;  // UnknownMap
};

// B3B3 return maps h1t, h2t, h3t (xi3-cycle) and h1, h2, h4 (xi4-cycle);
// the domains include the extra cusp conditions for c34 < 0 or c43 < 0.
MapModel model_b3b3(const B3B3Spec& s, double margin = 0.95);
// B2B2 return maps g3a, g3b, g4a, g4b.
MapModel model_b2b2(const B2B2Spec& s, double margin = 0.95);

// A point of a reduced section, stored as logarithms so that deep
// contraction never underflows.
struct SectionPoint {
    int section = 0;
    double lx = 0, ly = 0;

    static SectionPoint from_xy(int section, double x, double y);
    double x() const;
    double y() const;
};

struct ApplyResult {
    bool escaped = false;
    std::string violated;  // domain inequality that failed
    SectionPoint p;
};

// ConfigError if p is not on the map's source section.
ApplyResult apply_map(const MapModel& m, const std::string& name, const SectionPoint& p);
ApplyResult apply_map(const MapModel& m, const ReducedMap& map, const SectionPoint& p);

enum class Outcome { Attracted, Escaped, Undecided };
std::string outcome_name(Outcome o);

struct FollowCaps {
    int max_steps = 2000;
    // Attracted once both coordinates are below exp(log_floor).
    double log_floor = -1e4;
    unsigned cycles = ~0u;  // maps allowed
    bool record = false;    // keep the itinerary
};

struct Itinerary {
    std::vector<SectionPoint> points;  // only when FollowCaps::record
    Outcome outcome = Outcome::Undecided;
    int steps = 0;
    unsigned cycle = 0;    // cycle bit of the last map, when Attracted
    std::string reason;    // violated inequality, when Escaped
};

Itinerary follow(const MapModel& m, const SectionPoint& start, const FollowCaps& caps = {});

struct EpsCell {
    double eps = 0;
    std::int64_t attracted = 0, escaped = 0, undecided = 0;
    double sigma_hat() const;   // attracted / decided
    double std_error() const;   // binomial
};

struct IndexEstimate {
    std::vector<EpsCell> cells;
    std::optional<ExtReal> sigma_plus, sigma_minus;
    double se_plus = 0, se_minus = 0;  // slope standard errors
    std::string regression_error;      // set when a slope could not be fitted
    std::uint64_t seed = 0;
    std::int64_t samples = 0;
    bool undecided_ok = true;          // undecided < 0.1% in every cell

    // sigma_plus - sigma_minus; InsufficientSamples if a slope is missing.
    ExtReal sigma() const;
};

struct McOptions {
    std::vector<double> eps_grid{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    std::int64_t samples = 1000000;
    std::uint64_t seed = 1;
    FollowCaps caps;
    int threads = 0;           // 0: HETNET_THREADS or hardware concurrency
    std::string dump_csv;      // eps,x,y,outcome,steps,exit_reason
    int min_cell_count = 10;   // cells with fewer points are left out of a fit
};

// Samples (x, y) uniformly in [0, eps]^2 on `section`; cycles selects the
// maps available (one cycle bit for a c-index, all bits for an n-index).
// Results depend only on the seed, never on the thread count.
IndexEstimate estimate_sigma_mc(const MapModel& m, const std::string& section, unsigned cycles,
                                const McOptions& opt);

// Number of workers: HETNET_THREADS if set and positive, else hardware
// concurrency, capped by `requested` when that is positive.
int worker_count(int requested = 0);

// ---------------------------------------------------------------------------

struct Trajectory {
    std::vector<double> t;
    std::vector<b2b2::Vec4> x;
};

struct Rk4Options {
    int store_every = 1;  // keep every n-th step
};

// Fixed-step RK4. Coordinates that start at exactly zero are clamped back to
// zero when they drift below 1e-14. Throws Blowup when |x| exceeds 1e6.
Trajectory integrate_rk4(const b2b2::Field& f, const b2b2::Vec4& x0, double dt, double T,
                         const Rk4Options& opt = {});

}  // namespace hetnet::sim
