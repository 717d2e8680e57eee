#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hetnet/b3b3.hpp"
#include "hetnet/ext_real.hpp"
#include "hetnet/spec.hpp"

namespace hetnet::app {

struct SweepAxis {
    std::string name;
    double from = 0, to = 0;
    int steps = 0;  // 0 gives an empty grid, 1 the single value `from`
};

struct RunConfig {
    std::string network;  // "B3B3" or "B2B2"
    std::map<std::string, double> eigenvalues;
    AssumptionFlags assumptions;
    std::vector<double> eps_grid{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    std::int64_t samples = 1000000;
    std::uint64_t seed = 1;
    int n_cap = 10000;
    b3b3::NuConvention nu = b3b3::NuConvention::Composed;
    std::string out_dir = ".";
    double margin = 0.95;
    double tolerance = 0.15;
    std::string field;  // B2B2 only: coefficient table for the ODE check
    std::vector<SweepAxis> sweep;

    B3B3Spec b3() const;
    B2B2Spec b2() const;
};

// JSON text to RunConfig. Unknown keys are rejected at every level;
// syntax errors report line and column. `base_dir` resolves a relative
// field path.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

struct ReportRow {
    std::string connection;
    std::map<std::string, ExtReal> c_index;  // keyed by cycle name
    ExtReal n_index;
    std::string source;
    bool extrapolated = false;

    bool operator==(const ReportRow&) const = default;
};

struct IndexReport {
    std::string network;
    std::string regime;
    std::map<std::string, double> eigenvalues;
    std::map<std::string, double> derived;
    std::map<std::string, std::string> branches;  // case-tree branch per cycle
    std::vector<ReportRow> rows;
    std::map<std::string, bool> pas;  // per cycle and "network"
    std::vector<std::string> caveats;

    bool operator==(const IndexReport&) const = default;
};

// Values are rounded to 12 significant digits so that the JSON form
// re-parses to an identical report.
IndexReport analyze_b3b3(const B3B3Spec& s, AssumptionFlags f, b3b3::NuConvention nu = b3b3::NuConvention::Composed);
IndexReport analyze_b2b2(const B2B2Spec& s, AssumptionFlags f);
IndexReport analyze(const RunConfig& c);

std::string report_to_json(const IndexReport& r);
IndexReport report_from_json(const std::string& text);
std::string report_table(const IndexReport& r);

struct VerifyRow {
    std::string connection, level;
    ExtReal analytic;
    bool extrapolated = false;
    std::optional<ExtReal> estimate;
    std::vector<double> sigma_hat;  // per eps
    double delta = 0;               // |estimate - analytic| when both finite
    std::string rule;               // how pass/fail was decided
    bool pass = false;
    std::string note;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    std::vector<std::string> checks;  // extra lines: ordering, nu block, ODE
    bool pass = true;
};

VerifyReport verify(const RunConfig& c);
std::string verify_table(const VerifyReport& v);

// CSV with one row per grid point in row-major order of the sweep axes.
std::string sweep_csv(const RunConfig& c);

// Subcommand bodies; return the process exit code and print to `out`/`err`.
int cmd_analyze(const RunConfig& c, std::ostream& out);
int cmd_verify(const RunConfig& c, std::ostream& out);
int cmd_sweep(const RunConfig& c, std::ostream& out);
int cmd_witness(std::uint64_t seed, int count, const std::string& out_dir, std::ostream& out);

// 12 significant digits.
std::string fmt(double v);
std::string fmt(const ExtReal& v);

}  // namespace hetnet::app
