// hetnet: stability indices of heteroclinic networks in R^4.
//
//   hetnet analyze --config p0.json [--out DIR]
//   hetnet verify  --config p0.json [--samples N] [--seed N] [--eps-grid 1e-2,1e-3]
//   hetnet sweep   --config sweep.json
//   hetnet witness [--seed N] [--count N] [--out DIR]
//
// Exit codes: 0 ok, 1 invalid input, 2 unsupported regime, 3 verification failure.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hetnet/app.hpp"
#include "hetnet/errors.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;
    std::string eps_grid;
    std::string nu;
    std::string out;
};

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        char* end = nullptr;
        const double x = std::strtod(tok.c_str(), &end);
        if (tok.empty() || *end != '\0') throw hetnet::ConfigError("bad --eps-grid entry '" + tok + "'");
        v.push_back(x);
    }
    return v;
}

hetnet::app::RunConfig load(const Overrides& o) {
    hetnet::app::RunConfig c = hetnet::app::load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.samples) c.samples = *o.samples;
    if (!o.eps_grid.empty()) c.eps_grid = parse_grid(o.eps_grid);
    if (o.nu == "composed") c.nu = hetnet::b3b3::NuConvention::Composed;
    if (o.nu == "display") c.nu = hetnet::b3b3::NuConvention::Display;
    if (!o.out.empty()) c.out_dir = o.out;
    return c;
}

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--samples", o.samples, "Monte-Carlo samples per eps");
    sub->add_option("--eps-grid", o.eps_grid, "comma-separated eps values, descending");
    sub->add_option("--nu-convention", o.nu, "sign convention for nu, nu~")
        ->check(CLI::IsMember({"composed", "display"}));
    sub->add_option("--out", o.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability indices for simple heteroclinic networks in R^4"};
    app.require_subcommand(1);

    Overrides o;
    auto* analyze = app.add_subcommand("analyze", "analytic c- and n-indices, written as report.json and report.txt");
    auto* verify = app.add_subcommand("verify", "Monte-Carlo check of every analytic index");
    auto* sweep = app.add_subcommand("sweep", "indices over a parameter grid as CSV");
    for (auto* s : {analyze, verify, sweep}) add_common(s, o);

    auto* witness = app.add_subcommand("witness", "search for a non-p.a.s. network and stabilising specs");
    std::uint64_t wseed = 1;
    int wcount = 5;
    std::string wout = ".";
    witness->add_option("--seed", wseed, "search seed");
    witness->add_option("--count", wcount, "number of stabilising specs")->check(CLI::PositiveNumber);
    witness->add_option("--out", wout, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*analyze) return hetnet::app::cmd_analyze(load(o), std::cout);
        if (*verify) return hetnet::app::cmd_verify(load(o), std::cout);
        if (*sweep) return hetnet::app::cmd_sweep(load(o), std::cout);
        if (*witness) return hetnet::app::cmd_witness(wseed, wcount, wout, std::cout);
    } catch (const hetnet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
