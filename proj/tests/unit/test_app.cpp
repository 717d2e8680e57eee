#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "hetnet/app.hpp"
#include "hetnet/errors.hpp"

using namespace hetnet;
using namespace hetnet::app;

namespace {

std::string fixture(const std::string& name) { return std::string(HETNET_FIXTURES) + "/" + name; }

const char* kP0Eigen =
    R"("eigenvalues": {"e12": 1, "e23": 2, "e24": 1, "e31": 1, "e41": 1, "c13": 1.2, "c14": 0.8,
        "c21": 1.5, "c32": 1.5, "c34": 1.0, "c42": 1.5, "c43": 1.0})";

std::string config(const std::string& extra = "") {
    return std::string("{\"network\": \"B3B3\", ") + kP0Eigen + extra + "}";
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char ch : s) n += ch == '\n';
    return n;
}

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse_config(config(R"(, "assumptions": ["A1"], "options": {"samples": 5000, "seed": 7,
        "eps_grid": [0.01, 0.001], "nu_convention": "display", "tolerance": 0.2})"));
    CHECK(c.network == "B3B3");
    CHECK(c.samples == 5000);
    CHECK(c.seed == 7);
    CHECK(c.eps_grid.size() == 2);
    CHECK(c.nu == b3b3::NuConvention::Display);
    CHECK(c.assumptions.a1);
    CHECK_FALSE(c.assumptions.a2);
    CHECK(c.b3().c13 == 1.2);
    CHECK(c.b3().r1 == 1.0);
}

TEST_CASE("config errors") {
    CHECK(error_of(config(R"(, "bogus": 1)")).find("unknown key 'bogus'") != std::string::npos);
    CHECK(error_of(config(R"(, "options": {"sampels": 10})")).find("unknown key 'sampels'") != std::string::npos);

    const std::string malformed = "{\n  \"network\": \"B3B3\",\n  \"eigenvalues\": {\"e12\" 1}\n}";
    const std::string m = error_of(malformed);
    CHECK(m.find("line 3") != std::string::npos);
    CHECK(m.find("column") != std::string::npos);

    std::string missing = config();
    missing.replace(missing.find("\"c43\": 1.0"), 10, "\"r1\": 1.0");
    CHECK(error_of(missing).find("missing eigenvalue 'c43'") != std::string::npos);

    CHECK(error_of(config(R"(, "assumptions": ["A3"])")).find("unknown assumption") != std::string::npos);
    CHECK(error_of(config(R"(, "options": {"margin": 1.5})")).find("margin") != std::string::npos);
    CHECK_FALSE(error_of(R"({"network": "B5B5", "eigenvalues": {}})").empty());
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("P0 report") {
    const IndexReport r = analyze(load_config(fixture("p0.json")));
    CHECK(r.rows.size() == 5);
    CHECK(r.pas.at("network"));
    CHECK(r.pas.at("xi3"));
    CHECK_FALSE(r.pas.at("xi4"));
    std::size_t cells = 0;
    for (const auto& row : r.rows) cells += row.c_index.size();
    CHECK(cells == 6);
}

TEST_CASE("unsupported regime maps to exit code 2") {
    std::string text = config();
    text.replace(text.find("\"c34\": 1.0"), 10, "\"c34\": -0.5");
    text.replace(text.find("\"c43\": 1.0"), 10, "\"c43\": -0.5");
    try {
        analyze(parse_config(text));
        FAIL("expected UnsupportedRegime");
    } catch (const Error& e) {
        CHECK(e.exit_code() == 2);
        CHECK(std::string(e.what()).find("regime not covered") != std::string::npos);
    }
}

TEST_CASE("report JSON round trip") {
    for (const char* f : {"p0.json", "p1.json", "p2.json", "p3.json", "q0.json"}) {
        INFO(f);
        const IndexReport r = analyze(load_config(fixture(f)));
        const std::string js = report_to_json(r);
        const IndexReport back = report_from_json(js);
        CHECK(back == r);
        CHECK(report_to_json(back) == js);
    }
}

TEST_CASE("infinite values are written as strings") {
    const std::string js = report_to_json(analyze(load_config(fixture("p0.json"))));
    CHECK(js.find("\"inf\"") != std::string::npos);
}

TEST_CASE("empty sweep gives a header-only CSV") {
    RunConfig c = load_config(fixture("sweep_sigma.json"));
    c.sweep[0].steps = 0;
    const std::string csv = sweep_csv(c);
    CHECK(count_lines(csv) == 1);
    CHECK(csv.rfind("c14,", 0) == 0);
}

TEST_CASE("sweep output does not depend on the thread count") {
    const RunConfig c = load_config(fixture("sweep_c34.json"));
    setenv("HETNET_THREADS", "1", 1);
    const std::string a = sweep_csv(c);
    setenv("HETNET_THREADS", "4", 1);
    const std::string b = sweep_csv(c);
    unsetenv("HETNET_THREADS");
    CHECK(a == b);
    CHECK(count_lines(a) == 20);
}

namespace {

// Column `name` of every data row.
std::vector<std::string> column(const std::string& csv, const std::string& name) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    auto split = [](const std::string& s) {
        std::vector<std::string> v;
        std::stringstream ss(s);
        std::string t;
        while (std::getline(ss, t, ',')) v.push_back(t);
        if (!s.empty() && s.back() == ',') v.push_back("");
        return v;
    };
    const auto head = split(line);
    std::size_t k = 0;
    while (k < head.size() && head[k] != name) ++k;
    REQUIRE(k < head.size());
    std::vector<std::string> out;
    while (std::getline(in, line)) out.push_back(split(line).at(k));
    return out;
}

}  // namespace

TEST_CASE("sigma sweep: the xi4 index at [4->1] changes sign at sigma = 1") {
    const std::string csv = sweep_csv(load_config(fixture("sweep_sigma.json")));
    const auto sigma = column(csv, "sigma"), s41 = column(csv, "c_s41");
    REQUIRE(sigma.size() == 10);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        INFO("sigma " << sigma[i]);
        const double sg = std::stod(sigma[i]);
        const ExtReal v = ExtReal::parse(s41[i]);
        if (sg < 1)
            CHECK((v.is_finite() && v.value() > 0));
        else
            CHECK(v < ExtReal(0.0));
    }
}

TEST_CASE("c34 sweep: the network index at [1->2] changes sign at the cusp threshold") {
    // Threshold c34 = e31 (e24 - e23) / c21 = -0.25 for these eigenvalues.
    const std::string csv = sweep_csv(load_config(fixture("sweep_c34.json")));
    const auto c34 = column(csv, "c34"), n12 = column(csv, "n_12"), err = column(csv, "error");
    for (std::size_t i = 0; i < c34.size(); ++i) {
        const double c = std::stod(c34[i]);
        INFO("c34 " << c);
        if (std::fabs(c + 0.25) < 1e-9) {
            CHECK(err[i].find("non-generic") != std::string::npos);
            continue;
        }
        const ExtReal v = ExtReal::parse(n12[i]);
        if (c < -0.25)
            CHECK(v < ExtReal(0.0));
        else
            CHECK(v > ExtReal(0.0));
    }
}

TEST_CASE("formatting") {
    CHECK(fmt(0.1) == "0.1");
    CHECK(fmt(ExtReal::neg_inf()) == "-inf");
    CHECK(fmt(1.0 / 3.0) == "0.333333333333");
}
