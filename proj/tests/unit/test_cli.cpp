#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(HETNET_CLI) + " " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hetnet_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string fixture(const std::string& name) { return std::string(HETNET_FIXTURES) + "/" + name; }

}  // namespace

TEST_CASE("analyze writes both report files") {
    const fs::path out = scratch("analyze");
    CHECK(run("analyze --config " + fixture("p0.json") + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "report.txt"));
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch("codes");
    CHECK(run("") == 1);
    CHECK(run("analyze") == 1);
    CHECK(run("analyze --config " + (dir / "missing.json").string()) == 1);

    std::ofstream(dir / "bad.json") << "{\n  \"network\": \"B3B3\",\n  oops\n}\n";
    CHECK(run("analyze --config " + (dir / "bad.json").string()) == 1);

    std::ofstream(dir / "both.json")
        << R"({"network": "B3B3", "eigenvalues": {"e12": 1, "e23": 2, "e24": 1, "e31": 1, "e41": 1,
              "c13": 1.2, "c14": 0.8, "c21": 1.5, "c32": 1.5, "c34": -0.5, "c42": 1.5, "c43": -0.5}})";
    CHECK(run("analyze --config " + (dir / "both.json").string() + " --out " + dir.string()) == 2);
}

TEST_CASE("sweep writes a CSV") {
    const fs::path out = scratch("sweep");
    CHECK(run("sweep --config " + fixture("sweep_sigma.json") + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "sweep.csv"));
}

TEST_CASE("witness search") {
    const fs::path out = scratch("witness");
    CHECK(run("witness --seed 1 --count 2 --out " + out.string()) == 0);
    CHECK(fs::exists(out / "witness.json"));
}

TEST_CASE("verify with a small sample count") {
    const fs::path out = scratch("verify");
    const int rc = run("verify --config " + fixture("q0.json") + " --samples 20000 --out " + out.string());
    CHECK((rc == 0 || rc == 3));
    CHECK(fs::exists(out / "verify.txt"));
}
