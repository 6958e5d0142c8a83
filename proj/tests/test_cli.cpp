#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

std::string env(const char* k) {
    const char* v = std::getenv(k);
    REQUIRE_MESSAGE(v, k << " not set");
    return v;
}

std::string src(const std::string& rel) { return env("CONESPEC_SOURCE_DIR") + "/" + rel; }

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("conespec_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    return p;
}

int cli(const std::string& args) {
    std::string cmd = env("CONESPEC_CLI") + " " + args + " 2>/dev/null";
    int s = std::system(cmd.c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

} // namespace

TEST_CASE("spectrum on the shipped model against the Bessel zeros") {
    fs::path out = scratch("spectrum");
    CHECK(cli("spectrum --config " + src("configs/spectrum.cfg") + " --out " + out.string()) == 0);
    std::string csv = slurp(out / "eigenvalues.csv");
    CHECK(csv.rfind("# config_digest=", 0) == 0);
    auto r = rows(csv);
    REQUIRE(r.size() > 1);
    CHECK(r[0][0] == "mode");
    // mode 0 has nu = 3/2: j_{3/2,1} is the first positive root of tan x = x
    const double j = oracle::tan_x_equals_x_root();
    bool seen = false;
    for (std::size_t i = 1; i < r.size(); ++i) {
        double disc = std::stod(r[i][2]);
        if (r[i][0] == "0" && r[i][1] == "1") {
            seen = true;
            CHECK(std::abs(disc - j * j) / (j * j) < 1e-4);
        }
        CHECK(std::abs(disc - std::stod(r[i][3])) / std::stod(r[i][3]) < 1e-4);
    }
    CHECK(seen);
    // boundary spectrum: Im sigma = +-sqrt(m^2 + a^2), a = 1.5
    auto b = rows(slurp(out / "boundary_spectrum.csv"));
    double min_im = 1e9;
    for (std::size_t i = 1; i < b.size(); ++i) min_im = std::min(min_im, std::abs(std::stod(b[i][2])));
    CHECK(std::abs(min_im - 1.5) < 1e-10);
    std::string man = slurp(out / "MANIFEST");
    CHECK(man.find("eigenvalues.csv") != std::string::npos);
    CHECK(man.find("# complete=true") != std::string::npos);
}

TEST_CASE("verify is deterministic under a fixed seed") {
    fs::path a = scratch("verify_a"), b = scratch("verify_b");
    CHECK(cli("verify --config " + src("configs/verify.cfg") + " --seed 42 --out " + a.string()) == 0);
    CHECK(cli("verify --seed 42 --config " + src("configs/verify.cfg") + " --out " + b.string()) == 0);
    CHECK(slurp(a / "verify.csv") == slurp(b / "verify.csv"));
    CHECK(slurp(a / "MANIFEST") == slurp(b / "MANIFEST"));
    CHECK(!slurp(a / "verify.csv").empty());
}

TEST_CASE("zeta on the shipped model reports the simple pole at -1") {
    fs::path out = scratch("zeta");
    CHECK(cli("zeta --config " + src("configs/zeta.cfg") + " --out " + out.string()) == 0);
    auto r = rows(slurp(out / "zeta_poles.csv"));
    bool found = false;
    for (std::size_t i = 1; i < r.size(); ++i)
        if (std::abs(std::stod(r[i][0]) + 1.0) < 0.05 && r[i][2] == "1" && r[i][5] == "simple") found = true;
    CHECK(found);
}

TEST_CASE("index subcommand") {
    fs::path out = scratch("index");
    CHECK(cli("index --config " + src("configs/index.cfg") + " --out " + out.string()) == 0);
    auto r = rows(slurp(out / "index.csv"));
    REQUIRE(r.size() == 2);
    CHECK(std::abs(std::stod(r[1][2]) + 1.0) < 1e-6);
    CHECK(fs::exists(out / "red_to_const.csv"));
    CHECK(fs::exists(out / "red_to_sobolev.csv"));
}

TEST_CASE("exit codes") {
    fs::path out = scratch("codes");
    fs::create_directories(out);
    // no subcommand, unknown subcommand, missing config
    CHECK(cli("") == 2);
    CHECK(cli("bogus --config x") == 2);
    CHECK(cli("spectrum --config " + (out / "missing.cfg").string()) == 2);
    CHECK(cli("verify --config " + src("configs/verify.cfg") + " --tolerance-profile loose") == 2);
    // a violated precondition surfaces as a validation failure, MANIFEST marks it incomplete
    {
        std::ofstream f(out / "bad.cfg");
        f << "model = laplace_type\na = 1.5\nmodes = 1\nt_min = 1e-2\nt_max = 1e-3\n";
    }
    CHECK(cli("heat --config " + (out / "bad.cfg").string() + " --out " + (out / "bad").string()) == 2);
    CHECK(slurp(out / "bad" / "MANIFEST").find("# complete=false") != std::string::npos);
    // no oracle for a perturbed operator: undecided
    {
        std::ofstream f(out / "pert.cfg");
        f << "model = laplace_type\na = 1.5\nmodes = 1\nperturbation = 0.5\nnpoints = 300\ncompare_modes = 1\n";
    }
    CHECK(cli("spectrum --config " + (out / "pert.cfg").string() + " --out " + (out / "pert").string()) == 3);
    // tolerance below what 300 nodes deliver: validation failure
    {
        std::ofstream f(out / "tight.cfg");
        f << "model = laplace_type\na = 1.5\nmodes = 1\nnpoints = 300\ncompare_modes = 1\ntolerance = 1e-6\n";
    }
    CHECK(cli("spectrum --config " + (out / "tight.cfg").string() + " --out " + (out / "tight").string()) == 2);
    fs::remove_all(out.parent_path());
}
