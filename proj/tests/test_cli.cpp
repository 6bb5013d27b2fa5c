#include <doctest.h>

#include "gslaser/analytic.hpp"
#include "gslaser/config.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using namespace gslaser;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Runs the CLI binary, capturing stdout (stderr goes to /dev/null).
RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(GSLASER_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path write_config(const char* name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path);
    f << body;
    REQUIRE(f.good());
    return path;
}

} // namespace

TEST_CASE("cli: missing config file exits 1") {
    CHECK(run_cli("sweep /no/such/missing.conf").exit_code == 1);
    CHECK(run_cli("ensemble /no/such/missing.conf").exit_code == 1);
}

TEST_CASE("cli: bad usage exits 1, help exits 0") {
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("frobnicate x.conf").exit_code == 1);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli: ensemble runs are byte-identical for a fixed seed") {
    const auto cfg = write_config("gslaser_point.conf",
                                  "I_b_mA = 5\n"
                                  "n_traj = 200\n");
    const RunResult a = run_cli("ensemble " + cfg.string() + " --seed 42");
    const RunResult b = run_cli("ensemble " + cfg.string() + " --seed 42");
    const RunResult c = run_cli("ensemble " + cfg.string() + " --seed 43");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    CHECK(a.out.find("sigma_phi_rad") != std::string::npos);
    std::filesystem::remove(cfg);
}

TEST_CASE("cli: trace emits the one-period trajectory") {
    const auto cfg = write_config("gslaser_trace.conf", "I_b_mA = 5\n");
    const RunResult r = run_cli("trace " + cfg.string());
    CHECK(r.exit_code == 0);
    // header + 40000 grid samples
    std::size_t lines = 0;
    for (char ch : r.out) {
        lines += ch == '\n';
    }
    CHECK(lines == 40001);
    CHECK(r.out.rfind("t_s,N,Q,phi_rad,P_W\n", 0) == 0);
    std::filesystem::remove(cfg);
}

TEST_CASE("cli: analytic output matches the in-process model") {
    const auto cfg = write_config("gslaser_analytic.conf",
                                  "I_b_range_mA = 4:6:1\n"
                                  "t_ps = 400\n");
    const RunResult r = run_cli("analytic " + cfg.string());
    CHECK(r.exit_code == 0);

    const LaserParams p; // defaults, chi = 20
    const DerivedParams d = derive(p);
    // rows: header, chi comment, then 4, 5, 6 mA
    std::stringstream ss(r.out);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "I_b_mA,sigma_phi_rad");
    std::getline(ss, line);
    CHECK(line.rfind("# chi_per_W", 0) == 0);
    for (double ib_ma : {4.0, 5.0, 6.0}) {
        REQUIRE(std::getline(ss, line));
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        const double ib = std::stod(line.substr(0, comma));
        const double sigma = std::stod(line.substr(comma + 1));
        CHECK(ib == doctest::Approx(ib_ma).epsilon(1e-9));
        const double expected =
            std::sqrt(henry_variance(p, d, ib_ma * 1e-3 + 12e-3, 400e-12));
        CHECK(sigma == doctest::Approx(expected).epsilon(1e-8));
    }
    std::filesystem::remove(cfg);
}

TEST_CASE("cli: noise kill switches zero the ensemble spread") {
    const auto cfg = write_config("gslaser_nonoise.conf",
                                  "I_b_mA = 5\n"
                                  "n_traj = 4\n");
    const RunResult r =
        run_cli("ensemble " + cfg.string() + " --no-field-noise --no-carrier-noise");
    CHECK(r.exit_code == 0);
    // data row: ...,n_traj,sigma_phi,... -> sigma field must be exactly 0
    const auto row = r.out.substr(r.out.find('\n') + 1);
    std::stringstream ss(row);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    REQUIRE(fields.size() == 11);
    CHECK(fields[5] == "0");         // sigma_phi_rad
    CHECK(fields[10] == "0\n");      // passes_2pi
    std::filesystem::remove(cfg);
}

TEST_CASE("cli: histogram sidecar") {
    const auto hist_path = std::filesystem::temp_directory_path() / "gslaser_hist.csv";
    const auto cfg = write_config("gslaser_hist.conf",
                                  "I_b_mA = 5\n"
                                  "n_traj = 100\n"
                                  "histogram_bins = 21\n"
                                  "output_histogram = " + hist_path.string() + "\n");
    const RunResult r = run_cli("ensemble " + cfg.string());
    CHECK(r.exit_code == 0);
    std::ifstream hist(hist_path);
    REQUIRE(hist.good());
    std::string line;
    std::getline(hist, line);
    CHECK(line == "bin_lo_rad,bin_hi_rad,count");
    std::size_t rows = 0;
    uint64_t total = 0;
    while (std::getline(hist, line)) {
        ++rows;
        total += std::stoull(line.substr(line.rfind(',') + 1));
    }
    CHECK(rows == 21);
    CHECK(total == 100);
    std::filesystem::remove(hist_path);
    std::filesystem::remove(cfg);
}

TEST_CASE("cli: exit code taxonomy") {
    SUBCASE("numerical failure exits 2") {
        // analytic grid below threshold
        const auto cfg = write_config("gslaser_below.conf",
                                      "I_p_mA = 5\n"
                                      "I_b_range_mA = 0:1:0.5\n");
        CHECK(run_cli("analytic " + cfg.string()).exit_code == 2);
        std::filesystem::remove(cfg);
    }
    SUBCASE("io failure exits 3") {
        const auto cfg = write_config("gslaser_io.conf", "n_traj = 10\n");
        CHECK(run_cli("trace " + cfg.string() + " --output /no/such/dir/out.csv").exit_code == 3);
        std::filesystem::remove(cfg);
    }
    SUBCASE("config failure exits 1") {
        const auto cfg = write_config("gslaser_badkey.conf", "tau_ph_fs = 1\n");
        CHECK(run_cli("trace " + cfg.string()).exit_code == 1);
        std::filesystem::remove(cfg);
    }
}
