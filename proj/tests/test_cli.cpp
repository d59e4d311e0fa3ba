#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "slick/config.hpp"
#include "slick/errors.hpp"
#include "slick/run.hpp"
#include "slick/state_io.hpp"

using namespace slick;
namespace fs = std::filesystem;

namespace {

std::string small_config(const std::string& dir, double dt = 5e-3, double t_end = 0.05) {
    std::ostringstream os;
    os << R"({
  "schema": 1,
  "grid": {"L1": 6.283185307179586, "L2": 6.283185307179586, "b": 1.0,
            "N1": 16, "N2": 16, "Nz": 12, "dealias_rule": "two_thirds"},
  "physics": {"gamma": 0.5, "tension": {"kind": "linear", "sigma_s": 1.0, "beta": 0.25}},
  "initial": {"eta_modes": [{"k1": 1, "k2": 0, "amp": 0.01, "phase": 0.0}],
               "ctilde": {"base": 1.0, "modes": []}, "u0": "zero"},
  "stepping": {"dt": )"
       << dt << R"(, "t_end": )" << t_end << R"(, "scheme": "imex1", "output_stride": 2},
  "output": {"directory": ")"
       << dir << R"(", "formats": ["csv", "json"]},
  "seed": 7
})";
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("config parsing accepts the schema and rejects unknown keys") {
    const RunConfig c = parse_config(small_config("/tmp/slick-test-cfg"));
    CHECK(c.N1 == 16);
    CHECK(c.gamma == 0.5);
    CHECK(c.initial.eta_modes.size() == 1);

    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"schema": 2})"), ConfigError);
    {
        std::string bad = small_config("/tmp/x");
        bad.insert(bad.find("\"grid\""), "\"extra_key\": 1, ");
        CHECK_THROWS_AS(parse_config(bad), ConfigError);
    }
    {
        std::string bad = small_config("/tmp/x");
        bad.replace(bad.find("\"gamma\": 0.5"), 12, "\"gamma\": -0.5");
        CHECK_THROWS_AS(parse_config(bad), ConfigError);
    }
}

TEST_CASE("run_cli exit codes") {
    std::ostringstream log;
    CHECK(run_cli("/nonexistent/config.json", log) == 2);
    const fs::path bad = "/tmp/slick-test-badcfg.json";
    std::ofstream(bad) << "{\"schema\": 1}";
    CHECK(run_cli(bad.string(), log) == 2);
}

TEST_CASE("equilibrium preset stays at machine zero") {
    RunConfig cfg = parse_config(small_config("/tmp/slick-test-eq"));
    cfg.initial.eta_modes.clear();
    cfg.t_end = 0.05;
    const RunResult r = run_simulation(cfg);
    CHECK(r.exit_code == 0);
    for (const auto& s : r.samples) {
        CHECK(std::abs(s.e_phys) < 1e-12);
        CHECK(std::abs(s.d_phys) < 1e-12);
    }
    CHECK_FALSE(r.lambda_defined);
}

TEST_CASE("identical configs give bit-identical CSVs") {
    RunConfig cfg = parse_config(small_config("/tmp/slick-test-det-a"));
    const RunResult r1 = run_simulation(cfg);
    cfg.directory = "/tmp/slick-test-det-b";
    const RunResult r2 = run_simulation(cfg);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    const std::string a = slurp("/tmp/slick-test-det-a/timeseries.csv");
    const std::string b = slurp("/tmp/slick-test-det-b/timeseries.csv");
    CHECK(!a.empty());
    CHECK(a == b);
}

TEST_CASE("restart reproduces the uninterrupted run bit for bit") {
    // full run to t = 0.06
    RunConfig cfg = parse_config(small_config("/tmp/slick-test-full", 5e-3, 0.06));
    const RunResult rf = run_simulation(cfg);
    CHECK(rf.exit_code == 0);
    // first half, then resume
    RunConfig half = parse_config(small_config("/tmp/slick-test-half", 5e-3, 0.03));
    const RunResult rh = run_simulation(half);
    CHECK(rh.exit_code == 0);
    RunConfig rest = parse_config(small_config("/tmp/slick-test-half", 5e-3, 0.06));
    const RunResult rr = run_simulation(rest, nullptr, "/tmp/slick-test-half/state_final.slk");
    CHECK(rr.exit_code == 0);

    const std::string a = slurp("/tmp/slick-test-full/timeseries.csv");
    const std::string b = slurp("/tmp/slick-test-half/timeseries.csv");
    CHECK(a == b);
}

TEST_CASE("state dump round trip") {
    RunConfig cfg = parse_config(small_config("/tmp/slick-test-dump"));
    const RunResult r = run_simulation(cfg);
    CHECK(r.exit_code == 0);
    const StateDump d = load_state("/tmp/slick-test-dump/state_final.slk");
    CHECK(d.state.t == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(d.c0 > 1.0 - 1e-6);
    CHECK(d.prev.has_value());
    CHECK(d.tail.size() == 2);
    // byte-stable second save
    save_state("/tmp/slick-test-dump/copy.slk", d);
    const StateDump d2 = load_state("/tmp/slick-test-dump/copy.slk");
    CHECK(d2.state.eta.coef() == d.state.eta.coef());
    CHECK(d2.state.u[0].coef() == d.state.u[0].coef());
}

TEST_CASE("export-theta writes the flattening-map mesh") {
    RunConfig cfg = parse_config(small_config("/tmp/slick-test-theta"));
    cfg.t_end = 0.01;
    const RunResult r = run_simulation(cfg);
    CHECK(r.exit_code == 0);
    const StateDump d = load_state("/tmp/slick-test-theta/state_final.slk");
    export_theta("/tmp/slick-test-theta/theta.csv", d.state);

    std::ifstream in("/tmp/slick-test-theta/theta.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x1,x2,x3,u1,u2,u3");
    const auto& g = *d.state.grid();
    const auto etap = d.state.eta.phys();
    // top plane rows come first and carry x3 = eta
    for (int q = 0; q < g.nphys(); ++q) {
        std::string line;
        std::getline(in, line);
        std::istringstream ls(line);
        double x1, x2, x3;
        char comma;
        ls >> x1 >> comma >> x2 >> comma >> x3;
        CHECK(x3 == doctest::Approx(etap[q]).epsilon(1e-12));
    }
    // bottom plane ends the file at exactly -b
    std::string line, last;
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    std::istringstream ls(last);
    double x1, x2, x3;
    char comma;
    ls >> x1 >> comma >> x2 >> comma >> x3;
    CHECK(x3 == -g.depth);
}
