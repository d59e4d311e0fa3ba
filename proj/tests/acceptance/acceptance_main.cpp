// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Heavier than the unit tests; the budget/decay criteria run the small-wave
// preset at full scale twice (dt and dt/2).

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "slick/config.hpp"
#include "slick/diagnostics.hpp"
#include "slick/run.hpp"
#include "slick/state_io.hpp"
#include "slick/stepper.hpp"
#include "slick/verify.hpp"

using namespace slick;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void start_timer() { g_t0 = std::chrono::steady_clock::now(); }
double elapsed() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0).count();
}

void criterion(int n, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s  (%s, %.1f s)\n", pass ? "PASS" : "FAIL", n,
                what.c_str(), detail.c_str(), elapsed());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

int main(int argc, char** argv) {
    std::string preset_dir = "presets";
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--preset-dir") && i + 1 < argc) preset_dir = argv[++i];
        if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    auto want = [&](int n) { return only == 0 || only == n; };
    const uint64_t seed = 4242;

    // 1. surface-operator identity suite with spectral decay under refinement
    if (want(1)) {
        start_timer();
        auto g32 = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 8, DealiasRule::three_halves);
        auto g64 = make_grid(2 * M_PI, 2 * M_PI, 1.0, 64, 64, 8, DealiasRule::three_halves);
        const auto r32 = verify::surface_identities(g32, 0.3, seed);
        const auto r64 = verify::surface_identities(g64, 0.3, seed);
        const double w32 = verify::worst_surface_residual(r32);
        const double floor = 1e-13;
        auto dec = [&](double a, double b) { return b < floor || a / b >= 1e3; };
        const bool decay = dec(r32.div_nu_plus_h, r64.div_nu_plus_h) &&
                           dec(r32.area_deriv, r64.area_deriv) &&
                           dec(r32.area_time_deriv, r64.area_time_deriv) &&
                           dec(r32.grad_orthogonal, r64.grad_orthogonal) &&
                           dec(r32.ibp, r64.ibp) &&
                           dec(r32.laplace_expansion, r64.laplace_expansion);
        criterion(1, w32 < 1e-8 && decay, "surface identities, slope 0.3 on 32^2",
                  fmt("worst L2 residual %.2e at N=32, %.2e at N=64", w32,
                      verify::worst_surface_residual(r64)));
    }

    // 2. xi-functional suite
    if (want(2)) {
        start_timer();
        TensionModel m = TensionModel::linear(1.0, 0.25);
        m.set_c0(1.0);
        const auto xc = verify::xi_checks(m, 1.0, seed);
        const bool pass = xc.closed_vs_quadrature < 1e-10 && xc.legendre < 1e-6 &&
                          xc.min_at_r < 1e-6 && xc.convexity < 1e-6 && xc.monotone <= 0.0;
        criterion(2, pass, "xi closed form vs quadrature and its properties",
                  fmt("closed-vs-quad %.2e, legendre %.2e, convexity %.2e",
                      xc.closed_vs_quadrature, xc.legendre, xc.convexity));
    }

    // 3. poisson / geometry suite
    if (want(3)) {
        start_timer();
        auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 32, DealiasRule::three_halves);
        const auto gc = verify::geometry_checks(g, 0.1, seed, 8, 0.15);
        const bool pass = gc.harmonicity < 1e-8 && gc.trace < 1e-12 &&
                          gc.jac_det_oracle < 1e-10 && gc.jk_identity < 1e-10 &&
                          gc.dual_matrix < 1e-10 && gc.infinity_bound <= 0.5;
        criterion(3, pass, "poisson harmonicity, jacobian identities, L-inf bound",
                  fmt("harm %.2e, detJ %.2e, JK %.2e, bound %.3f", gc.harmonicity,
                      gc.jac_det_oracle, gc.jk_identity, gc.infinity_bound));
    }

    // 4. linear solver suite
    if (want(4)) {
        start_timer();
        auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 16, 16, 32);
        TensionModel m = TensionModel::linear(1.0, 0.25);
        m.set_c0(1.0);
        const auto lc = verify::linear_checks(g, m, 0.5, 1e-2, 200, seed);
        const bool pass = lc.mms_stationary < 1e-8 && lc.mms_dirichlet < 1e-8 &&
                          lc.mms_dt_order > 0.9 && lc.spectral_radius < 1.0 &&
                          lc.energy_increase <= 1e-12 && lc.decay_vs_eigen < 1e-2;
        criterion(4, pass, "manufactured solutions, propagator radius, monotone energy",
                  fmt("MMS %.2e, dt order %.2f, rho %.6f, energy up %.1e", lc.mms_stationary,
                      lc.mms_dt_order, lc.spectral_radius, lc.energy_increase));
    }

    // 5. transport identity at second order
    if (want(5)) {
        start_timer();
        auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 8, DealiasRule::three_halves);
        bool pass = true;
        double worst_order = 10.0;
        for (int kind : {0, 1}) {
            const auto res = verify::transport_residuals(g, kind, {1e-2, 5e-3, 2.5e-3}, seed);
            const double o1 = std::log2(res[0] / res[1]);
            const double o2 = std::log2(res[1] / res[2]);
            worst_order = std::min({worst_order, o1, o2});
            pass = pass && o1 >= 1.9 && o2 >= 1.9;
        }
        criterion(5, pass, "transport identity, f = z and f = z^2/2",
                  fmt("worst observed order %.3f", worst_order));
    }

    // 6. equilibrium fixed point at full scale
    if (want(6)) {
        start_timer();
        auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 24);
        const double drift = verify::equilibrium_drift(g, 1.0, 0.5, 1e-3, 1000);
        criterion(6, drift <= 1e-11, "equilibrium fixed point over 1000 steps",
                  fmt("max diagnostic drift %.2e", drift));
    }

    // 7 + 8. conservation, budget convergence, exponential decay
    if (want(7) || want(8)) {
        start_timer();
        RunConfig base = load_config(preset_dir + "/small_wave.json");
        base.directory = "/tmp/slick-acceptance/small-wave-dt1";
        base.write_csv = false;
        const RunResult r1 = run_simulation(base);
        RunConfig half = base;
        half.dt = 5e-4;
        half.output_stride *= 2;
        half.directory = "/tmp/slick-acceptance/small-wave-dt2";
        const RunResult r2 = run_simulation(half);

        if (want(7)) {
            const bool drift_ok = r1.exit_code == 0 && r1.mass_drift_rel < 1e-6;
            const double drift_order = std::log2(r1.mass_drift_rel / r2.mass_drift_rel);
            const double res_order =
                std::log2(r1.max_budget_residual / r2.max_budget_residual);
            const bool pass = drift_ok && drift_order >= 0.9 && res_order >= 0.9;
            criterion(7, pass, "mass conservation and budget residual under dt refinement",
                      fmt("drift %.2e (order %.2f), residual %.2e (order %.2f)",
                          r1.mass_drift_rel, drift_order, r1.max_budget_residual, res_order));
        }
        if (want(8)) {
            bool monotone = true;
            const size_t skip = r1.samples.size() / 20;  // first 5% of steps
            for (size_t i = skip + 1; i < r1.samples.size(); ++i)
                if (r1.samples[i].e_phys > r1.samples[i - 1].e_phys) monotone = false;
            const bool pass = monotone && r1.lambda_defined && r1.lambda_fit > 0 &&
                              r1.lambda_r2 >= 0.99 && r1.lambda_esob > 0;
            criterion(8, pass, "monotone energy decay with exponential rate",
                      fmt("lambda %.4f (r2 %.5f), E_sob rate %.4f, monotone %s",
                          r1.lambda_fit, r1.lambda_r2, r1.lambda_esob,
                          monotone ? "yes" : "no"));
        }
    }

    // 9. quadratic scaling of every nonlinearity block
    if (want(9)) {
        start_timer();
        auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 24);
        const auto r = verify::scaling_ratios(g, 1e-2, seed);
        auto ok = [](double v) { return v >= 3.6 && v <= 4.4; };
        const bool pass = ok(r.g1) && ok(r.g2) && ok(r.g3) && ok(r.g4) && ok(r.g5);
        criterion(9, pass, "nonlinearity norm ratios at eps vs eps/2",
                  fmt("G1 %.3f, G2 %.3f, G3 %.3f, G4 %.3f, G5 %.3f", r.g1, r.g2, r.g3, r.g4,
                      r.g5));
    }

    // 10. determinism: bit-identical CSVs
    if (want(10)) {
        start_timer();
        RunConfig cfg = load_config(preset_dir + "/small_wave.json");
        cfg.t_end = 0.2;
        cfg.directory = "/tmp/slick-acceptance/det-a";
        run_simulation(cfg);
        cfg.directory = "/tmp/slick-acceptance/det-b";
        run_simulation(cfg);
        const std::string a = slurp("/tmp/slick-acceptance/det-a/timeseries.csv");
        const std::string b = slurp("/tmp/slick-acceptance/det-b/timeseries.csv");
        criterion(10, !a.empty() && a == b, "two identical runs, bit-identical CSVs",
                  fmt("%zu bytes compared", a.size()));
    }

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
