#include "slick/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "json.hpp"
#include "slick/errors.hpp"
#include "slick/state_io.hpp"

namespace slick {

namespace {

constexpr const char* kCsvHeader =
    "t,E_phys,D_phys,mass,E_sob,D_sob,eta_mean,compat,residual\n";

void write_csv_row(std::ofstream& csv, const BudgetSample& s, double residual,
                   bool residual_defined) {
    csv << format_g17(s.t) << ',' << format_g17(s.e_phys) << ',' << format_g17(s.d_phys)
        << ',' << format_g17(s.mass) << ',' << format_g17(s.e_sob) << ','
        << format_g17(s.d_sob) << ',' << format_g17(s.eta_mean) << ','
        << format_g17(s.compat) << ','
        << (residual_defined ? format_g17(residual) : std::string("nan")) << '\n';
}

BudgetSample take_sample(const FlowState& s, const TensionModel& model, double gamma,
                         const FlowState* prev, const FlowState* prevprev, double dt) {
    BudgetSample b;
    const auto geom = build_geometry(s.eta);
    const auto pack = build_geometry_pack(s.eta);
    physical_budget(s, pack, geom, model, gamma, b);
    const SobolevPair sob = sobolev_functionals(s, model, prev, prevprev, dt);
    b.e_sob = sob.energy;
    b.d_sob = sob.dissipation;
    b.sob_partial = sob.partial;
    b.compat = compatibility_residual(s, model);
    return b;
}

}  // namespace

RunResult run_simulation(const RunConfig& cfg, std::ostream* log,
                         const std::string& restart_path) {
    RunResult result;
    namespace fs = std::filesystem;
    fs::create_directories(cfg.directory);

    TensionModel model = cfg.tension.build();
    GridPtr grid;
    FlowState state;
    std::optional<FlowState> prev, prevprev;
    long step0 = 0;
    double mass0 = 0.0;

    if (restart_path.empty()) {
        grid = cfg.make_grid_ptr();
        InitialData init = make_initial_data(grid, cfg.initial, model);
        state = std::move(init.state);
        result.compat_t0 = init.compat_residual;
        result.c0 = init.c0;
        mass0 = surfactant_mass(state);
        if (log && init.stokes_fallback)
            *log << "warning: stokes-compatible u0 did not converge, using u0 = 0\n";
        if (log && init.eta_shift != 0.0)
            *log << "note: eta0 mean " << init.eta_shift << " subtracted\n";
    }
    std::vector<BudgetSample> preload;
    if (!restart_path.empty()) {
        StateDump dump = load_state(restart_path);
        grid = dump.state.grid();
        state = std::move(dump.state);
        prev = std::move(dump.prev);
        prevprev = std::move(dump.prevprev);
        step0 = dump.step;
        mass0 = dump.mass0;
        model.set_c0(dump.c0);
        result.c0 = dump.c0;
        result.compat_t0 = compatibility_residual(state, model);
        preload = std::move(dump.tail);
    }

    Stepper stepper(grid, model, cfg.gamma, cfg.scheme, cfg.corrector);
    if (cfg.scheme == Scheme::imex_bdf2 && prev) stepper.set_history(*prev);

    std::ofstream csv;
    if (cfg.write_csv) {
        csv.open(fs::path(cfg.directory) / "timeseries.csv",
                 restart_path.empty() ? std::ios::out : std::ios::app);
        if (restart_path.empty()) csv << kCsvHeader;
    }

    const long nsteps = std::lround(cfg.t_end / cfg.dt);
    auto& samples = result.samples;
    samples = std::move(preload);
    auto emit = [&](const FlowState& s) {
        samples.push_back(take_sample(s, model, cfg.gamma,
                                      prev ? &*prev : nullptr,
                                      prevprev ? &*prevprev : nullptr, cfg.dt));
        if (cfg.write_csv) {
            const size_t n = samples.size();
            double residual = 0.0;
            bool defined = false;
            if (n >= 3) {
                const auto& a = samples[n - 3];
                const auto& b = samples[n - 2];
                const auto& c = samples[n - 1];
                residual = (c.e_phys - a.e_phys) / (c.t - a.t) + b.d_phys;
                defined = true;
            }
            write_csv_row(csv, samples.back(), residual, defined);
        }
    };

    int exit_code = 0;
    long reached = step0;
    std::string error;
    try {
        if (restart_path.empty()) emit(state);
        for (long k = step0; k < nsteps; ++k) {
            FlowState next = stepper.step(state, cfg.dt);
            prevprev = std::move(prev);
            prev = state;
            state = std::move(next);
            reached = k + 1;
            if ((k + 1) % cfg.output_stride == 0) emit(state);
        }
    } catch (const Error& e) {
        error = e.what();
        exit_code = 3;
    }

    // dump for restarts (last valid state on abort)
    {
        StateDump dump;
        dump.state = state;
        dump.prev = prev;
        dump.prevprev = prevprev;
        dump.c0 = model.c0();
        dump.mass0 = mass0;
        dump.step = reached;
        const size_t n = samples.size();
        for (size_t i = (n > 2 ? n - 2 : 0); i < n; ++i) dump.tail.push_back(samples[i]);
        const char* name = exit_code == 0 ? "state_final.slk" : "state_abort.slk";
        save_state((fs::path(cfg.directory) / name).string(), dump);
        if (exit_code != 0 && log) *log << "numerical abort: " << error << "\n";
    }

    // summary
    result.exit_code = exit_code;
    result.error = error;
    if (!samples.empty()) {
        double drift = 0.0;
        for (const auto& s : samples) drift = std::max(drift, std::abs(s.mass - mass0));
        result.mass_drift_rel = drift / std::abs(mass0);
        if (samples.size() >= 3) {
            const auto res = budget_residual(samples);
            for (double r : res)
                result.max_budget_residual = std::max(result.max_budget_residual, std::abs(r));
        }
        std::vector<double> ts, es, esob;
        for (const auto& s : samples) {
            ts.push_back(s.t);
            es.push_back(s.e_phys);
            esob.push_back(s.e_sob);
        }
        try {
            const DecayFit fit = decay_fit(ts, es);
            result.lambda_fit = fit.lambda;
            result.lambda_r2 = fit.r_squared;
            result.lambda_defined = true;
            result.lambda_esob = decay_fit(ts, esob).lambda;
        } catch (const FitDomainError&) {
            result.lambda_defined = false;  // equilibrium runs: energy at roundoff
        }
    }

    if (cfg.write_json) {
        nlohmann::json summary;
        summary["exit_code"] = exit_code;
        if (!error.empty()) summary["error"] = error;
        summary["c0"] = result.c0;
        summary["compat_t0"] = result.compat_t0;
        summary["mass_drift_rel"] = result.mass_drift_rel;
        summary["max_budget_residual"] = result.max_budget_residual;
        if (result.lambda_defined) {
            summary["lambda_fit"] = result.lambda_fit;
            summary["lambda_r2"] = result.lambda_r2;
            summary["lambda_fit_esob"] = result.lambda_esob;
        } else {
            summary["lambda_fit"] = nullptr;
        }
        summary["samples"] = samples.size();
        summary["steps"] = nsteps;
        summary["sobolev_warmup_samples"] = 2;
        summary["warnings"] = {{"slope", stepper.slope_warnings()},
                               {"jacobian", stepper.jac_warnings()},
                               {"positivity", stepper.positivity_warnings()}};
        std::ofstream js(fs::path(cfg.directory) / "summary.json");
        js << summary.dump(2) << "\n";
    }
    return result;
}

int run_cli(const std::string& config_path, std::ostream& log,
            const std::string& restart_path) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        const RunResult r = run_simulation(cfg, &log, restart_path);
        if (r.exit_code == 0) {
            log << "done: " << r.samples.size() << " samples";
            if (r.lambda_defined)
                log << ", lambda_fit = " << r.lambda_fit << " (r2 = " << r.lambda_r2 << ")";
            log << ", mass drift " << r.mass_drift_rel << ", compat(0) " << r.compat_t0
                << ", max residual " << r.max_budget_residual << "\n";
        }
        return r.exit_code;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        log << "numerical abort: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace slick
