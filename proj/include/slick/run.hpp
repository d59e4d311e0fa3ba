#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slick/config.hpp"
#include "slick/diagnostics.hpp"

namespace slick {

struct RunResult {
    int exit_code = 0;
    std::vector<BudgetSample> samples;
    double lambda_fit = 0.0;
    double lambda_r2 = 0.0;
    double lambda_esob = 0.0;
    bool lambda_defined = false;
    double mass_drift_rel = 0.0;
    double max_budget_residual = 0.0;
    double compat_t0 = 0.0;
    double c0 = 0.0;
    std::string error;
};

// Executes a configured simulation: initial data, step loop, budget rows every
// stride, final summary. Deterministic given config + seed.
RunResult run_simulation(const RunConfig& cfg, std::ostream* log = nullptr,
                         const std::string& restart_path = "");

int run_cli(const std::string& config_path, std::ostream& log,
            const std::string& restart_path = "");

}  // namespace slick
