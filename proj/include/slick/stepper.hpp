#pragma once

#include <optional>

#include "slick/forcing.hpp"
#include "slick/mode_solver.hpp"
#include "slick/state.hpp"

namespace slick {

enum class Scheme { imex1, imex_bdf2 };

// One IMEX step: explicit nonlinearities at the current state, implicit
// constant-coefficient linear solve with all boundary couplings implicit.
class Stepper {
public:
    Stepper(GridPtr grid, const TensionModel& model, double gamma,
            Scheme scheme = Scheme::imex1, bool corrector = false);

    FlowState step(const FlowState& s, double dt);

    const LinearCore& core() const { return core_; }
    const TensionModel& model() const { return *model_; }
    double gamma() const { return gamma_; }
    Scheme scheme() const { return scheme_; }

    // warnings accumulated across steps
    int slope_warnings() const { return slope_warnings_; }
    int jac_warnings() const { return jac_warnings_; }
    int positivity_warnings() const { return positivity_warnings_; }

    void reset_history() { have_prev_ = false; }
    // restart support: reinstate the BDF2 history pair
    void set_history(const FlowState& prev_state);

private:
    FlowState advance(const FlowState& s, double dt, const ForcingPack& G,
                      const ForcingPack* Gprev, const FlowState* sprev);

    GridPtr grid_;
    const TensionModel* model_;
    double gamma_;
    LinearCore core_;
    Scheme scheme_;
    bool corrector_;
    bool have_prev_ = false;
    std::optional<FlowState> prev_;
    std::optional<ForcingPack> prev_G_;
    int slope_warnings_ = 0;
    int jac_warnings_ = 0;
    int positivity_warnings_ = 0;
};

}  // namespace slick
