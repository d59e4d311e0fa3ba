#pragma once

#include <vector>

#include "slick/state.hpp"
#include "slick/tension.hpp"

namespace slick {

struct ModeAmp {
    int k1 = 0, k2 = 0;
    double amp = 0.0, phase = 0.0;
};

enum class U0Mode { zero, stokes_compatible };

struct InitialSpec {
    std::vector<ModeAmp> eta_modes;
    double ctilde_base = 1.0;
    std::vector<ModeAmp> ctilde_modes;  // relative perturbation of the base
    U0Mode u0 = U0Mode::zero;
};

struct InitialData {
    FlowState state;
    double c0 = 0.0;
    double eta_shift = 0.0;       // logged mean shift applied to eta0
    double compat_residual = 0.0;  // at t = 0
    bool stokes_fallback = false;  // fixed point failed, fell back to u0 = 0
};

// Builds the initial state; computes c0 from (eta0, ctilde0) and installs it in
// the model. For stokes-compatible u0 the first compatibility equation is made
// to hold by a defect-correction iteration on the stress Stokes solve.
InitialData make_initial_data(GridPtr grid, const InitialSpec& spec, TensionModel& model,
                              bool allow_fallback = true);

// L2(Sigma) norm of the tangential stress mismatch + L2(Omega) of div_A u
// + L2(Sigma_b) of the bottom trace.
double compatibility_residual(const FlowState& state, const TensionModel& model);

// assemble a surface field from a cosine-mode list
SurfaceField field_from_modes(GridPtr grid, const std::vector<ModeAmp>& modes);

}  // namespace slick
