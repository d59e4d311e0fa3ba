#pragma once

#include <optional>
#include <vector>

#include "slick/geometry_pack.hpp"
#include "slick/state.hpp"
#include "slick/surface_geometry.hpp"
#include "slick/tension.hpp"

namespace slick {

// One row of the emitted time series.
struct BudgetSample {
    double t = 0.0;
    double e_phys = 0.0;   // offset-subtracted: equilibrium reads exactly 0
    double d_phys = 0.0;
    double mass = 0.0;     // int ctilde sqrt(1+|grad eta|^2)
    double e_sob = 0.0;
    double d_sob = 0.0;
    double eta_mean = 0.0;
    double compat = 0.0;
    bool sob_partial = false;  // temporal-derivative history not yet filled
};

// Physical energy / dissipation of the combined budget:
//   E = int |u|^2 J / 2 + int |eta|^2 / 2 + int xi_c0(ctilde) area - sigma(c0) |Sigma|
//   D = int J |D_A u|^2 / 2 + int gamma xi''_c0(ctilde) |grad_Gamma ctilde|^2 area
void physical_budget(const FlowState& s, const GeometryPack& pack, const SurfaceGeometry& geom,
                     const TensionModel& model, double gamma, BudgetSample& out);

// centered-difference d/dt E + D at interior samples (uniform spacing required)
std::vector<double> budget_residual(const std::vector<BudgetSample>& hist);

// Discrete Sobolev energy/dissipation functionals. Temporal derivatives come
// from backward differences of the provided history (prev, prevprev); either
// may be absent during warmup.
struct SobolevPair {
    double energy = 0.0, dissipation = 0.0;
    bool partial = false;
};
SobolevPair sobolev_functionals(const FlowState& s, const TensionModel& model,
                                const FlowState* prev, const FlowState* prevprev, double dt);

struct DecayFit {
    double lambda = 0.0;
    double r_squared = 0.0;
};
// least-squares slope of log E over (t, E), skipping an initial transient fraction
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& e,
                   double skip_fraction = 0.2);

// |int c| and the mass-identity right side int (c0+c)(1 - sqrt(1+|grad eta|^2))
struct MeanCCheck {
    double mean_c_abs = 0.0;
    double identity_rhs = 0.0;
};
MeanCCheck mean_c_check(const FlowState& s, const TensionModel& model);

double surfactant_mass(const FlowState& s);

}  // namespace slick
