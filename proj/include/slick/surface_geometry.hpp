#pragma once

#include <array>

#include "slick/fields.hpp"

namespace slick {

// Geometry of the free surface graph x3 = eta(x*): normals, area element,
// mean curvature, and the pulled-back surface calculus.
struct SurfaceGeometry {
    SurfaceField eta;
    SurfaceField deta1, deta2;              // grad_* eta
    SurfaceField area_element;              // sqrt(1 + |grad eta|^2)
    std::array<SurfaceField, 3> nu;         // unit normal
    std::array<SurfaceField, 3> normal_n;   // non-unit normal (-grad eta, 1)
    SurfaceField curv;                      // mean curvature H
    SurfaceField curv_remainder;            // H - lap_* eta, cancellation-free
    double max_slope = 0.0;
    bool slope_warning = false;             // max slope above the soft threshold

    // physical-grid caches used by the calculus below (evaluation grid)
    std::vector<double> p_deta1, p_deta2, p_area, p_inv_area;
    std::vector<double> p_nu1, p_nu2, p_nu3;
};

inline constexpr double kSlopeHardLimit = 1.0;
inline constexpr double kSlopeSoftLimit = 0.5;

// Builds all derived fields pseudo-spectrally; rational expressions are
// evaluated pointwise in physical space and re-truncated.
// Throws SlopeTooLarge when max |grad eta| >= 1.
SurfaceGeometry build_geometry(const SurfaceField& eta);

// Pulled-back surface gradient: component i = d_i f - nu_i (nu_* . grad_* f)
// for i = 1,2 and component 3 = -nu_3 (nu_* . grad_* f).
std::array<SurfaceField, 3> grad_gamma(const SurfaceField& f, const SurfaceGeometry& g);

// div_Gamma X = sum_i dGamma_i X_i with the same dGamma_i as grad_gamma.
SurfaceField div_gamma(const std::array<SurfaceField, 3>& X, const SurfaceGeometry& g);

SurfaceField laplace_gamma(const SurfaceField& f, const SurfaceGeometry& g);

// Residual of the integration-by-parts identity
//   int [ dGamma_i f g + f dGamma_i g + f g nu_i H ] sqrt(1+|grad eta|^2) = 0.
double ibp_residual(const SurfaceField& f, const SurfaceField& g, const SurfaceGeometry& geom,
                    int i);

// int_Sigma of a pointwise product of physical-grid arrays against the area
// element (the canonical nonlinear surface quadrature).
double integrate_weighted(const SurfaceGeometry& g, const std::vector<double>& values);

}  // namespace slick
