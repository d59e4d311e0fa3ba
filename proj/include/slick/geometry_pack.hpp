#pragma once

#include <array>

#include "slick/fields.hpp"

namespace slick {

// Coefficients of the flattening map Theta(x) = (x1, x2, x3 + etabar (1 + x3/b)):
//   tilt1 = d1 etabar (1+x3/b), tilt2 = d2 etabar (1+x3/b),
//   jac   = det grad Theta = 1 + etabar/b + d3 etabar (1+x3/b),  invjac = 1/jac.
// The dual matrix (grad Theta^{-1})^T has rows
//   (1, 0, -tilt1 invjac), (0, 1, -tilt2 invjac), (0, 0, invjac).
// All vertical derivatives of etabar come from the analytic Poisson profile.
struct GeometryPack {
    GridPtr grid;
    BulkField eta_ext;              // etabar = P eta restricted to the strip
    BulkField tilt1, tilt2, jac, invjac;
    double min_jac = 1.0;
    bool jac_warning = false;       // min jac below the soft threshold

    // physical caches on the evaluation grid, [j * nphys + q]
    std::vector<double> p_tilt1, p_tilt2, p_jac, p_invjac;
    std::vector<double> p_a_k, p_b_k;            // tilt1*invjac, tilt2*invjac
    std::vector<double> p_first_order;           // coefficient of d3 u in the
                                                 // second-order remainder block
    std::vector<double> p_dt_profile;            // (1+x3/b) invjac, pointwise
};

inline constexpr double kJacHardLimit = 0.1;
inline constexpr double kJacSoftLimit = 0.5;

// Throws DegenerateMap when min jac <= 0 (the map stops being a diffeomorphism).
GeometryPack build_geometry_pack(const SurfaceField& eta);

// (grad_A f)_i = A_ij d_j f with the dual matrix above; dealiased products.
std::array<BulkField, 3> mapped_grad(const GeometryPack& p, const BulkField& f);

// div_A X = A_ij d_j X_i
BulkField mapped_div(const GeometryPack& p, const std::array<BulkField, 3>& X);

// (D_A u)_ij = A_ik d_k u_j + A_jk d_k u_i; returned as the 6 upper entries
// (11, 22, 33, 12, 13, 23).
std::array<BulkField, 6> mapped_sym_grad(const GeometryPack& p,
                                         const std::array<BulkField, 3>& u);

// div u - div_A u = AK d3 u1 + BK d3 u2 + (1 - K) d3 u3, the divergence
// forcing of the perturbed form.
BulkField divergence_forcing(const GeometryPack& p, const std::array<BulkField, 3>& u);

}  // namespace slick
