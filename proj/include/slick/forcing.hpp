#pragma once

#include <array>

#include "slick/geometry_pack.hpp"
#include "slick/state.hpp"
#include "slick/surface_geometry.hpp"
#include "slick/tension.hpp"

namespace slick {

// Explicit nonlinearities of the perturbed form, all evaluated at one state.
struct ForcingPack {
    std::array<BulkField, 3> g1;
    BulkField g2;
    std::array<SurfaceField, 3> g3;
    SurfaceField g4;
    SurfaceField g5;
};

// Individual block norms for the quadratic-scaling probe.
struct ForcingNorms {
    double g1, g2, g3, g4, g5;
};

ForcingPack eval_G(const FlowState& state, const GeometryPack& pack, const SurfaceGeometry& geom,
                   const TensionModel& model, double gamma);

ForcingNorms forcing_norms(const ForcingPack& f);

// div_Gamma u - div_* u and the full div_Gamma u of the velocity trace,
// needed by both eval_G and the transport diagnostics.
SurfaceField surface_div_defect(const std::array<SurfaceField, 3>& utrace,
                                const SurfaceGeometry& geom);

}  // namespace slick
