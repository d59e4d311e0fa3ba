#pragma once

#include <array>

#include "slick/fields.hpp"

namespace slick {

struct StokesSolution {
    std::array<BulkField, 3> u;
    BulkField p;
};

// -lap u + grad p = f, div u = h in the strip,
// (pI - Du) e3 = alpha on the top plane, u = 0 on the bottom.
StokesSolution solve_stokes_stress(const std::array<BulkField, 3>& f, const BulkField& h,
                                   const std::array<SurfaceField, 3>& alpha);

// -lap u + grad p = f, div u = h, u = phi1 on top, u = phi2 on bottom;
// pressure returned with a zero-mean gauge on the n = 0 mode.
// Throws IncompatibleData on a mean-mode net-flux mismatch between h and the
// boundary data.
StokesSolution solve_stokes_dirichlet(const std::array<BulkField, 3>& f, const BulkField& h,
                                      const std::array<SurfaceField, 3>& phi1,
                                      const std::array<SurfaceField, 3>* phi2 = nullptr);

}  // namespace slick
