#pragma once

#include <array>

#include "slick/fields.hpp"

namespace slick {

// Complete simulation state in flattened coordinates.
struct FlowState {
    std::array<BulkField, 3> u;
    BulkField p;
    SurfaceField eta;     // zero mean, pinned by the stepper
    SurfaceField ctilde;  // physical concentration (> 0)
    double t = 0.0;

    explicit FlowState(GridPtr g)
        : u{BulkField(g), BulkField(g), BulkField(g)}, p(g), eta(g), ctilde(g) {}
    FlowState() = default;

    const GridPtr& grid() const { return eta.grid(); }

    // concentration perturbation c = ctilde - c0
    SurfaceField c(double c0) const {
        SurfaceField out = ctilde;
        out[0] -= c0;
        return out;
    }
};

}  // namespace slick
