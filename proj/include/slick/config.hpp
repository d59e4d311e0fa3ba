#pragma once

#include <string>
#include <vector>

#include "slick/grid.hpp"
#include "slick/initial_data.hpp"
#include "slick/stepper.hpp"
#include "slick/tension.hpp"

namespace slick {

struct TensionConfig {
    TensionKind kind = TensionKind::linear;
    double sigma_s = 1.0;
    double beta = 0.25;
    std::vector<double> x, sigma;  // tabulated kind
    TensionModel build() const;
};

struct RunConfig {
    // grid
    double L1 = 2 * M_PI, L2 = 2 * M_PI, b = 1.0;
    int N1 = 32, N2 = 32, Nz = 24;
    DealiasRule dealias = DealiasRule::two_thirds;
    // physics
    double gamma = 0.5;
    TensionConfig tension;
    // initial data
    InitialSpec initial;
    // stepping
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::imex1;
    int output_stride = 10;
    bool corrector = false;
    // output
    std::string directory = "out";
    bool write_csv = true, write_json = true;
    uint64_t seed = 0;

    GridPtr make_grid_ptr() const { return make_grid(L1, L2, b, N1, N2, Nz, dealias); }
};

// Parses and validates; unknown keys anywhere are a hard error.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

}  // namespace slick
