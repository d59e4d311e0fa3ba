#include <cmath>

#include "doctest.h"
#include "slick/diagnostics.hpp"
#include "slick/forcing.hpp"
#include "slick/initial_data.hpp"
#include "slick/stepper.hpp"
#include "slick/verify.hpp"

using namespace slick;

namespace {
GridPtr sim_grid(int N = 16, int Nz = 16) {
    return make_grid(2 * M_PI, 2 * M_PI, 1.0, N, N, Nz);
}
}  // namespace

TEST_CASE("equilibrium forcing vanishes identically") {
    auto g = sim_grid();
    TensionModel model = TensionModel::linear(1.0, 0.25);
    model.set_c0(1.0);
    FlowState s(g);
    s.ctilde[0] = 1.0;
    const auto geom = build_geometry(s.eta);
    const auto pack = build_geometry_pack(s.eta);
    const ForcingPack G = eval_G(s, pack, geom, model, 0.5);
    for (int c = 0; c < 3; ++c) {
        CHECK(max_abs_bulk(G.g1[c]) < 1e-12);
        CHECK(max_abs_surface(G.g3[c]) < 1e-12);
    }
    CHECK(max_abs_bulk(G.g2) < 1e-12);
    CHECK(max_abs_surface(G.g4) < 1e-12);
    CHECK(max_abs_surface(G.g5) < 1e-12);
}

TEST_CASE("divergence identity: div u - G2 = div_A u") {
    auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 16, 16, 16, DealiasRule::three_halves);
    TensionModel model = TensionModel::linear(1.0, 0.25);
    model.set_c0(1.0);
    FlowState s(g);
    s.eta = verify::random_eta(g, 2, 5, 0.2);
    s.ctilde = 0.05 * verify::random_surface(g, 2, 6, 1.0);
    s.ctilde[0] += 1.0;
    for (int c = 0; c < 3; ++c)
        s.u[c] = BulkField::sample(g, [c](double x, double y, double z) {
            return (z + 1) * (z + 1) * std::sin(x + c) * std::cos(y + 2 * c) * 0.3;
        });
    const auto geom = build_geometry(s.eta);
    const auto pack = build_geometry_pack(s.eta);
    const ForcingPack G = eval_G(s, pack, geom, model, 0.5);
    const BulkField div_u = s.u[0].deriv_h(1) + s.u[1].deriv_h(2) + s.u[2].deriv_z(1);
    const BulkField divA = mapped_div(pack, s.u);
    CHECK(max_abs_bulk(div_u - G.g2 - divA) < 1e-10);
}

TEST_CASE("equilibrium is an exact fixed point of the stepper") {
    auto g = sim_grid();
    TensionModel model = TensionModel::linear(1.0, 0.25);
    model.set_c0(1.0);
    Stepper st(g, model, 0.5);
    FlowState s(g);
    s.ctilde[0] = 1.0;
    for (int k = 0; k < 20; ++k) s = st.step(s, 1e-2);
    for (int c = 0; c < 3; ++c) CHECK(max_abs_bulk(s.u[c]) < 1e-13);
    CHECK(max_abs_bulk(s.p) < 1e-13);
    CHECK(max_abs_surface(s.eta) < 1e-13);
    SurfaceField dc = s.ctilde;
    dc[0] -= 1.0;
    CHECK(max_abs_surface(dc) < 1e-13);
    CHECK(s.t == doctest::Approx(0.2));
}

TEST_CASE("zero mean of eta is preserved exactly") {
    auto g = sim_grid();
    TensionModel model = TensionModel::linear(1.0, 0.25);
    InitialSpec spec;
    spec.eta_modes = {{1, 0, 5e-3, 0.3}, {0, 1, 3e-3, 1.2}};
    spec.ctilde_base = 1.0;
    InitialData init = make_initial_data(g, spec, model);
    Stepper st(g, model, 0.5);
    FlowState s = init.state;
    for (int k = 0; k < 10; ++k) {
        s = st.step(s, 1e-2);
        CHECK(s.eta.mean() == 0.0);
    }
}

TEST_CASE("forcing norms scale quadratically") {
    auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 24);
    const auto r = verify::scaling_ratios(g, 1e-2, 99);
    for (double v : {r.g1, r.g2, r.g3, r.g4, r.g5}) {
        CHECK(v > 3.6);
        CHECK(v < 4.4);
    }
}

TEST_CASE("initial data: uniform state has zero compatibility residual") {
    auto g = sim_grid();
    TensionModel model = TensionModel::linear(1.0, 0.25);
    InitialSpec spec;
    spec.ctilde_base = 1.3;
    InitialData init = make_initial_data(g, spec, model);
    CHECK(init.c0 == doctest::Approx(1.3).epsilon(1e-14));
    CHECK(init.compat_residual < 1e-13);
}

TEST_CASE("initial data: marangoni residual of resting flow, then repaired") {
    auto g = sim_grid(16, 20);
    TensionModel model = TensionModel::linear(1.0, 0.25);
    InitialSpec spec;
    spec.ctilde_base = 1.0;
    spec.ctilde_modes = {{1, 0, 1e-2, 0.0}};
    spec.u0 = U0Mode::zero;
    InitialData rest = make_initial_data(g, spec, model);
    // residual is the L2 norm of the marangoni target: |sigma'| * amp * k * sqrt(area/2)
    const double expect =
        0.25 * 1e-2 * 1.0 * std::sqrt(g->area() / 2.0);
    CHECK(rest.compat_residual == doctest::Approx(expect).epsilon(1e-3));

    spec.u0 = U0Mode::stokes_compatible;
    TensionModel model2 = TensionModel::linear(1.0, 0.25);
    InitialData fixed = make_initial_data(g, spec, model2, false);
    CHECK(fixed.compat_residual < 1e-8);
    CHECK_FALSE(fixed.stokes_fallback);
}

TEST_CASE("initial data: stokes-compatible with a curved surface") {
    auto g = sim_grid(16, 20);
    TensionModel model = TensionModel::linear(1.0, 0.25);
    InitialSpec spec;
    spec.eta_modes = {{1, 0, 2e-2, 0.4}};
    spec.ctilde_base = 1.0;
    spec.ctilde_modes = {{1, 0, 1e-2, 0.0}, {0, 1, 5e-3, 0.7}};
    spec.u0 = U0Mode::stokes_compatible;
    InitialData init = make_initial_data(g, spec, model, false);
    CHECK(init.compat_residual < 1e-8);
}

TEST_CASE("terminal state self-converges at first order in dt") {
    auto g = sim_grid(16, 16);
    InitialSpec spec;
    spec.eta_modes = {{1, 0, 1e-2, 0.0}};
    spec.ctilde_base = 1.0;
    const double T = 0.2;
    std::vector<FlowState> finals;
    for (double dt : {2e-2, 1e-2, 5e-3}) {
        TensionModel model = TensionModel::linear(1.0, 0.25);
        InitialData init = make_initial_data(g, spec, model);
        Stepper st(g, model, 0.5);
        FlowState s = init.state;
        const long n = std::lround(T / dt);
        for (long k = 0; k < n; ++k) s = st.step(s, dt);
        finals.push_back(s);
    }
    auto dist = [](const FlowState& A, const FlowState& B) {
        double d = max_abs_surface(A.eta - B.eta);
        d = std::max(d, max_abs_surface(A.ctilde - B.ctilde));
        for (int c = 0; c < 3; ++c) d = std::max(d, max_abs_bulk(A.u[c] - B.u[c]));
        return d;
    };
    const double e1 = dist(finals[0], finals[2]);
    const double e2 = dist(finals[1], finals[2]);
    // first order: |s(dt) - s(dt/4)| / |s(dt/2) - s(dt/4)| -> (1 - 1/4)/(1/2 - 1/4) = 3
    CHECK(e1 / e2 > 2.5);
    CHECK(e1 / e2 < 3.5);
}

TEST_CASE("bdf2 runs and stays close to imex1") {
    auto g = sim_grid(16, 16);
    InitialSpec spec;
    spec.eta_modes = {{1, 0, 1e-2, 0.0}};
    spec.ctilde_base = 1.0;
    const double dt = 5e-3, T = 0.1;
    FlowState s1(g), s2(g);
    {
        TensionModel model = TensionModel::linear(1.0, 0.25);
        InitialData init = make_initial_data(g, spec, model);
        Stepper st(g, model, 0.5, Scheme::imex1);
        s1 = init.state;
        for (long k = 0; k < std::lround(T / dt); ++k) s1 = st.step(s1, dt);
    }
    {
        TensionModel model = TensionModel::linear(1.0, 0.25);
        InitialData init = make_initial_data(g, spec, model);
        Stepper st(g, model, 0.5, Scheme::imex_bdf2);
        s2 = init.state;
        for (long k = 0; k < std::lround(T / dt); ++k) s2 = st.step(s2, dt);
    }
    const double scale = max_abs_surface(s1.eta);
    CHECK(max_abs_surface(s1.eta - s2.eta) < 0.2 * scale);
    CHECK(max_abs_surface(s1.eta - s2.eta) > 0.0);
}
