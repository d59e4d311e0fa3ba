#include <cmath>

#include "doctest.h"
#include "slick/errors.hpp"
#include "slick/geometry_pack.hpp"
#include "slick/verify.hpp"

using namespace slick;

TEST_CASE("poisson extension of simple fields") {
    auto g = make_grid(1.0, 1.0, 1.0, 16, 16, 24);
    SurfaceField one(g);
    one[0] = 1.0;
    const BulkField p1 = poisson_extend(one);
    for (int j = 0; j < g->Nz; ++j) CHECK(p1.at(0, j) == cplx(1.0, 0.0));

    auto c = SurfaceField::sample(g, [](double x, double) { return std::cos(2 * M_PI * x); });
    const BulkField pc = poisson_extend(c);
    auto expect = BulkField::sample(g, [](double x, double, double z) {
        return std::exp(2 * M_PI * z) * std::cos(2 * M_PI * x);
    });
    CHECK(max_abs_bulk(pc - expect) < 1e-12);
}

TEST_CASE("identity pack at eta = 0") {
    auto g = make_grid(1.0, 1.0, 0.7, 16, 16, 16);
    SurfaceField eta(g);
    const GeometryPack p = build_geometry_pack(eta);
    for (double v : p.p_tilt1) CHECK(v == 0.0);
    for (double v : p.p_tilt2) CHECK(v == 0.0);
    for (double v : p.p_jac) CHECK(v == 1.0);
    for (double v : p.p_invjac) CHECK(v == 1.0);
}

TEST_CASE("jacobian cross-checks at small amplitude") {
    auto g = make_grid(1.0, 1.0, 1.3, 32, 32, 24, DealiasRule::three_halves);
    const double eps = 1e-2;
    auto eta = SurfaceField::sample(g, [&](double x, double) { return eps * std::sin(2 * M_PI * x); });
    const GeometryPack p = build_geometry_pack(eta);
    // at the top plane: J = 1 + eta/b + d3 etabar, with d3 etabar = 2 pi eta for one mode
    const auto etap = eta.phys();
    const int np = g->nphys();
    for (int q = 0; q < np; q += 11) {
        const double expect = 1.0 + etap[q] / g->depth + 2 * M_PI * etap[q];
        CHECK(p.p_jac[q] == doctest::Approx(expect).epsilon(1e-10));
    }
    // bottom plane: the map keeps x3 = -b fixed, btilde = 0
    const size_t bot = static_cast<size_t>(g->Nz - 1) * np;
    for (int q = 0; q < np; q += 11) {
        CHECK(p.p_tilt1[bot + q] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(std::abs(p.p_jac[bot + q] - (1.0 + p.eta_ext.phys()[bot + q] / g->depth)) < 1e-12);
    }
}

TEST_CASE("degenerate map is rejected") {
    auto g = make_grid(2 * M_PI, 2 * M_PI, 0.12, 32, 32, 16);
    // large eta over a shallow layer drives J through zero
    auto eta =
        SurfaceField::sample(g, [](double x, double) { return 0.14 * std::sin(x); });
    CHECK_THROWS_AS(build_geometry_pack(eta), DegenerateMap);
}

TEST_CASE("mapped gradient on the identity pack is the plain gradient") {
    auto g = make_grid(1.0, 1.0, 1.0, 16, 16, 16);
    SurfaceField eta(g);
    const GeometryPack p = build_geometry_pack(eta);
    auto f = BulkField::sample(g, [](double x, double y, double z) {
        return std::sin(2 * M_PI * x) * std::cos(2 * M_PI * y) * (z + 0.3 * z * z);
    });
    const auto grad = mapped_grad(p, f);
    CHECK(max_abs_bulk(grad[0] - f.deriv_h(1)) < 1e-11);
    CHECK(max_abs_bulk(grad[1] - f.deriv_h(2)) < 1e-11);
    CHECK(max_abs_bulk(grad[2] - f.deriv_z(1)) < 1e-10);
}

TEST_CASE("mapped gradient of x3 gives the dual-matrix column") {
    auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 16, DealiasRule::three_halves);
    const SurfaceField eta = verify::random_eta(g, 2, 3, 0.2);
    const GeometryPack p = build_geometry_pack(eta);
    auto x3 = BulkField::sample(g, [](double, double, double z) { return z; });
    const auto grad = mapped_grad(p, x3);
    const auto g1 = grad[0].phys();
    const auto g2 = grad[1].phys();
    const auto g3 = grad[2].phys();
    double worst = 0.0;
    for (size_t i = 0; i < g1.size(); ++i) {
        worst = std::max({worst, std::abs(g1[i] + p.p_a_k[i]), std::abs(g2[i] + p.p_b_k[i]),
                          std::abs(g3[i] - p.p_invjac[i])});
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("criterion-scale geometry residuals") {
    auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 32, DealiasRule::three_halves);
    const auto gc = verify::geometry_checks(g, 0.1, 2024, 5, 0.15);
    CHECK(gc.harmonicity < 1e-8);
    CHECK(gc.trace < 1e-13);
    CHECK(gc.jac_det_oracle < 1e-10);
    CHECK(gc.tilt_oracle < 1e-10);
    CHECK(gc.jk_identity < 1e-10);
    CHECK(gc.dual_matrix < 1e-10);
    CHECK(gc.infinity_bound <= 0.5);
}

TEST_CASE("poisson gradient bound constant is stable under refinement") {
    auto g1 = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 24);
    auto g2 = make_grid(2 * M_PI, 2 * M_PI, 1.0, 64, 64, 32);
    const auto c1 = verify::geometry_checks(g1, 0.2, 5, 1);
    const auto c2 = verify::geometry_checks(g2, 0.2, 5, 1);
    CHECK(c1.poisson_h12_constant > 0.1);
    CHECK(std::abs(c1.poisson_h12_constant - c2.poisson_h12_constant) /
              c1.poisson_h12_constant <
          0.05);
}

TEST_CASE("divergence forcing ties the two divergence forms together") {
    auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 16, DealiasRule::three_halves);
    const SurfaceField eta = verify::random_eta(g, 2, 8, 0.25);
    const GeometryPack p = build_geometry_pack(eta);
    std::array<BulkField, 3> u;
    for (int c = 0; c < 3; ++c)
        u[c] = BulkField::sample(g, [c](double x, double y, double z) {
            return (z + 1.0) * (z + 1.0) * std::sin(x + 0.3 * c) * std::cos(y - 0.2 * c);
        });
    const BulkField div_u = u[0].deriv_h(1) + u[1].deriv_h(2) + u[2].deriv_z(1);
    const BulkField g2f = divergence_forcing(p, u);
    const BulkField divA = mapped_div(p, u);
    CHECK(max_abs_bulk(div_u - g2f - divA) < 1e-9);
}
