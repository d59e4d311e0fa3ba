#include <cmath>

#include "doctest.h"
#include "slick/errors.hpp"
#include "slick/tension.hpp"
#include "slick/verify.hpp"

using namespace slick;

TEST_CASE("equilibrium concentration") {
    auto g = make_grid(1.0, 1.0, 1.0, 32, 32, 8);
    SurfaceField eta0(g);
    SurfaceField c2(g);
    c2[0] = 2.0;
    CHECK(equilibrium_concentration(eta0, c2) == doctest::Approx(2.0).epsilon(1e-14));

    // eta = eps sin(2 pi x), ctilde = 1: c0 = mean of sqrt(1 + eps^2 k^2 cos^2),
    // computed against a dense 1D quadrature oracle
    const double eps = 0.05, k = 2 * M_PI;
    auto eta = SurfaceField::sample(g, [&](double x, double) { return eps * std::sin(k * x); });
    SurfaceField one(g);
    one[0] = 1.0;
    const double c0 = equilibrium_concentration(eta, one);
    double oracle = 0.0;
    const int nq = 200000;
    for (int i = 0; i < nq; ++i) {
        const double x = (i + 0.5) / nq;
        const double s = eps * k * std::cos(k * x);
        oracle += std::sqrt(1.0 + s * s);
    }
    oracle /= nq;
    CHECK(c0 > 1.0);
    CHECK(c0 == doctest::Approx(oracle).epsilon(1e-10));

    SurfaceField neg(g);
    neg[0] = -0.1;
    CHECK_THROWS_AS(equilibrium_concentration(eta0, neg), InvalidConcentration);
}

TEST_CASE("xi closed form and frozen value") {
    TensionModel m = TensionModel::linear(1.0, 0.5);
    // sigma(2) = 0, so xi_1(2) = 0 + 0.5 * 2 * ln 2 = ln 2
    CHECK(m.xi(1.0, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(m.xi(1.0, 1.0) == doctest::Approx(m.sigma(1.0)).epsilon(1e-14));
    // continuous extension at zero
    CHECK(m.xi(1.0, 0.0) == doctest::Approx(m.sigma(0.0)).epsilon(1e-14));
    CHECK_THROWS_AS(m.xi(1.0, 3.0), OutOfRange);  // sigma < 0 there
}

TEST_CASE("xi_second") {
    TensionModel lin = TensionModel::linear(1.0, 0.5);
    CHECK(lin.xi_second(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    TensionModel ex = TensionModel::exponential(1.0, 1.0);
    CHECK(ex.xi_second(1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(lin.xi_second(1.0, 0.0), Singular);
}

TEST_CASE("xi properties for all model kinds") {
    std::vector<TensionModel> models;
    models.push_back(TensionModel::linear(1.0, 0.25));
    models.push_back(TensionModel::exponential(1.2, 0.8));
    {
        std::vector<double> x, s;
        for (int i = 0; i <= 16; ++i) {
            x.push_back(0.0 + 3.0 * i / 16.0);
            s.push_back(2.0 / (1.0 + 0.5 * x.back()));  // smooth, strictly decreasing
        }
        models.push_back(TensionModel::tabulated(x, s));
    }
    for (const auto& m : models) {
        const double r = 1.0;
        const auto xc = verify::xi_checks(m, r, 7);
        CHECK(xc.closed_vs_quadrature < 1e-9);
        CHECK(xc.legendre < 1e-6);
        CHECK(xc.min_at_r < 1e-12);
        CHECK(xc.convexity < 1e-10);
        CHECK(xc.monotone <= 0.0);
    }
}

TEST_CASE("model guards") {
    CHECK_THROWS_AS(TensionModel::linear(-1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(TensionModel::linear(1.0, 0.0), ConfigError);
    {
        std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
        std::vector<double> s = {1.0, 0.9, 0.95, 0.5};  // not decreasing
        CHECK_THROWS_AS(TensionModel::tabulated(x, s), ConfigError);
    }
    TensionModel m = TensionModel::linear(1.0, 0.25);
    m.set_c0(1.0);
    CHECK(m.sigma0() == doctest::Approx(0.75));
    CHECK(m.sigma0_prime() == doctest::Approx(-0.25));
    CHECK_THROWS_AS(m.set_c0(-1.0), InvalidConcentration);
    CHECK_THROWS_AS(m.set_c0(5.0), OutOfRange);  // outside validity window
}
