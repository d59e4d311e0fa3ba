#include <cmath>
#include <random>

#include "doctest.h"
#include "slick/diagnostics.hpp"
#include "slick/errors.hpp"
#include "slick/verify.hpp"

using namespace slick;

namespace {
GridPtr sim_grid(int N = 16, int Nz = 16) {
    return make_grid(2 * M_PI, 2 * M_PI, 1.0, N, N, Nz);
}

BudgetSample budget_of(const FlowState& s, const TensionModel& m, double gamma) {
    BudgetSample b;
    const auto geom = build_geometry(s.eta);
    const auto pack = build_geometry_pack(s.eta);
    physical_budget(s, pack, geom, m, gamma, b);
    return b;
}
}  // namespace

TEST_CASE("equilibrium diagnostics are exactly zero") {
    auto g = sim_grid();
    TensionModel m = TensionModel::linear(1.0, 0.25);
    m.set_c0(1.0);
    FlowState s(g);
    s.ctilde[0] = 1.0;
    const BudgetSample b = budget_of(s, m, 0.5);
    CHECK(std::abs(b.e_phys) < 1e-13);
    CHECK(std::abs(b.d_phys) < 1e-13);
    CHECK(b.mass == doctest::Approx(g->area()).epsilon(1e-14));
    const SobolevPair sp = sobolev_functionals(s, m, nullptr, nullptr, 1e-3);
    CHECK(sp.energy == 0.0);
    CHECK(sp.partial);
}

TEST_CASE("entropy energy matches the quadratic expansion for small deviations") {
    auto g = sim_grid(32, 16);
    TensionModel m = TensionModel::linear(1.0, 0.25);
    m.set_c0(1.0);
    const double delta = 1e-4;
    FlowState s(g);
    s.ctilde = SurfaceField::sample(
        g, [&](double x, double) { return 1.0 + delta * std::cos(x); });
    const BudgetSample b = budget_of(s, m, 0.5);
    // int xi(ctilde) - sigma(c0)|Sigma| ~ xi''(c0)/2 int (ctilde - c0)^2
    const double expect = 0.5 * m.xi_second(1.0, 1.0) * (delta * delta / 2) * g->area();
    CHECK(b.e_phys == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("dissipation of a rigid shear matches the hand integral") {
    auto g = sim_grid();
    TensionModel m = TensionModel::linear(1.0, 0.25);
    m.set_c0(1.0);
    const double kappa = 1e-3;
    FlowState s(g);
    s.ctilde[0] = 1.0;
    s.u[0] = BulkField::sample(g, [&](double, double, double z) { return kappa * (z + 1.0); });
    const BudgetSample b = budget_of(s, m, 0.5);
    // |D u|^2 = 2 kappa^2 over the volume, halved
    CHECK(b.d_phys == doctest::Approx(kappa * kappa * g->volume()).epsilon(1e-10));
    CHECK(b.e_phys == doctest::Approx(0.5 * kappa * kappa / 3.0 * g->area()).epsilon(1e-6));
}

TEST_CASE("budget residual differencer on manufactured series") {
    std::vector<BudgetSample> hist;
    const double dt = 1e-3;
    for (int i = 0; i <= 100; ++i) {
        BudgetSample b;
        b.t = i * dt;
        b.e_phys = std::exp(-b.t);
        b.d_phys = std::exp(-b.t);
        hist.push_back(b);
    }
    const auto res = budget_residual(hist);
    double worst = 0.0;
    for (double r : res) worst = std::max(worst, std::abs(r));
    CHECK(worst < 1e-6);  // centered differences: O(dt^2)
    std::vector<BudgetSample> tiny(hist.begin(), hist.begin() + 2);
    CHECK_THROWS_AS(budget_residual(tiny), Error);

    // constant-in-time equilibrium history: all zeros
    for (auto& b : hist) {
        b.e_phys = 0.0;
        b.d_phys = 0.0;
    }
    for (double r : budget_residual(hist)) CHECK(r == 0.0);
}

TEST_CASE("sobolev functional of a single eta mode matches the multiplier formula") {
    auto g = sim_grid(32, 16);
    TensionModel m = TensionModel::linear(1.0, 0.25);
    m.set_c0(1.0);
    FlowState s(g);
    s.ctilde[0] = 1.0;
    const double a = 1e-3;
    s.eta = SurfaceField::sample(g, [&](double x, double) { return a * std::cos(x); });
    const SobolevPair sp = sobolev_functionals(s, m, nullptr, nullptr, 1e-3);
    const double h3sq = g->area() * (a * a / 2) * std::pow(1.0 + 1.0, 3.0);
    CHECK(sp.energy == doctest::Approx(h3sq).epsilon(1e-12));

    // quadratic homogeneity of the instantaneous part
    FlowState s2 = s;
    s2.eta *= 0.5;
    const SobolevPair sp2 = sobolev_functionals(s2, m, nullptr, nullptr, 1e-3);
    CHECK(sp.energy / sp2.energy == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("decay fit oracle cases") {
    std::vector<double> t, e;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(i * 0.01);
        e.push_back(3.0 * std::exp(-2.0 * t.back()));
    }
    const DecayFit f = decay_fit(t, e);
    CHECK(f.lambda == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-10));

    // 1% multiplicative noise: lambda within 0.05
    std::mt19937_64 rng(4);
    std::vector<double> en = e;
    for (auto& v : en)
        v *= 1.0 + 0.01 * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
    const DecayFit fn = decay_fit(t, en);
    CHECK(std::abs(fn.lambda - 2.0) < 0.05);

    // constant series: lambda = 0
    std::vector<double> ec(t.size(), 0.7);
    const DecayFit fc = decay_fit(t, ec);
    CHECK(fc.lambda == doctest::Approx(0.0));

    std::vector<double> bad = e;
    bad[150] = -1.0;
    CHECK_THROWS_AS(decay_fit(t, bad), FitDomainError);
}

TEST_CASE("mean-c identity") {
    auto g = sim_grid(32, 16);
    TensionModel m = TensionModel::linear(1.0, 0.25);
    m.set_c0(1.0);
    FlowState s(g);
    s.ctilde[0] = 1.0;
    {
        const MeanCCheck mc = mean_c_check(s, m);
        CHECK(mc.mean_c_abs < 1e-14);
        CHECK(std::abs(mc.identity_rhs) < 1e-14);
    }
    // single-mode eta with mass-consistent uniform ctilde
    const double eps = 1e-2, k = 1.0;
    s.eta = SurfaceField::sample(g, [&](double x, double) { return eps * std::sin(k * x); });
    TensionModel m2 = TensionModel::linear(1.0, 0.25);
    const double c0 = equilibrium_concentration(s.eta, s.ctilde);
    m2.set_c0(c0);
    const MeanCCheck mc = mean_c_check(s, m2);
    // c = 1 - c0, so int c = |Sigma| (1 - c0) = -|Sigma| (c0 - 1); c0 - 1 ~ eps^2 k^2 / 4
    const double expect = c0 * eps * eps * k * k / 4.0 * g->area() / c0;
    CHECK(mc.mean_c_abs == doctest::Approx(expect).epsilon(1e-3));
    CHECK(mc.mean_c_abs == doctest::Approx(std::abs(mc.identity_rhs)).epsilon(1e-10));

    // quadratic smallness in the surface amplitude
    FlowState s2(g);
    s2.eta = 0.5 * s.eta;
    s2.ctilde = SurfaceField(g);
    TensionModel m3 = TensionModel::linear(1.0, 0.25);
    s2.ctilde[0] = 1.0;
    const double c02 = equilibrium_concentration(s2.eta, s2.ctilde);
    m3.set_c0(c02);
    const MeanCCheck mc2 = mean_c_check(s2, m3);
    CHECK(mc.mean_c_abs / mc2.mean_c_abs == doctest::Approx(4.0).epsilon(2e-3));
}
