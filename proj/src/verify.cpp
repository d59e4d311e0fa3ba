#include "slick/verify.hpp"

#include <cmath>
#include <iostream>
#include <random>

#include "slick/diagnostics.hpp"
#include "slick/forcing.hpp"
#include "slick/geometry_pack.hpp"
#include "slick/mode_solver.hpp"
#include "slick/run.hpp"
#include "slick/state.hpp"
#include "slick/stokes.hpp"
#include "slick/surface_geometry.hpp"

namespace slick::verify {

namespace {
double uni(std::mt19937_64& rng) {  // uniform in [-1, 1], stdlib-independent
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}
double sq(double x) { return x * x; }
}  // namespace

Check against(const std::string& name, double measured, double tol) {
    return {name, measured, tol, measured <= tol, true};
}
Check at_least(const std::string& name, double measured, double floor) {
    return {name, measured, floor, measured >= floor, false};
}

SurfaceField random_surface(GridPtr g, int kmax, uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    SurfaceField f(g);
    // deterministic (k1, k2) order keeps the function identical across resolutions
    for (int k1 = -kmax; k1 <= kmax; ++k1) {
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const double re = uni(rng), im = uni(rng);
            if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;  // Hermitian partner fills these
            const double decay = 1.0 / (1.0 + k1 * k1 + k2 * k2);
            const int i = (k1 >= 0) ? k1 : g->N1 + k1;
            const int j = (k2 >= 0) ? k2 : g->N2 + k2;
            f[i * g->N2 + j] = cplx(re, im) * decay;
        }
    }
    f.finalize();
    const double m = max_abs_surface(f);
    if (m > 0) f *= scale / m;
    return f;
}

SurfaceField random_eta(GridPtr g, int kmax, uint64_t seed, double slope) {
    SurfaceField eta = random_surface(g, kmax, seed, 1.0);
    // extra smoothing so the slope budget concentrates in the lowest modes
    for (int m = 0; m < g->nmodes(); ++m) {
        const double k = g->kmag(m);
        eta[m] /= (1.0 + k * k);
    }
    eta.subtract_mean();
    const auto d1 = eta.deriv(1).phys();
    const auto d2 = eta.deriv(2).phys();
    double smax = 0.0;
    for (size_t q = 0; q < d1.size(); ++q)
        smax = std::max(smax, std::sqrt(d1[q] * d1[q] + d2[q] * d2[q]));
    if (smax > 0) eta *= slope / smax;
    return eta;
}

// ------------------------------------------------- surface operator identities

double worst_surface_residual(const SurfaceIdentityResiduals& r) {
    return std::max({r.div_nu_plus_h, r.area_deriv, r.area_time_deriv, r.grad_orthogonal,
                     r.ibp, r.laplace_expansion});
}

SurfaceIdentityResiduals surface_identities(GridPtr g, double slope, uint64_t seed,
                                            int kmax_eta) {
    SurfaceIdentityResiduals out;
    const SurfaceField eta = random_eta(g, kmax_eta, seed, slope);
    const SurfaceField f = random_surface(g, 2, seed + 1, 1.0);
    const SurfaceField h = random_surface(g, 2, seed + 2, 1.0);
    const SurfaceGeometry geom = build_geometry(eta);
    const int np = g->nphys();
    auto l2_of = [&](const std::vector<double>& v) {
        double acc = 0.0;
        for (double x : v) acc += x * x;
        return std::sqrt(acc * g->area() / np);
    };

    // div_Gamma nu + H = 0
    {
        const SurfaceField r = div_gamma(geom.nu, geom) + geom.curv;
        out.div_nu_plus_h = l2_surface(r) / (1.0 + l2_surface(geom.curv));
    }
    // d_i area + nu_* . grad_* d_i eta = 0
    {
        double worst = 0.0;
        for (int axis = 1; axis <= 2; ++axis) {
            const auto da = geom.area_element.deriv(axis).phys();
            const auto d1 = geom.deta1.deriv(axis).phys();
            const auto d2 = geom.deta2.deriv(axis).phys();
            std::vector<double> r(np);
            double scale = 1e-12;
            for (int q = 0; q < np; ++q) {
                scale = std::max(scale, std::abs(da[q]));
                r[q] = da[q] + geom.p_nu1[q] * d1[q] + geom.p_nu2[q] * d2[q];
            }
            worst = std::max(worst, l2_of(r) / (1.0 + scale));
        }
        out.area_deriv = worst;
    }
    // d_t area identity with a manufactured d_t eta = w
    {
        const SurfaceField w = random_surface(g, 4, seed + 3, 1.0);
        const auto wp = w.phys();
        const auto w1 = w.deriv(1).phys();
        const auto w2 = w.deriv(2).phys();
        std::vector<double> lhs(np), flux1(np), flux2(np);
        for (int q = 0; q < np; ++q) {
            lhs[q] = (geom.p_deta1[q] * w1[q] + geom.p_deta2[q] * w2[q]) * geom.p_inv_area[q];
            flux1[q] = wp[q] * geom.p_deta1[q] * geom.p_inv_area[q];
            flux2[q] = wp[q] * geom.p_deta2[q] * geom.p_inv_area[q];
        }
        SurfaceField rhs = SurfaceField::from_phys(g, flux1).deriv(1) +
                           SurfaceField::from_phys(g, flux2).deriv(2);
        const auto rp = rhs.phys();
        const auto hp = geom.curv.phys();
        SurfaceField lhsf = SurfaceField::from_phys(g, lhs);
        const auto lp = lhsf.phys();
        double acc = 0.0, scale = 1e-12;
        for (int q = 0; q < np; ++q) {
            const double r = lp[q] - (rp[q] - wp[q] * hp[q]);
            acc += r * r;
            scale = std::max(scale, std::abs(lp[q]));
        }
        out.area_time_deriv = std::sqrt(acc / np) / (1.0 + scale);
    }
    // grad_Gamma f . nu = 0
    {
        const auto gf = grad_gamma(f, geom);
        const auto g1 = gf[0].phys();
        const auto g2 = gf[1].phys();
        const auto g3 = gf[2].phys();
        std::vector<double> r(np);
        double scale = 1e-12;
        for (int q = 0; q < np; ++q) {
            scale = std::max({scale, std::abs(g1[q]), std::abs(g2[q])});
            r[q] = g1[q] * geom.p_nu1[q] + g2[q] * geom.p_nu2[q] + g3[q] * geom.p_nu3[q];
        }
        out.grad_orthogonal = l2_of(r) / scale;
    }
    // integration by parts, all three directions
    {
        const double scale =
            (1.0 + l2_surface(f)) * (1.0 + l2_surface(h)) * (1.0 + out.div_nu_plus_h);
        double worst = 0.0;
        for (int i = 1; i <= 3; ++i)
            worst = std::max(worst, std::abs(ibp_residual(f, h, geom, i)));
        out.ibp = worst / scale;
    }
    // exact expansion of the pulled-back Laplacian
    {
        const SurfaceField lapG = laplace_gamma(f, geom);
        const auto f1 = f.deriv(1).phys();
        const auto f2 = f.deriv(2).phys();
        const auto f11 = f.deriv(1, 2).phys();
        const auto f22 = f.deriv(2, 2).phys();
        const auto f12 = f.deriv(1).deriv(2).phys();
        const auto e11 = eta.deriv(1, 2).phys();
        const auto e22 = eta.deriv(2, 2).phys();
        const auto e12 = eta.deriv(1).deriv(2).phys();
        std::array<std::array<std::vector<double>, 2>, 2> dnu;
        dnu[0][0] = geom.nu[0].deriv(1).phys();
        dnu[0][1] = geom.nu[0].deriv(2).phys();
        dnu[1][0] = geom.nu[1].deriv(1).phys();
        dnu[1][1] = geom.nu[1].deriv(2).phys();
        std::vector<double> expansion(np);
        for (int q = 0; q < np; ++q) {
            const double nu[2] = {geom.p_nu1[q], geom.p_nu2[q]};
            const double nu3 = geom.p_nu3[q];
            const double fd[2] = {f1[q], f2[q]};
            const double fdd[2][2] = {{f11[q], f12[q]}, {f12[q], f22[q]}};
            const double edd[2][2] = {{e11[q], e12[q]}, {e12[q], e22[q]}};
            double t0 = 0.0;  // nu_i nu_j d_ij f
            double t1 = 0.0;  // nu3 (nu_* . grad d_j eta)(delta_ij - nu_i nu_j) d_i f
            double t2 = 0.0;  // [nu_j d_j nu_i + nu_i d_j nu_j] d_i f
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    t0 += nu[i] * nu[j] * fdd[i][j];
                    const double ngd = nu[0] * edd[0][j] + nu[1] * edd[1][j];
                    t1 += nu3 * ngd * ((i == j ? 1.0 : 0.0) - nu[i] * nu[j]) * fd[i];
                    t2 += (nu[j] * dnu[i][j][q] + nu[i] * dnu[j][j][q]) * fd[i];
                }
            }
            expansion[q] = f11[q] + f22[q] - t0 - t1 - t2;
        }
        const SurfaceField expf = SurfaceField::from_phys(g, expansion);
        out.laplace_expansion =
            l2_surface(lapG - expf) / (1.0 + l2_surface(SurfaceField::from_phys(g, expansion)));
    }
    return out;
}

// --------------------------------------------------------------------- tension

double xi_quadrature(const TensionModel& m, double r, double x) {
    // composite Simpson on the integrand sigma(z)/z^2; independent of the GSL path
    if (x == 0.0) return m.sigma(0.0);
    const int n = 20000;  // even
    const double a = r, b = x;
    const double hstep = (b - a) / n;
    auto f = [&](double z) { return m.sigma(z) / (z * z); };
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * hstep) * ((i % 2) ? 4.0 : 2.0);
    const double integral = s * hstep / 3.0;
    return x * (m.sigma(r) / r - integral);
}

XiChecks xi_checks(const TensionModel& m, double r, uint64_t seed) {
    (void)seed;
    XiChecks out;
    const double hi = std::isfinite(m.window_hi()) ? 0.95 * m.window_hi() : 2.5 * r;
    const double lo = 0.05 * r;
    std::vector<double> xs(101), xi(101);
    for (int i = 0; i <= 100; ++i) {
        xs[i] = lo + (hi - lo) * i / 100.0;
        xi[i] = m.xi(r, xs[i]);
        out.closed_vs_quadrature =
            std::max(out.closed_vs_quadrature, std::abs(xi[i] - xi_quadrature(m, r, xs[i])));
    }
    // Legendre-type identity with central-difference xi'
    const double h = 1e-5;
    for (int i = 5; i <= 95; i += 5) {
        const double x = xs[i];
        const double d = (m.xi(r, x + h) - m.xi(r, x - h)) / (2 * h);
        out.legendre = std::max(out.legendre, std::abs(m.xi(r, x) - x * d - m.sigma(x)));
    }
    out.min_at_r = std::abs(m.xi(r, r) - m.sigma(r));
    // strict convexity and the lower bound xi >= sigma(r)
    double worst_convex = 0.0, worst_bound = 0.0;
    for (int i = 1; i < 100; ++i) {
        worst_convex = std::min(worst_convex, xi[i - 1] - 2 * xi[i] + xi[i + 1]);
        worst_bound = std::min(worst_bound, xi[i] - m.sigma(r));
    }
    out.convexity = std::max(-worst_convex, -worst_bound);
    // strict monotonicity away from r
    double worst_mono = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double diff = xi[i] - xi[i - 1];
        if (xs[i] <= r) worst_mono = std::max(worst_mono, diff);        // must decrease
        else if (xs[i - 1] >= r) worst_mono = std::max(worst_mono, -diff);  // must increase
    }
    out.monotone = worst_mono;
    return out;
}

// ----------------------------------------------------------- poisson / geometry

GeometryChecks geometry_checks(GridPtr g, double slope, uint64_t seed, int nstates,
                               double slope_inf) {
    if (slope_inf < 0) slope_inf = slope;
    GeometryChecks out;
    const SurfaceField f = random_surface(g, 3, seed, 1.0);
    const BulkField pf = poisson_extend(f);
    {
        const BulkField lap = pf.deriv_h(1, 2) + pf.deriv_h(2, 2) + pf.deriv_z(2);
        double denom = 0.0;
        for (int axis = 1; axis <= 2; ++axis) {
            const double n = l2_bulk(pf.deriv_h(axis));
            denom += n * n;
        }
        const double n3 = l2_bulk(pf.deriv_z(1));
        denom = std::sqrt(denom + n3 * n3);
        out.harmonicity = l2_bulk(lap) / (1.0 + denom);
        out.poisson_h12_constant = denom;
        double h12 = 0.0;
        for (int m = 0; m < g->nmodes(); ++m) h12 += g->kmag(m) * std::norm(f[m]);
        h12 = std::sqrt(g->area() * h12);
        if (h12 > 0) out.poisson_h12_constant = denom / h12;
    }
    {
        const SurfaceField tr = pf.trace_top() - f;
        out.trace = max_abs_surface(tr);
    }

    const SurfaceField eta = random_eta(g, 2, seed + 7, slope);
    const GeometryPack pack = build_geometry_pack(eta);
    const int np = g->nphys();
    const int nz = g->Nz;

    // Theta3 = x3 + etabar (1+x3/b); jacobian oracle via the collocation D matrix
    {
        BulkField theta3 = pack.eta_ext;
        for (int m = 0; m < g->nmodes(); ++m)
            for (int j = 0; j < nz; ++j) {
                theta3.at(m, j) *= (1.0 + g->z()[j] / g->depth);
                if (m == 0) theta3.at(m, j) += g->z()[j];
            }
        const auto jalt = theta3.deriv_z(1).phys();
        const auto talt1 = theta3.deriv_h(1).phys();
        const auto talt2 = theta3.deriv_h(2).phys();
        for (size_t i = 0; i < jalt.size(); ++i) {
            out.jac_det_oracle = std::max(out.jac_det_oracle, std::abs(jalt[i] - pack.p_jac[i]));
            out.tilt_oracle = std::max({out.tilt_oracle, std::abs(talt1[i] - pack.p_tilt1[i]),
                                        std::abs(talt2[i] - pack.p_tilt2[i])});
        }
    }
    // J K = 1 pointwise with the truncated K field
    {
        const auto kph = pack.invjac.phys();
        for (size_t i = 0; i < kph.size(); ++i)
            out.jk_identity = std::max(out.jk_identity, std::abs(kph[i] * pack.p_jac[i] - 1.0));
    }
    // dual matrix vs direct inverse-transpose at sampled points
    {
        const BulkField akf = BulkField::from_phys(g, pack.p_a_k);
        const BulkField bkf = BulkField::from_phys(g, pack.p_b_k);
        const auto akp = akf.phys();
        const auto bkp = bkf.phys();
        const auto kp = pack.invjac.phys();
        std::mt19937_64 rng(seed + 13);
        for (int s = 0; s < 200; ++s) {
            const size_t i = rng() % (static_cast<size_t>(np) * nz);
            Eigen::Matrix3d M;
            M << 1, 0, 0, 0, 1, 0, pack.p_tilt1[i], pack.p_tilt2[i], pack.p_jac[i];
            const Eigen::Matrix3d AinvT = M.inverse().transpose();
            out.dual_matrix = std::max({out.dual_matrix,
                                        std::abs(AinvT(0, 2) - (-akp[i])),
                                        std::abs(AinvT(1, 2) - (-bkp[i])),
                                        std::abs(AinvT(2, 2) - kp[i])});
        }
    }
    // L-infinity bound over random accepted states
    for (int s = 0; s < nstates; ++s) {
        const SurfaceField e2 = random_eta(g, 3, seed + 100 + s, slope_inf);
        const GeometryPack p2 = build_geometry_pack(e2);
        double jm = 0.0, am = 0.0, bm = 0.0;
        for (size_t i = 0; i < p2.p_jac.size(); ++i) {
            jm = std::max(jm, std::abs(p2.p_jac[i] - 1.0));
            am = std::max(am, std::abs(p2.p_tilt1[i]));
            bm = std::max(bm, std::abs(p2.p_tilt2[i]));
        }
        out.infinity_bound = std::max(out.infinity_bound, jm * jm + am * am + bm * bm);
    }
    return out;
}

// ----------------------------------------------------------------- linear core

namespace {

// smooth vertical profile vanishing at the bottom, with analytic derivatives
struct Profile {
    double a0, a1;
    double value(double z, double b) const {
        return (z + b) * (z + b) * (a0 + a1 * std::sin(z));
    }
    double d1(double z, double b) const {
        return 2 * (z + b) * (a0 + a1 * std::sin(z)) + (z + b) * (z + b) * a1 * std::cos(z);
    }
    double d2(double z, double b) const {
        return 2 * (a0 + a1 * std::sin(z)) + 4 * (z + b) * a1 * std::cos(z) -
               (z + b) * (z + b) * a1 * std::sin(z);
    }
};

struct PProfile {  // pressure: no boundary constraint
    double a0, a1;
    double value(double z) const { return a0 * std::cos(z) + a1 * z; }
    double d1(double z) const { return -a0 * std::sin(z) + a1; }
};

}  // namespace

LinearChecks linear_checks(GridPtr g, const TensionModel& model, double gamma, double dt,
                           int nsteps, uint64_t seed) {
    LinearChecks out;
    const Grid& gr = *g;
    const int nz = gr.Nz;
    std::mt19937_64 rng(seed);

    // ---- stationary manufactured solutions on modes (1,0) and (0,0) ----
    {
        const Profile pu1{0.7 + 0.1 * uni(rng), 0.4}, pu2{-0.3, 0.55}, pu3{0.5, -0.35};
        const PProfile pp{0.8, -0.25};
        const int mode = 1 * gr.N2 + 0;  // k = (1, 0)
        const double q1 = gr.k1m(mode);
        const cplx I1(0.0, q1);
        const cplx amp(0.6, -0.3);

        std::array<BulkField, 3> ue = {BulkField(g), BulkField(g), BulkField(g)};
        BulkField pe(g);
        std::array<BulkField, 3> f = {BulkField(g), BulkField(g), BulkField(g)};
        BulkField h(g);
        std::array<SurfaceField, 3> alpha = {SurfaceField(g), SurfaceField(g), SurfaceField(g)};
        std::array<SurfaceField, 3> phi1 = {SurfaceField(g), SurfaceField(g), SurfaceField(g)};

        const Profile* prof[3] = {&pu1, &pu2, &pu3};
        for (int j = 0; j < nz; ++j) {
            const double z = gr.z()[j];
            const cplx u[3] = {amp * prof[0]->value(z, gr.depth),
                               amp * prof[1]->value(z, gr.depth),
                               amp * prof[2]->value(z, gr.depth)};
            const cplx du[3] = {amp * prof[0]->d1(z, gr.depth), amp * prof[1]->d1(z, gr.depth),
                                amp * prof[2]->d1(z, gr.depth)};
            const cplx ddu[3] = {amp * prof[0]->d2(z, gr.depth), amp * prof[1]->d2(z, gr.depth),
                                 amp * prof[2]->d2(z, gr.depth)};
            const cplx p = amp * pp.value(z);
            const cplx dp = amp * pp.d1(z);
            for (int c = 0; c < 3; ++c) {
                ue[c].at(mode, j) = u[c];
                f[c].at(mode, j) = q1 * q1 * u[c] - ddu[c] + (c == 0 ? I1 * p : c == 2 ? dp : 0.0);
            }
            pe.at(mode, j) = p;
            h.at(mode, j) = I1 * u[0] + du[2];
        }
        // stress data at the top, Dirichlet data for the second solver
        {
            const double z = 0.0;
            const cplx u3 = amp * pu3.value(z, gr.depth);
            const cplx du_top[3] = {amp * pu1.d1(z, gr.depth), amp * pu2.d1(z, gr.depth),
                                    amp * pu3.d1(z, gr.depth)};
            const cplx p = amp * pp.value(z);
            alpha[0][mode] = -(I1 * u3 + du_top[0]);
            alpha[1][mode] = -du_top[1];
            alpha[2][mode] = p - 2.0 * du_top[2];
            for (int c = 0; c < 3; ++c) phi1[c][mode] = ue[c].at(mode, 0);
        }
        for (auto& x : ue) x.finalize();
        pe.finalize();
        for (auto& x : f) x.finalize();
        h.finalize();
        for (auto& x : alpha) x.finalize();
        for (auto& x : phi1) x.finalize();

        const StokesSolution sol = solve_stokes_stress(f, h, alpha);
        for (int c = 0; c < 3; ++c)
            out.mms_stationary = std::max(out.mms_stationary, max_abs_bulk(sol.u[c] - ue[c]));
        out.mms_stationary = std::max(out.mms_stationary, max_abs_bulk(sol.p - pe));

        const StokesSolution sold = solve_stokes_dirichlet(f, h, phi1);
        for (int c = 0; c < 3; ++c)
            out.mms_dirichlet = std::max(out.mms_dirichlet, max_abs_bulk(sold.u[c] - ue[c]));
        // Dirichlet pressure carries a gauge; compare up to the k = 0 mean (none here)
        out.mms_dirichlet = std::max(out.mms_dirichlet, max_abs_bulk(sold.p - pe));
    }

    // ---- time-dependent manufactured solution, first order in dt ----
    {
        LinearCore core(g, gamma, model);
        const int mode = 1 * gr.N2 + 0;
        const int mc = gr.herm_partner(mode);
        const double q1 = gr.k1m(mode);
        const cplx I1(0.0, q1);
        const double k2 = q1 * q1;
        const Profile pu1{0.55, 0.3}, pu2{-0.25, 0.45}, pu3{0.4, -0.2};
        const PProfile pp{0.65, -0.3};
        const Profile* prof[3] = {&pu1, &pu2, &pu3};
        const cplx amp_eta(0.8, 0.25), amp_c(-0.45, 0.6), amp(0.9, -0.35);
        const double om = 1.3;
        auto gfun = [om](double t) { return 1.0 + 0.4 * std::sin(om * t); };
        auto dgfun = [om](double t) { return 0.4 * om * std::cos(om * t); };
        const double sigma0 = model.sigma0(), sigma0p = model.sigma0_prime(),
                     c0 = model.c0();

        const double T = 0.4;
        std::vector<double> errs;
        for (double dtt : {4e-3, 2e-3, 1e-3}) {
            const double a = 1.0 / dtt;
            core.prepare(a);
            // exact state at t
            auto exact = [&](double t, SpectralState& s) {
                for (int c = 0; c < 3; ++c) s.u[c] = BulkField(g);
                s.p = BulkField(g);
                s.eta = SurfaceField(g);
                s.c = SurfaceField(g);
                const double gt = gfun(t);
                for (int j = 0; j < nz; ++j) {
                    const double z = gr.z()[j];
                    for (int c = 0; c < 3; ++c) {
                        const cplx v = amp * prof[c]->value(z, gr.depth) * gt;
                        s.u[c].at(mode, j) = v;
                        s.u[c].at(mc, j) = std::conj(v);
                    }
                    const cplx pv = amp * pp.value(z) * gt;
                    s.p.at(mode, j) = pv;
                    s.p.at(mc, j) = std::conj(pv);
                }
                s.eta[mode] = amp_eta * gt;
                s.eta[mc] = std::conj(amp_eta * gt);
                s.c[mode] = amp_c * gt;
                s.c[mc] = std::conj(amp_c * gt);
            };
            SpectralState s;
            exact(0.0, s);
            const long nsteps_mms = std::lround(T / dtt);
            for (long k = 0; k < nsteps_mms; ++k) {
                const double tn1 = (k + 1) * dtt;
                const double gt = gfun(tn1), dgt = dgfun(tn1);
                ModeRhs rhs;
                for (int c = 0; c < 3; ++c) rhs.f[c] = (1.0 / dtt) * s.u[c];
                rhs.h = BulkField(g);
                for (int c = 0; c < 3; ++c) rhs.stress[c] = SurfaceField(g);
                rhs.kin = (1.0 / dtt) * s.eta;
                rhs.surf = (1.0 / dtt) * s.c;
                // forcing at t_{n+1}
                for (int j = 0; j < nz; ++j) {
                    const double z = gr.z()[j];
                    for (int c = 0; c < 3; ++c) {
                        const cplx u = amp * prof[c]->value(z, gr.depth);
                        const cplx ddu = amp * prof[c]->d2(z, gr.depth);
                        const cplx dp_fac = (c == 0)   ? I1 * amp * pp.value(z)
                                            : (c == 2) ? amp * pp.d1(z)
                                                       : cplx(0.0);
                        const cplx phi = u * dgt + (k2 * u - ddu + dp_fac) * gt;
                        rhs.f[c].at(mode, j) += phi;
                        rhs.f[c].at(mc, j) += std::conj(phi);
                    }
                    const cplx hv = (I1 * amp * prof[0]->value(z, gr.depth) +
                                     amp * prof[2]->d1(z, gr.depth)) *
                                    gt;
                    rhs.h.at(mode, j) = hv;
                    rhs.h.at(mc, j) = std::conj(hv);
                }
                {
                    const cplx u3 = amp * pu3.value(0.0, gr.depth);
                    const cplx du1 = amp * pu1.d1(0.0, gr.depth);
                    const cplx du2 = amp * pu2.d1(0.0, gr.depth);
                    const cplx du3 = amp * pu3.d1(0.0, gr.depth);
                    const cplx pv = amp * pp.value(0.0);
                    const cplx s1 = (-(I1 * u3 + du1)) * gt + sigma0p * I1 * amp_c * gt;
                    const cplx s2 = (-du2) * gt;
                    const cplx s3 =
                        (pv - 2.0 * du3) * gt - (1.0 + sigma0 * k2) * amp_eta * gt;
                    rhs.stress[0][mode] = s1;
                    rhs.stress[0][mc] = std::conj(s1);
                    rhs.stress[1][mode] = s2;
                    rhs.stress[1][mc] = std::conj(s2);
                    rhs.stress[2][mode] = s3;
                    rhs.stress[2][mc] = std::conj(s3);
                    const cplx kin = amp_eta * dgt - amp * pu3.value(0.0, gr.depth) * gt;
                    rhs.kin[mode] += kin;
                    rhs.kin[mc] += std::conj(kin);
                    const cplx srf = amp_c * dgt + c0 * I1 * amp * pu1.value(0.0, gr.depth) * gt +
                                     gamma * k2 * amp_c * gt;
                    rhs.surf[mode] += srf;
                    rhs.surf[mc] += std::conj(srf);
                }
                s = step_linear(core, a, rhs);
            }
            SpectralState se;
            exact(T, se);
            double err = 0.0;
            for (int c = 0; c < 3; ++c) err = std::max(err, max_abs_bulk(s.u[c] - se.u[c]));
            err = std::max(err, max_abs_surface(s.eta - se.eta));
            err = std::max(err, max_abs_surface(s.c - se.c));
            errs.push_back(err);
        }
        out.mms_dt_err_finest = errs.back();
        double order = 0.0;
        for (size_t i = 1; i < errs.size(); ++i) order += std::log2(errs[i - 1] / errs[i]);
        out.mms_dt_order = order / (errs.size() - 1);
    }

    // ---- eigenvalue oracle: spectral radius over sampled modes ----
    {
        LinearCore core(g, gamma, model);
        // the n = 0 mode is excluded: its surfactant mean is a conserved
        // neutral direction of the linear system (rho = 1 by construction)
        const int samples[10][2] = {{1, 0}, {0, 1}, {1, 1}, {2, 0},  {0, 2},
                                    {2, 1}, {3, 2}, {-1, 2}, {4, 0}, {3, 0}};
        for (const auto& s : samples) {
            const int i = (s[0] >= 0) ? s[0] : gr.N1 + s[0];
            const int j = (s[1] >= 0) ? s[1] : gr.N2 + s[1];
            const int m = i * gr.N2 + j;
            if (!gr.in_band(m)) continue;
            const Eigen::MatrixXcd P = core.propagator(m, dt);
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(P, false);
            double rho = 0.0;
            for (int e = 0; e < es.eigenvalues().size(); ++e)
                rho = std::max(rho, std::abs(es.eigenvalues()[e]));
            out.spectral_radius = std::max(out.spectral_radius, rho);

            // modal decay vs the oracle, once, on the gravity-capillary mode (1,0)
            if (s[0] == 1 && s[1] == 0) {
                LinearCore c2(g, gamma, model);
                const double a = 1.0 / dt;
                c2.prepare(a);
                const int nun = c2.nunknowns();
                Eigen::VectorXcd y = Eigen::VectorXcd::Zero(nun);
                std::mt19937_64 r2(seed + 5);
                for (int c = 0; c < 3; ++c)
                    for (int jj = 0; jj < nz; ++jj)
                        y[c2.iu(c, jj)] = cplx(uni(r2), uni(r2)) *
                                          sq((gr.z()[jj] + gr.depth) / gr.depth);
                y[c2.ieta()] = cplx(uni(r2), uni(r2));
                y[c2.ic()] = cplx(uni(r2), uni(r2));
                auto advance_state = [&](const Eigen::VectorXcd& v) {
                    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nun);
                    for (int c = 0; c < 3; ++c)
                        for (int jj = 1; jj < nz - 1; ++jj)
                            b[c2.iu(c, jj)] = a * v[c2.iu(c, jj)];
                    b[c2.ieta()] = a * v[c2.ieta()];
                    b[c2.ic()] = a * v[c2.ic()];
                    return c2.solve(m, a, b);
                };
                double logsum = 0.0;
                int counted = 0;
                for (int k = 0; k < 400; ++k) {
                    const Eigen::VectorXcd y1 = advance_state(y);
                    const double n1 = y1.norm();
                    if (k >= 300) {  // geometric mean after the transient
                        logsum += std::log(n1);
                        ++counted;
                    }
                    y = y1 / n1;
                }
                const double r_fit = std::exp(logsum / counted);
                Eigen::ComplexEigenSolver<Eigen::MatrixXcd> e2(core.propagator(m, dt), false);
                double lam = 0.0;
                for (int e = 0; e < e2.eigenvalues().size(); ++e)
                    lam = std::max(lam, std::abs(e2.eigenvalues()[e]));
                out.decay_vs_eigen = std::abs(r_fit - lam) / lam;
            }
        }
    }

    // ---- discrete linear energy, zero forcing, never increases ----
    {
        LinearCore core(g, gamma, model);
        const double a = 1.0 / dt;
        core.prepare(a);
        // smooth random data: a few low modes, bottom-vanishing profiles
        SpectralState s;
        for (int c = 0; c < 3; ++c) s.u[c] = BulkField(g);
        s.p = BulkField(g);
        s.eta = SurfaceField(g);
        s.c = SurfaceField(g);
        std::mt19937_64 r3(seed + 9);
        const int km = 2;
        for (int k1 = 0; k1 <= km; ++k1)
            for (int k2 = -km; k2 <= km; ++k2) {
                if (k1 == 0 && k2 < 0) continue;
                const int i = k1, j = (k2 >= 0) ? k2 : gr.N2 + k2;
                const int m = i * gr.N2 + j;
                const int mc = gr.herm_partner(m);
                const cplx ce(uni(r3), (m == 0) ? 0.0 : uni(r3));
                const cplx cc(uni(r3), (m == 0) ? 0.0 : uni(r3));
                if (m != 0) {
                    s.eta[m] = 0.01 * ce;
                    s.eta[mc] = std::conj(s.eta[m]);
                }
                s.c[m] = 0.01 * cc;
                s.c[mc] = std::conj(s.c[m]);
                for (int c = 0; c < 3; ++c) {
                    const cplx cu(uni(r3), (m == 0) ? 0.0 : uni(r3));
                    for (int jj = 0; jj < nz; ++jj) {
                        const double z = gr.z()[jj];
                        const double shape = sq((z + gr.depth) / gr.depth) *
                                             (1.0 + 0.3 * std::sin(2.0 * z));
                        s.u[c].at(m, jj) = 0.01 * cu * shape;
                        if (mc != m) s.u[c].at(mc, jj) = std::conj(s.u[c].at(m, jj));
                    }
                }
            }
        auto zero_rhs_step = [&](const SpectralState& in) {
            ModeRhs rhs;
            for (int c = 0; c < 3; ++c) {
                rhs.f[c] = (1.0 / dt) * in.u[c];
                rhs.stress[c] = SurfaceField(g);
            }
            rhs.h = BulkField(g);
            rhs.kin = (1.0 / dt) * in.eta;
            rhs.surf = (1.0 / dt) * in.c;
            return step_linear(core, a, rhs);
        };
        s = zero_rhs_step(s);  // absorb the constraint projection
        s = zero_rhs_step(s);
        double e_prev =
            linear_energy(s.u, s.eta, s.c, model.sigma0(), model.sigma0_prime(), model.c0());
        const double e0 = e_prev;
        for (int k = 0; k < nsteps; ++k) {
            s = zero_rhs_step(s);
            const double e =
                linear_energy(s.u, s.eta, s.c, model.sigma0(), model.sigma0_prime(), model.c0());
            out.energy_increase = std::max(out.energy_increase, (e - e_prev) / e0);
            e_prev = e;
        }
    }
    return out;
}

// ---------------------------------------------------------- transport identity

std::vector<double> transport_residuals(GridPtr g, int f_kind, const std::vector<double>& dts,
                                        uint64_t seed) {
    const Grid& gr = *g;
    const int np = gr.nphys();
    const SurfaceField E = random_eta(g, 3, seed, 0.25);
    const SurfaceField U1 = random_surface(g, 3, seed + 1, 0.8);
    const SurfaceField U2 = random_surface(g, 3, seed + 2, 0.8);
    const SurfaceField C = random_surface(g, 3, seed + 3, 0.5);
    const double c0 = 1.4, gamma = 0.7;

    auto s_t = [](double t) { return 1.0 + 0.35 * std::sin(1.1 * t); };
    auto ds_t = [](double t) { return 0.35 * 1.1 * std::cos(1.1 * t); };
    auto a_t = [](double t) { return 0.9 + 0.4 * std::cos(0.8 * t); };
    auto b_t = [](double t) { return 0.7 + 0.3 * std::sin(1.7 * t + 0.4); };
    auto c_t = [](double t) { return 0.25 * std::sin(0.9 * t + 0.2); };
    auto dc_t = [](double t) { return 0.25 * 0.9 * std::cos(0.9 * t + 0.2); };

    auto f_of = [f_kind](double z) { return f_kind == 0 ? z : 0.5 * z * z; };
    auto fp_of = [f_kind](double z) { return f_kind == 0 ? 1.0 : z; };
    auto fpp_of = [f_kind](double z) { return f_kind == 0 ? 0.0 : 1.0; };

    auto Q_of = [&](double t) {
        SurfaceField eta = s_t(t) * E;
        const SurfaceGeometry geom = build_geometry(eta);
        SurfaceField ct = c_t(t) * C;
        ct[0] += c0;
        const auto cp = ct.phys();
        std::vector<double> v(np);
        for (int q = 0; q < np; ++q) v[q] = f_of(cp[q]);
        return integrate_weighted(geom, v);
    };

    auto RHS_of = [&](double t) {
        SurfaceField eta = s_t(t) * E;
        const SurfaceGeometry geom = build_geometry(eta);
        SurfaceField ct = c_t(t) * C;
        ct[0] += c0;
        SurfaceField u1 = a_t(t) * U1;
        SurfaceField u2 = b_t(t) * U2;
        // u3 from the kinematic equation: d_t eta + u1 d1 eta + u2 d2 eta
        SurfaceField u3(g);
        {
            const auto p1 = u1.phys();
            const auto p2 = u2.phys();
            std::vector<double> v(np);
            const auto dte = (ds_t(t) * E).phys();
            for (int q = 0; q < np; ++q)
                v[q] = dte[q] + p1[q] * geom.p_deta1[q] + p2[q] * geom.p_deta2[q];
            u3 = SurfaceField::from_phys(g, v);
        }
        const std::array<SurfaceField, 3> utr = {u1, u2, u3};
        const SurfaceField divdef = surface_div_defect(utr, geom);
        const auto divdef_p = divdef.phys();
        const auto d1u1 = u1.deriv(1).phys();
        const auto d2u2 = u2.deriv(2).phys();
        const auto gg = grad_gamma(ct, geom);
        std::array<std::vector<double>, 3> ggp;
        for (int i = 0; i < 3; ++i) ggp[i] = gg[i].phys();
        const SurfaceField lapG = laplace_gamma(ct, geom);
        const auto lapG_p = lapG.phys();
        const auto cp = ct.phys();
        const auto dtc = (dc_t(t) * C).phys();
        const auto c1 = ct.deriv(1).phys();
        const auto c2 = ct.deriv(2).phys();
        const auto p1 = u1.phys();
        const auto p2 = u2.phys();

        std::vector<double> v(np);
        for (int q = 0; q < np; ++q) {
            const double divG = d1u1[q] + d2u2[q] + divdef_p[q];
            const double grad2 =
                ggp[0][q] * ggp[0][q] + ggp[1][q] * ggp[1][q] + ggp[2][q] * ggp[2][q];
            // defect of the surfactant equation along the manufactured path
            const double force =
                dtc[q] + p1[q] * c1[q] + p2[q] * c2[q] + cp[q] * divG - gamma * lapG_p[q];
            v[q] = (f_of(cp[q]) - fp_of(cp[q]) * cp[q]) * divG -
                   gamma * fpp_of(cp[q]) * grad2 + fp_of(cp[q]) * force;
        }
        return integrate_weighted(geom, v);
    };

    const double t0 = 0.7;
    const double rhs = RHS_of(t0);
    std::vector<double> out;
    for (double dt : dts) {
        const double lhs = (Q_of(t0 + dt) - Q_of(t0 - dt)) / (2.0 * dt);
        out.push_back(std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
    return out;
}

// -------------------------------------------------------- nonlinearity scaling

ScalingRatios scaling_ratios(GridPtr g, double eps, uint64_t seed) {
    const Grid& gr = *g;
    const int nz = gr.Nz;
    TensionModel model = TensionModel::linear(1.0, 0.25);
    model.set_c0(1.0);
    const double gamma = 0.5;

    const SurfaceField etaS = random_eta(g, 2, seed, 1.0);
    const SurfaceField cS = random_surface(g, 2, seed + 1, 1.0);
    std::mt19937_64 rng(seed + 2);

    auto state_at = [&](double e) {
        FlowState s(g);
        s.eta = e * etaS;
        s.ctilde = e * cS;
        s.ctilde[0] += model.c0();
        std::mt19937_64 r2(seed + 2);
        for (int c = 0; c < 3; ++c) {
            const Profile prof{0.6 + 0.2 * uni(r2), 0.35 + 0.1 * uni(r2)};
            for (int k1 = 0; k1 <= 1; ++k1)
                for (int k2 = 0; k2 <= 1; ++k2) {
                    const int m = k1 * gr.N2 + k2;
                    const int mc = gr.herm_partner(m);
                    const cplx cu(uni(r2), (m == 0) ? 0.0 : uni(r2));
                    for (int j = 0; j < nz; ++j) {
                        const double z = gr.z()[j];
                        const cplx v = e * cu * prof.value(z, gr.depth);
                        s.u[c].at(m, j) += v;
                        if (mc != m) s.u[c].at(mc, j) += std::conj(v);
                    }
                }
        }
        const PProfile pprof{0.5, -0.2};
        for (int j = 0; j < nz; ++j) s.p.at(0, j) = e * pprof.value(gr.z()[j]);
        s.p.at(1 * gr.N2 + 0, 0) += 0.0;
        return s;
    };
    (void)rng;

    auto norms_at = [&](double e) {
        const FlowState s = state_at(e);
        const SurfaceGeometry geom = build_geometry(s.eta);
        const GeometryPack pack = build_geometry_pack(s.eta);
        return forcing_norms(eval_G(s, pack, geom, model, gamma));
    };
    const ForcingNorms n1 = norms_at(eps);
    const ForcingNorms n2 = norms_at(0.5 * eps);
    return {n1.g1 / n2.g1, n1.g2 / n2.g2, n1.g3 / n2.g3, n1.g4 / n2.g4, n1.g5 / n2.g5};
}

// ------------------------------------------------------------------ equilibrium

double equilibrium_drift(GridPtr g, double c0, double gamma, double dt, int nsteps) {
    TensionModel model = TensionModel::linear(1.0, 0.25);
    model.set_c0(c0);
    Stepper stepper(g, model, gamma);
    FlowState s(g);
    s.ctilde[0] = c0;

    BudgetSample b0;
    {
        const auto geom = build_geometry(s.eta);
        const auto pack = build_geometry_pack(s.eta);
        physical_budget(s, pack, geom, model, gamma, b0);
    }
    double drift = 0.0;
    FlowState prev = s, prevprev = s;
    for (int k = 0; k < nsteps; ++k) {
        FlowState next = stepper.step(s, dt);
        prevprev = prev;
        prev = s;
        s = next;
    }
    BudgetSample b;
    {
        const auto geom = build_geometry(s.eta);
        const auto pack = build_geometry_pack(s.eta);
        physical_budget(s, pack, geom, model, gamma, b);
        const SobolevPair sob = sobolev_functionals(s, model, &prev, &prevprev, dt);
        b.e_sob = sob.energy;
        b.d_sob = sob.dissipation;
        b.compat = compatibility_residual(s, model);
    }
    drift = std::max({std::abs(b.e_phys - b0.e_phys), std::abs(b.d_phys - b0.d_phys),
                      std::abs(b.mass - b0.mass), std::abs(b.eta_mean), b.e_sob, b.d_sob,
                      b.compat});
    return drift;
}

// ----------------------------------------------------------------------- suites

std::vector<Check> identities_suite(uint64_t seed) {
    std::vector<Check> checks;
    auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 24, DealiasRule::three_halves);
    const auto si = surface_identities(g, 0.3, seed);
    checks.push_back(against("surf: div_G(nu) + H", si.div_nu_plus_h, 1e-8));
    checks.push_back(against("surf: d_i area identity", si.area_deriv, 1e-8));
    checks.push_back(against("surf: d_t area identity", si.area_time_deriv, 1e-8));
    checks.push_back(against("surf: grad_G f . nu", si.grad_orthogonal, 1e-8));
    checks.push_back(against("surf: ibp residual", si.ibp, 1e-8));
    checks.push_back(against("surf: laplace expansion", si.laplace_expansion, 1e-8));

    TensionModel lin = TensionModel::linear(1.0, 0.25);
    lin.set_c0(1.0);
    const auto xc = xi_checks(lin, 1.0, seed);
    checks.push_back(against("xi: closed vs quadrature", xc.closed_vs_quadrature, 1e-10));
    checks.push_back(against("xi: legendre identity", xc.legendre, 1e-6));
    checks.push_back(against("xi: minimum at r", xc.min_at_r, 1e-12));
    checks.push_back(against("xi: convexity/lower bound", xc.convexity, 1e-10));
    checks.push_back(against("xi: strict monotonicity", xc.monotone, 0.0));

    auto g32 = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 32, DealiasRule::three_halves);
    const auto gc = geometry_checks(g32, 0.1, seed, 5, 0.15);
    checks.push_back(against("geom: harmonicity of P f", gc.harmonicity, 1e-8));
    checks.push_back(against("geom: trace of P f", gc.trace, 1e-13));
    checks.push_back(against("geom: jac det oracle", gc.jac_det_oracle, 1e-10));
    checks.push_back(against("geom: tilt oracle", gc.tilt_oracle, 1e-10));
    checks.push_back(against("geom: J K = 1", gc.jk_identity, 1e-10));
    checks.push_back(against("geom: dual matrix oracle", gc.dual_matrix, 1e-10));
    checks.push_back(against("geom: L-inf bound <= 1/2", gc.infinity_bound, 0.5));

    const auto tr0 = transport_residuals(g, 0, {1e-2, 5e-3, 2.5e-3}, seed);
    const auto tr1 = transport_residuals(g, 1, {1e-2, 5e-3, 2.5e-3}, seed);
    const double o0 = std::log2(tr0[0] / tr0[1]) / 1.0;
    const double o1 = std::log2(tr1[0] / tr1[1]);
    checks.push_back(at_least("transport: order, f = z", o0, 1.9));
    checks.push_back(at_least("transport: order, f = z^2/2", o1, 1.9));
    return checks;
}

std::vector<Check> budgets_suite(uint64_t seed) {
    std::vector<Check> checks;
    auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 16, 16, 16);
    TensionModel lin = TensionModel::linear(1.0, 0.25);
    lin.set_c0(1.0);
    const auto lc = linear_checks(g, lin, 0.5, 1e-2, 200, seed);
    checks.push_back(against("linear: stationary MMS", lc.mms_stationary, 1e-8));
    checks.push_back(against("linear: dirichlet MMS", lc.mms_dirichlet, 1e-8));
    checks.push_back(at_least("linear: dt order", lc.mms_dt_order, 0.9));
    checks.push_back(against("linear: spectral radius", lc.spectral_radius, 1.0 - 1e-12));
    checks.push_back(against("linear: energy increase", lc.energy_increase, 1e-12));
    checks.push_back(against("linear: decay vs eigenvalue", lc.decay_vs_eigen, 1e-2));

    checks.push_back(
        against("equilibrium: 200-step drift", equilibrium_drift(g, 1.0, 0.5, 1e-3, 200), 1e-11));

    // budget residual convergence on a coarse, short run
    RunConfig cfg;
    cfg.L1 = cfg.L2 = 2 * M_PI;
    cfg.N1 = cfg.N2 = 16;
    cfg.Nz = 16;
    cfg.gamma = 0.5;
    cfg.initial.eta_modes = {{1, 0, 1e-2, 0.0}};
    cfg.initial.ctilde_base = 1.0;
    cfg.t_end = 0.5;
    cfg.output_stride = 5;
    cfg.write_csv = cfg.write_json = false;
    cfg.directory = "/tmp/slick-verify-budgets";
    double res_coarse, res_fine, drift_coarse, drift_fine;
    {
        cfg.dt = 2e-3;
        const RunResult r = run_simulation(cfg);
        res_coarse = r.max_budget_residual;
        drift_coarse = r.mass_drift_rel;
    }
    {
        cfg.dt = 1e-3;
        const RunResult r = run_simulation(cfg);
        res_fine = r.max_budget_residual;
        drift_fine = r.mass_drift_rel;
    }
    checks.push_back(at_least("budget: residual dt-order", std::log2(res_coarse / res_fine), 0.9));
    checks.push_back(at_least("budget: mass-drift dt-order",
                              std::log2(drift_coarse / drift_fine), 0.9));
    return checks;
}

std::vector<Check> scaling_suite(uint64_t seed) {
    std::vector<Check> checks;
    auto g = make_grid(2 * M_PI, 2 * M_PI, 1.0, 32, 32, 24);
    const ScalingRatios r = scaling_ratios(g, 1e-2, seed);
    auto both = [&](const std::string& name, double v) {
        Check c;
        c.name = name;
        c.measured = v;
        c.tolerance = 4.4;
        c.pass = (v >= 3.6 && v <= 4.4);
        checks.push_back(c);
    };
    both("scaling: G1 ratio", r.g1);
    both("scaling: G2 ratio", r.g2);
    both("scaling: G3 ratio", r.g3);
    both("scaling: G4 ratio", r.g4);
    both("scaling: G5 ratio", r.g5);
    return checks;
}

int report(const std::vector<Check>& checks, std::ostream& out) {
    bool all = true;
    for (const auto& c : checks) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-34s measured %12.4e  tol %s%.4e  [%s]\n",
                      c.name.c_str(), c.measured, c.larger_is_fail ? "<= " : ">= ",
                      c.tolerance, c.pass ? "PASS" : "FAIL");
        out << buf;
        all = all && c.pass;
    }
    return all ? 0 : 1;
}

}  // namespace slick::verify
