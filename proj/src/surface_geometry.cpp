#include "slick/surface_geometry.hpp"

#include <cmath>

#include "slick/errors.hpp"

namespace slick {

SurfaceGeometry build_geometry(const SurfaceField& eta) {
    const auto g = eta.grid();
    SurfaceGeometry out;
    out.eta = eta;
    out.eta.finalize();
    out.deta1 = out.eta.deriv(1);
    out.deta2 = out.eta.deriv(2);

    out.p_deta1 = out.deta1.phys();
    out.p_deta2 = out.deta2.phys();
    const int np = g->nphys();
    out.p_area.resize(np);
    out.p_inv_area.resize(np);
    out.p_nu1.resize(np);
    out.p_nu2.resize(np);
    out.p_nu3.resize(np);

    double smax = 0.0;
    for (int q = 0; q < np; ++q) {
        const double e1 = out.p_deta1[q], e2 = out.p_deta2[q];
        const double s2 = e1 * e1 + e2 * e2;
        smax = std::max(smax, std::sqrt(s2));
        const double a = std::sqrt(1.0 + s2);
        out.p_area[q] = a;
        out.p_inv_area[q] = 1.0 / a;
        out.p_nu1[q] = -e1 / a;
        out.p_nu2[q] = -e2 / a;
        out.p_nu3[q] = 1.0 / a;
    }
    out.max_slope = smax;
    if (smax >= kSlopeHardLimit)
        throw SlopeTooLarge("build_geometry: max |grad eta| = " + std::to_string(smax));
    out.slope_warning = smax >= kSlopeSoftLimit;

    out.area_element = SurfaceField::from_phys(g, out.p_area);
    out.nu[0] = SurfaceField::from_phys(g, out.p_nu1);
    out.nu[1] = SurfaceField::from_phys(g, out.p_nu2);
    out.nu[2] = SurfaceField::from_phys(g, out.p_nu3);
    out.normal_n[0] = -1.0 * out.deta1;
    out.normal_n[1] = -1.0 * out.deta2;
    out.normal_n[2] = SurfaceField(g);
    out.normal_n[2][0] = 1.0;

    // H = div_*(grad eta / area); the ratio is formed pointwise then re-truncated
    std::vector<double> r1(np), r2(np);
    for (int q = 0; q < np; ++q) {
        r1[q] = out.p_deta1[q] * out.p_inv_area[q];
        r2[q] = out.p_deta2[q] * out.p_inv_area[q];
    }
    out.curv = SurfaceField::from_phys(g, r1).deriv(1) + SurfaceField::from_phys(g, r2).deriv(2);

    // H - lap eta = lap eta (1/area - 1) - (grad eta . grad) grad eta . grad eta / area^3
    const auto e11 = out.eta.deriv(1, 2).phys();
    const auto e22 = out.eta.deriv(2, 2).phys();
    const auto e12 = out.deta1.deriv(2).phys();
    std::vector<double> rem(np);
    for (int q = 0; q < np; ++q) {
        const double e1 = out.p_deta1[q], e2 = out.p_deta2[q];
        const double s2 = e1 * e1 + e2 * e2;
        const double a = out.p_area[q], ia = out.p_inv_area[q];
        const double lap = e11[q] + e22[q];
        const double quad = e1 * e1 * e11[q] + 2.0 * e1 * e2 * e12[q] + e2 * e2 * e22[q];
        rem[q] = -lap * s2 / (a * (1.0 + a)) - quad * ia * ia * ia;
    }
    out.curv_remainder = SurfaceField::from_phys(g, rem);
    return out;
}

namespace {
// dGamma_i applied to f, all three components share nu_* . grad_* f
std::array<SurfaceField, 3> dgamma_all(const SurfaceField& f, const SurfaceGeometry& g) {
    const auto gr = f.grid();
    const int np = gr->nphys();
    const auto f1 = f.deriv(1).phys();
    const auto f2 = f.deriv(2).phys();
    std::vector<double> t(np), o1(np), o2(np), o3(np);
    for (int q = 0; q < np; ++q) t[q] = g.p_nu1[q] * f1[q] + g.p_nu2[q] * f2[q];
    for (int q = 0; q < np; ++q) {
        o1[q] = f1[q] - g.p_nu1[q] * t[q];
        o2[q] = f2[q] - g.p_nu2[q] * t[q];
        o3[q] = -g.p_nu3[q] * t[q];
    }
    return {SurfaceField::from_phys(gr, o1), SurfaceField::from_phys(gr, o2),
            SurfaceField::from_phys(gr, o3)};
}
}  // namespace

std::array<SurfaceField, 3> grad_gamma(const SurfaceField& f, const SurfaceGeometry& g) {
    return dgamma_all(f, g);
}

SurfaceField div_gamma(const std::array<SurfaceField, 3>& X, const SurfaceGeometry& g) {
    const auto gr = X[0].grid();
    const int np = gr->nphys();
    std::vector<double> acc(np, 0.0);
    for (int i = 0; i < 3; ++i) {
        const auto xi1 = X[i].deriv(1).phys();
        const auto xi2 = X[i].deriv(2).phys();
        const double* nui = (i == 0) ? g.p_nu1.data() : (i == 1) ? g.p_nu2.data() : g.p_nu3.data();
        for (int q = 0; q < np; ++q) {
            const double t = g.p_nu1[q] * xi1[q] + g.p_nu2[q] * xi2[q];
            if (i < 2) acc[q] += ((i == 0) ? xi1[q] : xi2[q]) - nui[q] * t;
            else acc[q] += -nui[q] * t;
        }
    }
    return SurfaceField::from_phys(gr, acc);
}

SurfaceField laplace_gamma(const SurfaceField& f, const SurfaceGeometry& g) {
    return div_gamma(grad_gamma(f, g), g);
}

double ibp_residual(const SurfaceField& f, const SurfaceField& g, const SurfaceGeometry& geom,
                    int i) {
    if (i < 1 || i > 3) throw Error("ibp_residual: i must be 1, 2 or 3");
    const auto gr = f.grid();
    const int np = gr->nphys();
    const auto df = dgamma_all(f, geom);
    const auto dg = dgamma_all(g, geom);
    const auto pf = f.phys();
    const auto pg = g.phys();
    const auto pdf = df[i - 1].phys();
    const auto pdg = dg[i - 1].phys();
    const auto ph = geom.curv.phys();
    const double* nui = (i == 1)   ? geom.p_nu1.data()
                        : (i == 2) ? geom.p_nu2.data()
                                   : geom.p_nu3.data();
    std::vector<double> integrand(np);
    for (int q = 0; q < np; ++q)
        integrand[q] = pdf[q] * pg[q] + pf[q] * pdg[q] + pf[q] * pg[q] * nui[q] * ph[q];
    return integrate_weighted(geom, integrand);
}

double integrate_weighted(const SurfaceGeometry& g, const std::vector<double>& values) {
    const auto& gr = *g.eta.grid();
    double acc = 0.0;
    for (int q = 0; q < gr.nphys(); ++q) acc += values[q] * g.p_area[q];
    return acc * gr.area() / gr.nphys();
}

}  // namespace slick
