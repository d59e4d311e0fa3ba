#include "slick/diagnostics.hpp"

#include <cmath>

#include "slick/errors.hpp"

namespace slick {

double surfactant_mass(const FlowState& s) {
    const auto& g = *s.grid();
    const auto c = s.ctilde.phys();
    const auto d1 = s.eta.deriv(1).phys();
    const auto d2 = s.eta.deriv(2).phys();
    double acc = 0.0;
    for (int q = 0; q < g.nphys(); ++q)
        acc += c[q] * std::sqrt(1.0 + d1[q] * d1[q] + d2[q] * d2[q]);
    return acc * g.area() / g.nphys();
}

void physical_budget(const FlowState& s, const GeometryPack& pack, const SurfaceGeometry& geom,
                     const TensionModel& model, double gamma, BudgetSample& out) {
    const auto& g = *s.grid();
    const int np = g.nphys();
    const int nz = g.Nz;
    out.t = s.t;
    out.eta_mean = s.eta.mean();

    // kinetic energy int |u|^2 J / 2 and dissipation int J |D_A u|^2 / 2
    {
        std::array<std::vector<double>, 3> up;
        for (int i = 0; i < 3; ++i) up[i] = s.u[i].phys();
        const auto DA = mapped_sym_grad(pack, s.u);
        std::array<std::vector<double>, 6> dap;
        for (int i = 0; i < 6; ++i) dap[i] = DA[i].phys();

        double ek = 0.0, dk = 0.0;
        for (int j = 0; j < nz; ++j) {
            const double w = g.zw()[j];
            double ekj = 0.0, dkj = 0.0;
            for (int q = 0; q < np; ++q) {
                const size_t idx = static_cast<size_t>(j) * np + q;
                const double J = pack.p_jac[idx];
                const double uu = up[0][idx] * up[0][idx] + up[1][idx] * up[1][idx] +
                                  up[2][idx] * up[2][idx];
                // |D_A u|^2 over all 9 entries; off-diagonals appear twice
                const double dd = dap[0][idx] * dap[0][idx] + dap[1][idx] * dap[1][idx] +
                                  dap[2][idx] * dap[2][idx] +
                                  2.0 * (dap[3][idx] * dap[3][idx] + dap[4][idx] * dap[4][idx] +
                                         dap[5][idx] * dap[5][idx]);
                ekj += J * uu;
                dkj += J * dd;
            }
            ek += w * ekj;
            dk += w * dkj;
        }
        const double cell = g.area() / np;
        out.e_phys = 0.5 * ek * cell;
        out.d_phys = 0.5 * dk * cell;
    }

    // surface terms
    {
        const auto etap = s.eta.phys();
        const auto ctp = s.ctilde.phys();
        const double c0 = model.c0();
        std::vector<double> xi_v(np), ent_v(np);
        const auto gg = grad_gamma(s.ctilde, geom);
        std::array<std::vector<double>, 3> ggp;
        for (int i = 0; i < 3; ++i) ggp[i] = gg[i].phys();
        double epot = 0.0;
        for (int q = 0; q < np; ++q) {
            epot += etap[q] * etap[q];
            xi_v[q] = model.xi(c0, ctp[q]);
            const double grad2 = ggp[0][q] * ggp[0][q] + ggp[1][q] * ggp[1][q] +
                                 ggp[2][q] * ggp[2][q];
            ent_v[q] = gamma * model.xi_second(c0, ctp[q]) * grad2;
        }
        out.e_phys += 0.5 * epot * g.area() / np;
        out.e_phys += integrate_weighted(geom, xi_v) - model.sigma0() * g.area();
        out.d_phys += integrate_weighted(geom, ent_v);
    }

    out.mass = surfactant_mass(s);
}

std::vector<double> budget_residual(const std::vector<BudgetSample>& hist) {
    if (hist.size() < 3) throw Error("budget_residual: need at least 3 samples");
    std::vector<double> out(hist.size() - 2);
    for (size_t i = 1; i + 1 < hist.size(); ++i) {
        const double dt1 = hist[i + 1].t - hist[i - 1].t;
        out[i - 1] = (hist[i + 1].e_phys - hist[i - 1].e_phys) / dt1 + hist[i].d_phys;
    }
    return out;
}

namespace {
double sq(double x) { return x * x; }

double bulk_vec_hk(const std::array<BulkField, 3>& u, int k) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += sq(sobolev_norm_bulk(u[i], k));
    return acc;
}
}  // namespace

SobolevPair sobolev_functionals(const FlowState& s, const TensionModel& model,
                                const FlowState* prev, const FlowState* prevprev, double dt) {
    SobolevPair out;
    const SurfaceField c = s.c(model.c0());

    // instantaneous pieces
    out.energy = bulk_vec_hk(s.u, 2) + sq(sobolev_norm_bulk(s.p, 1)) +
                 sq(sobolev_norm_surface(s.eta, 3.0)) + sq(sobolev_norm_surface(c, 2.0));
    out.dissipation = bulk_vec_hk(s.u, 3) + sq(sobolev_norm_bulk(s.p, 2)) +
                      sq(sobolev_norm_surface(s.eta, 3.5)) + sq(sobolev_norm_surface(c, 3.0));

    if (!prev) {
        out.partial = true;
        return out;
    }
    // first backward differences
    std::array<BulkField, 3> dtu;
    for (int i = 0; i < 3; ++i) dtu[i] = (1.0 / dt) * (s.u[i] - prev->u[i]);
    const SurfaceField dteta = (1.0 / dt) * (s.eta - prev->eta);
    const SurfaceField dtc = (1.0 / dt) * (s.ctilde - prev->ctilde);
    out.energy += bulk_vec_hk(dtu, 0) + sq(sobolev_norm_surface(dteta, 1.5)) +
                  sq(sobolev_norm_surface(dtc, 0.0));
    out.dissipation += bulk_vec_hk(dtu, 1) + sq(sobolev_norm_surface(dteta, 2.5)) +
                       sq(sobolev_norm_surface(dtc, 1.0));

    if (!prevprev) {
        out.partial = true;
        return out;
    }
    SurfaceField dt2eta = (1.0 / (dt * dt)) * (s.eta - 2.0 * prev->eta + prevprev->eta);
    out.energy += sq(sobolev_norm_surface(dt2eta, -0.5));
    out.dissipation += sq(sobolev_norm_surface(dt2eta, 0.5));
    return out;
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& e,
                   double skip_fraction) {
    if (t.size() != e.size() || t.size() < 3) throw FitDomainError("decay_fit: bad series");
    const size_t start = static_cast<size_t>(skip_fraction * t.size());
    std::vector<double> x, y;
    for (size_t i = start; i < t.size(); ++i) {
        if (e[i] <= 0.0) throw FitDomainError("decay_fit: nonpositive energy in fit window");
        x.push_back(t[i]);
        y.push_back(std::log(e[i]));
    }
    if (x.size() < 3) throw FitDomainError("decay_fit: window too small");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    DecayFit fit;
    fit.lambda = -slope;
    const double ss_tot = syy - sy * sy / n;
    if (ss_tot <= 0.0) {
        fit.r_squared = 1.0;  // constant series: perfect fit, lambda 0
        if (std::abs(slope) < 1e-14) fit.lambda = std::abs(slope);
        return fit;
    }
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0.0;
    for (size_t i = 0; i < x.size(); ++i) ss_res += sq(y[i] - (intercept + slope * x[i]));
    fit.r_squared = 1.0 - ss_res / ss_tot;
    return fit;
}

MeanCCheck mean_c_check(const FlowState& s, const TensionModel& model) {
    MeanCCheck out;
    const auto& g = *s.grid();
    const SurfaceField c = s.c(model.c0());
    out.mean_c_abs = std::abs(integrate_surface(c));
    const auto cp = c.phys();
    const auto d1 = s.eta.deriv(1).phys();
    const auto d2 = s.eta.deriv(2).phys();
    double acc = 0.0;
    for (int q = 0; q < g.nphys(); ++q) {
        const double s2 = d1[q] * d1[q] + d2[q] * d2[q];
        const double am1 = s2 / (1.0 + std::sqrt(1.0 + s2));  // sqrt(1+s2) - 1
        acc += (model.c0() + cp[q]) * (-am1);
    }
    out.identity_rhs = acc * g.area() / g.nphys();
    return out;
}

}  // namespace slick
