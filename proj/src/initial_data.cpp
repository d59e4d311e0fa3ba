#include "slick/initial_data.hpp"

#include <cmath>

#include "slick/errors.hpp"
#include "slick/geometry_pack.hpp"
#include "slick/stokes.hpp"
#include "slick/surface_geometry.hpp"

namespace slick {

SurfaceField field_from_modes(GridPtr grid, const std::vector<ModeAmp>& modes) {
    SurfaceField f(grid);
    const Grid& g = *grid;
    for (const auto& m : modes) {
        if (std::abs(m.k1) >= g.N1 / 2 || std::abs(m.k2) >= g.N2 / 2)
            throw ConfigError("initial mode outside the resolvable band");
        if (m.k1 == 0 && m.k2 == 0) {
            f[0] += m.amp * std::cos(m.phase);
            continue;
        }
        const int i = (m.k1 >= 0) ? m.k1 : g.N1 + m.k1;
        const int j = (m.k2 >= 0) ? m.k2 : g.N2 + m.k2;
        const cplx half = 0.5 * m.amp * std::exp(cplx(0.0, m.phase));
        f[i * g.N2 + j] += half;
        const int ic = (g.N1 - i) % g.N1;
        const int jc = (g.N2 - j) % g.N2;
        f[ic * g.N2 + jc] += std::conj(half);
    }
    f.finalize();
    return f;
}

namespace {

// Pi0 v = v - (v . N) N / |N|^2, pointwise on the evaluation grid
std::array<std::vector<double>, 3> project_tangent(const SurfaceGeometry& geom,
                                                   const std::array<std::vector<double>, 3>& v) {
    const size_t np = v[0].size();
    std::array<std::vector<double>, 3> out;
    for (auto& o : out) o.resize(np);
    for (size_t q = 0; q < np; ++q) {
        const double n1 = -geom.p_deta1[q], n2 = -geom.p_deta2[q], n3 = 1.0;
        const double nn = n1 * n1 + n2 * n2 + n3 * n3;
        const double dot = v[0][q] * n1 + v[1][q] * n2 + v[2][q] * n3;
        out[0][q] = v[0][q] - dot * n1 / nn;
        out[1][q] = v[1][q] - dot * n2 / nn;
        out[2][q] = v[2][q] - dot * n3 / nn;
    }
    return out;
}

// Pi0 (D_A u N) at the top plane, physical arrays
std::array<std::vector<double>, 3> stress_trace(const GeometryPack& pack,
                                                const SurfaceGeometry& geom,
                                                const std::array<BulkField, 3>& u) {
    const auto DA = mapped_sym_grad(pack, u);
    // rows of the symmetric matrix: (11,22,33,12,13,23) -> index helper
    auto entry = [&](int i, int j) -> const BulkField& {
        if (i == j) return DA[i];
        if ((i == 0 && j == 1) || (i == 1 && j == 0)) return DA[3];
        if ((i == 0 && j == 2) || (i == 2 && j == 0)) return DA[4];
        return DA[5];
    };
    std::array<std::vector<double>, 3> Mv;
    const int np = pack.grid->nphys();
    for (int i = 0; i < 3; ++i) {
        Mv[i].assign(np, 0.0);
        for (int j = 0; j < 3; ++j) {
            const auto tr = entry(i, j).trace_top().phys();
            const double* nj = (j == 0)   ? geom.p_deta1.data()
                               : (j == 1) ? geom.p_deta2.data()
                                          : nullptr;
            for (int q = 0; q < np; ++q) {
                const double Nj = (j == 2) ? 1.0 : -nj[q];
                Mv[i][q] += tr[q] * Nj;
            }
        }
    }
    return project_tangent(geom, Mv);
}

// sqrt(1+|grad eta|^2) sigma'(ctilde) grad_Gamma ctilde, projected
std::array<std::vector<double>, 3> marangoni_target(const SurfaceGeometry& geom,
                                                    const TensionModel& model,
                                                    const SurfaceField& ctilde) {
    const auto gg = grad_gamma(ctilde, geom);
    const auto ct = ctilde.phys();
    std::array<std::vector<double>, 3> T;
    const int np = static_cast<int>(ct.size());
    for (int i = 0; i < 3; ++i) {
        const auto gi = gg[i].phys();
        T[i].resize(np);
        for (int q = 0; q < np; ++q) T[i][q] = geom.p_area[q] * model.dsigma(ct[q]) * gi[q];
    }
    return project_tangent(geom, T);
}

double vec_l2(const GridPtr& g, const std::array<std::vector<double>, 3>& v) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (double x : v[i]) acc += x * x;
    return std::sqrt(acc * g->area() / g->nphys());
}

}  // namespace

double compatibility_residual(const FlowState& state, const TensionModel& model) {
    const auto geom = build_geometry(state.eta);
    const auto pack = build_geometry_pack(state.eta);
    const auto M = stress_trace(pack, geom, state.u);
    const auto T = marangoni_target(geom, model, state.ctilde);
    std::array<std::vector<double>, 3> diff;
    for (int i = 0; i < 3; ++i) {
        diff[i].resize(M[i].size());
        for (size_t q = 0; q < M[i].size(); ++q) diff[i][q] = M[i][q] - T[i][q];
    }
    const double r1 = vec_l2(state.grid(), diff);
    const double r2 = l2_bulk(mapped_div(pack, state.u));
    double r3sq = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double n = l2_surface(state.u[i].trace_bottom());
        r3sq += n * n;
    }
    return r1 + r2 + std::sqrt(r3sq);
}

InitialData make_initial_data(GridPtr grid, const InitialSpec& spec, TensionModel& model,
                              bool allow_fallback) {
    InitialData out;
    out.state = FlowState(grid);

    SurfaceField eta = field_from_modes(grid, spec.eta_modes);
    out.eta_shift = eta.mean();
    eta.subtract_mean();
    out.state.eta = eta;

    SurfaceField rel = field_from_modes(grid, spec.ctilde_modes);
    {
        auto relp = rel.phys();
        std::vector<double> v(relp.size());
        for (size_t q = 0; q < v.size(); ++q) v[q] = spec.ctilde_base * (1.0 + relp[q]);
        out.state.ctilde = SurfaceField::from_phys(grid, v);
    }

    out.c0 = equilibrium_concentration(eta, out.state.ctilde);
    model.set_c0(out.c0);

    const auto geom = build_geometry(eta);
    const auto pack = build_geometry_pack(eta);

    if (spec.u0 == U0Mode::stokes_compatible) {
        const auto T = marangoni_target(geom, model, out.state.ctilde);
        const double tscale = std::max(1.0, vec_l2(grid, T));
        std::array<SurfaceField, 3> alpha;
        for (int i = 0; i < 3; ++i) {
            std::vector<double> neg(T[i].size());
            for (size_t q = 0; q < neg.size(); ++q) neg[q] = -T[i][q];
            alpha[i] = SurfaceField::from_phys(grid, neg);
        }
        std::array<BulkField, 3> fzero = {BulkField(grid), BulkField(grid), BulkField(grid)};
        BulkField h(grid);
        bool converged = false;
        std::array<BulkField, 3> u_best = fzero;
        for (int it = 0; it < 50; ++it) {
            const StokesSolution sol = solve_stokes_stress(fzero, h, alpha);
            const auto M = stress_trace(pack, geom, sol.u);
            std::array<std::vector<double>, 3> delta;
            for (int i = 0; i < 3; ++i) {
                delta[i].resize(M[i].size());
                for (size_t q = 0; q < M[i].size(); ++q) delta[i][q] = M[i][q] - T[i][q];
            }
            const double res = vec_l2(grid, delta) + l2_bulk(mapped_div(pack, sol.u));
            u_best = sol.u;
            if (res < 1e-10 * tscale) {
                converged = true;
                break;
            }
            for (int i = 0; i < 3; ++i)
                alpha[i] += SurfaceField::from_phys(grid, delta[i]);
            h = divergence_forcing(pack, sol.u);
        }
        if (!converged) {
            if (!allow_fallback)
                throw CompatibilityFailed("make_initial_data: stress fixed point stalled");
            out.stokes_fallback = true;
        } else {
            out.state.u = u_best;
        }
    }

    // initial pressure from one stationary stress solve at leading order
    {
        std::array<SurfaceField, 3> alpha_p;
        const SurfaceField cpert = out.state.c(out.c0);
        alpha_p[0] = -model.sigma0_prime() * cpert.deriv(1);
        alpha_p[1] = -model.sigma0_prime() * cpert.deriv(2);
        alpha_p[2] = eta + model.sigma0() * (eta.deriv(1, 2) + eta.deriv(2, 2));
        std::array<BulkField, 3> fzero = {BulkField(grid), BulkField(grid), BulkField(grid)};
        const BulkField h = divergence_forcing(pack, out.state.u);
        const StokesSolution sol = solve_stokes_stress(fzero, h, alpha_p);
        out.state.p = sol.p;
    }

    out.state.t = 0.0;
    out.compat_residual = compatibility_residual(out.state, model);
    return out;
}

}  // namespace slick
