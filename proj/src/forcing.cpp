#include "slick/forcing.hpp"

#include <cmath>

#include "slick/errors.hpp"

namespace slick {

SurfaceField surface_div_defect(const std::array<SurfaceField, 3>& utrace,
                                const SurfaceGeometry& geom) {
    const auto g = utrace[0].grid();
    const int np = g->nphys();
    std::vector<double> acc(np, 0.0);
    for (int i = 0; i < 3; ++i) {
        const auto d1 = utrace[i].deriv(1).phys();
        const auto d2 = utrace[i].deriv(2).phys();
        const double* nui =
            (i == 0) ? geom.p_nu1.data() : (i == 1) ? geom.p_nu2.data() : geom.p_nu3.data();
        for (int q = 0; q < np; ++q)
            acc[q] -= nui[q] * (geom.p_nu1[q] * d1[q] + geom.p_nu2[q] * d2[q]);
    }
    return SurfaceField::from_phys(g, acc);
}

ForcingPack eval_G(const FlowState& state, const GeometryPack& pack, const SurfaceGeometry& geom,
                   const TensionModel& model, double gamma) {
    const auto gp = state.grid();
    const Grid& g = *gp;
    const int np = g.nphys();
    const int nz = g.Nz;
    const size_t nb = static_cast<size_t>(np) * nz;

    // ---- bulk physical caches ----
    const auto p3 = state.p.deriv_z(1).phys();
    std::array<std::vector<double>, 3> u, d1u, d2u, d3u, d33u, d13u, d23u;
    std::array<BulkField, 3> d3u_f;
    for (int i = 0; i < 3; ++i) {
        u[i] = state.u[i].phys();
        d1u[i] = state.u[i].deriv_h(1).phys();
        d2u[i] = state.u[i].deriv_h(2).phys();
        d3u_f[i] = state.u[i].deriv_z(1);
        d3u[i] = d3u_f[i].phys();
        d33u[i] = state.u[i].deriv_z(2).phys();
        d13u[i] = d3u_f[i].deriv_h(1).phys();
        d23u[i] = d3u_f[i].deriv_h(2).phys();
    }

    // d_t eta from the kinematic relation, extended harmonically
    std::array<SurfaceField, 3> utr = {state.u[0].trace_top(), state.u[1].trace_top(),
                                       state.u[2].trace_top()};
    SurfaceField dteta(gp);
    {
        const auto t1 = utr[0].phys();
        const auto t2 = utr[1].phys();
        const auto t3 = utr[2].phys();
        std::vector<double> v(np);
        for (int q = 0; q < np; ++q)
            v[q] = t3[q] - t1[q] * geom.p_deta1[q] - t2[q] * geom.p_deta2[q];
        dteta = SurfaceField::from_phys(gp, v);
    }
    const auto dteta_ext = poisson_extend(dteta).phys();

    ForcingPack out;

    // ---- G1, G2 ----
    std::array<std::vector<double>, 3> g1v;
    std::vector<double> g2v(nb);
    for (int i = 0; i < 3; ++i) g1v[i].resize(nb);
    for (size_t q = 0; q < nb; ++q) {
        const double A = pack.p_tilt1[q], B = pack.p_tilt2[q];
        const double J = pack.p_jac[q], K = pack.p_invjac[q];
        const double AK = pack.p_a_k[q], BK = pack.p_b_k[q];
        const double Jm1 = J - 1.0;
        const double oneMinusK = Jm1 * K;
        const double visc2 = K * K * (A * A + B * B - Jm1 * (J + 1.0));  // K^2(1+A^2+B^2)-1
        const double fo = pack.p_first_order[q];
        const double dte = dteta_ext[q] * pack.p_dt_profile[q];
        for (int i = 0; i < 3; ++i) {
            const double pressure =
                (i == 0) ? AK * p3[q] : (i == 1) ? BK * p3[q] : oneMinusK * p3[q];
            const double adv = u[0][q] * (d1u[i][q] - AK * d3u[i][q]) +
                               u[1][q] * (d2u[i][q] - BK * d3u[i][q]) +
                               u[2][q] * K * d3u[i][q];
            const double visc =
                visc2 * d33u[i][q] - 2.0 * AK * d13u[i][q] - 2.0 * BK * d23u[i][q];
            g1v[i][q] = pressure - adv + visc + fo * d3u[i][q] + dte * d3u[i][q];
        }
        g2v[q] = AK * d3u[0][q] + BK * d3u[1][q] + oneMinusK * d3u[2][q];
    }
    for (int i = 0; i < 3; ++i) out.g1[i] = BulkField::from_phys(gp, g1v[i]);
    out.g2 = BulkField::from_phys(gp, g2v);

    // ---- surface caches (top planes of the bulk caches are the traces) ----
    auto top = [np](const std::vector<double>& v) {
        return std::vector<double>(v.begin(), v.begin() + np);
    };
    const auto ptr = state.p.trace_top().phys();
    std::array<std::vector<double>, 3> tu, t1u, t2u, t3u;
    for (int i = 0; i < 3; ++i) {
        tu[i] = top(u[i]);
        t1u[i] = top(d1u[i]);
        t2u[i] = top(d2u[i]);
        t3u[i] = top(d3u[i]);
    }
    const auto eta_p = geom.eta.phys();
    const SurfaceField cfield = state.c(model.c0());
    const auto c_p = cfield.phys();
    const auto c1_p = cfield.deriv(1).phys();
    const auto c2_p = cfield.deriv(2).phys();
    const auto lap_eta_p = (geom.eta.deriv(1, 2) + geom.eta.deriv(2, 2)).phys();
    const auto curv_rem_p = geom.curv_remainder.phys();

    const double c0 = model.c0();
    const double sigma0 = model.sigma0();
    const double sigma0p = model.sigma0_prime();

    // ---- G3 ----
    std::array<std::vector<double>, 3> g3v;
    for (int i = 0; i < 3; ++i) g3v[i].assign(np, 0.0);
    for (int q = 0; q < np; ++q) {
        const double A = pack.p_tilt1[q], K = pack.p_invjac[q];
        const double B = pack.p_tilt2[q];
        const double AK = pack.p_a_k[q], BK = pack.p_b_k[q];
        const double e1 = geom.p_deta1[q], e2 = geom.p_deta2[q];
        const double area = geom.p_area[q];
        const double ct = c0 + c_p[q];
        if (!model.in_window(ct))
            throw OutOfRange("eval_G: concentration left the tension validity window");
        const double sig = model.sigma(ct);
        const double dsig = model.dsigma(ct);
        (void)A;
        (void)B;

        // velocity/pressure block
        const double pe = ptr[q] - eta_p[q];
        const double mix = -t2u[0][q] - t1u[1][q] + BK * t3u[0][q] + AK * t3u[1][q];
        const double v1[3] = {pe - 2.0 * (t1u[0][q] - AK * t3u[0][q]), mix,
                              -t1u[2][q] - K * t3u[0][q] + AK * t3u[2][q]};
        const double v2[3] = {mix, pe - 2.0 * (t2u[1][q] - BK * t3u[1][q]),
                              -t2u[2][q] - K * t3u[1][q] + BK * t3u[2][q]};
        const double w[3] = {(K - 1.0) * t3u[0][q] - AK * t3u[2][q],
                             (K - 1.0) * t3u[1][q] - BK * t3u[2][q],
                             2.0 * (K - 1.0) * t3u[2][q]};

        // curvature / tension remainder block (enters with a minus sign)
        const double nvec[3] = {-e1, -e2, 1.0};
        const double sdiff = sig - sigma0;
        double curvb[3];
        for (int i = 0; i < 3; ++i)
            curvb[i] = sdiff * lap_eta_p[q] * (i == 2 ? 1.0 : 0.0) +
                       sig * curv_rem_p[q] * nvec[i] +
                       sig * lap_eta_p[q] * (i == 2 ? 0.0 : nvec[i]);

        // Marangoni remainder: horizontal part with minus, vertical part with plus
        const double tgrad = geom.p_nu1[q] * c1_p[q] + geom.p_nu2[q] * c2_p[q];
        const double am1 = (e1 * e1 + e2 * e2) / (1.0 + area);
        double marb[3] = {0.0, 0.0, 0.0};
        const double cg[2] = {c1_p[q], c2_p[q]};
        for (int i = 0; i < 2; ++i) {
            const double nui = (i == 0) ? geom.p_nu1[q] : geom.p_nu2[q];
            marb[i] = am1 * dsig * cg[i] + (dsig - sigma0p) * cg[i] +
                      area * dsig * (-nui * tgrad);
        }
        const double vert = dsig * tgrad;

        for (int i = 0; i < 3; ++i)
            g3v[i][q] = e1 * v1[i] + e2 * v2[i] + w[i] - curvb[i] - marb[i] +
                        (i == 2 ? vert : 0.0);
    }
    for (int i = 0; i < 3; ++i) out.g3[i] = SurfaceField::from_phys(gp, g3v[i]);

    // ---- G4 ----
    {
        std::vector<double> v(np);
        for (int q = 0; q < np; ++q)
            v[q] = -geom.p_deta1[q] * tu[0][q] - geom.p_deta2[q] * tu[1][q];
        out.g4 = SurfaceField::from_phys(gp, v);
    }

    // ---- G5 ----
    {
        const SurfaceField divdef = surface_div_defect(utr, geom);
        const auto divdef_p = divdef.phys();
        const SurfaceField lapG = laplace_gamma(cfield, geom);
        const auto lap_diff_p = (lapG - (cfield.deriv(1, 2) + cfield.deriv(2, 2))).phys();
        std::vector<double> v(np);
        for (int q = 0; q < np; ++q) {
            const double divs = t1u[0][q] + t2u[1][q];
            const double divG = divs + divdef_p[q];
            v[q] = -(tu[0][q] * c1_p[q] + tu[1][q] * c2_p[q]) - c_p[q] * divG +
                   gamma * lap_diff_p[q] - c0 * divdef_p[q];
        }
        out.g5 = SurfaceField::from_phys(gp, v);
    }
    return out;
}

ForcingNorms forcing_norms(const ForcingPack& f) {
    ForcingNorms n{};
    for (int i = 0; i < 3; ++i) {
        const double a = l2_bulk(f.g1[i]);
        const double b = l2_surface(f.g3[i]);
        n.g1 += a * a;
        n.g3 += b * b;
    }
    n.g1 = std::sqrt(n.g1);
    n.g3 = std::sqrt(n.g3);
    n.g2 = l2_bulk(f.g2);
    n.g4 = l2_surface(f.g4);
    n.g5 = l2_surface(f.g5);
    return n;
}

}  // namespace slick
