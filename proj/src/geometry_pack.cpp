#include "slick/geometry_pack.hpp"

#include <cmath>

#include "slick/errors.hpp"

namespace slick {

namespace {
// multiply each collocation plane by a scalar profile value (exact, no aliasing)
BulkField scale_planes(const BulkField& f, const std::vector<double>& prof) {
    BulkField out(f.grid());
    const auto& g = *f.grid();
    for (int m = 0; m < g.nmodes(); ++m)
        for (int j = 0; j < g.Nz; ++j) out.at(m, j) = f.at(m, j) * prof[j];
    return out;
}

std::vector<double> phys_all(const BulkField& f) { return f.phys(); }
}  // namespace

GeometryPack build_geometry_pack(const SurfaceField& eta_in) {
    GeometryPack p;
    p.grid = eta_in.grid();
    const auto& g = *p.grid;
    const double b = g.depth;
    const int np = g.nphys();
    const int nz = g.Nz;

    SurfaceField eta = eta_in;
    eta.finalize();
    eta.subtract_mean();

    std::vector<double> btilde(nz);
    for (int j = 0; j < nz; ++j) btilde[j] = 1.0 + g.z()[j] / b;

    p.eta_ext = poisson_extend(eta);
    const BulkField d1e = poisson_extend_deriv(eta, 0, 1, 1);
    const BulkField d2e = poisson_extend_deriv(eta, 0, 2, 1);
    const BulkField d3e = poisson_extend_deriv(eta, 1);

    p.tilt1 = scale_planes(d1e, btilde);
    p.tilt2 = scale_planes(d2e, btilde);
    p.jac = (1.0 / b) * p.eta_ext + scale_planes(d3e, btilde);
    for (int j = 0; j < nz; ++j) p.jac.at(0, j) += 1.0;

    p.p_tilt1 = phys_all(p.tilt1);
    p.p_tilt2 = phys_all(p.tilt2);
    p.p_jac = phys_all(p.jac);

    double jmin = p.p_jac[0];
    for (double v : p.p_jac) jmin = std::min(jmin, v);
    p.min_jac = jmin;
    if (jmin <= 0.0)
        throw DegenerateMap("build_geometry_pack: det grad Theta <= 0 (min " +
                            std::to_string(jmin) + ")");
    p.jac_warning = jmin < kJacSoftLimit;

    p.p_invjac.resize(p.p_jac.size());
    p.p_a_k.resize(p.p_jac.size());
    p.p_b_k.resize(p.p_jac.size());
    p.p_dt_profile.resize(p.p_jac.size());
    for (size_t i = 0; i < p.p_jac.size(); ++i) {
        const double K = 1.0 / p.p_jac[i];
        p.p_invjac[i] = K;
        p.p_a_k[i] = p.p_tilt1[i] * K;
        p.p_b_k[i] = p.p_tilt2[i] * K;
        p.p_dt_profile[i] = btilde[i / np] * K;
    }
    p.invjac = BulkField::from_phys(p.grid, p.p_invjac);

    // first-order coefficient of the momentum remainder:
    //   -K^3 (1 + A^2 + B^2) d3J + A K^2 (d1J + d3A) + B K^2 (d2J + d3B) - K (d1A + d2B)
    const auto d1J = phys_all((1.0 / b) * d1e + scale_planes(poisson_extend_deriv(eta, 1, 1, 1), btilde));
    const auto d2J = phys_all((1.0 / b) * d2e + scale_planes(poisson_extend_deriv(eta, 1, 2, 1), btilde));
    const auto d3J = phys_all((2.0 / b) * d3e + scale_planes(poisson_extend_deriv(eta, 2), btilde));
    const auto d3A = phys_all((1.0 / b) * d1e + scale_planes(poisson_extend_deriv(eta, 1, 1, 1), btilde));
    const auto d3B = phys_all((1.0 / b) * d2e + scale_planes(poisson_extend_deriv(eta, 1, 2, 1), btilde));
    const auto d1A = phys_all(scale_planes(poisson_extend_deriv(eta, 0, 1, 2), btilde));
    const auto d2B = phys_all(scale_planes(poisson_extend_deriv(eta, 0, 2, 2), btilde));

    p.p_first_order.resize(p.p_jac.size());
    for (size_t i = 0; i < p.p_jac.size(); ++i) {
        const double A = p.p_tilt1[i], B = p.p_tilt2[i], K = p.p_invjac[i];
        p.p_first_order[i] = -K * K * K * (1.0 + A * A + B * B) * d3J[i] +
                             A * K * K * (d1J[i] + d3A[i]) + B * K * K * (d2J[i] + d3B[i]) -
                             K * (d1A[i] + d2B[i]);
    }
    return p;
}

std::array<BulkField, 3> mapped_grad(const GeometryPack& p, const BulkField& f) {
    const auto& g = *p.grid;
    const int np = g.nphys();
    const BulkField d3f = f.deriv_z(1);
    const auto p1 = f.deriv_h(1).phys();
    const auto p2 = f.deriv_h(2).phys();
    const auto p3 = d3f.phys();
    std::vector<double> o1(p1.size()), o2(p1.size()), o3(p1.size());
    for (size_t i = 0; i < p1.size(); ++i) {
        o1[i] = p1[i] - p.p_a_k[i] * p3[i];
        o2[i] = p2[i] - p.p_b_k[i] * p3[i];
        o3[i] = p.p_invjac[i] * p3[i];
    }
    (void)np;
    return {BulkField::from_phys(p.grid, o1), BulkField::from_phys(p.grid, o2),
            BulkField::from_phys(p.grid, o3)};
}

BulkField mapped_div(const GeometryPack& p, const std::array<BulkField, 3>& X) {
    const auto p1 = X[0].deriv_h(1).phys();
    const auto p2 = X[1].deriv_h(2).phys();
    const auto d31 = X[0].deriv_z(1).phys();
    const auto d32 = X[1].deriv_z(1).phys();
    const auto d33 = X[2].deriv_z(1).phys();
    std::vector<double> acc(p1.size());
    for (size_t i = 0; i < p1.size(); ++i)
        acc[i] = p1[i] - p.p_a_k[i] * d31[i] + p2[i] - p.p_b_k[i] * d32[i] +
                 p.p_invjac[i] * d33[i];
    return BulkField::from_phys(p.grid, acc);
}

std::array<BulkField, 6> mapped_sym_grad(const GeometryPack& p,
                                         const std::array<BulkField, 3>& u) {
    std::array<std::array<BulkField, 3>, 3> G;
    for (int c = 0; c < 3; ++c) G[c] = mapped_grad(p, u[c]);
    // entries (11, 22, 33, 12, 13, 23)
    return {2.0 * G[0][0], 2.0 * G[1][1], 2.0 * G[2][2],
            G[1][0] + G[0][1], G[2][0] + G[0][2], G[2][1] + G[1][2]};
}

BulkField divergence_forcing(const GeometryPack& p, const std::array<BulkField, 3>& u) {
    const auto d31 = u[0].deriv_z(1).phys();
    const auto d32 = u[1].deriv_z(1).phys();
    const auto d33 = u[2].deriv_z(1).phys();
    std::vector<double> acc(d31.size());
    for (size_t i = 0; i < acc.size(); ++i) {
        const double one_minus_k = (p.p_jac[i] - 1.0) * p.p_invjac[i];
        acc[i] = p.p_a_k[i] * d31[i] + p.p_b_k[i] * d32[i] + one_minus_k * d33[i];
    }
    return BulkField::from_phys(p.grid, acc);
}

}  // namespace slick
