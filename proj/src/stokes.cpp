#include "slick/stokes.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "slick/errors.hpp"

namespace slick {

namespace {

// Per-mode 4Nz system shared by both boundary-condition flavors.
// variant 0: stress rows at the top; variant 1: Dirichlet rows at the top.
Eigen::MatrixXcd assemble_stokes(const Grid& g, int m, int variant) {
    const int nz = g.Nz;
    const int n = 4 * nz;
    const double q1 = g.k1m(m), q2 = g.k2m(m);
    const double k2 = q1 * q1 + q2 * q2;
    const bool zero_mode = (k2 == 0.0);
    const cplx I1(0.0, q1), I2(0.0, q2);
    const auto& D1 = g.cheb().D1;
    const auto& D2 = g.cheb().D2;
    auto iu = [nz](int c, int j) { return c * nz + j; };
    auto ipp = [nz](int j) { return 3 * nz + j; };

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    for (int c = 0; c < 3; ++c) {
        for (int j = 1; j < nz - 1; ++j) {
            const int r = iu(c, j);
            A(r, iu(c, j)) += k2;
            for (int l = 0; l < nz; ++l) A(r, iu(c, l)) -= D2(j, l);
            if (c == 0) A(r, ipp(j)) += I1;
            if (c == 1) A(r, ipp(j)) += I2;
            if (c == 2)
                for (int l = 0; l < nz; ++l) A(r, ipp(l)) += D1(j, l);
        }
    }
    if (variant == 0) {
        int r = iu(0, 0);
        A(r, iu(2, 0)) -= I1;
        for (int l = 0; l < nz; ++l) A(r, iu(0, l)) -= D1(0, l);
        r = iu(1, 0);
        A(r, iu(2, 0)) -= I2;
        for (int l = 0; l < nz; ++l) A(r, iu(1, l)) -= D1(0, l);
        r = iu(2, 0);
        A(r, ipp(0)) += 1.0;
        for (int l = 0; l < nz; ++l) A(r, iu(2, l)) -= 2.0 * D1(0, l);
    } else {
        for (int c = 0; c < 3; ++c) A(iu(c, 0), iu(c, 0)) = 1.0;
    }
    for (int c = 0; c < 3; ++c) A(iu(c, nz - 1), iu(c, nz - 1)) = 1.0;

    const int jdiv_max = zero_mode ? nz - 1 : nz;
    const int jdiv_min = (zero_mode && variant == 1) ? 1 : 0;
    for (int j = jdiv_min; j < jdiv_max; ++j) {
        const int r = ipp(j);
        A(r, iu(0, j)) += I1;
        A(r, iu(1, j)) += I2;
        for (int l = 0; l < nz; ++l) A(r, iu(2, l)) += D1(j, l);
    }
    if (zero_mode) {
        // tau closure of the pressure block
        const Eigen::RowVectorXd tau = g.cheb().top_coeff_row();
        for (int l = 0; l < nz; ++l) A(ipp(nz - 1), ipp(l)) = tau(l);
        if (variant == 1) {
            // zero-mean pressure gauge takes the freed top divergence row
            for (int l = 0; l < nz; ++l) A(ipp(0), ipp(l)) = g.zw()[l];
        }
    }
    return A;
}

StokesSolution solve_generic(const std::array<BulkField, 3>& f, const BulkField& h,
                             const std::array<SurfaceField, 3>& top,
                             const std::array<SurfaceField, 3>* bottom, int variant) {
    const auto gp = h.grid();
    const Grid& g = *gp;
    const int nz = g.Nz;
    const int n = 4 * nz;
    auto iu = [nz](int c, int j) { return c * nz + j; };
    auto ipp = [nz](int j) { return 3 * nz + j; };

    if (variant == 1) {
        // mean-mode net flux: int h dx3 = phi1_3(0) - phi2_3(0)
        double flux = 0.0;
        for (int j = 0; j < nz; ++j) flux += g.zw()[j] * h.at(0, j).real();
        double bc = top[2][0].real();
        if (bottom) bc -= (*bottom)[2][0].real();
        const double scale = std::max({1.0, std::abs(flux), std::abs(bc)});
        if (std::abs(flux - bc) > 1e-8 * scale)
            throw IncompatibleData("stokes_dirichlet: mean-mode net flux mismatch");
    }

    StokesSolution out;
    for (int c = 0; c < 3; ++c) out.u[c] = BulkField(gp);
    out.p = BulkField(gp);

    const auto& modes = g.band_modes();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (size_t idx = 0; idx < modes.size(); ++idx) {
        const int m = modes[idx];
        if (g.herm_partner(m) < m) continue;
        const bool zero_mode = (g.kmag(m) == 0.0);
        Eigen::MatrixXcd A = assemble_stokes(g, m, variant);
        Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
        for (int c = 0; c < 3; ++c)
            for (int j = 1; j < nz - 1; ++j) b[iu(c, j)] = f[c].at(m, j);
        for (int j = 0; j < nz; ++j) b[ipp(j)] = h.at(m, j);
        if (zero_mode) b[ipp(nz - 1)] = 0.0;
        if (zero_mode && variant == 1) b[ipp(0)] = 0.0;
        for (int c = 0; c < 3; ++c) {
            b[iu(c, 0)] = top[c][m];
            b[iu(c, nz - 1)] = bottom ? (*bottom)[c][m] : cplx(0.0);
        }
        const Eigen::VectorXcd y = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(b);

        const int mc = g.herm_partner(m);
        for (int c = 0; c < 3; ++c)
            for (int j = 0; j < nz; ++j) {
                out.u[c].at(m, j) = y[iu(c, j)];
                if (mc != m) out.u[c].at(mc, j) = std::conj(y[iu(c, j)]);
            }
        for (int j = 0; j < nz; ++j) {
            out.p.at(m, j) = y[ipp(j)];
            if (mc != m) out.p.at(mc, j) = std::conj(y[ipp(j)]);
        }
    }
    for (int j = 0; j < nz; ++j) {
        out.p.at(0, j) = cplx(out.p.at(0, j).real(), 0.0);
        for (int c = 0; c < 3; ++c) out.u[c].at(0, j) = cplx(out.u[c].at(0, j).real(), 0.0);
    }

    // residual audit on the unconstrained rows of the n = 0 block
    {
        const int m = 0;
        double scale = 1e-30, resid = 0.0;
        for (int j = 0; j < nz; ++j) {
            scale = std::max({scale, std::abs(h.at(m, j)), std::abs(out.u[2].at(m, j))});
        }
        // bottom divergence row was traded for the tau row; check it a posteriori
        cplx div_bot(0.0);
        for (int l = 0; l < nz; ++l) div_bot += g.cheb().D1(nz - 1, l) * out.u[2].at(m, l);
        resid = std::abs(div_bot - h.at(m, nz - 1));
        if (resid > 1e-6 * std::max(1.0, scale) && variant == 0)
            throw IncompatibleData("stokes_stress: n = 0 divergence data inconsistent "
                                   "with the discrete solution space");
    }
    return out;
}

}  // namespace

StokesSolution solve_stokes_stress(const std::array<BulkField, 3>& f, const BulkField& h,
                                   const std::array<SurfaceField, 3>& alpha) {
    return solve_generic(f, h, alpha, nullptr, 0);
}

StokesSolution solve_stokes_dirichlet(const std::array<BulkField, 3>& f, const BulkField& h,
                                      const std::array<SurfaceField, 3>& phi1,
                                      const std::array<SurfaceField, 3>* phi2) {
    return solve_generic(f, h, phi1, phi2, 1);
}

}  // namespace slick
