#include "slick/mode_solver.hpp"

#include <cmath>
#include <cstring>

#include "slick/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace slick {

LinearCore::LinearCore(GridPtr grid, double gamma, const TensionModel& model)
    : grid_(std::move(grid)),
      gamma_(gamma),
      sigma0_(model.sigma0()),
      sigma0p_(model.sigma0_prime()),
      c0_(model.c0()) {
    if (gamma_ <= 0) throw ConfigError("LinearCore: gamma must be positive");
}

uint64_t LinearCore::key(double a) {
    uint64_t k;
    std::memcpy(&k, &a, sizeof(k));
    return k;
}

Eigen::MatrixXcd LinearCore::assemble(int m, double a) const {
    const auto& g = *grid_;
    const int nz = g.Nz;
    const int n = nunknowns();
    const double q1 = g.k1m(m), q2 = g.k2m(m);
    const double k2 = q1 * q1 + q2 * q2;
    const bool zero_mode = (k2 == 0.0);
    const cplx I1(0.0, q1), I2(0.0, q2);
    const auto& D1 = g.cheb().D1;
    const auto& D2 = g.cheb().D2;

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);

    // momentum rows, interior nodes
    for (int c = 0; c < 3; ++c) {
        for (int j = 1; j < nz - 1; ++j) {
            const int r = iu(c, j);
            A(r, iu(c, j)) += a + k2;
            for (int l = 0; l < nz; ++l) A(r, iu(c, l)) -= D2(j, l);
            if (c == 0) A(r, ip(j)) += I1;
            if (c == 1) A(r, ip(j)) += I2;
            if (c == 2)
                for (int l = 0; l < nz; ++l) A(r, ip(l)) += D1(j, l);
        }
    }

    // stress rows at the top (j = 0)
    {
        int r = iu(0, 0);  // -(i q1 u3(0) + D u1(0)) + sigma0' i q1 c = G3_1
        A(r, iu(2, 0)) -= I1;
        for (int l = 0; l < nz; ++l) A(r, iu(0, l)) -= D1(0, l);
        A(r, ic()) += sigma0p_ * I1;

        r = iu(1, 0);
        A(r, iu(2, 0)) -= I2;
        for (int l = 0; l < nz; ++l) A(r, iu(1, l)) -= D1(0, l);
        A(r, ic()) += sigma0p_ * I2;

        r = iu(2, 0);  // p(0) - 2 D u3(0) - (1 + sigma0 |k|^2) eta = G3_3
        A(r, ip(0)) += 1.0;
        for (int l = 0; l < nz; ++l) A(r, iu(2, l)) -= 2.0 * D1(0, l);
        A(r, ieta()) -= 1.0 + sigma0_ * k2;
    }

    // no-slip at the bottom
    for (int c = 0; c < 3; ++c) A(iu(c, nz - 1), iu(c, nz - 1)) = 1.0;

    // divergence rows; the n = 0 mode trades the bottom row for the pressure tau row
    const int jdiv_max = zero_mode ? nz - 1 : nz;
    for (int j = 0; j < jdiv_max; ++j) {
        const int r = ip(j);
        A(r, iu(0, j)) += I1;
        A(r, iu(1, j)) += I2;
        for (int l = 0; l < nz; ++l) A(r, iu(2, l)) += D1(j, l);
    }
    if (zero_mode) {
        const int r = ip(nz - 1);
        const Eigen::RowVectorXd tau = g.cheb().top_coeff_row();
        for (int l = 0; l < nz; ++l) A(r, ip(l)) = tau(l);
    }

    // kinematic row: a eta - u3(0) = rhs; n = 0 pins eta (zero average)
    if (zero_mode) {
        A(ieta(), ieta()) = 1.0;
    } else {
        A(ieta(), ieta()) = a;
        A(ieta(), iu(2, 0)) = -1.0;
    }

    // surfactant row: (a + gamma |k|^2) c + c0 (i k . u*(0)) = rhs
    A(ic(), ic()) = a + gamma_ * k2;
    A(ic(), iu(0, 0)) += c0_ * I1;
    A(ic(), iu(1, 0)) += c0_ * I2;

    return A;
}

void LinearCore::prepare(double a) {
    auto& slot = cache_[key(a)];
    if (!slot.empty()) return;
    slot.resize(grid_->nmodes());
    const auto& modes = grid_->band_modes();
    int bad_mode = -1;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (size_t idx = 0; idx < modes.size(); ++idx) {
        const int m = modes[idx];
        if (grid_->herm_partner(m) < m) continue;  // conjugate of a canonical mode
        auto f = std::make_unique<Factor>(assemble(m, a));
        const auto& lu = f->matrixLU();
        double dmin = 1e300, dmax = 0.0;
        for (int i = 0; i < lu.rows(); ++i) {
            const double d = std::abs(lu(i, i));
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
        if (!(dmin > 0.0) || dmin / dmax < 1e-14) {
#ifdef _OPENMP
#pragma omp critical
#endif
            bad_mode = m;
            continue;
        }
        slot[m] = std::move(f);
    }
    if (bad_mode >= 0) {
        cache_.erase(key(a));
        throw SingularMode("LinearCore: singular factorization at mode " +
                           std::to_string(bad_mode));
    }
}

bool LinearCore::prepared(double a) const { return cache_.count(key(a)) > 0; }

Eigen::VectorXcd LinearCore::solve(int m, double a, const Eigen::VectorXcd& rhs) const {
    const auto it = cache_.find(key(a));
    if (it == cache_.end() || !it->second[m])
        throw Error("LinearCore::solve: mode not prepared");
    return it->second[m]->solve(rhs);
}

Eigen::MatrixXcd LinearCore::propagator(int m, double dt) const {
    const double a = 1.0 / dt;
    const Eigen::MatrixXcd A = assemble(m, a);
    const int nz = grid_->Nz;
    const int n = nunknowns();
    const int ns = 3 * nz + 2;  // state: u, eta, c (p is not evolved)
    const double q1 = grid_->k1m(m), q2 = grid_->k2m(m);
    const bool zero_mode = (q1 == 0.0 && q2 == 0.0);

    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(n, ns);
    for (int c = 0; c < 3; ++c)
        for (int j = 1; j < nz - 1; ++j) R(iu(c, j), c * nz + j) = a;
    if (!zero_mode) R(ieta(), 3 * nz) = a;
    R(ic(), 3 * nz + 1) = a;

    const Eigen::MatrixXcd Y = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(R);
    Eigen::MatrixXcd P(ns, ns);
    P.topRows(3 * nz) = Y.topRows(3 * nz);
    P.row(3 * nz) = Y.row(ieta());
    P.row(3 * nz + 1) = Y.row(ic());
    return P;
}

SpectralState step_linear(const LinearCore& core, double a, const ModeRhs& rhs) {
    const auto& g = *core.grid();
    const int nz = g.Nz;
    const int n = core.nunknowns();
    SpectralState out;
    for (int c = 0; c < 3; ++c) out.u[c] = BulkField(core.grid());
    out.p = BulkField(core.grid());
    out.eta = SurfaceField(core.grid());
    out.c = SurfaceField(core.grid());

    const auto& modes = g.band_modes();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (size_t idx = 0; idx < modes.size(); ++idx) {
        const int m = modes[idx];
        if (g.herm_partner(m) < m) continue;
        const bool zero_mode = (g.kmag(m) == 0.0);
        Eigen::VectorXcd b(n);
        for (int c = 0; c < 3; ++c) {
            for (int j = 0; j < nz; ++j) b[core.iu(c, j)] = rhs.f[c].at(m, j);
            b[core.iu(c, 0)] = rhs.stress[c][m];  // stress rows live at j = 0
            b[core.iu(c, nz - 1)] = 0.0;          // no-slip
        }
        for (int j = 0; j < nz; ++j) b[core.ip(j)] = rhs.h.at(m, j);
        if (zero_mode) b[core.ip(nz - 1)] = 0.0;  // tau row
        b[core.ieta()] = zero_mode ? cplx(0.0) : rhs.kin[m];
        b[core.ic()] = rhs.surf[m];

        const Eigen::VectorXcd y = core.solve(m, a, b);

        const int mc = g.herm_partner(m);
        for (int c = 0; c < 3; ++c) {
            for (int j = 0; j < nz; ++j) {
                out.u[c].at(m, j) = y[core.iu(c, j)];
                if (mc != m) out.u[c].at(mc, j) = std::conj(y[core.iu(c, j)]);
            }
        }
        for (int j = 0; j < nz; ++j) {
            out.p.at(m, j) = y[core.ip(j)];
            if (mc != m) out.p.at(mc, j) = std::conj(y[core.ip(j)]);
        }
        out.eta[m] = y[core.ieta()];
        out.c[m] = y[core.ic()];
        if (mc != m) {
            out.eta[mc] = std::conj(y[core.ieta()]);
            out.c[mc] = std::conj(y[core.ic()]);
        }
    }
    // self-conjugate modes carry real data
    out.eta[0] = cplx(out.eta[0].real(), 0.0);
    out.c[0] = cplx(out.c[0].real(), 0.0);
    for (int j = 0; j < nz; ++j) {
        out.p.at(0, j) = cplx(out.p.at(0, j).real(), 0.0);
        for (int c = 0; c < 3; ++c) out.u[c].at(0, j) = cplx(out.u[c].at(0, j).real(), 0.0);
    }
    return out;
}

double linear_energy(const std::array<BulkField, 3>& u, const SurfaceField& eta,
                     const SurfaceField& c, double sigma0, double sigma0p, double c0) {
    double e = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double n = l2_bulk(u[i]);
        e += 0.5 * n * n;
    }
    const double ne = l2_surface(eta);
    e += 0.5 * ne * ne;
    const double g1 = l2_surface(eta.deriv(1));
    const double g2 = l2_surface(eta.deriv(2));
    e += 0.5 * sigma0 * (g1 * g1 + g2 * g2);
    const double nc = l2_surface(c);
    e += (-sigma0p / (2.0 * c0)) * nc * nc;
    return e;
}

}  // namespace slick
