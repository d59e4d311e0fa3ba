#include "slick/fields.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "slick/errors.hpp"

namespace slick {

// ---------------------------------------------------------------- SurfaceField

SurfaceField SurfaceField::from_phys(GridPtr g, const std::vector<double>& phys) {
    SurfaceField f(std::move(g));
    f.grid_->to_spec(phys.data(), f.c_.data());
    f.grid_->make_real(f.c_.data());
    return f;
}

SurfaceField SurfaceField::sample(GridPtr g, const std::function<double(double, double)>& fn) {
    std::vector<double> v(g->nphys());
    for (int q = 0; q < g->nphys(); ++q) v[q] = fn(g->x1p(q), g->x2p(q));
    return from_phys(std::move(g), v);
}

std::vector<double> SurfaceField::phys() const {
    std::vector<double> v(grid_->nphys());
    grid_->to_phys(c_.data(), v.data());
    return v;
}

void SurfaceField::finalize() {
    grid_->make_real(c_.data());
    grid_->mask(c_.data());
}

SurfaceField SurfaceField::deriv(int axis, int order) const {
    if (axis != 1 && axis != 2) throw Error("deriv: axis must be 1 or 2");
    if (order < 1 || order > 4) throw Error("deriv: order must be in 1..4");
    SurfaceField out(grid_);
    const int n = grid_->nmodes();
    for (int m = 0; m < n; ++m) {
        const double k = (axis == 1) ? grid_->k1m(m) : grid_->k2m(m);
        cplx mult(1.0, 0.0);
        for (int r = 0; r < order; ++r) mult *= cplx(0.0, k);
        out.c_[m] = c_[m] * mult;
    }
    return out;
}

SurfaceField& SurfaceField::operator+=(const SurfaceField& o) {
    for (size_t m = 0; m < c_.size(); ++m) c_[m] += o.c_[m];
    return *this;
}
SurfaceField& SurfaceField::operator-=(const SurfaceField& o) {
    for (size_t m = 0; m < c_.size(); ++m) c_[m] -= o.c_[m];
    return *this;
}
SurfaceField& SurfaceField::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}
SurfaceField operator+(SurfaceField a, const SurfaceField& b) { return a += b; }
SurfaceField operator-(SurfaceField a, const SurfaceField& b) { return a -= b; }
SurfaceField operator*(double s, SurfaceField a) { return a *= s; }

// ------------------------------------------------------------------- BulkField

BulkField BulkField::sample(GridPtr g, const std::function<double(double, double, double)>& fn) {
    BulkField f(g);
    const int np = g->nphys();
    const int nz = g->Nz;
    std::vector<double> plane(np);
    std::vector<cplx> coef(g->nmodes());
    for (int j = 0; j < nz; ++j) {
        const double z = g->z()[j];
        for (int q = 0; q < np; ++q) plane[q] = fn(g->x1p(q), g->x2p(q), z);
        g->to_spec(plane.data(), coef.data());
        g->make_real(coef.data());
        for (int m = 0; m < g->nmodes(); ++m) f.at(m, j) = coef[m];
    }
    return f;
}

SurfaceField BulkField::trace_top() const {
    SurfaceField f(grid_);
    for (int m = 0; m < grid_->nmodes(); ++m) f[m] = at(m, 0);
    return f;
}

SurfaceField BulkField::trace_bottom() const {
    SurfaceField f(grid_);
    const int j = grid_->Nz - 1;
    for (int m = 0; m < grid_->nmodes(); ++m) f[m] = at(m, j);
    return f;
}

BulkField BulkField::deriv_h(int axis, int order) const {
    if (axis != 1 && axis != 2) throw Error("deriv_h: axis must be 1 or 2");
    if (order < 1 || order > 4) throw Error("deriv_h: order must be in 1..4");
    BulkField out(grid_);
    const int nz = grid_->Nz;
    for (int m = 0; m < grid_->nmodes(); ++m) {
        const double k = (axis == 1) ? grid_->k1m(m) : grid_->k2m(m);
        cplx mult(1.0, 0.0);
        for (int r = 0; r < order; ++r) mult *= cplx(0.0, k);
        const cplx* src = mode(m);
        cplx* dst = out.mode(m);
        for (int j = 0; j < nz; ++j) dst[j] = src[j] * mult;
    }
    return out;
}

BulkField BulkField::deriv_z(int order) const {
    if (order < 1 || order > 2) throw Error("deriv_z: order must be 1 or 2");
    BulkField out(grid_);
    const auto& D = (order == 1) ? grid_->cheb().D1 : grid_->cheb().D2;
    const int nz = grid_->Nz;
    Eigen::VectorXcd tmp(nz);
    for (int m = 0; m < grid_->nmodes(); ++m) {
        Eigen::Map<const Eigen::VectorXcd> src(mode(m), nz);
        tmp.noalias() = D * src;
        Eigen::Map<Eigen::VectorXcd>(out.mode(m), nz) = tmp;
    }
    return out;
}

void BulkField::plane_phys(int j, double* out) const {
    thread_local std::vector<cplx> coef;
    coef.resize(grid_->nmodes());
    for (int m = 0; m < grid_->nmodes(); ++m) coef[m] = at(m, j);
    grid_->to_phys(coef.data(), out);
}

std::vector<double> BulkField::phys() const {
    const int np = grid_->nphys();
    std::vector<double> v(static_cast<size_t>(np) * grid_->Nz);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < grid_->Nz; ++j) plane_phys(j, v.data() + static_cast<size_t>(j) * np);
    return v;
}

BulkField BulkField::from_phys(GridPtr g, const std::vector<double>& phys) {
    BulkField f(g);
    const int np = g->nphys();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < g->Nz; ++j) {
        thread_local std::vector<cplx> coef;
        coef.resize(g->nmodes());
        g->to_spec(phys.data() + static_cast<size_t>(j) * np, coef.data());
        g->make_real(coef.data());
        for (int m = 0; m < g->nmodes(); ++m) f.at(m, j) = coef[m];
    }
    return f;
}

void BulkField::finalize() {
    const int nz = grid_->Nz;
    std::vector<cplx> coef(grid_->nmodes());
    for (int j = 0; j < nz; ++j) {
        for (int m = 0; m < grid_->nmodes(); ++m) coef[m] = at(m, j);
        grid_->make_real(coef.data());
        grid_->mask(coef.data());
        for (int m = 0; m < grid_->nmodes(); ++m) at(m, j) = coef[m];
    }
}

BulkField& BulkField::operator+=(const BulkField& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}
BulkField& BulkField::operator-=(const BulkField& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}
BulkField& BulkField::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}
BulkField operator+(BulkField a, const BulkField& b) { return a += b; }
BulkField operator-(BulkField a, const BulkField& b) { return a -= b; }
BulkField operator*(double s, BulkField a) { return a *= s; }

// -------------------------------------------------------------------- products

SurfaceField product(const SurfaceField& f, const SurfaceField& g) {
    if (f.grid() != g.grid()) throw Error("product: grid mismatch");
    auto pf = f.phys();
    auto pg = g.phys();
    for (size_t q = 0; q < pf.size(); ++q) pf[q] *= pg[q];
    return SurfaceField::from_phys(f.grid(), pf);
}

BulkField product(const BulkField& f, const BulkField& g) {
    if (f.grid() != g.grid()) throw Error("product: grid mismatch");
    const auto& gr = *f.grid();
    const int np = gr.nphys();
    BulkField out(f.grid());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < gr.Nz; ++j) {
        thread_local std::vector<double> pf, pg;
        thread_local std::vector<cplx> coef;
        pf.resize(np);
        pg.resize(np);
        coef.resize(gr.nmodes());
        f.plane_phys(j, pf.data());
        g.plane_phys(j, pg.data());
        for (int q = 0; q < np; ++q) pf[q] *= pg[q];
        gr.to_spec(pf.data(), coef.data());
        gr.make_real(coef.data());
        for (int m = 0; m < gr.nmodes(); ++m) out.at(m, j) = coef[m];
    }
    return out;
}

// ------------------------------------------------------------------ quadrature

double integrate_surface(const SurfaceField& f) { return f.grid()->area() * f[0].real(); }

double integrate_bulk(const BulkField& f) {
    const auto& g = *f.grid();
    double s = 0.0;
    for (int j = 0; j < g.Nz; ++j) s += g.zw()[j] * f.at(0, j).real();
    return g.area() * s;
}

// ----------------------------------------------------------------------- norms

double sobolev_norm_surface(const SurfaceField& f, double s) {
    const auto& g = *f.grid();
    double acc = 0.0;
    for (int m = 0; m < g.nmodes(); ++m) {
        const double k = g.kmag(m);
        acc += std::pow(1.0 + k * k, s) * std::norm(f[m]);
    }
    return std::sqrt(g.area() * acc);
}

namespace {
double l2sq_mode_profile(const Grid& g, const cplx* prof) {
    double s = 0.0;
    for (int j = 0; j < g.Nz; ++j) s += g.zw()[j] * std::norm(prof[j]);
    return s;
}
}  // namespace

double sobolev_norm_bulk(const BulkField& f, int k) {
    if (k < 0 || k > 3) throw Error("sobolev_norm_bulk: order must be in 0..3");
    const auto& g = *f.grid();
    const int nz = g.Nz;
    // cache Dz^a applied per mode
    std::vector<Eigen::MatrixXd> Dz(4);
    Dz[0] = Eigen::MatrixXd::Identity(nz, nz);
    for (int a = 1; a <= k; ++a) Dz[a] = g.cheb().D1 * Dz[a - 1];

    double acc = 0.0;
    Eigen::VectorXcd prof(nz);
    for (int m = 0; m < g.nmodes(); ++m) {
        Eigen::Map<const Eigen::VectorXcd> src(f.mode(m), nz);
        const double q1 = g.k1m(m), q2 = g.k2m(m);
        for (int a3 = 0; a3 <= k; ++a3) {
            prof.noalias() = Dz[a3] * src;
            const double base = l2sq_mode_profile(g, prof.data());
            for (int a1 = 0; a1 + a3 <= k; ++a1) {
                for (int a2 = 0; a1 + a2 + a3 <= k; ++a2) {
                    acc += std::pow(q1 * q1, a1) * std::pow(q2 * q2, a2) * base;
                }
            }
        }
    }
    return std::sqrt(g.area() * acc);
}

double l2_surface(const SurfaceField& f) { return sobolev_norm_surface(f, 0.0); }
double l2_bulk(const BulkField& f) { return sobolev_norm_bulk(f, 0); }

double max_abs_surface(const SurfaceField& f) {
    auto v = f.phys();
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_bulk(const BulkField& f) {
    const int np = f.grid()->nphys();
    std::vector<double> plane(np);
    double m = 0.0;
    for (int j = 0; j < f.grid()->Nz; ++j) {
        f.plane_phys(j, plane.data());
        for (double x : plane) m = std::max(m, std::abs(x));
    }
    return m;
}

// ----------------------------------------------------------- Poisson extension

BulkField poisson_extend(const SurfaceField& f) { return poisson_extend_deriv(f, 0); }

BulkField poisson_extend_deriv(const SurfaceField& f, int dz_order, int axis, int h_order) {
    const auto& g = *f.grid();
    BulkField out(f.grid());
    for (int m = 0; m < g.nmodes(); ++m) {
        const double kap = g.kmag(m);
        cplx mult(1.0, 0.0);
        for (int r = 0; r < dz_order; ++r) mult *= kap;
        if (h_order > 0) {
            const double k = (axis == 1) ? g.k1m(m) : g.k2m(m);
            for (int r = 0; r < h_order; ++r) mult *= cplx(0.0, k);
        }
        const cplx base = f[m] * mult;
        for (int j = 0; j < g.Nz; ++j) out.at(m, j) = base * std::exp(kap * g.z()[j]);
    }
    return out;
}

}  // namespace slick
