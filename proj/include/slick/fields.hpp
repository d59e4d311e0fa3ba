#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "slick/grid.hpp"

namespace slick {

using GridPtr = std::shared_ptr<const Grid>;

// Scalar field on the periodic cross-section, stored as Fourier coefficients
// f(x) = sum_n fhat(n) exp(i k_n . x), full complex layout with Hermitian
// symmetry maintained for real fields.
class SurfaceField {
public:
    SurfaceField() = default;
    explicit SurfaceField(GridPtr g) : grid_(std::move(g)), c_(grid_->nmodes(), cplx(0, 0)) {}

    static SurfaceField from_phys(GridPtr g, const std::vector<double>& phys);
    static SurfaceField sample(GridPtr g, const std::function<double(double, double)>& f);

    const GridPtr& grid() const { return grid_; }
    cplx& operator[](int m) { return c_[m]; }
    const cplx& operator[](int m) const { return c_[m]; }
    const std::vector<cplx>& coef() const { return c_; }
    std::vector<cplx>& coef() { return c_; }

    std::vector<double> phys() const;  // values on the evaluation grid
    double mean() const { return c_[0].real(); }
    void subtract_mean() { c_[0] = 0.0; }
    void finalize();  // Hermitian + band mask

    SurfaceField deriv(int axis, int order = 1) const;

    SurfaceField& operator+=(const SurfaceField& o);
    SurfaceField& operator-=(const SurfaceField& o);
    SurfaceField& operator*=(double s);

private:
    GridPtr grid_;
    std::vector<cplx> c_;
};

SurfaceField operator+(SurfaceField a, const SurfaceField& b);
SurfaceField operator-(SurfaceField a, const SurfaceField& b);
SurfaceField operator*(double s, SurfaceField a);

// Scalar field on the strip: per horizontal mode, Nz complex values at the
// collocation nodes. data[m * Nz + j], node j = 0 is the top plane.
class BulkField {
public:
    BulkField() = default;
    explicit BulkField(GridPtr g)
        : grid_(std::move(g)), c_(static_cast<size_t>(grid_->nmodes()) * grid_->Nz, cplx(0, 0)) {}

    static BulkField sample(GridPtr g, const std::function<double(double, double, double)>& f);

    const GridPtr& grid() const { return grid_; }
    cplx* mode(int m) { return c_.data() + static_cast<size_t>(m) * grid_->Nz; }
    const cplx* mode(int m) const { return c_.data() + static_cast<size_t>(m) * grid_->Nz; }
    cplx& at(int m, int j) { return c_[static_cast<size_t>(m) * grid_->Nz + j]; }
    const cplx& at(int m, int j) const { return c_[static_cast<size_t>(m) * grid_->Nz + j]; }
    const std::vector<cplx>& coef() const { return c_; }
    std::vector<cplx>& coef() { return c_; }

    SurfaceField trace_top() const;     // plane x3 = 0, exact
    SurfaceField trace_bottom() const;  // plane x3 = -b, exact

    BulkField deriv_h(int axis, int order = 1) const;
    BulkField deriv_z(int order = 1) const;

    // physical values of one collocation plane on the evaluation grid
    void plane_phys(int j, double* out) const;
    std::vector<double> phys() const;  // [j * nphys + q]
    static BulkField from_phys(GridPtr g, const std::vector<double>& phys);

    void finalize();

    BulkField& operator+=(const BulkField& o);
    BulkField& operator-=(const BulkField& o);
    BulkField& operator*=(double s);

private:
    GridPtr grid_;
    std::vector<cplx> c_;
};

BulkField operator+(BulkField a, const BulkField& b);
BulkField operator-(BulkField a, const BulkField& b);
BulkField operator*(double s, BulkField a);

// --- products (pointwise in physical space, dealiased per grid rule) ---
SurfaceField product(const SurfaceField& f, const SurfaceField& g);
BulkField product(const BulkField& f, const BulkField& g);

// --- quadrature ---
double integrate_surface(const SurfaceField& f);
double integrate_bulk(const BulkField& f);

// --- discrete Sobolev norms ---
// H^s(Sigma) via the Fourier multiplier (1 + |k|^2)^(s/2); s may be fractional/negative.
double sobolev_norm_surface(const SurfaceField& f, double s);
// H^k(Omega), integer 0..3, as sum over |alpha| <= k of squared L2 derivative norms.
double sobolev_norm_bulk(const BulkField& f, int k);

double l2_surface(const SurfaceField& f);
double l2_bulk(const BulkField& f);
double max_abs_surface(const SurfaceField& f);
double max_abs_bulk(const BulkField& f);

// Poisson (harmonic) extension of a surface field into the strip:
// mode n gets the vertical profile exp(|k_n| x3); derivatives of the extension
// are available analytically per mode.
BulkField poisson_extend(const SurfaceField& f);
// d/dx3^order then d/dx_axis applied to the extension, via the analytic profile
BulkField poisson_extend_deriv(const SurfaceField& f, int dz_order, int axis = 0,
                               int h_order = 0);

}  // namespace slick
