#pragma once

#include <memory>
#include <vector>

#include "slick/fields.hpp"

namespace slick {

enum class TensionKind { linear, exponential, tabulated };

// Surface tension closure sigma(ctilde): strictly decreasing, C^3 on the
// admissible window. Carries the equilibrium concentration c0 and the
// linearization constants sigma0 = sigma(c0), sigma0' = sigma'(c0).
class TensionModel {
public:
    // linear: sigma(x) = sigma_s - beta x on [0, sigma_s/beta)
    static TensionModel linear(double sigma_s, double beta);
    // exponential: sigma(x) = sigma_s exp(-beta x) on [0, inf)
    static TensionModel exponential(double sigma_s, double beta);
    // tabulated: cubic spline through (x, sigma) samples; must be decreasing
    static TensionModel tabulated(std::vector<double> x, std::vector<double> sigma);

    TensionKind kind() const { return kind_; }

    double sigma(double x) const;
    double dsigma(double x) const;
    double d2sigma(double x) const;

    // convex entropy  xi_r(x) = x (sigma(r)/r - int_r^x sigma(z)/z^2 dz),
    // extended continuously to x = 0 by xi_r(0) = sigma(0).
    // Closed form for the linear kind, adaptive quadrature (1e-10 abs) otherwise.
    double xi(double r, double x) const;
    // xi_r''(x) = -sigma'(x)/x
    double xi_second(double r, double x) const;

    void set_c0(double c0);
    double c0() const { return c0_; }
    double sigma0() const { return sigma(c0_); }
    double sigma0_prime() const { return dsigma(c0_); }

    // validity window [0, hi]; closed at the top, where sigma reaches 0 for
    // the linear kind (xi stays finite there)
    double window_lo() const { return 0.0; }
    double window_hi() const { return hi_; }  // +inf for exponential
    bool in_window(double x) const { return x >= 0.0 && x <= hi_; }

    ~TensionModel();
    TensionModel(TensionModel&&) noexcept;
    TensionModel& operator=(TensionModel&&) noexcept;
    TensionModel(const TensionModel&) = delete;
    TensionModel& operator=(const TensionModel&) = delete;

private:
    TensionModel() = default;
    void check_decreasing() const;

    TensionKind kind_ = TensionKind::linear;
    double sigma_s_ = 1.0, beta_ = 0.25;
    double hi_ = 0.0;
    double c0_ = 1.0;
    struct Spline;
    std::unique_ptr<Spline> spline_;
};

// c0 = (1/|Sigma|) int ctilde0 sqrt(1 + |grad eta0|^2); eta0 is mean-shifted
// first if needed (the shift is returned through *shift when non-null).
double equilibrium_concentration(const SurfaceField& eta0, const SurfaceField& ctilde0,
                                 double* shift = nullptr);

}  // namespace slick
