#include "slick/tension.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_spline.h>

#include <cmath>
#include <limits>

#include "slick/errors.hpp"

namespace slick {

struct TensionModel::Spline {
    gsl_interp_accel* acc = nullptr;
    gsl_spline* sp = nullptr;
    std::vector<double> x, y;
    ~Spline() {
        if (sp) gsl_spline_free(sp);
        if (acc) gsl_interp_accel_free(acc);
    }
};

TensionModel::~TensionModel() = default;
TensionModel::TensionModel(TensionModel&&) noexcept = default;
TensionModel& TensionModel::operator=(TensionModel&&) noexcept = default;

TensionModel TensionModel::linear(double sigma_s, double beta) {
    if (sigma_s <= 0 || beta <= 0) throw ConfigError("tension: sigma_s, beta must be positive");
    TensionModel m;
    m.kind_ = TensionKind::linear;
    m.sigma_s_ = sigma_s;
    m.beta_ = beta;
    m.hi_ = sigma_s / beta;
    return m;
}

TensionModel TensionModel::exponential(double sigma_s, double beta) {
    if (sigma_s <= 0 || beta <= 0) throw ConfigError("tension: sigma_s, beta must be positive");
    TensionModel m;
    m.kind_ = TensionKind::exponential;
    m.sigma_s_ = sigma_s;
    m.beta_ = beta;
    m.hi_ = std::numeric_limits<double>::infinity();
    return m;
}

TensionModel TensionModel::tabulated(std::vector<double> x, std::vector<double> sigma) {
    if (x.size() < 4 || x.size() != sigma.size())
        throw ConfigError("tension: tabulated model needs >= 4 (x, sigma) samples");
    for (size_t i = 1; i < x.size(); ++i) {
        if (x[i] <= x[i - 1]) throw ConfigError("tension: tabulated x must be increasing");
        if (sigma[i] >= sigma[i - 1])
            throw ConfigError("tension: sigma must be strictly decreasing");
    }
    TensionModel m;
    m.kind_ = TensionKind::tabulated;
    m.hi_ = x.back();
    m.spline_ = std::make_unique<Spline>();
    m.spline_->x = std::move(x);
    m.spline_->y = std::move(sigma);
    m.spline_->acc = gsl_interp_accel_alloc();
    m.spline_->sp = gsl_spline_alloc(gsl_interp_cspline, m.spline_->x.size());
    gsl_spline_init(m.spline_->sp, m.spline_->x.data(), m.spline_->y.data(),
                    m.spline_->x.size());
    m.check_decreasing();
    return m;
}

void TensionModel::check_decreasing() const {
    // spline interpolants of decreasing data can overshoot; sample the window
    const double lo = spline_->x.front(), hi = spline_->x.back();
    double prev = sigma(lo);
    for (int i = 1; i <= 400; ++i) {
        const double x = lo + (hi - lo) * i / 400.0;
        const double s = sigma(x);
        if (s >= prev) throw ConfigError("tension: tabulated sigma not strictly decreasing");
        prev = s;
    }
}

double TensionModel::sigma(double x) const {
    switch (kind_) {
        case TensionKind::linear:
            return sigma_s_ - beta_ * x;
        case TensionKind::exponential:
            return sigma_s_ * std::exp(-beta_ * x);
        case TensionKind::tabulated:
            return gsl_spline_eval(spline_->sp, x, spline_->acc);
    }
    return 0.0;
}

double TensionModel::dsigma(double x) const {
    switch (kind_) {
        case TensionKind::linear:
            return -beta_;
        case TensionKind::exponential:
            return -beta_ * sigma_s_ * std::exp(-beta_ * x);
        case TensionKind::tabulated:
            return gsl_spline_eval_deriv(spline_->sp, x, spline_->acc);
    }
    return 0.0;
}

double TensionModel::d2sigma(double x) const {
    switch (kind_) {
        case TensionKind::linear:
            return 0.0;
        case TensionKind::exponential:
            return beta_ * beta_ * sigma_s_ * std::exp(-beta_ * x);
        case TensionKind::tabulated:
            return gsl_spline_eval_deriv2(spline_->sp, x, spline_->acc);
    }
    return 0.0;
}

namespace {
struct XiParams {
    const TensionModel* model;
};
double xi_integrand(double z, void* p) {
    auto* q = static_cast<XiParams*>(p);
    return q->model->sigma(z) / (z * z);
}
}  // namespace

double TensionModel::xi(double r, double x) const {
    if (r <= 0) throw OutOfRange("xi: r must be positive");
    if (!in_window(x)) throw OutOfRange("xi: x outside the model validity window");
    if (x == 0.0) return sigma(0.0);  // continuous extension
    if (kind_ == TensionKind::linear) return sigma(x) + beta_ * x * std::log(x / r);

    XiParams p{this};
    gsl_function F;
    F.function = &xi_integrand;
    F.params = &p;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2048);
    double result = 0.0, abserr = 0.0;
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    const int status =
        gsl_integration_qag(&F, r, x, 1e-12, 1e-12, 2048, GSL_INTEG_GAUSS31, ws, &result, &abserr);
    gsl_set_error_handler(old);
    gsl_integration_workspace_free(ws);
    if (status != 0 && std::abs(abserr) > 1e-10)
        throw Error("xi: quadrature failed to reach 1e-10");
    return x * (sigma(r) / r - result);
}

double TensionModel::xi_second(double r, double x) const {
    (void)r;  // independent of r
    if (x <= 0.0) throw Singular("xi_second: singular at x = 0");
    if (!in_window(x)) throw OutOfRange("xi_second: x outside the model validity window");
    return -dsigma(x) / x;
}

void TensionModel::set_c0(double c0) {
    if (c0 <= 0) throw InvalidConcentration("c0 must be positive");
    if (!in_window(c0)) throw OutOfRange("c0 outside the tension validity window");
    if (dsigma(c0) >= 0) throw ConfigError("tension: sigma'(c0) must be negative");
    c0_ = c0;
}

double equilibrium_concentration(const SurfaceField& eta0, const SurfaceField& ctilde0,
                                 double* shift) {
    const auto& g = *eta0.grid();
    SurfaceField eta = eta0;
    const double mean = eta.mean();
    if (shift) *shift = mean;
    eta.subtract_mean();

    const auto c = ctilde0.phys();
    for (double v : c)
        if (v <= 0.0) throw InvalidConcentration("equilibrium_concentration: ctilde0 <= 0");

    const auto d1 = eta.deriv(1).phys();
    const auto d2 = eta.deriv(2).phys();
    double acc = 0.0;
    for (int q = 0; q < g.nphys(); ++q)
        acc += c[q] * std::sqrt(1.0 + d1[q] * d1[q] + d2[q] * d2[q]);
    return acc / g.nphys();
}

}  // namespace slick
