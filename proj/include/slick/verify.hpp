#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slick/config.hpp"
#include "slick/fields.hpp"
#include "slick/tension.hpp"

namespace slick::verify {

struct Check {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool larger_is_fail = true;  // pass means measured <= tolerance (or >= when false)
};

Check against(const std::string& name, double measured, double tol);
Check at_least(const std::string& name, double measured, double floor);

// -------- surface-operator identities --------
struct SurfaceIdentityResiduals {
    double div_nu_plus_h = 0.0;     // L2 of div_Gamma(nu) + H
    double area_deriv = 0.0;        // max pointwise, d_i area + nu_* . grad d_i eta
    double area_time_deriv = 0.0;   // manufactured d_t area identity
    double grad_orthogonal = 0.0;   // max pointwise, grad_Gamma f . nu
    double ibp = 0.0;               // max |ibp residual| / (scale) over i = 1..3
    double laplace_expansion = 0.0; // exact expansion of lap_Gamma
};
SurfaceIdentityResiduals surface_identities(GridPtr g, double slope, uint64_t seed,
                                            int kmax_eta = 2);
double worst_surface_residual(const SurfaceIdentityResiduals& r);

// random band-limited real field with modes up to kmax and unit amplitude
SurfaceField random_surface(GridPtr g, int kmax, uint64_t seed, double scale = 1.0);
// random eta scaled so max |grad eta| equals the requested slope
SurfaceField random_eta(GridPtr g, int kmax, uint64_t seed, double slope);

// -------- tension / xi --------
double xi_quadrature(const TensionModel& m, double r, double x);  // oracle route
struct XiChecks {
    double closed_vs_quadrature = 0.0;  // max over 100 points
    double legendre = 0.0;              // xi - x xi' - sigma, central differences
    double min_at_r = 0.0;              // xi(x) - sigma(r) at x = r
    double convexity = 0.0;             // most negative second difference
    double monotone = 0.0;              // worst-signed difference on both sides
};
XiChecks xi_checks(const TensionModel& m, double r, uint64_t seed);

// -------- poisson / geometry --------
struct GeometryChecks {
    double harmonicity = 0.0;        // L2 of lap(P f), relative
    double trace = 0.0;              // max |P f|_{x3=0} - f|
    double jac_det_oracle = 0.0;     // max |jac - d3 Theta3 by D matrix|
    double tilt_oracle = 0.0;        // same for the tilt entries
    double jk_identity = 0.0;        // max |J K - 1|
    double dual_matrix = 0.0;        // max entry diff vs inverse-transpose oracle
    double infinity_bound = 0.0;     // max over states of |J-1|^2+|A|^2+|B|^2 (inf norms)
    double poisson_h12_constant = 0.0;  // measured |grad P f| / |f|_{H^{1/2}}
};
GeometryChecks geometry_checks(GridPtr g, double slope, uint64_t seed,
                               int nstates = 5, double slope_inf = -1.0);

// -------- linear core --------
struct LinearChecks {
    double mms_stationary = 0.0;       // stress-Stokes manufactured error at Nz
    double mms_dirichlet = 0.0;
    double mms_dt_order = 0.0;         // observed order from dyadic dt refinement
    double mms_dt_err_finest = 0.0;
    double spectral_radius = 0.0;      // max over sampled modes
    double energy_increase = 0.0;      // max relative one-step increase, zero forcing
    double decay_vs_eigen = 0.0;       // relative mismatch of fitted modal decay
};
LinearChecks linear_checks(GridPtr g, const TensionModel& model, double gamma, double dt,
                           int nsteps, uint64_t seed);

// -------- transport identity --------
// centered-difference residual of the surf_c_ev identity on manufactured paths,
// for f(z) = z (kind 0) and f(z) = z^2/2 (kind 1), at the given dts
std::vector<double> transport_residuals(GridPtr g, int f_kind, const std::vector<double>& dts,
                                        uint64_t seed);

// -------- nonlinearity scaling --------
struct ScalingRatios {
    double g1 = 0.0, g2 = 0.0, g3 = 0.0, g4 = 0.0, g5 = 0.0;
};
ScalingRatios scaling_ratios(GridPtr g, double eps, uint64_t seed);

// -------- equilibrium fixed point --------
// max change of any diagnostic over nsteps from the exact equilibrium
double equilibrium_drift(GridPtr g, double c0, double gamma, double dt, int nsteps);

// -------- suites --------
std::vector<Check> identities_suite(uint64_t seed);
std::vector<Check> budgets_suite(uint64_t seed);
std::vector<Check> scaling_suite(uint64_t seed);
int report(const std::vector<Check>& checks, std::ostream& out);

}  // namespace slick::verify
