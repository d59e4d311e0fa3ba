#pragma once

#include <Eigen/Dense>
#include <memory>
#include <unordered_map>
#include <vector>

#include "slick/fields.hpp"
#include "slick/tension.hpp"

namespace slick {

// Constant-coefficient linear operator of the perturbed system, diagonalized
// over horizontal Fourier modes. Per mode the unknowns are
//   [u1(Nz), u2(Nz), u3(Nz), p(Nz), eta, c]  (4 Nz + 2),
// and one implicit step with time coefficient a solves
//   a u - lap u + grad p = rhs,   div u = rhs,
//   stress rows at the top, no-slip at the bottom,
//   a eta - u3(0) = rhs,          (a + gamma |k|^2) c + c0 i k . u*(0) = rhs,
// with the surface couplings (eta, c in the stress rows) fully implicit.
// The n = 0 mode pins eta to zero and closes the pressure block with a tau row.
class LinearCore {
public:
    LinearCore(GridPtr grid, double gamma, const TensionModel& model);

    int nunknowns() const { return 4 * grid_->Nz + 2; }
    const GridPtr& grid() const { return grid_; }
    double gamma() const { return gamma_; }
    double sigma0() const { return sigma0_; }
    double sigma0_prime() const { return sigma0p_; }
    double c0() const { return c0_; }

    Eigen::MatrixXcd assemble(int m, double a) const;

    // factorize canonical in-band modes for the given time coefficient
    void prepare(double a);
    bool prepared(double a) const;

    Eigen::VectorXcd solve(int m, double a, const Eigen::VectorXcd& rhs) const;

    // dense one-step map (u, eta, c) -> (u, eta, c) for implicit Euler at dt
    Eigen::MatrixXcd propagator(int m, double dt) const;

    // index helpers
    int iu(int comp, int j) const { return comp * grid_->Nz + j; }
    int ip(int j) const { return 3 * grid_->Nz + j; }
    int ieta() const { return 4 * grid_->Nz; }
    int ic() const { return 4 * grid_->Nz + 1; }

private:
    GridPtr grid_;
    double gamma_, sigma0_, sigma0p_, c0_;
    using Factor = Eigen::PartialPivLU<Eigen::MatrixXcd>;
    mutable std::unordered_map<uint64_t, std::vector<std::unique_ptr<Factor>>> cache_;
    static uint64_t key(double a);
};

// One linear implicit step over the whole grid: per-mode back substitution on
// canonical modes, Hermitian partners filled by conjugation. rhs_* are the
// per-row right-hand sides already combined (old state / dt + forcing).
struct SpectralState {
    std::array<BulkField, 3> u;
    BulkField p;
    SurfaceField eta;
    SurfaceField c;
};

struct ModeRhs {
    // per mode: interior momentum (3 x Nz), divergence (Nz), stress (3),
    // kinematic (1), surfactant (1); assembled into the 4Nz+2 layout
    std::array<BulkField, 3> f;  // momentum rows
    BulkField h;                 // divergence rows
    std::array<SurfaceField, 3> stress;
    SurfaceField kin;
    SurfaceField surf;
};

SpectralState step_linear(const LinearCore& core, double a, const ModeRhs& rhs);

// Quadratic energy of the perturbed linear system:
//   int |u|^2/2 + int |eta|^2/2 + sigma0/2 |grad eta|^2 + (-sigma0'/(2 c0)) |c|^2
double linear_energy(const std::array<BulkField, 3>& u, const SurfaceField& eta,
                     const SurfaceField& c, double sigma0, double sigma0p, double c0);

}  // namespace slick
