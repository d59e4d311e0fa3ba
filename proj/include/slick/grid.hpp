#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "slick/chebyshev.hpp"

namespace slick {

enum class DealiasRule { two_thirds, three_halves };

using cplx = std::complex<double>;

// Discrete function space: N1 x N2 Fourier layer on the periodic cross-section,
// Nz Chebyshev-Gauss-Lobatto points on [-b, 0]. Immutable; FFT plans are built
// once in the constructor (FFTW_ESTIMATE, so planning is deterministic).
class Grid {
public:
    Grid(double L1, double L2, double b, int N1, int N2, int Nz,
         DealiasRule rule = DealiasRule::two_thirds);
    ~Grid();
    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    double L1, L2, depth;
    int N1, N2, Nz;
    DealiasRule rule;
    int NP1, NP2;  // evaluation grid (padded for three_halves)

    int nmodes() const { return N1 * N2; }
    int nphys() const { return NP1 * NP2; }
    double area() const { return L1 * L2; }
    double volume() const { return L1 * L2 * depth; }

    // wavenumber of storage index (FFTW ordering)
    double k1(int i) const { return 2.0 * M_PI * wave1_[i] / L1; }
    double k2(int j) const { return 2.0 * M_PI * wave2_[j] / L2; }
    double k1m(int m) const { return k1(m / N2); }
    double k2m(int m) const { return k2(m % N2); }
    double kmag(int m) const { return kmag_[m]; }
    bool in_band(int m) const { return band_[m]; }
    const std::vector<int>& band_modes() const { return band_list_; }
    // canonical representatives for Hermitian pairs: modes m with conj partner
    // herm_[m] > m are solved; partners are filled by conjugation
    int herm_partner(int m) const { return herm_[m]; }

    // physical sample points on the evaluation grid
    double x1p(int q) const { return L1 * (q / NP2) / NP1; }
    double x2p(int q) const { return L2 * (q % NP2) / NP2; }

    const ChebStack& cheb() const { return *cheb_; }
    const std::vector<double>& z() const { return cheb_->nodes; }
    const std::vector<double>& zw() const { return cheb_->weights; }

    // spectral <-> physical on the evaluation grid (real fields).
    // coef: N1*N2 complex, Hermitian; phys: NP1*NP2 real. Thread-safe.
    void to_phys(const cplx* coef, double* phys) const;
    void to_spec(const double* phys, cplx* coef) const;  // masks to retained band

    // enforce Hermitian symmetry and zero Nyquist rows (real fields)
    void make_real(cplx* coef) const;
    void mask(cplx* coef) const;  // zero out-of-band modes

private:
    std::unique_ptr<ChebStack> cheb_;
    std::vector<int> wave1_, wave2_;  // integer wavenumbers per index
    std::vector<double> kmag_;
    std::vector<char> band_;
    std::vector<int> band_list_;
    std::vector<int> herm_;
    void* plan_fwd_ = nullptr;  // fftw_plan, NP1 x NP2 c2c
    void* plan_bwd_ = nullptr;
};

std::shared_ptr<const Grid> make_grid(double L1, double L2, double b, int N1, int N2,
                                      int Nz, DealiasRule rule = DealiasRule::two_thirds);

}  // namespace slick
