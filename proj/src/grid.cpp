#include "slick/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

#include "slick/errors.hpp"

namespace slick {

namespace {
std::mutex planner_mutex;  // FFTW planning is not thread-safe
}

Grid::Grid(double L1_, double L2_, double b_, int N1_, int N2_, int Nz_, DealiasRule rule_)
    : L1(L1_), L2(L2_), depth(b_), N1(N1_), N2(N2_), Nz(Nz_), rule(rule_) {
    if (L1 <= 0 || L2 <= 0 || depth <= 0) throw ConfigError("grid: L1, L2, b must be positive");
    if (N1 < 8 || N2 < 8 || Nz < 8) throw ConfigError("grid: N1, N2, Nz must be >= 8");
    if (N1 % 2 || N2 % 2) throw ConfigError("grid: N1, N2 must be even");

    NP1 = (rule == DealiasRule::three_halves) ? 3 * N1 / 2 : N1;
    NP2 = (rule == DealiasRule::three_halves) ? 3 * N2 / 2 : N2;

    cheb_ = std::make_unique<ChebStack>(Nz, depth);

    wave1_.resize(N1);
    wave2_.resize(N2);
    for (int i = 0; i < N1; ++i) wave1_[i] = (i <= N1 / 2) ? i : i - N1;
    for (int j = 0; j < N2; ++j) wave2_[j] = (j <= N2 / 2) ? j : j - N2;

    const int cut1 = (rule == DealiasRule::two_thirds) ? N1 / 3 : N1 / 2 - 1;
    const int cut2 = (rule == DealiasRule::two_thirds) ? N2 / 3 : N2 / 2 - 1;
    kmag_.resize(N1 * N2);
    band_.resize(N1 * N2);
    herm_.resize(N1 * N2);
    for (int i = 0; i < N1; ++i) {
        for (int j = 0; j < N2; ++j) {
            const int m = i * N2 + j;
            const double ka = 2.0 * M_PI * wave1_[i] / L1;
            const double kb = 2.0 * M_PI * wave2_[j] / L2;
            kmag_[m] = std::sqrt(ka * ka + kb * kb);
            const bool nyq = (i == N1 / 2) || (j == N2 / 2);
            band_[m] = !nyq && std::abs(wave1_[i]) <= cut1 && std::abs(wave2_[j]) <= cut2;
            if (band_[m]) band_list_.push_back(m);
            const int ic = (N1 - i) % N1;
            const int jc = (N2 - j) % N2;
            herm_[m] = ic * N2 + jc;
        }
    }

    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_complex* a = fftw_alloc_complex(static_cast<size_t>(NP1) * NP2);
    fftw_complex* c = fftw_alloc_complex(static_cast<size_t>(NP1) * NP2);
    plan_fwd_ = fftw_plan_dft_2d(NP1, NP2, a, c, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_dft_2d(NP1, NP2, a, c, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(c);
    if (!plan_fwd_ || !plan_bwd_) throw Error("grid: FFTW planning failed");
}

Grid::~Grid() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

namespace {
// per-thread transform scratch in FFTW-aligned storage, grown on demand
struct Scratch {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    size_t cap = 0;
    ~Scratch() {
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
};
Scratch& scratch(size_t n) {
    thread_local Scratch s;
    if (s.cap < n) {
        if (s.in) fftw_free(s.in);
        if (s.out) fftw_free(s.out);
        s.in = fftw_alloc_complex(n);
        s.out = fftw_alloc_complex(n);
        s.cap = n;
    }
    return s;
}
}  // namespace

void Grid::to_phys(const cplx* coef, double* phys) const {
    const size_t n = static_cast<size_t>(NP1) * NP2;
    Scratch& s = scratch(n);
    std::fill_n(s.in.begin(), n, cplx(0.0, 0.0));
    // embed, mapping negative wavenumbers to the tail of the padded array
    for (int i = 0; i < N1; ++i) {
        if (i == N1 / 2) continue;
        const int ip = wave1_[i] >= 0 ? wave1_[i] : NP1 + wave1_[i];
        for (int j = 0; j < N2; ++j) {
            if (j == N2 / 2) continue;
            const int jp = wave2_[j] >= 0 ? wave2_[j] : NP2 + wave2_[j];
            s.in[static_cast<size_t>(ip) * NP2 + jp] = coef[i * N2 + j];
        }
    }
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                     reinterpret_cast<fftw_complex*>(s.in.data()),
                     reinterpret_cast<fftw_complex*>(s.out.data()));
    for (size_t q = 0; q < n; ++q) phys[q] = s.out[q].real();
}

void Grid::to_spec(const double* phys, cplx* coef) const {
    const size_t n = static_cast<size_t>(NP1) * NP2;
    Scratch& s = scratch(n);
    auto& in = s.in;
    auto& out = s.out;
    for (size_t q = 0; q < n; ++q) in[q] = cplx(phys[q], 0.0);
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / (static_cast<double>(NP1) * NP2);
    for (int i = 0; i < N1; ++i) {
        for (int j = 0; j < N2; ++j) {
            const int m = i * N2 + j;
            if (!band_[m]) {
                coef[m] = 0.0;
                continue;
            }
            const int ip = wave1_[i] >= 0 ? wave1_[i] : NP1 + wave1_[i];
            const int jp = wave2_[j] >= 0 ? wave2_[j] : NP2 + wave2_[j];
            coef[m] = out[static_cast<size_t>(ip) * NP2 + jp] * scale;
        }
    }
}

void Grid::make_real(cplx* coef) const {
    for (int m = 0; m < N1 * N2; ++m) {
        const int mc = herm_[m];
        if (m == mc) {
            coef[m] = cplx(coef[m].real(), 0.0);
        } else if (m < mc) {
            const cplx avg = 0.5 * (coef[m] + std::conj(coef[mc]));
            coef[m] = avg;
            coef[mc] = std::conj(avg);
        }
    }
    // Nyquist rows break Hermitian pairing under differentiation; keep them empty
    for (int i = 0; i < N1; ++i) coef[i * N2 + N2 / 2] = 0.0;
    for (int j = 0; j < N2; ++j) coef[(N1 / 2) * N2 + j] = 0.0;
}

void Grid::mask(cplx* coef) const {
    for (int m = 0; m < N1 * N2; ++m)
        if (!band_[m]) coef[m] = 0.0;
}

std::shared_ptr<const Grid> make_grid(double L1, double L2, double b, int N1, int N2, int Nz,
                                      DealiasRule rule) {
    return std::make_shared<const Grid>(L1, L2, b, N1, N2, Nz, rule);
}

}  // namespace slick
