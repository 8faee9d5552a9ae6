// Time-frequency representations: STFT, tau-Wigner / Rihaczek, general
// metaplectic Wigner distributions, the fast closed form for decomposable
// shift-invertible matrices, and Cohen kernels.
//
// A Distribution lives on the 2d-axis phase-space grid; the first d axes are
// position, the last d frequency.
#pragma once

#include <optional>
#include <string>

#include "metawig/engine.hpp"
#include "metawig/grid.hpp"
#include "metawig/symplectic.hpp"

namespace metawig {

struct Distribution {
    Signal sig;              // 2d-axis signal
    std::string provenance;  // which path produced it
    Eigen::MatrixXd matrix;  // the symplectic matrix, when one applies
};

// V_g f on the doubled grid via windowed centered DFTs (window shifts are
// periodic in index space).
Distribution stft(const Signal& f, const Signal& g);

// Direct quadrature of the tau-Wigner integral; off-grid arguments are read
// through trigonometric shifts. tau in [0,1]; tau = 1/2 is the classical
// Wigner distribution, tau = 0 the Rihaczek form.
Distribution tau_wigner(double tau, const Signal& f, const Signal& g);

enum class DistPath { Auto, Dense, Word, Fast };

Distribution metaplectic_wigner(const SymplecticMatrix& A, const Signal& f, const Signal& g,
                                DistPath path = DistPath::Auto);
Distribution metaplectic_wigner(const GeneratorWord& w, const Signal& f, const Signal& g);

// Whether the fast path's warped STFT reads stay within the sampling budget
// (window warp, coordinate stretch and frequency slope all moderate).
bool fast_path_safe(const WignerDecomposition& dec);

// Chirped, coordinate-warped STFT for A = V_C A_FT2 D_L with right-regular L.
Distribution fast_decomposable(const SymplecticMatrix& A, const Signal& f, const Signal& g);

// Sigma_A = F^{-1}(Phi_{-B_A}) on the phase-space grid; requires covariance.
Distribution cohen_kernel(const SymplecticMatrix& A, const Grid& phase_grid);

// Periodic delta-weighted convolution of two phase-space arrays (via DFT).
Distribution convolve(const Distribution& u, const Distribution& v);

struct IdentityReport {
    double deviation = 0.0; // max deviation up to one global phase
    std::string detail;
};
// Compares W_A(F f, F g) with W_{A'}(f, g).
IdentityReport fundamental_identity_check(const SymplecticMatrix& A, const Signal& f,
                                          const Signal& g, DistPath path = DistPath::Auto);

struct RecoveryResult {
    cd recovered;     // <W_A(f,g1), W_A(pi(w)g3,g2)> / <g2,g1>
    cd direct;        // <f, pi(w) g3>
    double deviation; // |recovered - direct|
};
// STFT recovery from any metaplectic Wigner distribution at a grid-aligned
// phase-space point w = (x_idx, xi_idx).
RecoveryResult stft_recovery(const SymplecticMatrix& A, const Signal& f, const Signal& g1,
                             const Signal& g2, const Signal& g3, const int* x_idx,
                             const int* xi_idx, double min_overlap = 1e-6);

// | ||W||_2 - ||f||_2 ||g||_2 | / (||f||_2 ||g||_2); the Moyal diagnostic.
double moyal_defect(const Distribution& W, const Signal& f, const Signal& g);

} // namespace metawig
