// Seeded, documented test families: concentrated random signals (shifted,
// modulated Gaussian combinations), random generator words with bounded
// parameters, and random decomposable matrices with sampling-safe warps.
#pragma once

#include "metawig/engine.hpp"

namespace metawig {

// Sum of up to four grid-aligned time-frequency shifted Gaussians with random
// complex weights, normalized; shifts stay within +-max_shift_idx cells.
Signal random_signal(const Grid& g, Rng& rng, int atoms = 4, int max_shift_idx = 0);

// Random word of 5..10 exact-unitary atoms (Fourier, partial Fourier, integer
// chirps when integer_params, bounded real chirps otherwise, integer
// unimodular shears); tracked matrix is an exact group element.
GeneratorWord random_word(int m, Rng& rng, bool integer_params = false);

// Random V_C A_FT2 D_L with a right-regular, sampling-safe L (a perturbation
// of the STFT shear) and a small symmetric C.
SymplecticMatrix random_decomposable(int d, Rng& rng);

// Random V_C A_FT2 D_L (d = 1) whose L is integer with |L12| = |L22| = 1, so
// every warp in the fast path lands on the grid; C is an arbitrary random
// symmetric matrix.
SymplecticMatrix random_decomposable_exact_warp(Rng& rng);

// Random symmetric matrix with entries in [-scale, scale].
Eigen::MatrixXd random_symmetric(int m, Rng& rng, double scale);

} // namespace metawig
