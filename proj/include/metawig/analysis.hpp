// Discrete surrogates of mixed and modulation norms, Gabor frame bounds, and
// the concentration / Lp inequality suite for decomposable metaplectic Wigner
// distributions.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "metawig/distributions.hpp"

namespace metawig {

struct MixedNormSpec {
    double p = 2.0;
    double q = 2.0;
    double s = 0.0; // weight exponent of v_s(z) = (1 + |z|^2)^{s/2}
};

// Riemann-sum weighted mixed norm: inner p over the position axes, outer q
// over the frequency axes; infinity as maxima; weight on physical coordinates.
double mixed_norm(const Distribution& F, const MixedNormSpec& spec);

double modulation_norm(const Signal& f, const MixedNormSpec& spec, const Signal& window);

struct FrameSpec {
    Signal window;
    int a = 1; // index step in position
    int b = 1; // index step in frequency
};

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
    Eigen::MatrixXcd frame_op; // N x N, for dual-frame reconstruction
};
// Extreme eigenvalues of the dense Gabor frame operator on the lattice
// (a Z_N) x (b Z_N) in index space; d = 1 windows.
FrameBounds frame_bounds(const FrameSpec& spec);

struct LiebConstants {
    double p = 2.0;
    double paper_constant = 0.0;   // as printed; reported, never asserted
    double derived_constant = 0.0; // Jacobian-consistent; asserted
};
LiebConstants lieb_constants(const SymplecticMatrix& A, double p);

struct LiebReport {
    double ratio = 0.0;  // ||W_A(f,g)||_p / (||f||_2 ||g||_2)
    LiebConstants constants;
    double margin = 0.0; // bound - ratio for p >= 2, ratio - bound for p <= 2
    bool holds = false;
};
LiebReport lieb_check(const SymplecticMatrix& A, const Signal& f, const Signal& g, double p);

struct UncertaintyReport {
    double measure = 0.0;          // |U| of the greedy superlevel set
    double mass_target = 0.0;      // (1 - eps) * total
    double simple_floor = 0.0;
    std::vector<std::pair<double, double>> improved_floors; // (p, floor)
    bool satisfied = false;
};
// Smallest-measure set capturing >= (1 - eps) of ||W_A(f,g)||_2^2, with the
// determinant-corrected concentration floors. Requires unit-norm f, g.
UncertaintyReport weak_uncertainty(const SymplecticMatrix& A, const Signal& f, const Signal& g,
                                   double eps, const std::vector<double>& improved_ps = {3.0, 4.0});

struct SupportReport {
    double measure = 0.0; // measure of {|W| > threshold * max|W|}
    double max_abs = 0.0;
};
SupportReport support_report(const SymplecticMatrix& A, const Signal& f, const Signal& g,
                             double threshold);

struct NormRelationReport {
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    // relative deviation of ||W_A(f,g)||_p from the prefactor/Jacobian-corrected
    // warped STFT norm (s = 0 and sampling-safe warps only)
    std::optional<double> exact_rel_dev;
};
NormRelationReport norm_relation_report(const SymplecticMatrix& A,
                                        const std::vector<Signal>& family, const Signal& window,
                                        double p, double s);

} // namespace metawig
