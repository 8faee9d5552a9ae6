// Centered self-dual sampling grid and complex signals over it.
//
// Points on each axis are x_j = (j - N/2) * delta with delta = 1/sqrt(N), so
// delta^2 * N = 1 and the centered DFT maps the grid onto itself.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "metawig/errors.hpp"

namespace metawig {

using cd = std::complex<double>;

struct Grid {
    int n = 0;   // samples per axis, even
    int dim = 1; // number of axes

    Grid() = default;
    Grid(int n_, int dim_);

    double delta() const { return 1.0 / std::sqrt(static_cast<double>(n)); }
    double period() const { return n * delta(); } // = sqrt(N)
    int64_t size() const;

    // physical coordinate of axis index j
    double point(int j) const { return (j - n / 2) * delta(); }
    // nearest axis index of a physical coordinate (no range check)
    int index_of(double x) const { return static_cast<int>(std::lround(x / delta())) + n / 2; }
    int wrap(int64_t j) const { int64_t m = j % n; return static_cast<int>(m < 0 ? m + n : m); }

    void unravel(int64_t flat, int* idx) const; // row-major, last axis fastest
    int64_t ravel(const int* idx) const;        // indices taken mod n
    void coords(int64_t flat, double* x) const;

    bool operator==(const Grid& o) const { return n == o.n && dim == o.dim; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

struct Signal {
    Grid grid;
    std::vector<cd> values;

    Signal() = default;
    explicit Signal(const Grid& g) : grid(g), values(g.size(), cd(0.0, 0.0)) {}
    Signal(const Grid& g, std::vector<cd> v);

    int64_t size() const { return static_cast<int64_t>(values.size()); }
};

// Discrete L2 norm: delta^{m/2} * l2 norm of the coefficient vector.
double l2_norm(const Signal& f);
// Sesquilinear inner product <f,g> = delta^m * sum f * conj(g).
cd inner(const Signal& f, const Signal& g);

Signal impulse(const Grid& g, int64_t flat_index, bool unit_norm = false);
// gaussian(): exp(-pi |t - center|^2), amplitude 1; normalized() scales to unit L2 norm.
Signal gaussian(const Grid& g, double width = 1.0);
Signal normalized(const Signal& f);

Signal parity(const Signal& f);                          // f(-t), periodic indices
Signal translate(const Signal& f, const int* shift_idx); // T_x, integer index shift
Signal modulate(const Signal& f, const int* freq_idx);   // M_xi, grid-aligned frequency
// pi(z) = M_xi T_x for grid-aligned z = (x_idx, xi_idx), each of length dim.
Signal phase_space_shift(const Signal& f, const int* x_idx, const int* xi_idx);

// f (x) conj(g): 2m-axis signal on the doubled grid, f-axes first.
Signal tensor_conj(const Signal& f, const Signal& g);

// largest |difference| after optimal global phase alignment of b onto a
double max_diff_up_to_phase(const std::vector<cd>& a, const std::vector<cd>& b);
double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b);

// Deterministic RNG (never uses std distributions; output is reproducible).
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    uint64_t next_u64();
    double uniform();                       // [0,1)
    double uniform(double a, double b);
    double normal();                        // Box-Muller, deterministic
    int uniform_int(int lo, int hi);        // inclusive bounds
    cd complex_normal();
};

} // namespace metawig
