// Applies metaplectic operators to sampled signals.
//
// Three interchangeable paths: generator-word composition (exact unitary grid
// atoms), the free-matrix quadrature formula, and dense matrices for
// verification. The grid is self-dual (delta^2 N = 1), so the centered DFT is
// exactly unitary and input/output grids coincide.
//
// Sign conventions. The centered DFT uses e^{-2 pi i x.y}. The free-matrix
// quadrature is
//   mu(A) f(x) = |det B|^{-1/2} Phi_{D B^{-1}}(x)
//                 sum_y f(y) e^{-2 pi i (B^{-1} x).y} Phi_{B^{-1} A}(y) delta^m,
// which fixes mu(J) = DFT, mu(V_C) = Phi_C ., and the composition law; see the
// README for the error budget of each path.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "metawig/grid.hpp"
#include "metawig/symplectic.hpp"

namespace metawig {

// ---- elementary grid operations -------------------------------------------

// Unitary centered DFT over the listed axes (all axes when empty).
Signal dft_centered(const Signal& f, const std::vector<int>& axes = {}, bool inverse = false);

// Phi_C(t) = e^{i pi t . C t} sampled on grid^m; C symmetric m x m.
std::vector<cd> chirp_values(const Grid& g, const Eigen::MatrixXd& C);

Signal apply_chirp_mul(const Eigen::MatrixXd& C, const Signal& f);
// mu(V_C^T): convolution path, computed as F^{-1} ( Phi_{-C} . F f ).
Signal apply_chirp_conv(const Eigen::MatrixXd& C, const Signal& f);

enum class DilationMode { Auto, Exact, Bandlimited };

struct DilationResult {
    Signal out;
    bool exact = false;
    double error_estimate = 0.0; // share of spectral mass in the edge band
};
// |det L|^{1/2} f(L .). Exact mode requires an integer matrix with |det| = 1
// (a permutation of the periodic index lattice); otherwise trigonometric
// interpolation is used and an error estimate is reported.
DilationResult apply_dilation(const Eigen::MatrixXd& L, const Signal& f,
                              DilationMode mode = DilationMode::Auto);

bool integer_unimodular(const Eigen::MatrixXd& L, double tol = 1e-9);

// ---- generator words --------------------------------------------------------

enum class AtomKind { Fourier, PartialFourier, Dilation, ChirpMul, ChirpConv };

struct Atom {
    AtomKind kind;
    Eigen::MatrixXd param;  // C or L (m x m); unused for Fourier kinds
    std::vector<int> axes;  // PartialFourier only

    static Atom fourier();
    static Atom partial_fourier(std::vector<int> axes);
    static Atom dilation(const Eigen::MatrixXd& L);
    static Atom chirp_mul(const Eigen::MatrixXd& C);
    static Atom chirp_conv(const Eigen::MatrixXd& C);
};

// Atoms listed in application order (atoms[0] acts first). The tracked
// symplectic matrix is the product with later atoms on the left.
struct GeneratorWord {
    int dim = 1;
    std::vector<Atom> atoms;

    GeneratorWord() = default;
    explicit GeneratorWord(int m) : dim(m) {}
    Eigen::MatrixXd matrix() const;
};

Eigen::MatrixXd atom_matrix(const Atom& a, int m);
Signal apply_atom(const Atom& a, const Signal& f);
Signal apply_word(const GeneratorWord& w, const Signal& f);
// Atom-by-atom inverse (Fourier atoms become their cubes, chirps negate,
// dilations invert); tracked matrix is the exact inverse.
GeneratorWord inverse_word(const GeneratorWord& w);
// Adjoint of the realized word (reversed atom adjoints). For exact atoms this
// is the inverse; for band-limited dilations it is the matrix adjoint, which
// is the numerically robust inverse on band-concentrated signals.
Signal apply_word_adjoint(const GeneratorWord& w, const Signal& f);

// ---- realizations of mu(A) --------------------------------------------------

// Dense quadrature of the free-matrix formula; O(N^{2m}).
Signal apply_free(const SymplecticMatrix& A, const Signal& f);
Eigen::MatrixXcd free_quadrature_matrix(const SymplecticMatrix& A, const Grid& g);

// Exact word for a free 2x2 matrix: V_a J V_b J V_c with
// a = (1+delta)/beta, b = beta, c = (1+alpha)/beta.
GeneratorWord three_chirp_word(const Eigen::MatrixXd& free2x2);
// Exact word for an integer SL(2,Z) matrix via the Euclidean algorithm.
GeneratorWord sl2z_word(const Eigen::MatrixXd& int2x2);

struct Realization {
    std::optional<GeneratorWord> word;
    std::optional<FreeFactorization> frees; // quadrature fallback
    bool exact = false;                     // all atoms exact-unitary on the grid
    std::string description;
};

// Chooses a realization: identity/J/V_C/V_C^T/D_L recognitions, exact words
// for every 2x2 matrix, decomposable words for m = 2d, free-pair quadrature
// otherwise.
Realization plan_realization(const SymplecticMatrix& A);

// free_factorize then apply each free factor (exact word at m = 1, quadrature
// at m >= 2).
Signal apply_general(const SymplecticMatrix& A, const Signal& f);

enum class EnginePath { Auto, Word, General };
Signal apply_metaplectic(const SymplecticMatrix& A, const Signal& f,
                         EnginePath path = EnginePath::Auto);
// mu(A)^{-1}, realized through the symplectic inverse.
Signal apply_metaplectic_inverse(const SymplecticMatrix& A, const Signal& f,
                                 EnginePath path = EnginePath::Auto);

// ---- dense oracle -----------------------------------------------------------

int64_t dense_oracle_cap(); // METAWIG_CAP env override, default 4096 columns

struct DenseOperator {
    Eigen::MatrixXcd matrix;
    double unitarity_defect = 0.0; // max-norm of U^H U - I
    std::string provenance;
};
DenseOperator dense_matrix_of(const GeneratorWord& w, const Grid& g,
                              std::optional<int64_t> cap = std::nullopt);
DenseOperator dense_matrix_of(const SymplecticMatrix& A, const Grid& g,
                              std::optional<int64_t> cap = std::nullopt);

// ---- off-grid evaluation ----------------------------------------------------

// Trigonometric evaluation of the band-limited interpolant at arbitrary
// points (rows of P, one point per row). plane_mode zeroes values outside the
// fundamental box instead of wrapping.
std::vector<cd> trig_eval(const Signal& f, const Eigen::MatrixXd& P, bool plane_mode = false);

// 1-D evaluation matrix: row t maps grid samples to the interpolant at
// points[t]. plane_mode zeroes out-of-box rows.
Eigen::MatrixXcd trig_eval_matrix_1d(const Grid& g, const std::vector<double>& points,
                                     bool plane_mode = false);

// Per-axis interpolation phase factor e^{2 pi i xi_nu p}; the lowest bin uses
// the symmetric cosine convention (real interpolants for real data).
cd interp_phase(const Grid& g, int nu_index, double p);

} // namespace metawig
