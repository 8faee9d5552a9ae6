// Block-matrix algebra over Sp(m,R): construction, verification, inversion,
// classification predicates and the factorizations the rest of the toolkit
// consumes.
//
// A SymplecticMatrix holds a real 2m x 2m matrix. The 2x2 block view is
// [[A, B], [C, D]] with m x m blocks. When m = 2d the 4x4 block view exposes
// d x d blocks A_ij, i,j in 1..4.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "metawig/errors.hpp"

namespace metawig {

struct Tolerances {
    double structural = 1e-9;     // absolute max-norm for structural checks
    double generator = 1e-12;     // constructor outputs must pass at this level
    double det_rel = 1e-8;        // relative singularity threshold for determinants
};

struct SymplecticMatrix {
    int m = 1;                 // half dimension: matrix is 2m x 2m
    Eigen::MatrixXd entries;

    SymplecticMatrix() : entries(Eigen::MatrixXd::Identity(2, 2)) {}
    // check=true verifies the symplectic condition at tol and throws otherwise.
    explicit SymplecticMatrix(Eigen::MatrixXd e, bool check = true,
                              double tol = Tolerances{}.structural);

    int dim() const { return 2 * m; }

    // 2x2 block view (m x m blocks)
    Eigen::MatrixXd blockA() const { return entries.topLeftCorner(m, m); }
    Eigen::MatrixXd blockB() const { return entries.topRightCorner(m, m); }
    Eigen::MatrixXd blockC() const { return entries.bottomLeftCorner(m, m); }
    Eigen::MatrixXd blockD() const { return entries.bottomRightCorner(m, m); }

    // 4x4 block view (d x d blocks, requires m = 2d); i, j in 1..4
    int d() const;
    Eigen::MatrixXd block4(int i, int j) const;
};

Eigen::MatrixXd standard_J(int m);

struct SymplecticCheck {
    bool ok = false;
    double defect = 0.0;             // max-norm of A^T J A - J
    std::vector<std::string> failed; // which block conditions fail
};

// max-norm test of M^T J M = J, with a report of the three block conditions
// (A^T C symmetric, B^T D symmetric, A^T D - C^T B = I).
SymplecticCheck check_symplectic(const Eigen::MatrixXd& M, double tol = Tolerances{}.structural);

// [[D^T, -B^T], [-C^T, A^T]]
SymplecticMatrix symplectic_inverse(const SymplecticMatrix& A);

// Generators
SymplecticMatrix gen_J(int m);
SymplecticMatrix gen_dilation(const Eigen::MatrixXd& L);        // D_L
SymplecticMatrix gen_chirp_lower(const Eigen::MatrixXd& C);     // V_C
SymplecticMatrix gen_chirp_upper(const Eigen::MatrixXd& C);     // V_C^T
SymplecticMatrix gen_partial_ft(int d);                         // A_FT2, m = 2d
SymplecticMatrix gen_tau(double tau, int d);                    // A_tau, m = 2d
SymplecticMatrix gen_stft(int d);                               // A_ST, m = 2d

// E_A = [[A11, A13], [A21, A23]] (2d x 2d), requires m = 2d.
Eigen::MatrixXd shift_matrix(const SymplecticMatrix& A);

struct CovarianceResult {
    bool covariant = false;
    double residual = 0.0; // max deviation from the covariant block pattern
};
CovarianceResult is_covariant(const SymplecticMatrix& A, double tol = Tolerances{}.structural);

// B_A = [[A13, I/2 - A11], [I/2 - A11^T, -A21]]; requires covariance. Also
// verifies the reconstruction V_{B_A}^T A_{1/2} = A.
Eigen::MatrixXd cohen_matrix(const SymplecticMatrix& A, double tol = Tolerances{}.structural);

struct WignerDecomposition {
    Eigen::MatrixXd C; // symmetric 2d x 2d
    Eigen::MatrixXd L; // invertible 2d x 2d
};
// A = V_C * A_FT2 * D_L, with the cross block of C fixed to zero (the
// decomposition is not unique; any symmetric completion works). Returns
// nothing, with a reason, when A is not decomposable.
std::optional<WignerDecomposition> wigner_decompose(const SymplecticMatrix& A,
                                                    std::string* reason = nullptr,
                                                    double tol = Tolerances{}.structural);

bool is_right_regular(const Eigen::MatrixXd& L, double det_rel = Tolerances{}.det_rel);

struct FreeFactorization {
    SymplecticMatrix first;  // A1 = A V_{tI} J^{-1}
    SymplecticMatrix second; // A2 = J V_{-tI}
    double t = 0.0;
};
// Deterministic scan over t in {0, 1, -1, 2, -2, 1/2, -1/2} followed by seeded
// uniform draws from (-3, 3); throws when the scan budget is exhausted.
FreeFactorization free_factorize(const SymplecticMatrix& A,
                                 double det_rel = Tolerances{}.det_rel);

// A' = A * D_S * J with S = diag(I, -I); satisfies W_A(F f, F g) = W_{A'}(f, g).
SymplecticMatrix fundamental_identity_matrix(const SymplecticMatrix& A);

struct Classification {
    bool is_symplectic = false;
    bool is_free = false;
    bool is_covariant = false;
    bool is_shift_invertible = false;
    bool is_wigner_decomposable = false;
    std::optional<Eigen::MatrixXd> shift_mat;       // E_A
    std::optional<Eigen::MatrixXd> cohen_mat;       // B_A
    std::optional<WignerDecomposition> decomposition;
    std::optional<bool> right_regular;
    std::vector<std::string> reasons;
};
Classification classify(const SymplecticMatrix& A, const Tolerances& tol = Tolerances{});

// |det M| > det_rel * (Hadamard scale of M)
bool invertible_at_scale(const Eigen::MatrixXd& M, double det_rel = Tolerances{}.det_rel);

namespace testhooks {
// Flips the sign of the A23 block inside shift_matrix; used by the suite
// sensitivity check. Off by default.
extern bool mutate_shift_sign;
} // namespace testhooks

} // namespace metawig
