#include "metawig/symplectic.hpp"

#include <cmath>

#include "metawig/grid.hpp"

namespace metawig {

namespace testhooks {
bool mutate_shift_sign = false;
} // namespace testhooks

SymplecticMatrix::SymplecticMatrix(Eigen::MatrixXd e, bool check, double tol)
    : entries(std::move(e)) {
    if (entries.rows() != entries.cols() || entries.rows() % 2 != 0 || entries.rows() == 0)
        throw domain_error("symplectic: matrix must be square with even size");
    m = static_cast<int>(entries.rows()) / 2;
    if (check) {
        SymplecticCheck c = check_symplectic(entries, tol);
        if (!c.ok)
            throw invariant_error("symplectic: defect " + std::to_string(c.defect) +
                                  " exceeds tolerance");
    }
}

int SymplecticMatrix::d() const {
    if (m % 2 != 0) throw domain_error("symplectic: 4-block view requires even half-dimension");
    return m / 2;
}

Eigen::MatrixXd SymplecticMatrix::block4(int i, int j) const {
    int dd = d();
    if (i < 1 || i > 4 || j < 1 || j > 4) throw domain_error("block4: indices in 1..4");
    return entries.block((i - 1) * dd, (j - 1) * dd, dd, dd);
}

Eigen::MatrixXd standard_J(int m) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    J.topRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
    J.bottomLeftCorner(m, m) = -Eigen::MatrixXd::Identity(m, m);
    return J;
}

SymplecticCheck check_symplectic(const Eigen::MatrixXd& M, double tol) {
    SymplecticCheck out;
    if (M.rows() != M.cols() || M.rows() % 2 != 0 || M.rows() == 0)
        throw domain_error("check_symplectic: matrix must be square with even size");
    int m = static_cast<int>(M.rows()) / 2;
    Eigen::MatrixXd J = standard_J(m);
    Eigen::MatrixXd R = M.transpose() * J * M - J;
    out.defect = R.cwiseAbs().maxCoeff();
    out.ok = out.defect <= tol;
    if (!out.ok) {
        Eigen::MatrixXd A = M.topLeftCorner(m, m), B = M.topRightCorner(m, m);
        Eigen::MatrixXd C = M.bottomLeftCorner(m, m), D = M.bottomRightCorner(m, m);
        Eigen::MatrixXd s1 = A.transpose() * C - C.transpose() * A;
        Eigen::MatrixXd s2 = B.transpose() * D - D.transpose() * B;
        Eigen::MatrixXd s3 = A.transpose() * D - C.transpose() * B -
                             Eigen::MatrixXd::Identity(m, m);
        if (s1.cwiseAbs().maxCoeff() > tol) out.failed.push_back("A^T C not symmetric");
        if (s2.cwiseAbs().maxCoeff() > tol) out.failed.push_back("B^T D not symmetric");
        if (s3.cwiseAbs().maxCoeff() > tol) out.failed.push_back("A^T D - C^T B != I");
    }
    return out;
}

SymplecticMatrix symplectic_inverse(const SymplecticMatrix& A) {
    int m = A.m;
    Eigen::MatrixXd inv(2 * m, 2 * m);
    inv.topLeftCorner(m, m) = A.blockD().transpose();
    inv.topRightCorner(m, m) = -A.blockB().transpose();
    inv.bottomLeftCorner(m, m) = -A.blockC().transpose();
    inv.bottomRightCorner(m, m) = A.blockA().transpose();
    return SymplecticMatrix(inv, /*check=*/false);
}

bool invertible_at_scale(const Eigen::MatrixXd& M, double det_rel) {
    // Hadamard scale: product of row norms, floored at 1 so zero rows fail.
    double scale = 1.0;
    for (int i = 0; i < M.rows(); ++i) scale *= std::max(M.row(i).norm(), 1e-30);
    scale = std::max(scale, 1e-30);
    return std::abs(M.determinant()) > det_rel * scale;
}

static void require_symmetric(const Eigen::MatrixXd& C, const char* who) {
    if (C.rows() != C.cols()) throw domain_error(std::string(who) + ": matrix must be square");
    if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, C.cwiseAbs().maxCoeff()))
        throw domain_error(std::string(who) + ": matrix must be symmetric");
}

SymplecticMatrix gen_J(int m) { return SymplecticMatrix(standard_J(m), false); }

SymplecticMatrix gen_dilation(const Eigen::MatrixXd& L) {
    if (L.rows() != L.cols()) throw domain_error("D_L: L must be square");
    if (!invertible_at_scale(L)) throw domain_error("D_L: L must be invertible");
    int m = static_cast<int>(L.rows());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    M.topLeftCorner(m, m) = L.inverse();
    M.bottomRightCorner(m, m) = L.transpose();
    return SymplecticMatrix(M, false);
}

SymplecticMatrix gen_chirp_lower(const Eigen::MatrixXd& C) {
    require_symmetric(C, "V_C");
    int m = static_cast<int>(C.rows());
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2 * m, 2 * m);
    M.bottomLeftCorner(m, m) = C;
    return SymplecticMatrix(M, false);
}

SymplecticMatrix gen_chirp_upper(const Eigen::MatrixXd& C) {
    require_symmetric(C, "V_C^T");
    int m = static_cast<int>(C.rows());
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2 * m, 2 * m);
    M.topRightCorner(m, m) = C;
    return SymplecticMatrix(M, false);
}

SymplecticMatrix gen_partial_ft(int d) {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4 * d, 4 * d);
    M.block(0, 0, d, d) = I;
    M.block(d, 3 * d, d, d) = I;
    M.block(2 * d, 2 * d, d, d) = I;
    M.block(3 * d, d, d, d) = -I;
    return SymplecticMatrix(M, false);
}

SymplecticMatrix gen_tau(double tau, int d) {
    if (tau < 0.0 || tau > 1.0) throw domain_error("A_tau: tau must lie in [0,1]");
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4 * d, 4 * d);
    M.block(0, 0, d, d) = (1.0 - tau) * I;
    M.block(0, d, d, d) = tau * I;
    M.block(d, 2 * d, d, d) = tau * I;
    M.block(d, 3 * d, d, d) = -(1.0 - tau) * I;
    M.block(2 * d, 2 * d, d, d) = I;
    M.block(2 * d, 3 * d, d, d) = I;
    M.block(3 * d, 0, d, d) = -I;
    M.block(3 * d, d, d, d) = I;
    return SymplecticMatrix(M, false);
}

SymplecticMatrix gen_stft(int d) {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4 * d, 4 * d);
    M.block(0, 0, d, d) = I;
    M.block(0, d, d, d) = -I;
    M.block(d, 2 * d, d, d) = I;
    M.block(d, 3 * d, d, d) = I;
    M.block(2 * d, 3 * d, d, d) = -I;
    M.block(3 * d, 0, d, d) = -I;
    return SymplecticMatrix(M, false);
}

Eigen::MatrixXd shift_matrix(const SymplecticMatrix& A) {
    int d = A.d();
    Eigen::MatrixXd E(2 * d, 2 * d);
    E.topLeftCorner(d, d) = A.block4(1, 1);
    E.topRightCorner(d, d) = A.block4(1, 3);
    E.bottomLeftCorner(d, d) = A.block4(2, 1);
    E.bottomRightCorner(d, d) = (testhooks::mutate_shift_sign ? -1.0 : 1.0) * A.block4(2, 3);
    return E;
}

CovarianceResult is_covariant(const SymplecticMatrix& A, double tol) {
    int d = A.d();
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd A11 = A.block4(1, 1), A13 = A.block4(1, 3), A21 = A.block4(2, 1);
    double r = 0.0;
    auto dev = [&](const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
        r = std::max(r, (got - want).cwiseAbs().maxCoeff());
    };
    dev(A.block4(1, 2), I - A11);
    dev(A.block4(1, 4), A13);
    dev(A13, A13.transpose());
    dev(A.block4(2, 2), -A21);
    dev(A21, A21.transpose());
    dev(A.block4(2, 3), I - A11.transpose());
    dev(A.block4(2, 4), -A11.transpose());
    dev(A.block4(3, 1), Eigen::MatrixXd::Zero(d, d));
    dev(A.block4(3, 2), Eigen::MatrixXd::Zero(d, d));
    dev(A.block4(3, 3), I);
    dev(A.block4(3, 4), I);
    dev(A.block4(4, 1), -I);
    dev(A.block4(4, 2), I);
    dev(A.block4(4, 3), Eigen::MatrixXd::Zero(d, d));
    dev(A.block4(4, 4), Eigen::MatrixXd::Zero(d, d));
    return CovarianceResult{r <= tol, r};
}

Eigen::MatrixXd cohen_matrix(const SymplecticMatrix& A, double tol) {
    CovarianceResult cv = is_covariant(A, tol);
    if (!cv.covariant)
        throw domain_error("cohen_matrix: matrix is not covariant (residual " +
                           std::to_string(cv.residual) + ")");
    int d = A.d();
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd B(2 * d, 2 * d);
    B.topLeftCorner(d, d) = A.block4(1, 3);
    B.topRightCorner(d, d) = 0.5 * I - A.block4(1, 1);
    B.bottomLeftCorner(d, d) = 0.5 * I - A.block4(1, 1).transpose();
    B.bottomRightCorner(d, d) = -A.block4(2, 1);
    // reconstruction V_{B_A}^T A_{1/2} = A
    Eigen::MatrixXd rec = gen_chirp_upper(B).entries * gen_tau(0.5, d).entries;
    double defect = (rec - A.entries).cwiseAbs().maxCoeff();
    if (defect > 1e-10 * std::max(1.0, A.entries.cwiseAbs().maxCoeff()))
        throw invariant_error("cohen_matrix: reconstruction defect " + std::to_string(defect));
    return B;
}

std::optional<WignerDecomposition> wigner_decompose(const SymplecticMatrix& A,
                                                    std::string* reason, double tol) {
    int d = A.d();
    auto fail = [&](const std::string& why) -> std::optional<WignerDecomposition> {
        if (reason) *reason = why;
        return std::nullopt;
    };
    double scale = std::max(1.0, A.entries.cwiseAbs().maxCoeff());
    // top half must be [[A11, A12, 0, 0], [0, 0, A23, A24]]
    double zdev = std::max(
        std::max(A.block4(1, 3).cwiseAbs().maxCoeff(), A.block4(1, 4).cwiseAbs().maxCoeff()),
        std::max(A.block4(2, 1).cwiseAbs().maxCoeff(), A.block4(2, 2).cwiseAbs().maxCoeff()));
    if (zdev > tol * scale)
        return fail("top half lacks the required zero blocks (deviation " + std::to_string(zdev) + ")");

    // Solve C11 [A11 A12] = [A31 A32] and C22 [A23 A24] = [A43 A44] by least
    // squares; the top rows have full row rank d for symplectic A.
    Eigen::MatrixXd T1(d, 2 * d), R1(d, 2 * d), T2(d, 2 * d), R2(d, 2 * d);
    T1 << A.block4(1, 1), A.block4(1, 2);
    R1 << A.block4(3, 1), A.block4(3, 2);
    T2 << A.block4(2, 3), A.block4(2, 4);
    R2 << A.block4(4, 3), A.block4(4, 4);
    // X * T = R  <=>  T^T X^T = R^T
    Eigen::MatrixXd C11 = T1.transpose().colPivHouseholderQr().solve(R1.transpose()).transpose();
    Eigen::MatrixXd C22 = T2.transpose().colPivHouseholderQr().solve(R2.transpose()).transpose();
    double res = std::max((C11 * T1 - R1).cwiseAbs().maxCoeff(),
                          (C22 * T2 - R2).cwiseAbs().maxCoeff());
    if (res > 1e-8 * scale) return fail("block solve residual " + std::to_string(res));
    double asym = std::max((C11 - C11.transpose()).cwiseAbs().maxCoeff(),
                           (C22 - C22.transpose()).cwiseAbs().maxCoeff());
    if (asym > 1e-8 * scale) return fail("solved C is not symmetric (deviation " + std::to_string(asym) + ")");
    C11 = 0.5 * (C11 + C11.transpose());
    C22 = 0.5 * (C22 + C22.transpose());

    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    C.topLeftCorner(d, d) = C11;
    C.bottomRightCorner(d, d) = C22;

    // Atil = V_{-C} A = A_FT2 D_L; read L from its blocks.
    SymplecticMatrix Atil(gen_chirp_lower(-C).entries * A.entries, false);
    Eigen::MatrixXd L(2 * d, 2 * d);
    L.topLeftCorner(d, d) = Atil.block4(3, 3).transpose();
    L.topRightCorner(d, d) = Atil.block4(2, 3).transpose();
    L.bottomLeftCorner(d, d) = Atil.block4(3, 4).transpose();
    L.bottomRightCorner(d, d) = Atil.block4(2, 4).transpose();
    if (!invertible_at_scale(L)) return fail("derived L is singular");

    Eigen::MatrixXd rec = gen_chirp_lower(C).entries * gen_partial_ft(d).entries *
                          gen_dilation(L).entries;
    double defect = (rec - A.entries).cwiseAbs().maxCoeff();
    if (defect > 1e-8 * scale) return fail("reconstruction defect " + std::to_string(defect));
    return WignerDecomposition{C, L};
}

bool is_right_regular(const Eigen::MatrixXd& L, double det_rel) {
    if (L.rows() != L.cols() || L.rows() % 2 != 0)
        throw domain_error("is_right_regular: L must be square with even size");
    int d = static_cast<int>(L.rows()) / 2;
    return invertible_at_scale(L.topRightCorner(d, d), det_rel) &&
           invertible_at_scale(L.bottomRightCorner(d, d), det_rel);
}

FreeFactorization free_factorize(const SymplecticMatrix& A, double det_rel) {
    int m = A.m;
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    std::vector<double> scan = {0.0, 1.0, -1.0, 2.0, -2.0, 0.5, -0.5};
    Rng rng(0x5ca1ab1eULL); // documented fixed seed: failures are reproducible
    for (int k = 0; k < 40; ++k) scan.push_back(rng.uniform(-3.0, 3.0));

    double best_t = 0.0, best_det = -1.0;
    for (double t : scan) {
        Eigen::MatrixXd P = A.blockA() + t * A.blockB();
        double scale = 1.0;
        for (int i = 0; i < m; ++i) scale *= std::max(P.row(i).norm(), 1e-30);
        double dt = std::abs(P.determinant());
        if (dt > best_det) { best_det = dt; best_t = t; }
        if (dt > det_rel * std::max(scale, 1e-30)) {
            Eigen::MatrixXd Vt = gen_chirp_lower(t * I).entries;
            Eigen::MatrixXd Vmt = gen_chirp_lower(-t * I).entries;
            Eigen::MatrixXd J = standard_J(m);
            Eigen::MatrixXd Jinv = -J;
            FreeFactorization out;
            out.first = SymplecticMatrix(A.entries * Vt * Jinv, false);
            out.second = SymplecticMatrix(J * Vmt, false);
            out.t = t;
            return out;
        }
    }
    throw domain_error("free_factorize: scan budget exhausted; best t = " +
                       std::to_string(best_t) + " with |det| = " + std::to_string(best_det));
}

SymplecticMatrix fundamental_identity_matrix(const SymplecticMatrix& A) {
    int m = A.m;
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(m, m);
    if (m % 2 != 0) throw domain_error("fundamental_identity_matrix: requires m = 2d");
    int d = m / 2;
    S.bottomRightCorner(d, d) = -Eigen::MatrixXd::Identity(d, d);
    return SymplecticMatrix(A.entries * gen_dilation(S).entries * standard_J(m), false);
}

Classification classify(const SymplecticMatrix& A, const Tolerances& tol) {
    Classification out;
    SymplecticCheck chk = check_symplectic(A.entries, tol.structural);
    out.is_symplectic = chk.ok;
    if (!chk.ok) {
        out.reasons.push_back("not symplectic: defect " + std::to_string(chk.defect));
        for (const auto& f : chk.failed) out.reasons.push_back(f);
        return out;
    }
    out.is_free = invertible_at_scale(A.blockB(), tol.det_rel);
    if (!out.is_free) out.reasons.push_back("B block singular (not free)");

    if (A.m % 2 == 0) {
        CovarianceResult cv = is_covariant(A, tol.structural);
        out.is_covariant = cv.covariant;
        if (!cv.covariant)
            out.reasons.push_back("covariance pattern residual " + std::to_string(cv.residual));
        if (cv.covariant) out.cohen_mat = cohen_matrix(A, tol.structural);

        Eigen::MatrixXd E = shift_matrix(A);
        out.shift_mat = E;
        out.is_shift_invertible = invertible_at_scale(E, tol.det_rel);
        if (!out.is_shift_invertible) out.reasons.push_back("E_A singular (not shift-invertible)");

        std::string why;
        auto dec = wigner_decompose(A, &why, tol.structural);
        out.is_wigner_decomposable = dec.has_value();
        if (dec) {
            out.decomposition = dec;
            out.right_regular = is_right_regular(dec->L, tol.det_rel);
        } else {
            out.reasons.push_back("not Wigner-decomposable: " + why);
        }
    }
    return out;
}

} // namespace metawig
