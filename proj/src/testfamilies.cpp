#include "metawig/testfamilies.hpp"

namespace metawig {

Signal random_signal(const Grid& g, Rng& rng, int atoms, int max_shift_idx) {
    if (max_shift_idx == 0) max_shift_idx = std::max(1, g.n / 16);
    Signal base = gaussian(g);
    Signal acc(g);
    int xs[4], fs[4];
    for (int k = 0; k < atoms; ++k) {
        for (int a = 0; a < g.dim; ++a) {
            xs[a] = rng.uniform_int(-max_shift_idx, max_shift_idx);
            fs[a] = rng.uniform_int(-max_shift_idx, max_shift_idx);
        }
        cd c = rng.complex_normal();
        Signal atom = phase_space_shift(base, xs, fs);
        for (int64_t i = 0; i < acc.size(); ++i) acc.values[i] += c * atom.values[i];
    }
    return normalized(acc);
}

Eigen::MatrixXd random_symmetric(int m, Rng& rng, double scale) {
    Eigen::MatrixXd C(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) C(i, j) = C(j, i) = rng.uniform(-scale, scale);
    return C;
}

// integer unimodular shear/permutation catalogue
static Eigen::MatrixXd random_unimodular(int m, Rng& rng) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(m, m);
    if (m == 1) {
        L(0, 0) = rng.uniform_int(0, 1) ? 1.0 : -1.0;
        return L;
    }
    for (int step = 0; step < 2; ++step) {
        int i = rng.uniform_int(0, m - 1), j = rng.uniform_int(0, m - 1);
        if (i == j) continue;
        Eigen::MatrixXd S = Eigen::MatrixXd::Identity(m, m);
        S(i, j) = rng.uniform_int(-1, 1);
        L = S * L;
    }
    if (rng.uniform_int(0, 1)) {
        int i = rng.uniform_int(0, m - 1);
        L.row(i) *= -1.0;
    }
    return L;
}

GeneratorWord random_word(int m, Rng& rng, bool integer_params) {
    GeneratorWord w(m);
    int len = rng.uniform_int(5, 10);
    for (int k = 0; k < len; ++k) {
        int pick = rng.uniform_int(0, m >= 2 ? 4 : 3);
        switch (pick) {
            case 0:
                w.atoms.push_back(Atom::fourier());
                break;
            case 1: {
                Eigen::MatrixXd C = integer_params
                                        ? random_symmetric(m, rng, 0.0)
                                        : random_symmetric(m, rng, 0.7);
                if (integer_params)
                    for (int i = 0; i < m; ++i)
                        for (int j = i; j < m; ++j)
                            C(i, j) = C(j, i) = rng.uniform_int(-2, 2);
                w.atoms.push_back(Atom::chirp_mul(C));
                break;
            }
            case 2: {
                Eigen::MatrixXd C = random_symmetric(m, rng, integer_params ? 0.0 : 0.7);
                if (integer_params)
                    for (int i = 0; i < m; ++i)
                        for (int j = i; j < m; ++j)
                            C(i, j) = C(j, i) = rng.uniform_int(-2, 2);
                w.atoms.push_back(Atom::chirp_conv(C));
                break;
            }
            case 3:
                w.atoms.push_back(Atom::dilation(random_unimodular(m, rng)));
                break;
            case 4: {
                std::vector<int> axes;
                for (int a = 0; a < m; ++a)
                    if (rng.uniform_int(0, 1)) axes.push_back(a);
                if (axes.empty()) axes.push_back(rng.uniform_int(0, m - 1));
                w.atoms.push_back(Atom::partial_fourier(axes));
                break;
            }
        }
    }
    return w;
}

SymplecticMatrix random_decomposable_exact_warp(Rng& rng) {
    // L is sign-unimodular with one pure-coordinate row, so every periodic
    // wrap of L z happens while the other coordinate sits in the Gaussian
    // tail; all fast-path warps are +-1 and land on the grid.
    double s1 = rng.uniform_int(0, 1) ? 1.0 : -1.0;
    double s2 = rng.uniform_int(0, 1) ? 1.0 : -1.0;
    double s3 = rng.uniform_int(0, 1) ? 1.0 : -1.0;
    Eigen::MatrixXd L(2, 2);
    if (rng.uniform_int(0, 1))
        L << 0.0, s1, s3, s2; // row 1 pure t
    else
        L << s3, s1, 0.0, s2; // row 2 pure t
    // zero cross block keeps the canonical decomposition's L integer
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, 2);
    C(0, 0) = rng.uniform(-0.8, 0.8);
    C(1, 1) = rng.uniform(-0.8, 0.8);
    Eigen::MatrixXd M = gen_chirp_lower(C).entries * gen_partial_ft(1).entries *
                        gen_dilation(L).entries;
    return SymplecticMatrix(M, /*check=*/true, 1e-9);
}

SymplecticMatrix random_decomposable(int d, Rng& rng) {
    // L = kappa (I + E) with the STFT shear kappa = [[0, I], [-I, I]]; keeps
    // the fast-path warps near the identity so all sampling reads stay safe.
    Eigen::MatrixXd kappa = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    kappa.topRightCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
    kappa.bottomLeftCorner(d, d) = -Eigen::MatrixXd::Identity(d, d);
    kappa.bottomRightCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd E(2 * d, 2 * d);
    for (int i = 0; i < 2 * d; ++i)
        for (int j = 0; j < 2 * d; ++j) E(i, j) = rng.uniform(-0.12, 0.12);
    Eigen::MatrixXd L = kappa * (Eigen::MatrixXd::Identity(2 * d, 2 * d) + E);
    Eigen::MatrixXd C = random_symmetric(2 * d, rng, 0.35);
    Eigen::MatrixXd M = gen_chirp_lower(C).entries * gen_partial_ft(d).entries *
                        gen_dilation(L).entries;
    return SymplecticMatrix(M, /*check=*/true, 1e-9);
}

} // namespace metawig
