#include "metawig/distributions.hpp"

#include <cmath>

namespace metawig {

static Grid doubled(const Grid& g) { return Grid(g.n, 2 * g.dim); }

Distribution stft(const Signal& f, const Signal& g) {
    if (f.grid != g.grid) throw domain_error("stft: grid mismatch");
    const Grid& gr = f.grid;
    int d = gr.dim;
    Grid pg = doubled(gr);
    int64_t nd = gr.size();
    Signal out(pg);

    std::vector<int> taxes;
    for (int a = 0; a < d; ++a) taxes.push_back(a);
    int xidx[4], tidx[4], sidx[4];
    const int h = gr.n / 2;
    Signal slice(gr);
    for (int64_t x = 0; x < nd; ++x) {
        gr.unravel(x, xidx);
        for (int64_t t = 0; t < nd; ++t) {
            gr.unravel(t, tidx);
            // window argument t - x: index t_i - (x_i - h)
            for (int a = 0; a < d; ++a) sidx[a] = tidx[a] - xidx[a] + h;
            slice.values[t] = f.values[t] * std::conj(g.values[gr.ravel(sidx)]);
        }
        Signal row = dft_centered(slice, taxes);
        for (int64_t xi = 0; xi < nd; ++xi) out.values[x * nd + xi] = row.values[xi];
    }
    return Distribution{std::move(out), "stft", gen_stft(d).entries};
}

// f shifted by a real vector: f(x + a), via frequency-domain phase ramps with
// the symmetric lowest-bin convention.
static Signal trig_shift(const Signal& fhat_signal, const Eigen::VectorXd& a) {
    const Grid& gr = fhat_signal.grid;
    Signal hat = fhat_signal;
    int idx[4];
    for (int64_t nu = 0; nu < hat.size(); ++nu) {
        gr.unravel(nu, idx);
        cd factor(1.0, 0.0);
        for (int ax = 0; ax < gr.dim; ++ax) factor *= interp_phase(gr, idx[ax], a(ax));
        hat.values[nu] *= factor;
    }
    return dft_centered(hat, {}, /*inverse=*/true);
}

Distribution tau_wigner(double tau, const Signal& f, const Signal& g) {
    if (tau < 0.0 || tau > 1.0) throw domain_error("tau_wigner: tau must lie in [0,1]");
    if (f.grid != g.grid) throw domain_error("tau_wigner: grid mismatch");
    const Grid& gr = f.grid;
    int d = gr.dim;
    Grid pg = doubled(gr);
    int64_t nd = gr.size();
    Signal G(pg);

    Signal fhat = dft_centered(f), ghat = dft_centered(g);
    double tv[4];
    Eigen::VectorXd afwd(d), abwd(d);
    for (int64_t t = 0; t < nd; ++t) {
        gr.coords(t, tv);
        for (int a = 0; a < d; ++a) {
            afwd(a) = tau * tv[a];            // f(x + tau t)
            abwd(a) = -(1.0 - tau) * tv[a];   // g(x - (1-tau) t)
        }
        Signal fs = trig_shift(fhat, afwd);
        Signal gs = trig_shift(ghat, abwd);
        for (int64_t x = 0; x < nd; ++x)
            G.values[x * nd + t] = fs.values[x] * std::conj(gs.values[x]);
    }
    std::vector<int> taxes;
    for (int a = d; a < 2 * d; ++a) taxes.push_back(a);
    Signal W = dft_centered(G, taxes);
    return Distribution{std::move(W), "tau-quadrature(tau=" + std::to_string(tau) + ")",
                        gen_tau(tau, d).entries};
}

static double op_norm(const Eigen::MatrixXd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues()(0);
}

bool fast_path_safe(const WignerDecomposition& dec) {
    int dd = static_cast<int>(dec.L.rows()) / 2;
    Eigen::MatrixXd L11 = dec.L.topLeftCorner(dd, dd), L12 = dec.L.topRightCorner(dd, dd);
    Eigen::MatrixXd L21 = dec.L.bottomLeftCorner(dd, dd), L22 = dec.L.bottomRightCorner(dd, dd);
    if (!invertible_at_scale(L12) || !invertible_at_scale(L22)) return false;
    Eigen::MatrixXd R = L22 * L12.inverse();
    Eigen::MatrixXd h = L11 - L12 * L22.inverse() * L21;
    Eigen::MatrixXd K = L12.transpose().inverse();
    return op_norm(R) <= 1.7 && op_norm(R.inverse()) <= 1.7 && op_norm(h) <= 2.3 &&
           op_norm(K) <= 2.3;
}

Distribution fast_decomposable(const SymplecticMatrix& A, const Signal& f, const Signal& g) {
    if (f.grid != g.grid) throw domain_error("fast path: grid mismatch");
    const Grid& gr = f.grid;
    int d = gr.dim;
    if (A.m != 2 * d) throw domain_error("fast path: matrix half-dimension must be 2d");
    std::string why;
    auto dec = wigner_decompose(A, &why);
    if (!dec)
        throw domain_error("fast path unavailable (" + why + "); use the word or dense path");
    if (!is_right_regular(dec->L))
        throw domain_error("fast path unavailable (L not right-regular); use the word or dense path");

    Eigen::MatrixXd L11 = dec->L.topLeftCorner(d, d), L12 = dec->L.topRightCorner(d, d);
    Eigen::MatrixXd L21 = dec->L.bottomLeftCorner(d, d), L22 = dec->L.bottomRightCorner(d, d);
    Eigen::MatrixXd R = L22 * L12.inverse();
    Eigen::MatrixXd h = L11 - L12 * L22.inverse() * L21;
    Eigen::MatrixXd K = L12.transpose().inverse();
    double pref = std::sqrt(std::abs(dec->L.determinant())) / std::abs(L12.determinant());

    // warped window gtil(t) = g(R t)
    Eigen::MatrixXd P(gr.size(), d);
    double x[4];
    Eigen::VectorXd xv(d);
    for (int64_t i = 0; i < gr.size(); ++i) {
        gr.coords(i, x);
        for (int a = 0; a < d; ++a) xv(a) = x[a];
        P.row(i) = (R * xv).transpose();
    }
    Signal gtil(gr, trig_eval(g, P));

    Distribution S = stft(f, gtil);
    Grid pg = doubled(gr);
    int64_t nd = gr.size();

    // sample S at (h x, K xi); values outside the fundamental box are zero
    std::vector<cd> warped(pg.size());
    if (d == 1) {
        Grid axis(gr.n, 1);
        std::vector<double> px(gr.n), pxi(gr.n);
        for (int j = 0; j < gr.n; ++j) {
            px[j] = h(0, 0) * axis.point(j);
            pxi[j] = K(0, 0) * axis.point(j);
        }
        Eigen::MatrixXcd Ex = trig_eval_matrix_1d(axis, px, /*plane_mode=*/true);
        Eigen::MatrixXcd Exi = trig_eval_matrix_1d(axis, pxi, /*plane_mode=*/true);
        Eigen::MatrixXcd Smat(gr.n, gr.n);
        for (int i = 0; i < gr.n; ++i)
            for (int j = 0; j < gr.n; ++j) Smat(i, j) = S.sig.values[i * gr.n + j];
        Eigen::MatrixXcd Wm = Ex * Smat * Exi.transpose();
        for (int i = 0; i < gr.n; ++i)
            for (int j = 0; j < gr.n; ++j) warped[i * gr.n + j] = Wm(i, j);
    } else {
        Eigen::MatrixXd Q(pg.size(), 2 * d);
        double z[4];
        Eigen::VectorXd xp(d), xip(d);
        for (int64_t i = 0; i < pg.size(); ++i) {
            pg.coords(i, z);
            for (int a = 0; a < d; ++a) xp(a) = z[a];
            for (int a = 0; a < d; ++a) xip(a) = z[d + a];
            Q.row(i).head(d) = (h * xp).transpose();
            Q.row(i).tail(d) = (K * xip).transpose();
        }
        warped = trig_eval(S.sig, Q, /*plane_mode=*/true);
    }

    std::vector<cd> phi = chirp_values(pg, dec->C);
    Signal out(pg);
    double z[4];
    Eigen::VectorXd xp(d), xip(d);
    for (int64_t i = 0; i < pg.size(); ++i) {
        pg.coords(i, z);
        for (int a = 0; a < d; ++a) xp(a) = z[a];
        for (int a = 0; a < d; ++a) xip(a) = z[d + a];
        double phase = (K * xip).dot(L11 * xp);
        out.values[i] = pref * phi[i] * std::polar(1.0, 2.0 * M_PI * phase) * warped[i];
    }
    return Distribution{std::move(out), "fast-decomposable", A.entries};
}

Distribution metaplectic_wigner(const SymplecticMatrix& A, const Signal& f, const Signal& g,
                                DistPath path) {
    if (f.grid != g.grid) throw domain_error("metaplectic_wigner: grid mismatch");
    int d = f.grid.dim;
    if (A.m != 2 * d) throw domain_error("metaplectic_wigner: matrix half-dimension must be 2d");
    if (path == DistPath::Fast) return fast_decomposable(A, f, g);
    if (path == DistPath::Auto) {
        auto dec = wigner_decompose(A);
        if (dec && is_right_regular(dec->L) && fast_path_safe(*dec))
            return fast_decomposable(A, f, g);
    }
    Signal T = tensor_conj(f, g);
    if (path == DistPath::Dense) {
        // the dense oracle: columns of the planned realization
        DenseOperator U = dense_matrix_of(A, T.grid);
        Signal W(T.grid);
        Eigen::Map<const Eigen::VectorXcd> tv(T.values.data(), T.size());
        Eigen::Map<Eigen::VectorXcd> wv(W.values.data(), W.size());
        wv = U.matrix * tv;
        return Distribution{std::move(W), "dense(" + U.provenance + ")", A.entries};
    }
    EnginePath ep = (path == DistPath::Word) ? EnginePath::Word : EnginePath::Auto;
    Signal W = apply_metaplectic(A, T, ep);
    return Distribution{std::move(W), path == DistPath::Word ? "word" : "auto", A.entries};
}

Distribution metaplectic_wigner(const GeneratorWord& w, const Signal& f, const Signal& g) {
    Signal T = tensor_conj(f, g);
    if (w.dim != T.grid.dim) throw domain_error("metaplectic_wigner: word dimension mismatch");
    Signal W = apply_word(w, T);
    return Distribution{std::move(W), "word", w.matrix()};
}

Distribution cohen_kernel(const SymplecticMatrix& A, const Grid& phase_grid) {
    if (phase_grid.dim != A.m) throw domain_error("cohen_kernel: grid dimension must equal 2d");
    Eigen::MatrixXd B = cohen_matrix(A);
    Signal phi(phase_grid, chirp_values(phase_grid, -B));
    Signal sigma = dft_centered(phi, {}, /*inverse=*/true);
    return Distribution{std::move(sigma), "cohen-kernel", A.entries};
}

Distribution convolve(const Distribution& u, const Distribution& v) {
    if (u.sig.grid != v.sig.grid) throw domain_error("convolve: grid mismatch");
    const Grid& g = u.sig.grid;
    Signal uh = dft_centered(u.sig), vh = dft_centered(v.sig);
    double scale = std::pow(g.delta(), -g.dim);
    for (int64_t i = 0; i < uh.size(); ++i) uh.values[i] *= scale * vh.values[i];
    Signal out = dft_centered(uh, {}, /*inverse=*/true);
    return Distribution{std::move(out), "convolution", u.matrix};
}

IdentityReport fundamental_identity_check(const SymplecticMatrix& A, const Signal& f,
                                          const Signal& g, DistPath path) {
    Signal fh = dft_centered(f), gh = dft_centered(g);
    Distribution lhs = metaplectic_wigner(A, fh, gh, path);
    SymplecticMatrix Ap = fundamental_identity_matrix(A);
    Distribution rhs = metaplectic_wigner(Ap, f, g, path);
    IdentityReport rep;
    rep.deviation = max_diff_up_to_phase(lhs.sig.values, rhs.sig.values);
    rep.detail = "lhs=" + lhs.provenance + ", rhs=" + rhs.provenance;
    return rep;
}

RecoveryResult stft_recovery(const SymplecticMatrix& A, const Signal& f, const Signal& g1,
                             const Signal& g2, const Signal& g3, const int* x_idx,
                             const int* xi_idx, double min_overlap) {
    cd ov = inner(g1, g2);
    if (std::abs(ov) < min_overlap)
        throw domain_error("stft_recovery: <g1,g2> too small for stable recovery");
    Signal shifted = phase_space_shift(g3, x_idx, xi_idx);
    Distribution W1 = metaplectic_wigner(A, f, g1);
    Distribution W2 = metaplectic_wigner(A, shifted, g2);
    cd lhs = inner(W1.sig, W2.sig) / inner(g2, g1);
    cd rhs = inner(f, shifted);
    return RecoveryResult{lhs, rhs, std::abs(lhs - rhs)};
}

double moyal_defect(const Distribution& W, const Signal& f, const Signal& g) {
    double ref = l2_norm(f) * l2_norm(g);
    if (ref == 0.0) return l2_norm(W.sig);
    return std::abs(l2_norm(W.sig) - ref) / ref;
}

} // namespace metawig
