#include "metawig/engine.hpp"

#include <cmath>
#include <cstdlib>

namespace metawig {

// ---- centered DFT -----------------------------------------------------------

static Eigen::MatrixXcd dft_matrix_1d(const Grid& g, bool inverse) {
    int n = g.n;
    Eigen::MatrixXcd U(n, n);
    double sgn = inverse ? 1.0 : -1.0;
    double delta = g.delta();
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            double phase = sgn * 2.0 * M_PI * (k - n / 2) * (j - n / 2) / n;
            U(k, j) = delta * std::polar(1.0, phase);
        }
    return U;
}

// Applies an n x n matrix along one axis of a row-major m-dimensional array.
static void apply_axis(std::vector<cd>& v, const Grid& g, int axis, const Eigen::MatrixXcd& U) {
    int n = g.n;
    int64_t stride = 1;
    for (int a = g.dim - 1; a > axis; --a) stride *= n;
    int64_t block = stride * n;
    int64_t total = g.size();
    std::vector<cd> line(n), tline(n);
    for (int64_t base = 0; base < total; base += block) {
        for (int64_t off = 0; off < stride; ++off) {
            for (int j = 0; j < n; ++j) line[j] = v[base + off + j * stride];
            for (int k = 0; k < n; ++k) {
                cd s(0.0, 0.0);
                for (int j = 0; j < n; ++j) s += U(k, j) * line[j];
                tline[k] = s;
            }
            for (int k = 0; k < n; ++k) v[base + off + k * stride] = tline[k];
        }
    }
}

Signal dft_centered(const Signal& f, const std::vector<int>& axes, bool inverse) {
    Signal out = f;
    Eigen::MatrixXcd U = dft_matrix_1d(f.grid, inverse);
    if (axes.empty()) {
        for (int a = 0; a < f.grid.dim; ++a) apply_axis(out.values, f.grid, a, U);
    } else {
        for (int a : axes) {
            if (a < 0 || a >= f.grid.dim) throw domain_error("dft: axis out of range");
            apply_axis(out.values, f.grid, a, U);
        }
    }
    return out;
}

// Interpolation phase factor for frequency bin nu at point p. The lowest bin
// (frequency -N/2) uses the symmetric cosine convention, so interpolants of
// real data are real; at grid points this coincides with the plain kernel.
static cd axis_phase(const Grid& g, int nu, double p) {
    double w = g.point(nu);
    if (nu == 0) return cd(std::cos(2.0 * M_PI * w * p), 0.0);
    return std::polar(1.0, 2.0 * M_PI * w * p);
}

cd interp_phase(const Grid& g, int nu_index, double p) { return axis_phase(g, nu_index, p); }

// ---- chirps -----------------------------------------------------------------

static void require_symmetric_chirp(const Eigen::MatrixXd& C, int m) {
    if (C.rows() != m || C.cols() != m) throw domain_error("chirp: C has the wrong size");
    if ((C - C.transpose()).cwiseAbs().maxCoeff() >
        1e-10 * std::max(1.0, C.cwiseAbs().maxCoeff()))
        throw domain_error("chirp: C must be symmetric");
}

std::vector<cd> chirp_values(const Grid& g, const Eigen::MatrixXd& C) {
    require_symmetric_chirp(C, g.dim);
    std::vector<cd> out(g.size());
    double x[4];
    Eigen::VectorXd xv(g.dim);
    for (int64_t i = 0; i < g.size(); ++i) {
        g.coords(i, x);
        for (int a = 0; a < g.dim; ++a) xv(a) = x[a];
        out[i] = std::polar(1.0, M_PI * xv.dot(C * xv));
    }
    return out;
}

Signal apply_chirp_mul(const Eigen::MatrixXd& C, const Signal& f) {
    std::vector<cd> phi = chirp_values(f.grid, C);
    Signal out = f;
    for (int64_t i = 0; i < out.size(); ++i) out.values[i] *= phi[i];
    return out;
}

Signal apply_chirp_conv(const Eigen::MatrixXd& C, const Signal& f) {
    Signal hat = dft_centered(f);
    std::vector<cd> phi = chirp_values(f.grid, -C);
    for (int64_t i = 0; i < hat.size(); ++i) hat.values[i] *= phi[i];
    return dft_centered(hat, {}, /*inverse=*/true);
}

// ---- dilations ----------------------------------------------------------------

bool integer_unimodular(const Eigen::MatrixXd& L, double tol) {
    for (int i = 0; i < L.rows(); ++i)
        for (int j = 0; j < L.cols(); ++j)
            if (std::abs(L(i, j) - std::round(L(i, j))) > tol) return false;
    return std::abs(std::abs(L.determinant()) - 1.0) <= 1e-6;
}

static Signal dilation_exact(const Eigen::MatrixXd& L, const Signal& f) {
    const Grid& g = f.grid;
    int m = g.dim, h = g.n / 2;
    Signal out(g);
    int idx[4], src[4];
    for (int64_t i = 0; i < f.size(); ++i) {
        g.unravel(i, idx);
        for (int a = 0; a < m; ++a) {
            double s = 0.0;
            for (int b = 0; b < m; ++b) s += L(a, b) * (idx[b] - h);
            src[a] = g.wrap(static_cast<int64_t>(std::llround(s)) + h);
        }
        out.values[i] = f.values[g.ravel(src)];
    }
    return out;
}

static double edge_band_share(const Signal& hat) {
    // spectral mass carried by the outermost (aliased-first) frequency bins
    const Grid& g = hat.grid;
    double edge = 0.0, total = 0.0;
    int idx[4];
    for (int64_t i = 0; i < hat.size(); ++i) {
        double p = std::norm(hat.values[i]);
        total += p;
        g.unravel(i, idx);
        for (int a = 0; a < g.dim; ++a)
            if (idx[a] == 0 || idx[a] == g.n - 1) { edge += p; break; }
    }
    return total > 0.0 ? std::sqrt(edge / total) : 0.0;
}

DilationResult apply_dilation(const Eigen::MatrixXd& L, const Signal& f, DilationMode mode) {
    const Grid& g = f.grid;
    if (L.rows() != g.dim || L.cols() != g.dim)
        throw domain_error("dilation: L size does not match grid dimension");
    if (!invertible_at_scale(L)) throw domain_error("dilation: L is (near-)singular");
    bool can_exact = integer_unimodular(L);
    if (mode == DilationMode::Exact && !can_exact)
        throw domain_error("dilation: exact mode requires an integer matrix with |det| = 1");
    if (can_exact && mode != DilationMode::Bandlimited)
        return DilationResult{dilation_exact(L, f), true, 0.0};

    Signal hat = dft_centered(f);
    Eigen::MatrixXd P(g.size(), g.dim);
    double x[4];
    Eigen::VectorXd xv(g.dim);
    for (int64_t i = 0; i < g.size(); ++i) {
        g.coords(i, x);
        for (int a = 0; a < g.dim; ++a) xv(a) = x[a];
        P.row(i) = (L * xv).transpose();
    }
    // evaluate the interpolant of f at L x (torus-periodic by construction)
    std::vector<cd> vals(g.size());
    {
        double scale = std::pow(g.delta(), g.dim);
        int nidx[4];
        std::vector<std::vector<cd>> tab(g.dim, std::vector<cd>(g.n));
        for (int64_t t = 0; t < g.size(); ++t) {
            for (int a = 0; a < g.dim; ++a)
                for (int nu = 0; nu < g.n; ++nu) tab[a][nu] = axis_phase(g, nu, P(t, a));
            cd s(0.0, 0.0);
            for (int64_t nu = 0; nu < g.size(); ++nu) {
                g.unravel(nu, nidx);
                cd factor = hat.values[nu];
                for (int a = 0; a < g.dim; ++a) factor *= tab[a][nidx[a]];
                s += factor;
            }
            vals[t] = s * scale;
        }
    }
    double amp = std::sqrt(std::abs(L.determinant()));
    Signal out(g);
    for (int64_t i = 0; i < g.size(); ++i) out.values[i] = amp * vals[i];
    return DilationResult{std::move(out), false, edge_band_share(hat)};
}

// ---- atoms and words ----------------------------------------------------------

Atom Atom::fourier() { return Atom{AtomKind::Fourier, Eigen::MatrixXd(), {}}; }
Atom Atom::partial_fourier(std::vector<int> axes) {
    if (axes.empty()) throw domain_error("partial_fourier: no axes");
    return Atom{AtomKind::PartialFourier, Eigen::MatrixXd(), std::move(axes)};
}
Atom Atom::dilation(const Eigen::MatrixXd& L) { return Atom{AtomKind::Dilation, L, {}}; }
Atom Atom::chirp_mul(const Eigen::MatrixXd& C) { return Atom{AtomKind::ChirpMul, C, {}}; }
Atom Atom::chirp_conv(const Eigen::MatrixXd& C) { return Atom{AtomKind::ChirpConv, C, {}}; }

Eigen::MatrixXd atom_matrix(const Atom& a, int m) {
    switch (a.kind) {
        case AtomKind::Fourier:
            return standard_J(m);
        case AtomKind::PartialFourier: {
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * m, 2 * m);
            std::vector<bool> in(m, false);
            for (int ax : a.axes) {
                if (ax < 0 || ax >= m) throw domain_error("partial_fourier: axis out of range");
                in[ax] = true;
            }
            for (int ax = 0; ax < m; ++ax) {
                if (in[ax]) {
                    M(ax, m + ax) = 1.0;  // x_a <- xi_a
                    M(m + ax, ax) = -1.0; // xi_a <- -x_a
                } else {
                    M(ax, ax) = 1.0;
                    M(m + ax, m + ax) = 1.0;
                }
            }
            return M;
        }
        case AtomKind::Dilation:
            return gen_dilation(a.param).entries;
        case AtomKind::ChirpMul:
            return gen_chirp_lower(a.param).entries;
        case AtomKind::ChirpConv:
            return gen_chirp_upper(a.param).entries;
    }
    throw domain_error("atom_matrix: unknown atom");
}

Eigen::MatrixXd GeneratorWord::matrix() const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2 * dim, 2 * dim);
    for (const Atom& a : atoms) M = atom_matrix(a, dim) * M;
    return M;
}

Signal apply_atom(const Atom& a, const Signal& f) {
    switch (a.kind) {
        case AtomKind::Fourier: return dft_centered(f);
        case AtomKind::PartialFourier: return dft_centered(f, a.axes);
        case AtomKind::Dilation: return apply_dilation(a.param, f).out;
        case AtomKind::ChirpMul: return apply_chirp_mul(a.param, f);
        case AtomKind::ChirpConv: return apply_chirp_conv(a.param, f);
    }
    throw domain_error("apply_atom: unknown atom");
}

Signal apply_word(const GeneratorWord& w, const Signal& f) {
    if (w.dim != f.grid.dim) throw domain_error("apply_word: dimension mismatch");
    Signal out = f;
    for (const Atom& a : w.atoms) out = apply_atom(a, out);
    return out;
}

// adjoint of the band-limited dilation: F^H E^H with E the warped-point
// evaluation matrix
static Signal dilation_adjoint(const Eigen::MatrixXd& L, const Signal& g) {
    const Grid& gr = g.grid;
    double amp = std::sqrt(std::abs(L.determinant()));
    double scale = std::pow(gr.delta(), gr.dim);
    Signal spread(gr);
    for (cd& v : spread.values) v = cd(0.0, 0.0);
    double x[4];
    int nidx[4];
    Eigen::VectorXd xv(gr.dim), pv(gr.dim);
    std::vector<std::vector<cd>> tab(gr.dim, std::vector<cd>(gr.n));
    for (int64_t t = 0; t < gr.size(); ++t) {
        gr.coords(t, x);
        for (int a = 0; a < gr.dim; ++a) xv(a) = x[a];
        pv = L * xv;
        for (int a = 0; a < gr.dim; ++a)
            for (int nu = 0; nu < gr.n; ++nu) tab[a][nu] = std::conj(axis_phase(gr, nu, pv(a)));
        for (int64_t nu = 0; nu < gr.size(); ++nu) {
            gr.unravel(nu, nidx);
            cd factor = g.values[t];
            for (int a = 0; a < gr.dim; ++a) factor *= tab[a][nidx[a]];
            spread.values[nu] += factor;
        }
    }
    for (cd& v : spread.values) v *= amp * scale;
    return dft_centered(spread, {}, /*inverse=*/true);
}

Signal apply_word_adjoint(const GeneratorWord& w, const Signal& f) {
    if (w.dim != f.grid.dim) throw domain_error("apply_word_adjoint: dimension mismatch");
    Signal out = f;
    for (auto it = w.atoms.rbegin(); it != w.atoms.rend(); ++it) {
        switch (it->kind) {
            case AtomKind::Fourier:
                out = dft_centered(out, {}, /*inverse=*/true);
                break;
            case AtomKind::PartialFourier:
                out = dft_centered(out, it->axes, /*inverse=*/true);
                break;
            case AtomKind::ChirpMul:
                out = apply_chirp_mul(-it->param, out);
                break;
            case AtomKind::ChirpConv:
                out = apply_chirp_conv(-it->param, out);
                break;
            case AtomKind::Dilation:
                if (integer_unimodular(it->param))
                    out = apply_dilation(it->param.inverse(), out).out;
                else
                    out = dilation_adjoint(it->param, out);
                break;
        }
    }
    return out;
}

GeneratorWord inverse_word(const GeneratorWord& w) {
    GeneratorWord inv(w.dim);
    for (auto it = w.atoms.rbegin(); it != w.atoms.rend(); ++it) {
        switch (it->kind) {
            case AtomKind::Fourier:
                for (int k = 0; k < 3; ++k) inv.atoms.push_back(Atom::fourier()); // F^3 = F^{-1}
                break;
            case AtomKind::PartialFourier:
                for (int k = 0; k < 3; ++k) inv.atoms.push_back(Atom::partial_fourier(it->axes));
                break;
            case AtomKind::Dilation:
                inv.atoms.push_back(Atom::dilation(it->param.inverse()));
                break;
            case AtomKind::ChirpMul:
                inv.atoms.push_back(Atom::chirp_mul(-it->param));
                break;
            case AtomKind::ChirpConv:
                inv.atoms.push_back(Atom::chirp_conv(-it->param));
                break;
        }
    }
    return inv;
}

// ---- free quadrature ----------------------------------------------------------

static Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) {
    return 0.5 * (M + M.transpose());
}

Eigen::MatrixXcd free_quadrature_matrix(const SymplecticMatrix& A, const Grid& g) {
    if (A.m != g.dim) throw domain_error("apply_free: dimension mismatch");
    Eigen::MatrixXd B = A.blockB();
    if (!invertible_at_scale(B)) throw domain_error("apply_free: matrix is not free (det B ~ 0)");
    Eigen::MatrixXd Binv = B.inverse();
    Eigen::MatrixXd S1 = symmetrized(A.blockD() * Binv);       // D B^{-1}
    Eigen::MatrixXd S2 = symmetrized(Binv * A.blockA());       // B^{-1} A
    int64_t n = g.size();
    double scale = std::pow(std::abs(B.determinant()), -0.5) * std::pow(g.delta(), g.dim);

    std::vector<cd> c1(n), c2(n);
    Eigen::MatrixXd W(n, g.dim); // rows: B^{-1} x
    {
        double x[4];
        Eigen::VectorXd xv(g.dim);
        for (int64_t i = 0; i < n; ++i) {
            g.coords(i, x);
            for (int a = 0; a < g.dim; ++a) xv(a) = x[a];
            c1[i] = std::polar(1.0, M_PI * xv.dot(S1 * xv));
            c2[i] = std::polar(1.0, M_PI * xv.dot(S2 * xv));
            W.row(i) = (Binv * xv).transpose();
        }
    }
    Eigen::MatrixXcd K(n, n);
    double y[4];
    for (int64_t j = 0; j < n; ++j) {
        g.coords(j, y);
        for (int64_t i = 0; i < n; ++i) {
            double phase = 0.0;
            for (int a = 0; a < g.dim; ++a) phase += W(i, a) * y[a];
            K(i, j) = scale * c1[i] * std::polar(1.0, -2.0 * M_PI * phase) * c2[j];
        }
    }
    return K;
}

Signal apply_free(const SymplecticMatrix& A, const Signal& f) {
    Eigen::MatrixXcd K = free_quadrature_matrix(A, f.grid);
    Signal out(f.grid);
    Eigen::Map<const Eigen::VectorXcd> fv(f.values.data(), f.size());
    Eigen::Map<Eigen::VectorXcd> ov(out.values.data(), out.size());
    ov = K * fv;
    return out;
}

// ---- exact 2x2 words ------------------------------------------------------------

GeneratorWord three_chirp_word(const Eigen::MatrixXd& F) {
    if (F.rows() != 2 || F.cols() != 2) throw domain_error("three_chirp_word: need a 2x2 matrix");
    double alpha = F(0, 0), beta = F(0, 1), delta = F(1, 1);
    if (std::abs(beta) < 1e-12) throw domain_error("three_chirp_word: matrix is not free");
    auto one = [](double v) { Eigen::MatrixXd M(1, 1); M(0, 0) = v; return M; };
    GeneratorWord w(1);
    w.atoms = {Atom::chirp_mul(one((1.0 + alpha) / beta)), Atom::fourier(),
               Atom::chirp_mul(one(beta)), Atom::fourier(),
               Atom::chirp_mul(one((1.0 + delta) / beta))};
    return w;
}

GeneratorWord sl2z_word(const Eigen::MatrixXd& M) {
    if (M.rows() != 2 || M.cols() != 2) throw domain_error("sl2z_word: need a 2x2 matrix");
    int64_t a = std::llround(M(0, 0)), b = std::llround(M(0, 1));
    int64_t c = std::llround(M(1, 0)), d = std::llround(M(1, 1));
    if ((M - (Eigen::Matrix2d() << a, b, c, d).finished()).cwiseAbs().maxCoeff() > 1e-9 ||
        a * d - b * c != 1)
        throw domain_error("sl2z_word: matrix is not integer with det 1");
    auto one = [](double v) { Eigen::MatrixXd X(1, 1); X(0, 0) = v; return X; };

    std::vector<Atom> pushed; // generators in left-to-right matrix-product order
    int guard = 0;
    while (c != 0) {
        if (++guard > 256) throw invariant_error("sl2z_word: reduction did not terminate");
        if (a == 0) {
            // J^{-1} [[a,b],[c,d]] = [[-c,-d],[a,b]]
            pushed.push_back(Atom::fourier());
            int64_t na = -c, nb = -d, nc = a, nd = b;
            a = na; b = nb; c = nc; d = nd;
            continue;
        }
        int64_t q = static_cast<int64_t>(std::llround(static_cast<double>(c) / static_cast<double>(a)));
        if (q != 0) {
            // V_{-q} [[a,b],[c,d]] = [[a,b],[c-qa, d-qb]]
            pushed.push_back(Atom::chirp_mul(one(static_cast<double>(q))));
            c -= q * a;
            d -= q * b;
        }
        if (c != 0) {
            pushed.push_back(Atom::fourier());
            int64_t na = -c, nb = -d, nc = a, nd = b;
            a = na; b = nb; c = nc; d = nd;
        }
    }
    // remainder [[a, b], [0, d]] with a = d = +-1
    if (a == 1) {
        if (b != 0) pushed.push_back(Atom::chirp_conv(one(static_cast<double>(b))));
    } else {
        // [[-1, b], [0, -1]] = J^2 V_{-b}^T
        pushed.push_back(Atom::fourier());
        pushed.push_back(Atom::fourier());
        if (b != 0) pushed.push_back(Atom::chirp_conv(one(static_cast<double>(-b))));
    }
    GeneratorWord w(1);
    w.atoms.assign(pushed.rbegin(), pushed.rend()); // application order
    return w;
}

// ---- realization planning --------------------------------------------------------

static bool near(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol = 1e-11) {
    return (A - B).cwiseAbs().maxCoeff() <= tol;
}

Realization plan_realization(const SymplecticMatrix& A) {
    int m = A.m;
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(m, m);
    Realization r;

    if (near(A.entries, Eigen::MatrixXd::Identity(2 * m, 2 * m))) {
        r.word = GeneratorWord(m);
        r.exact = true;
        r.description = "identity";
        return r;
    }
    if (near(A.entries, standard_J(m))) {
        GeneratorWord w(m);
        w.atoms = {Atom::fourier()};
        r.word = w; r.exact = true; r.description = "fourier";
        return r;
    }
    if (near(A.blockA(), I) && near(A.blockB(), Z) && near(A.blockD(), I)) {
        GeneratorWord w(m);
        w.atoms = {Atom::chirp_mul(symmetrized(A.blockC()))};
        r.word = w; r.exact = true; r.description = "chirp-mul";
        return r;
    }
    if (near(A.blockA(), I) && near(A.blockC(), Z) && near(A.blockD(), I)) {
        GeneratorWord w(m);
        w.atoms = {Atom::chirp_conv(symmetrized(A.blockB()))};
        r.word = w; r.exact = true; r.description = "chirp-conv";
        return r;
    }
    if (near(A.blockB(), Z) && near(A.blockC(), Z) &&
        near(A.blockA() * A.blockD().transpose(), I)) {
        Eigen::MatrixXd L = A.blockD().transpose();
        GeneratorWord w(m);
        w.atoms = {Atom::dilation(L)};
        r.word = w; r.exact = integer_unimodular(L); r.description = "dilation";
        return r;
    }
    if (m == 1) {
        double det = A.entries.determinant();
        bool integral = true;
        for (int i = 0; i < 2 && integral; ++i)
            for (int j = 0; j < 2; ++j)
                if (std::abs(A.entries(i, j) - std::round(A.entries(i, j))) > 1e-9) {
                    integral = false;
                    break;
                }
        if (integral && std::abs(det - 1.0) < 1e-9) {
            r.word = sl2z_word(A.entries);
            r.exact = true; r.description = "sl2z-word";
            return r;
        }
        if (std::abs(A.entries(0, 1)) > 1e-9) {
            r.word = three_chirp_word(A.entries);
            r.exact = true; r.description = "three-chirp";
            return r;
        }
        FreeFactorization fr = free_factorize(A);
        GeneratorWord w(1);
        GeneratorWord w2 = three_chirp_word(fr.second.entries);
        GeneratorWord w1 = three_chirp_word(fr.first.entries);
        w.atoms = w2.atoms;
        w.atoms.insert(w.atoms.end(), w1.atoms.begin(), w1.atoms.end());
        r.word = w; r.exact = true;
        r.description = "free-pair three-chirp (t=" + std::to_string(fr.t) + ")";
        return r;
    }
    if (m % 2 == 0) {
        std::string why;
        auto dec = wigner_decompose(A, &why);
        if (dec) {
            int d = m / 2;
            std::vector<int> axes2;
            for (int a = d; a < m; ++a) axes2.push_back(a);
            GeneratorWord w(m);
            w.atoms = {Atom::dilation(dec->L), Atom::partial_fourier(axes2)};
            if (dec->C.cwiseAbs().maxCoeff() > 1e-13)
                w.atoms.push_back(Atom::chirp_mul(dec->C));
            r.word = w;
            r.exact = integer_unimodular(dec->L);
            r.description = r.exact ? "decomposable word (exact dilation)"
                                    : "decomposable word (band-limited dilation)";
            return r;
        }
    }
    r.frees = free_factorize(A);
    r.exact = false;
    r.description = "free-pair quadrature (t=" + std::to_string(r.frees->t) + ")";
    return r;
}

static Signal apply_free_best(const SymplecticMatrix& F, const Signal& f) {
    if (F.m == 1) return apply_word(three_chirp_word(F.entries), f);
    return apply_free(F, f);
}

Signal apply_general(const SymplecticMatrix& A, const Signal& f) {
    if (A.m != f.grid.dim) throw domain_error("apply_general: dimension mismatch");
    FreeFactorization fr = free_factorize(A);
    return apply_free_best(fr.first, apply_free_best(fr.second, f));
}

Signal apply_metaplectic(const SymplecticMatrix& A, const Signal& f, EnginePath path) {
    if (A.m != f.grid.dim) throw domain_error("apply_metaplectic: dimension mismatch");
    switch (path) {
        case EnginePath::General:
            return apply_general(A, f);
        case EnginePath::Word: {
            Realization r = plan_realization(A);
            if (!r.word) throw domain_error("apply_metaplectic: no word realization for this matrix");
            return apply_word(*r.word, f);
        }
        case EnginePath::Auto: {
            Realization r = plan_realization(A);
            if (r.word) return apply_word(*r.word, f);
            return apply_general(A, f);
        }
    }
    throw domain_error("apply_metaplectic: unknown path");
}

Signal apply_metaplectic_inverse(const SymplecticMatrix& A, const Signal& f, EnginePath path) {
    if (path != EnginePath::General) {
        Realization r = plan_realization(A);
        if (r.word) return apply_word_adjoint(*r.word, f);
        if (path == EnginePath::Word)
            throw domain_error("apply_metaplectic_inverse: no word realization");
    }
    return apply_general(symplectic_inverse(A), f);
}

// ---- dense oracle -----------------------------------------------------------------

int64_t dense_oracle_cap() {
    if (const char* s = std::getenv("METAWIG_CAP")) {
        char* end = nullptr;
        long long v = std::strtoll(s, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<int64_t>(v);
    }
    return 4096;
}

static Eigen::MatrixXcd dense_atom(const Atom& a, const Grid& g) {
    int64_t n = g.size();
    switch (a.kind) {
        case AtomKind::ChirpMul: {
            std::vector<cd> phi = chirp_values(g, a.param);
            Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
            for (int64_t i = 0; i < n; ++i) M(i, i) = phi[i];
            return M;
        }
        case AtomKind::Fourier:
        case AtomKind::PartialFourier: {
            std::vector<bool> in(g.dim, a.kind == AtomKind::Fourier);
            for (int ax : a.axes) in[ax] = true;
            Eigen::MatrixXcd F1 = dft_matrix_1d(g, false);
            Eigen::MatrixXcd M(n, n);
            int ki[4], ji[4];
            for (int64_t k = 0; k < n; ++k) {
                g.unravel(k, ki);
                for (int64_t j = 0; j < n; ++j) {
                    g.unravel(j, ji);
                    cd v(1.0, 0.0);
                    for (int ax = 0; ax < g.dim && v != cd(0.0, 0.0); ++ax) {
                        if (in[ax]) v *= F1(ki[ax], ji[ax]);
                        else if (ki[ax] != ji[ax]) v = cd(0.0, 0.0);
                    }
                    M(k, j) = v;
                }
            }
            return M;
        }
        case AtomKind::ChirpConv: {
            Eigen::MatrixXcd F = dense_atom(Atom::fourier(), g);
            std::vector<cd> phi = chirp_values(g, -a.param);
            Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
            for (int64_t i = 0; i < n; ++i) D(i, i) = phi[i];
            return F.adjoint() * D * F;
        }
        case AtomKind::Dilation: {
            const Eigen::MatrixXd& L = a.param;
            if (integer_unimodular(L)) {
                Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
                int idx[4], src[4];
                int h = g.n / 2;
                for (int64_t i = 0; i < n; ++i) {
                    g.unravel(i, idx);
                    for (int x = 0; x < g.dim; ++x) {
                        double s = 0.0;
                        for (int y = 0; y < g.dim; ++y) s += L(x, y) * (idx[y] - h);
                        src[x] = g.wrap(static_cast<int64_t>(std::llround(s)) + h);
                    }
                    M(i, g.ravel(src)) = cd(1.0, 0.0);
                }
                return M;
            }
            // band-limited: evaluation at warped points composed with the DFT
            Eigen::MatrixXcd F = dense_atom(Atom::fourier(), g);
            double amp = std::sqrt(std::abs(L.determinant()));
            double scale = std::pow(g.delta(), g.dim);
            Eigen::MatrixXcd E(n, n);
            double x[4];
            int nidx[4];
            Eigen::VectorXd xv(g.dim), pv(g.dim);
            std::vector<std::vector<cd>> tab(g.dim, std::vector<cd>(g.n));
            for (int64_t i = 0; i < n; ++i) {
                g.coords(i, x);
                for (int ax = 0; ax < g.dim; ++ax) xv(ax) = x[ax];
                pv = L * xv;
                for (int ax = 0; ax < g.dim; ++ax)
                    for (int nu = 0; nu < g.n; ++nu) tab[ax][nu] = axis_phase(g, nu, pv(ax));
                for (int64_t nu = 0; nu < n; ++nu) {
                    g.unravel(nu, nidx);
                    cd factor(1.0, 0.0);
                    for (int ax = 0; ax < g.dim; ++ax) factor *= tab[ax][nidx[ax]];
                    E(i, nu) = amp * scale * factor;
                }
            }
            return E * F;
        }
    }
    throw domain_error("dense_atom: unknown atom");
}

static double unitarity_defect_of(const Eigen::MatrixXcd& U) {
    Eigen::MatrixXcd G = U.adjoint() * U;
    G -= Eigen::MatrixXcd::Identity(U.rows(), U.cols());
    return G.cwiseAbs().maxCoeff();
}

static void check_cap(const Grid& g, std::optional<int64_t> cap) {
    int64_t limit = cap.value_or(dense_oracle_cap());
    if (g.size() > limit)
        throw resource_error("dense oracle: grid has " + std::to_string(g.size()) +
                             " columns, cap is " + std::to_string(limit));
}

DenseOperator dense_matrix_of(const GeneratorWord& w, const Grid& g, std::optional<int64_t> cap) {
    if (w.dim != g.dim) throw domain_error("dense_matrix_of: dimension mismatch");
    check_cap(g, cap);
    int64_t n = g.size();
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(n, n);
    for (const Atom& a : w.atoms) U = dense_atom(a, g) * U;
    DenseOperator out;
    out.matrix = std::move(U);
    out.unitarity_defect = unitarity_defect_of(out.matrix);
    out.provenance = "word";
    return out;
}

DenseOperator dense_matrix_of(const SymplecticMatrix& A, const Grid& g, std::optional<int64_t> cap) {
    if (A.m != g.dim) throw domain_error("dense_matrix_of: dimension mismatch");
    check_cap(g, cap);
    Realization r = plan_realization(A);
    if (r.word) {
        DenseOperator out = dense_matrix_of(*r.word, g, cap);
        out.provenance = r.description;
        return out;
    }
    Eigen::MatrixXcd U = free_quadrature_matrix(r.frees->first, g) *
                         free_quadrature_matrix(r.frees->second, g);
    DenseOperator out;
    out.matrix = std::move(U);
    out.unitarity_defect = unitarity_defect_of(out.matrix);
    out.provenance = r.description;
    return out;
}

// ---- off-grid evaluation -------------------------------------------------------

std::vector<cd> trig_eval(const Signal& f, const Eigen::MatrixXd& P, bool plane_mode) {
    const Grid& g = f.grid;
    if (P.cols() != g.dim) throw domain_error("trig_eval: point dimension mismatch");
    Signal hat = dft_centered(f);
    // +half is the wrap image of the in-box edge -half; only strictly exterior
    // points are zeroed in plane mode
    double half = 0.5 * g.period() * (1.0 + 1e-9);
    double scale = std::pow(g.delta(), g.dim);
    std::vector<cd> out(P.rows());
    int nidx[4];
    std::vector<std::vector<cd>> tab(g.dim, std::vector<cd>(g.n));
    for (int64_t t = 0; t < P.rows(); ++t) {
        if (plane_mode) {
            bool outside = false;
            for (int a = 0; a < g.dim; ++a)
                if (P(t, a) < -half || P(t, a) > half) { outside = true; break; }
            if (outside) { out[t] = cd(0.0, 0.0); continue; }
        }
        for (int a = 0; a < g.dim; ++a)
            for (int nu = 0; nu < g.n; ++nu) tab[a][nu] = axis_phase(g, nu, P(t, a));
        cd s(0.0, 0.0);
        for (int64_t nu = 0; nu < g.size(); ++nu) {
            g.unravel(nu, nidx);
            cd factor = hat.values[nu];
            for (int a = 0; a < g.dim; ++a) factor *= tab[a][nidx[a]];
            s += factor;
        }
        out[t] = s * scale;
    }
    return out;
}

Eigen::MatrixXcd trig_eval_matrix_1d(const Grid& g, const std::vector<double>& points,
                                     bool plane_mode) {
    if (g.dim != 1) throw domain_error("trig_eval_matrix_1d: grid must be one-dimensional");
    Eigen::MatrixXcd F1 = dft_matrix_1d(g, false);
    double half = 0.5 * g.period() * (1.0 + 1e-9);
    Eigen::MatrixXcd A(points.size(), g.n);
    for (size_t t = 0; t < points.size(); ++t) {
        if (plane_mode && (points[t] < -half || points[t] > half)) {
            A.row(t).setZero();
            continue;
        }
        for (int nu = 0; nu < g.n; ++nu) A(t, nu) = g.delta() * axis_phase(g, nu, points[t]);
    }
    return A * F1;
}

} // namespace metawig
