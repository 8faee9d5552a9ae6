#include "metawig/quantization.hpp"

#include <cmath>

namespace metawig {

Signal apply_operator(const QuantizedOperator& Q, const Signal& f) {
    if (f.grid != Q.grid) throw domain_error("apply_operator: grid mismatch");
    Signal out(f.grid);
    Eigen::Map<const Eigen::VectorXcd> fv(f.values.data(), f.size());
    Eigen::Map<Eigen::VectorXcd> ov(out.values.data(), out.size());
    ov = Q.op * fv;
    return out;
}

QuantizedOperator op_weyl(const Grid& g, const SymbolFn& symbol, WeylQuadrature quad) {
    int m = g.dim;
    int n1 = g.n;
    int64_t n = g.size();
    int s = quad.refine, r = quad.range_factor;
    if (s < 1 || s > 4 || r < 1 || r > 4) throw domain_error("op_weyl: quadrature factors out of range");
    int mq = r * s * n1;
    std::vector<double> xis(mq);
    for (int k = 0; k < mq; ++k) xis[k] = (k - mq / 2) * g.delta() / s;
    double wq = std::pow(g.delta(), m) * std::pow(g.delta() / s, m);
    int64_t mtot = 1;
    for (int a = 0; a < m; ++a) mtot *= mq;

    // symbol at (midpoint, momentum): midpoints indexed by s = j + k per axis
    int ms = 2 * n1 - 1;
    int64_t stot = 1;
    for (int a = 0; a < m; ++a) stot *= ms;
    std::vector<cd> B(static_cast<size_t>(stot) * mtot);
    {
        Eigen::VectorXd mid(m), mom(m);
        std::vector<int> sidx(m), midx(m);
        for (int64_t s = 0; s < stot; ++s) {
            int64_t rest = s;
            for (int a = m - 1; a >= 0; --a) { sidx[a] = static_cast<int>(rest % ms); rest /= ms; }
            // mid per axis: (x_j + x_k)/2 = (s - N) delta / 2 with s = j + k
            for (int a = 0; a < m; ++a) mid(a) = 0.5 * (sidx[a] - n1) * g.delta();
            for (int64_t nu = 0; nu < mtot; ++nu) {
                rest = nu;
                for (int a = m - 1; a >= 0; --a) { midx[a] = static_cast<int>(rest % mq); rest /= mq; }
                for (int a = 0; a < m; ++a) mom(a) = xis[midx[a]];
                B[static_cast<size_t>(s) * mtot + nu] = symbol(mid, mom);
            }
        }
    }
    // per-axis phase table for e^{2 pi i (x_j - x_k) xi}: diff index d = j - k
    std::vector<cd> D(static_cast<size_t>(ms) * mq);
    for (int d = 0; d < ms; ++d)
        for (int k = 0; k < mq; ++k)
            D[static_cast<size_t>(d) * mq + k] =
                std::polar(1.0, 2.0 * M_PI * (d - (n1 - 1)) * g.delta() * xis[k]);

    Eigen::MatrixXcd Op(n, n);
    std::vector<int> ji(m), ki(m);
    std::vector<int> midx(m);
    for (int64_t j = 0; j < n; ++j) {
        g.unravel(j, ji.data());
        for (int64_t k = 0; k < n; ++k) {
            g.unravel(k, ki.data());
            int64_t s = 0;
            for (int a = 0; a < m; ++a) s = s * ms + (ji[a] + ki[a]);
            const cd* Brow = &B[static_cast<size_t>(s) * mtot];
            cd acc(0.0, 0.0);
            for (int64_t nu = 0; nu < mtot; ++nu) {
                int64_t rest = nu;
                cd ph(1.0, 0.0);
                for (int a = m - 1; a >= 0; --a) {
                    int mi = static_cast<int>(rest % mq);
                    rest /= mq;
                    ph *= D[static_cast<size_t>(ji[a] - ki[a] + n1 - 1) * mq + mi];
                }
                acc += ph * Brow[nu];
            }
            Op(j, k) = wq * acc;
        }
    }
    return QuantizedOperator{g, std::move(Op), "weyl-quadrature(callable)"};
}

QuantizedOperator op_weyl(const Grid& g, const Distribution& symbol) {
    if (g.dim != 1) throw domain_error("op_weyl: gridded symbols supported for d = 1");
    if (symbol.sig.grid.n != g.n || symbol.sig.grid.dim != 2)
        throw domain_error("op_weyl: symbol must live on the doubled grid");
    int n = g.n;
    // midpoints (x_j + x_k)/2 take 2N-1 distinct values indexed by s = j + k
    std::vector<double> halfpoints(2 * n - 1);
    for (int s = 0; s <= 2 * n - 2; ++s) halfpoints[s] = 0.5 * (s - n) * g.delta();
    Grid axis(n, 1);
    Eigen::MatrixXcd Eh = trig_eval_matrix_1d(axis, halfpoints); // (2N-1) x N
    Eigen::MatrixXcd Amat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Amat(i, j) = symbol.sig.values[i * n + j];
    Eigen::MatrixXcd Ahalf = Eh * Amat; // (2N-1) x N, symbol at (midpoint, xi_nu)

    double w2 = std::pow(g.delta(), 2);
    Eigen::MatrixXcd Op(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            cd acc(0.0, 0.0);
            double dx = g.point(j) - g.point(k);
            for (int nu = 0; nu < n; ++nu)
                acc += std::polar(1.0, 2.0 * M_PI * dx * axis.point(nu)) * Ahalf(j + k, nu);
            Op(j, k) = w2 * acc;
        }
    return QuantizedOperator{g, std::move(Op), "weyl-quadrature(gridded)"};
}

static std::optional<double> recognize_tau(const SymplecticMatrix& A) {
    if (A.m % 2 != 0) return std::nullopt;
    int d = A.d();
    double tau = 1.0 - A.entries(0, 0);
    if (tau < -1e-9 || tau > 1.0 + 1e-9) return std::nullopt;
    tau = std::min(1.0, std::max(0.0, tau));
    if ((A.entries - gen_tau(tau, d).entries).cwiseAbs().maxCoeff() > 1e-9) return std::nullopt;
    return tau;
}

// Duality assembly of Op_{A_tau}(a) against the tau-Wigner quadrature on the
// refined self-dual lattice (4N points at half spacing over the doubled box,
// the self-dual grid of 4N samples). The coarse realization of mu(A_tau)
// loses rank at even N because the fractional shear aliases frequency pairs;
// on the refined lattice all combs are complete and Op(1) = Id is exact. The
// symbol enters as its torus-periodic interpolant.
static Eigen::MatrixXcd fine_tau_operator(double tau, const Grid& g, const Distribution& a) {
    if (g.dim != 1) throw domain_error("fine tau quantization is implemented for d = 1");
    int n = g.n, fn = 4 * n;
    double dd = g.delta(), fd = 0.5 * dd; // fine spacing over the doubled box

    Eigen::MatrixXd P(static_cast<int64_t>(fn) * fn, 2);
    for (int i = 0; i < fn; ++i)
        for (int j = 0; j < fn; ++j) {
            P(static_cast<int64_t>(i) * fn + j, 0) = (i - fn / 2) * fd;
            P(static_cast<int64_t>(i) * fn + j, 1) = (j - fn / 2) * fd;
        }
    std::vector<cd> aup = trig_eval(a.sig, P);

    // B(xf, tf) = sum_xif aup(xf, xif) e^{+2 pi i xif tf}; the xif lattice
    // covers the full fine dual period, so the a = 1 comb is exact
    std::vector<cd> B(static_cast<size_t>(fn) * fn);
    for (int i = 0; i < fn; ++i)
        for (int t = 0; t < fn; ++t) {
            double tf = (t - fn / 2) * fd;
            cd s(0.0, 0.0);
            for (int k = 0; k < fn; ++k)
                s += aup[static_cast<size_t>(i) * fn + k] *
                     std::polar(1.0, 2.0 * M_PI * (k - fn / 2) * fd * tf);
            B[static_cast<size_t>(i) * fn + t] = s;
        }

    // Dirichlet interpolants of the impulse basis at the warped fine points;
    // plain exponentials keep the 4N-point orthogonality combs exact
    Grid axis(n, 1);
    auto dirichlet = [&](int i, double y) {
        cd s(0.0, 0.0);
        for (int nu = 0; nu < n; ++nu)
            s += std::polar(1.0, 2.0 * M_PI * axis.point(nu) * (y - axis.point(i)));
        return dd * dd * s;
    };
    std::vector<cd> D1(static_cast<size_t>(n) * fn * fn), D2(static_cast<size_t>(n) * fn * fn);
    for (int i = 0; i < n; ++i)
        for (int x = 0; x < fn; ++x)
            for (int t = 0; t < fn; ++t) {
                double xf = (x - fn / 2) * fd, tf = (t - fn / 2) * fd;
                D1[(static_cast<size_t>(i) * fn + x) * fn + t] = dirichlet(i, xf + tau * tf);
                D2[(static_cast<size_t>(i) * fn + x) * fn + t] =
                    dirichlet(i, xf - (1.0 - tau) * tf);
            }

    Eigen::MatrixXcd Op(n, n);
    double scale = dd * dd / 16.0; // fixed by the exact Op(1) = Id comb
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cd acc(0.0, 0.0);
            const cd* d1 = &D1[static_cast<size_t>(i) * fn * fn];
            const cd* d2 = &D2[static_cast<size_t>(j) * fn * fn];
            for (int64_t p = 0; p < static_cast<int64_t>(fn) * fn; ++p)
                acc += std::conj(d1[p]) * d2[p] * B[p];
            Op(i, j) = scale * acc;
        }
    return Op;
}

QuantizedOperator op_general(const SymplecticMatrix& A, const Distribution& symbol,
                             const Grid& g) {
    int d = g.dim;
    if (A.m != 2 * d) throw domain_error("op_general: matrix half-dimension must be 2d");
    Grid pg(g.n, 2 * d);
    if (symbol.sig.grid != pg) throw domain_error("op_general: symbol grid mismatch");

    Realization plan = plan_realization(A);
    std::optional<double> tau = recognize_tau(A);
    if (!plan.exact && tau)
        return QuantizedOperator{g, fine_tau_operator(*tau, g, symbol),
                                 "duality(fine tau quadrature)"};

    DenseOperator U = dense_matrix_of(A, pg);
    int64_t nd = g.size();
    Eigen::Map<const Eigen::VectorXcd> av(symbol.sig.values.data(), symbol.sig.size());
    Eigen::VectorXcd k = U.matrix.adjoint() * av;
    double wd = std::pow(g.delta(), d);
    Eigen::MatrixXcd Op(nd, nd);
    for (int64_t i = 0; i < nd; ++i)
        for (int64_t j = 0; j < nd; ++j) Op(i, j) = wd * k(i * nd + j);
    QuantizedOperator Q{g, std::move(Op), "duality(" + U.provenance + ")"};

    // defining duality on seeded pairs: <Op f, h> = <a, W_A(h, f)>
    Rng rng(0xd0a11ceULL);
    for (int trial = 0; trial < 3; ++trial) {
        Signal f(g), h(g);
        for (int64_t i = 0; i < nd; ++i) {
            f.values[i] = rng.complex_normal();
            h.values[i] = rng.complex_normal();
        }
        cd lhs = inner(apply_operator(Q, f), h);
        Signal T = tensor_conj(h, f);
        Eigen::Map<const Eigen::VectorXcd> tv(T.values.data(), T.size());
        Eigen::VectorXcd Wv = U.matrix * tv;
        cd rhs(0.0, 0.0);
        for (int64_t i = 0; i < Wv.size(); ++i)
            rhs += symbol.sig.values[i] * std::conj(Wv(i));
        rhs *= std::pow(g.delta(), 2 * d);
        double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-12});
        if (std::abs(lhs - rhs) / scale > 1e-6)
            throw invariant_error("op_general: duality check failed (" +
                                  std::to_string(std::abs(lhs - rhs) / scale) + ")");
    }
    return Q;
}

Distribution kernel_of(const SymplecticMatrix& A, const Distribution& symbol) {
    const Grid& pg = symbol.sig.grid;
    if (pg.dim % 2 == 0 && A.m == pg.dim) {
        Realization plan = plan_realization(A);
        std::optional<double> tau = recognize_tau(A);
        if (!plan.exact && tau && pg.dim == 2) {
            // k(i, j) = delta^{-d} Op[i, j] through the refined duality pairing
            Grid g(pg.n, pg.dim / 2);
            Eigen::MatrixXcd Op = fine_tau_operator(*tau, g, symbol);
            Signal k(pg);
            double wd = std::pow(g.delta(), -g.dim);
            for (int i = 0; i < g.n; ++i)
                for (int j = 0; j < g.n; ++j)
                    k.values[static_cast<int64_t>(i) * g.n + j] = wd * Op(i, j);
            return Distribution{std::move(k), "kernel(fine tau quadrature)", A.entries};
        }
    }
    Signal k = apply_metaplectic_inverse(A, symbol.sig);
    return Distribution{std::move(k), "kernel", A.entries};
}

Distribution change_quantization(const SymplecticMatrix& A, const SymplecticMatrix& B,
                                 const Distribution& symbol) {
    Signal out = apply_metaplectic(B, kernel_of(A, symbol).sig);
    return Distribution{std::move(out), "change-quantization", B.entries};
}

QuantizedOperator kernel_assemble(const Distribution& kernel, const Grid& g) {
    int d = g.dim;
    if (kernel.sig.grid.n != g.n || kernel.sig.grid.dim != 2 * d)
        throw domain_error("kernel_assemble: kernel grid mismatch");
    int64_t nd = g.size();
    double wd = std::pow(g.delta(), d);
    Eigen::MatrixXcd Op(nd, nd);
    for (int64_t i = 0; i < nd; ++i)
        for (int64_t j = 0; j < nd; ++j) Op(i, j) = wd * kernel.sig.values[i * nd + j];
    return QuantizedOperator{g, std::move(Op), "kernel-assembled"};
}

IntertwiningReport intertwining_check(const SymplecticMatrix& A, const SymbolFn& a,
                                      const Signal& f, const Signal& g) {
    const Grid& gr = f.grid;
    int d = gr.dim;
    if (A.m != 2 * d) throw domain_error("intertwining_check: matrix half-dimension must be 2d");
    Grid pg(gr.n, 2 * d);
    if (pg.size() * pg.size() > 1 << 26)
        throw resource_error("intertwining_check: phase-space operator too large");

    // left side: W_A(Op_w(a) f, g)
    QuantizedOperator inner_op = op_weyl(gr, a);
    Signal h = apply_operator(inner_op, f);
    Distribution lhs = metaplectic_wigner(A, h, g);

    // right side: Op_w((a tensor 1) o A^{-1}) applied to W_A(f, g)
    Eigen::MatrixXd Ainv = symplectic_inverse(A).entries;
    SymbolFn outer = [Ainv, a, d](const Eigen::VectorXd& pos, const Eigen::VectorXd& mom) {
        Eigen::VectorXd z(4 * d);
        z.head(2 * d) = pos;
        z.tail(2 * d) = mom;
        Eigen::VectorXd w = Ainv * z;
        // (a tensor 1) pairs the first-factor positions with the first-factor
        // momenta: a(w_1..w_d, w_{2d+1}..w_{3d})
        return a(w.head(d), w.segment(2 * d, d));
    };
    // refined + extended momentum quadrature: the refinement restores the
    // discrete covariance at even N; the extension covers composed symbols
    // whose momentum width doubles under A^{-1}
    QuantizedOperator outer_op = op_weyl(pg, outer, WeylQuadrature{2, 2});
    Distribution W = metaplectic_wigner(A, f, g);
    Signal rhs = apply_operator(outer_op, W.sig);

    IntertwiningReport rep;
    rep.deviation = max_diff_up_to_phase(lhs.sig.values, rhs.values);
    for (const cd& v : lhs.sig.values) rep.scale = std::max(rep.scale, std::abs(v));
    return rep;
}

} // namespace metawig
