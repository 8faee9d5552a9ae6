#include "metawig/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace metawig {

double mixed_norm(const Distribution& F, const MixedNormSpec& spec) {
    if (spec.p <= 0.0 || spec.q <= 0.0) throw domain_error("mixed_norm: exponents must be positive");
    const Grid& g = F.sig.grid;
    if (g.dim % 2 != 0) throw domain_error("mixed_norm: distribution grid must have 2d axes");
    int d = g.dim / 2;
    Grid half(g.n, d);
    int64_t nd = half.size();
    double delta_d = std::pow(g.delta(), d);
    bool pinf = std::isinf(spec.p), qinf = std::isinf(spec.q);

    double zx[4], zxi[4];
    double outer = 0.0;
    for (int64_t xi = 0; xi < nd; ++xi) {
        half.coords(xi, zxi);
        double inner_acc = 0.0;
        for (int64_t x = 0; x < nd; ++x) {
            half.coords(x, zx);
            double z2 = 0.0;
            for (int a = 0; a < d; ++a) z2 += zx[a] * zx[a] + zxi[a] * zxi[a];
            double w = std::pow(1.0 + z2, spec.s * 0.5);
            double v = w * std::abs(F.sig.values[x * nd + xi]);
            if (pinf) inner_acc = std::max(inner_acc, v);
            else inner_acc += std::pow(v, spec.p);
        }
        double inner = pinf ? inner_acc : std::pow(inner_acc * delta_d, 1.0 / spec.p);
        if (qinf) outer = std::max(outer, inner);
        else outer += std::pow(inner, spec.q);
    }
    return qinf ? outer : std::pow(outer * delta_d, 1.0 / spec.q);
}

double modulation_norm(const Signal& f, const MixedNormSpec& spec, const Signal& window) {
    if (l2_norm(window) == 0.0) throw domain_error("modulation_norm: zero window");
    return mixed_norm(stft(f, window), spec);
}

FrameBounds frame_bounds(const FrameSpec& spec) {
    const Grid& g = spec.window.grid;
    if (g.dim != 1) throw domain_error("frame_bounds: one-dimensional windows only");
    int n = g.n;
    if (spec.a <= 0 || spec.b <= 0 || n % spec.a != 0 || n % spec.b != 0)
        throw domain_error("frame_bounds: lattice steps must divide N");

    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd h(n);
    for (int i = 0; i < n / spec.a; ++i) {
        for (int j = 0; j < n / spec.b; ++j) {
            int xs = i * spec.a, fs = j * spec.b;
            Signal atom = phase_space_shift(spec.window, &xs, &fs);
            for (int k = 0; k < n; ++k) h(k) = atom.values[k];
            S.noalias() += h * h.adjoint();
        }
    }
    S *= g.delta();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
    FrameBounds out;
    out.lower = es.eigenvalues().minCoeff();
    out.upper = es.eigenvalues().maxCoeff();
    out.frame_op = std::move(S);
    return out;
}

// Schur-type blocks of the decomposition: h = L11 - L12 L22^{-1} L21 (equal to
// M^T of the det identities) and the frequency slope K = L12^{-T}.
struct DecBlocks {
    Eigen::MatrixXd h, K, L12, L22, L11, L21, R;
    double pref = 0.0;
    Eigen::MatrixXd C, L;
};

static DecBlocks decomposition_blocks(const SymplecticMatrix& A) {
    std::string why;
    auto dec = wigner_decompose(A, &why);
    if (!dec) throw domain_error("requires a Wigner-decomposable matrix (" + why + ")");
    if (!is_right_regular(dec->L)) throw domain_error("requires a right-regular L");
    int d = static_cast<int>(dec->L.rows()) / 2;
    DecBlocks b;
    b.L11 = dec->L.topLeftCorner(d, d);
    b.L12 = dec->L.topRightCorner(d, d);
    b.L21 = dec->L.bottomLeftCorner(d, d);
    b.L22 = dec->L.bottomRightCorner(d, d);
    b.h = b.L11 - b.L12 * b.L22.inverse() * b.L21;
    b.K = b.L12.transpose().inverse();
    b.R = b.L22 * b.L12.inverse();
    b.pref = std::sqrt(std::abs(dec->L.determinant())) / std::abs(b.L12.determinant());
    b.C = dec->C;
    b.L = dec->L;
    return b;
}

LiebConstants lieb_constants(const SymplecticMatrix& A, double p) {
    if (p < 1.0) throw domain_error("lieb_constants: p >= 1 required");
    DecBlocks b = decomposition_blocks(A);
    int d = A.d();
    double detM = std::abs(b.h.determinant());       // |det(A33 - A34 A24^{-1} A23)|
    double detA23 = std::abs(b.L12.determinant());   // A23 = L12^T
    LiebConstants out;
    out.p = p;
    out.derived_constant = std::pow(detM, 0.5 - 1.0 / p) * std::pow(detA23, 1.0 / p - 0.5) *
                           std::pow(2.0 / p, d / p);
    out.paper_constant = std::pow(detM, 0.5 - 1.0 / p) * std::pow(detA23, -0.5) *
                         std::pow(2.0 / p, d / p);
    return out;
}

LiebReport lieb_check(const SymplecticMatrix& A, const Signal& f, const Signal& g, double p) {
    LiebReport rep;
    rep.constants = lieb_constants(A, p);
    Distribution W = metaplectic_wigner(A, f, g);
    rep.ratio = mixed_norm(W, MixedNormSpec{p, p, 0.0}) / (l2_norm(f) * l2_norm(g));
    double bound = rep.constants.derived_constant;
    rep.margin = (p >= 2.0) ? bound - rep.ratio : rep.ratio - bound;
    rep.holds = rep.margin >= -1e-8 * std::max(1.0, bound);
    return rep;
}

UncertaintyReport weak_uncertainty(const SymplecticMatrix& A, const Signal& f, const Signal& g,
                                   double eps, const std::vector<double>& improved_ps) {
    if (std::abs(l2_norm(f) - 1.0) > 1e-9 || std::abs(l2_norm(g) - 1.0) > 1e-9)
        throw domain_error("weak_uncertainty: f and g must have unit norm");
    if (eps < 0.0) throw domain_error("weak_uncertainty: eps must be nonnegative");
    DecBlocks b = decomposition_blocks(A);
    int d = A.d();

    Distribution W = metaplectic_wigner(A, f, g);
    double cell = std::pow(W.sig.grid.delta(), W.sig.grid.dim);
    std::vector<double> e(W.sig.values.size());
    double total = 0.0;
    for (size_t i = 0; i < e.size(); ++i) {
        e[i] = std::norm(W.sig.values[i]);
        total += e[i];
    }
    total *= cell;
    std::sort(e.rbegin(), e.rend());
    double target = std::max(0.0, (1.0 - eps)) * total;

    UncertaintyReport rep;
    rep.mass_target = target;
    double acc = 0.0;
    int64_t count = 0;
    while (acc < target && count < static_cast<int64_t>(e.size())) {
        acc += e[count] * cell;
        ++count;
    }
    rep.measure = count * cell;

    double det_ratio = std::abs(b.L12.determinant()) / std::abs(b.h.determinant());
    rep.simple_floor = std::max(0.0, 1.0 - eps) * det_ratio;
    bool ok = rep.measure >= rep.simple_floor - 1e-9;
    for (double p : improved_ps) {
        if (p <= 2.0) throw domain_error("weak_uncertainty: improved floors need p > 2");
        double floor = std::pow(std::max(0.0, 1.0 - eps), p / (p - 2.0)) * det_ratio *
                       std::pow(p / 2.0, 2.0 * d / (p - 2.0));
        rep.improved_floors.emplace_back(p, floor);
        ok = ok && rep.measure >= floor - 1e-9;
    }
    rep.satisfied = ok;
    return rep;
}

SupportReport support_report(const SymplecticMatrix& A, const Signal& f, const Signal& g,
                             double threshold) {
    Distribution W = metaplectic_wigner(A, f, g);
    SupportReport rep;
    for (const cd& v : W.sig.values) rep.max_abs = std::max(rep.max_abs, std::abs(v));
    if (rep.max_abs == 0.0) return rep;
    double cell = std::pow(W.sig.grid.delta(), W.sig.grid.dim);
    int64_t count = 0;
    for (const cd& v : W.sig.values)
        if (std::abs(v) > threshold * rep.max_abs) ++count;
    rep.measure = count * cell;
    return rep;
}

NormRelationReport norm_relation_report(const SymplecticMatrix& A,
                                        const std::vector<Signal>& family, const Signal& window,
                                        double p, double s) {
    if (family.empty()) throw domain_error("norm_relation_report: empty signal family");
    DecBlocks b = decomposition_blocks(A);
    const Grid& gr = window.grid;
    int d = gr.dim;

    // warped window for the exact relation
    Eigen::MatrixXd P(gr.size(), d);
    double x[4];
    Eigen::VectorXd xv(d);
    for (int64_t i = 0; i < gr.size(); ++i) {
        gr.coords(i, x);
        for (int a = 0; a < d; ++a) xv(a) = x[a];
        P.row(i) = (b.R * xv).transpose();
    }
    Signal gtil(gr, trig_eval(window, P));

    bool safe = fast_path_safe(WignerDecomposition{b.C, b.L}) && s == 0.0 && d == 1;
    NormRelationReport rep;
    rep.ratio_min = std::numeric_limits<double>::infinity();
    rep.ratio_max = 0.0;
    double worst_dev = 0.0;
    MixedNormSpec spec{p, p, s};
    for (const Signal& f : family) {
        // word path: keeps the warped-STFT comparison below independent
        Distribution W = metaplectic_wigner(A, f, window, DistPath::Word);
        double lhs = mixed_norm(W, spec);
        double mnorm = modulation_norm(f, spec, window);
        double ratio = lhs / mnorm;
        rep.ratio_min = std::min(rep.ratio_min, ratio);
        rep.ratio_max = std::max(rep.ratio_max, ratio);

        if (safe) {
            Distribution S = stft(f, gtil);
            Grid axis(gr.n, 1);
            std::vector<double> px(gr.n), pxi(gr.n);
            for (int j = 0; j < gr.n; ++j) {
                px[j] = b.h(0, 0) * axis.point(j);
                pxi[j] = b.K(0, 0) * axis.point(j);
            }
            Eigen::MatrixXcd Ex = trig_eval_matrix_1d(axis, px, true);
            Eigen::MatrixXcd Exi = trig_eval_matrix_1d(axis, pxi, true);
            Eigen::MatrixXcd Smat(gr.n, gr.n);
            for (int i = 0; i < gr.n; ++i)
                for (int j = 0; j < gr.n; ++j) Smat(i, j) = S.sig.values[i * gr.n + j];
            Eigen::MatrixXcd Wm = Ex * Smat * Exi.transpose();
            double acc = 0.0;
            for (int i = 0; i < gr.n; ++i)
                for (int j = 0; j < gr.n; ++j) acc += std::pow(std::abs(Wm(i, j)), p);
            double rhs = b.pref * std::pow(acc * std::pow(gr.delta(), 2 * d), 1.0 / p);
            worst_dev = std::max(worst_dev, std::abs(lhs - rhs) / std::max(lhs, 1e-300));
        }
    }
    if (safe) rep.exact_rel_dev = worst_dev;
    return rep;
}

} // namespace metawig
