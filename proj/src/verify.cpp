#include "metawig/verify.hpp"

#include <chrono>
#include <cmath>

#include "metawig/analysis.hpp"
#include "metawig/distributions.hpp"
#include "metawig/quantization.hpp"
#include "metawig/testfamilies.hpp"

namespace metawig {

using nlohmann::json;

bool VerifyReport::pass() const {
    for (const auto& e : entries)
        if (e.asserted && !e.pass) return false;
    return true;
}

json VerifyReport::to_json() const {
    json arr = json::array();
    for (const auto& e : entries)
        arr.push_back(json{{"quantity", e.quantity},
                           {"value", e.value},
                           {"bound", e.bound},
                           {"margin", e.margin},
                           {"asserted", e.asserted},
                           {"pass", e.pass}});
    return json{{"suite", suite}, {"seed", seed}, {"pass", pass()}, {"entries", arr}};
}

void VerifyReport::check_le(const std::string& q, double value, double bound, bool asserted) {
    entries.push_back({q, value, bound, bound - value, asserted, !asserted || value <= bound});
}

void VerifyReport::check_ge(const std::string& q, double value, double bound, bool asserted) {
    entries.push_back({q, value, bound, value - bound, asserted, !asserted || value >= bound});
}

void VerifyReport::check_true(const std::string& q, bool ok) {
    entries.push_back({q, ok ? 1.0 : 0.0, 1.0, ok ? 0.0 : -1.0, true, ok});
}

void VerifyReport::report_only(const std::string& q, double value) {
    entries.push_back({q, value, 0.0, 0.0, false, true});
}

// ---------------------------------------------------------------- core -----

VerifyReport verify_core(uint64_t seed) {
    VerifyReport rep{"core", seed, {}};
    Rng rng(seed ^ 0xc03e0001ULL);

    // generator outputs pass the symplectic check at 1e-12
    {
        double worst = 0.0;
        std::vector<SymplecticMatrix> gens = {
            gen_J(1), gen_J(2), gen_stft(1), gen_partial_ft(1), gen_tau(0.3, 1),
            gen_tau(0.0, 1), gen_tau(1.0, 1), gen_stft(2), gen_tau(0.5, 2)};
        for (const auto& G : gens) worst = std::max(worst, check_symplectic(G.entries).defect);
        rep.check_le("generators: symplectic defect", worst, 1e-12);
    }

    // classification truth table (A_tau family, A_ST, A_FT2, J, identity)
    {
        struct Row {
            SymplecticMatrix A;
            std::string name;
            bool cov, si, dec;
        };
        std::vector<Row> rows = {
            {gen_tau(0.0, 1), "A_tau(0)", true, false, true},
            {gen_tau(0.3, 1), "A_tau(0.3)", true, true, true},
            {gen_tau(0.5, 1), "A_tau(0.5)", true, true, true},
            {gen_tau(1.0, 1), "A_tau(1)", true, false, true},
            {gen_stft(1), "A_ST", false, true, true},
            {gen_partial_ft(1), "A_FT2", false, false, true},
            {gen_J(2), "J(2d)", false, false, false},
            {SymplecticMatrix(Eigen::MatrixXd::Identity(4, 4), false), "identity", false, false,
             false}};
        bool all = true;
        for (const Row& r : rows) {
            Classification c = classify(r.A);
            bool ok = c.is_symplectic && c.is_covariant == r.cov &&
                      c.is_shift_invertible == r.si && c.is_wigner_decomposable == r.dec;
            // shift-invertible decomposable matrices must have right-regular L
            if (c.is_wigner_decomposable && c.right_regular &&
                *c.right_regular != c.is_shift_invertible)
                ok = false;
            all = all && ok;
        }
        rep.check_true("classification truth table (8 matrices)", all);

        // shift matrix payloads: E_{A_tau} = diag((1-tau) I, tau I)
        double worst = 0.0;
        for (double tau : {0.0, 0.3, 0.5, 1.0}) {
            Eigen::MatrixXd E = shift_matrix(gen_tau(tau, 1));
            Eigen::MatrixXd want(2, 2);
            want << 1.0 - tau, 0.0, 0.0, tau;
            worst = std::max(worst, (E - want).cwiseAbs().maxCoeff());
        }
        worst = std::max(worst,
                         (shift_matrix(gen_stft(1)) - Eigen::MatrixXd::Identity(2, 2))
                             .cwiseAbs()
                             .maxCoeff());
        rep.check_le("shift matrix payloads (A_tau sweep, A_ST)", worst, 1e-12);
    }

    // tau sweep: shift-invertible iff tau in (0,1)
    {
        bool ok = true;
        for (double tau : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
            bool si = classify(gen_tau(tau, 1)).is_shift_invertible;
            ok = ok && (si == (tau > 0.0 && tau < 1.0));
        }
        rep.check_true("A_tau shift-invertible iff tau in (0,1)", ok);
    }

    // cohen matrix reconstruction V_{B_A}^T A_{1/2} = A on covariant matrices
    {
        double worst = 0.0;
        std::vector<SymplecticMatrix> covs;
        for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) covs.push_back(gen_tau(tau, 1));
        for (int k = 0; k < 5; ++k) {
            Eigen::MatrixXd B = random_symmetric(2, rng, 0.8);
            covs.push_back(SymplecticMatrix(
                gen_chirp_upper(B).entries * gen_tau(0.5, 1).entries, false));
        }
        for (const auto& A : covs) {
            Eigen::MatrixXd B = cohen_matrix(A);
            Eigen::MatrixXd rec = gen_chirp_upper(B).entries * gen_tau(0.5, A.d()).entries;
            worst = std::max(worst, (rec - A.entries).cwiseAbs().maxCoeff());
        }
        rep.check_le("cohen reconstruction V_{B_A}^T A_{1/2} = A", worst, 1e-10);
        rep.check_le("B_{A_{1/2}} = 0",
                     cohen_matrix(gen_tau(0.5, 1)).cwiseAbs().maxCoeff(), 1e-14);
    }

    // wigner_decompose o reconstruct on random V_C A_FT2 D_L (100 trials)
    {
        double worst = 0.0;
        int failures = 0;
        for (int k = 0; k < 100; ++k) {
            Eigen::MatrixXd C = random_symmetric(2, rng, 1.0);
            Eigen::MatrixXd L(2, 2);
            do {
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) L(i, j) = rng.uniform(-1.5, 1.5);
            } while (std::abs(L.determinant()) < 0.3);
            SymplecticMatrix A(gen_chirp_lower(C).entries * gen_partial_ft(1).entries *
                                   gen_dilation(L).entries,
                               false);
            auto dec = wigner_decompose(A);
            if (!dec) { ++failures; continue; }
            Eigen::MatrixXd rec = gen_chirp_lower(dec->C).entries *
                                  gen_partial_ft(1).entries * gen_dilation(dec->L).entries;
            worst = std::max(worst, (rec - A.entries).cwiseAbs().maxCoeff());
        }
        rep.check_true("wigner_decompose succeeds on decomposable family", failures == 0);
        rep.check_le("wigner_decompose reconstruction defect", worst, 1e-9);
    }

    // free_factorize on 100 random generator words
    {
        double worst_defect = 0.0, min_detB = 1e300;
        for (int k = 0; k < 100; ++k) {
            GeneratorWord w = random_word(1, rng);
            SymplecticMatrix A(w.matrix(), false);
            FreeFactorization fr = free_factorize(A);
            worst_defect = std::max(
                worst_defect,
                (fr.first.entries * fr.second.entries - A.entries).cwiseAbs().maxCoeff());
            min_detB = std::min({min_detB, std::abs(fr.first.blockB().determinant()),
                                 std::abs(fr.second.blockB().determinant())});
        }
        rep.check_le("free_factorize reconstruction defect (100 words)", worst_defect, 1e-9);
        rep.check_ge("free_factorize min |det B| over factors", min_detB, 1e-8);
    }

    // fundamental identity matrix: symplectic, and fourth power returns A
    {
        SymplecticMatrix A = gen_stft(1);
        SymplecticMatrix Ap = fundamental_identity_matrix(A);
        double d1 = check_symplectic(Ap.entries).defect;
        SymplecticMatrix A4 = fundamental_identity_matrix(
            fundamental_identity_matrix(fundamental_identity_matrix(Ap)));
        double d2 = (A4.entries - A.entries).cwiseAbs().maxCoeff();
        rep.check_le("fundamental identity matrix: symplectic + period 4", std::max(d1, d2),
                     1e-12);
    }
    return rep;
}

// ---------------------------------------------------------------- engine ---

VerifyReport verify_engine(uint64_t seed) {
    VerifyReport rep{"engine", seed, {}};
    Rng rng(seed ^ 0xe0060002ULL);
    auto t0 = std::chrono::steady_clock::now();

    // criterion 1: norm preservation of words and apply_general
    {
        Grid g(32, 1);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            GeneratorWord w = random_word(1, rng);
            Signal f = random_signal(g, rng);
            worst = std::max(worst, std::abs(l2_norm(apply_word(w, f)) - 1.0));
            SymplecticMatrix A(w.matrix(), false);
            worst = std::max(worst, std::abs(l2_norm(apply_general(A, f)) - 1.0));
        }
        rep.check_le("unitarity: word + apply_general norm defect (N=32, 20 trials)", worst,
                     1e-9);
    }

    // criterion 1: dense oracle unitarity defect at N <= 32, d = 1
    {
        Grid g16(16, 1), g32(32, 1);
        double dj = dense_matrix_of(gen_J(1), g16).unitarity_defect;
        rep.check_le("dense oracle defect: J, N=16", dj, 1e-12);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            GeneratorWord w = random_word(1, rng);
            worst = std::max(worst, dense_matrix_of(w, g16).unitarity_defect);
            SymplecticMatrix A(w.matrix(), false);
            worst = std::max(worst, dense_matrix_of(A, g32).unitarity_defect);
        }
        rep.check_le("dense oracle defect: random words + planned matrices", worst, 1e-9);
    }

    // path coherence: word vs apply_general up to one global phase
    {
        Grid g(32, 1);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            GeneratorWord w = random_word(1, rng);
            Signal f = random_signal(g, rng);
            Signal a = apply_word(w, f);
            Signal b = apply_general(SymplecticMatrix(w.matrix(), false), f);
            worst = std::max(worst, max_diff_up_to_phase(a.values, b.values));
        }
        rep.check_le("path coherence: word vs general (N=32)", worst, 1e-7);
    }

    // homomorphism up to phase on the dense oracle (integer-parameter words)
    {
        Grid g(16, 1);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            GeneratorWord wa = random_word(1, rng, /*integer_params=*/true);
            GeneratorWord wb = random_word(1, rng, /*integer_params=*/true);
            SymplecticMatrix A(wa.matrix(), false), B(wb.matrix(), false);
            SymplecticMatrix AB(A.entries * B.entries, false);
            Eigen::MatrixXcd U1 = dense_matrix_of(AB, g).matrix;
            Eigen::MatrixXcd U2 = dense_matrix_of(A, g).matrix * dense_matrix_of(B, g).matrix;
            std::vector<cd> v1(U1.data(), U1.data() + U1.size());
            std::vector<cd> v2(U2.data(), U2.data() + U2.size());
            worst = std::max(worst, max_diff_up_to_phase(v1, v2));
        }
        rep.check_le("dense homomorphism up to phase (integer words, N=16)", worst, 1e-7);
    }

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.check_le("engine suite runtime [s]", secs, 10.0);
    return rep;
}

// ---------------------------------------------------------------- dist -----

VerifyReport verify_dist(uint64_t seed) {
    VerifyReport rep{"dist", seed, {}};
    Rng rng(seed ^ 0xd1510003ULL);
    Grid g32(32, 1), g64(64, 1), g16(16, 1);

    // criterion 2: polarized Moyal identity
    {
        std::vector<std::pair<std::string, SymplecticMatrix>> mats = {
            {"A_ST", gen_stft(1)}, {"A_tau(1/4)", gen_tau(0.25, 1)},
            {"A_tau(1/2)", gen_tau(0.5, 1)}};
        GeneratorWord rw = random_word(2, rng);
        mats.emplace_back("random word", SymplecticMatrix(rw.matrix(), false));
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            Signal f1 = random_signal(g32, rng), gg1 = random_signal(g32, rng);
            Signal f2 = random_signal(g32, rng), gg2 = random_signal(g32, rng);
            const auto& mk = mats[k % mats.size()];
            Distribution W1 = (mk.first == "random word")
                                  ? metaplectic_wigner(rw, f1, gg1)
                                  : metaplectic_wigner(mk.second, f1, gg1);
            Distribution W2 = (mk.first == "random word")
                                  ? metaplectic_wigner(rw, f2, gg2)
                                  : metaplectic_wigner(mk.second, f2, gg2);
            cd lhs = inner(W1.sig, W2.sig);
            cd rhs = inner(f1, f2) * std::conj(inner(gg1, gg2));
            worst = std::max(worst, std::abs(lhs - rhs) /
                                        std::max(1e-12, std::abs(rhs) + std::abs(lhs)));
        }
        rep.check_le("Moyal polarized identity (20 quadruples, N=32)", worst, 1e-6);
    }

    // criterion 3: representation equivalences against independent paths
    {
        Signal f = random_signal(g32, rng), w = random_signal(g32, rng);
        Distribution ref = stft(f, w);
        Distribution eng = metaplectic_wigner(gen_stft(1), f, w, DistPath::Dense);
        rep.check_le("W_{A_ST} (dense) = STFT up to phase",
                     max_diff_up_to_phase(eng.sig.values, ref.sig.values), 1e-5);
        double worst = 0.0;
        for (double tau : {0.0, 0.3, 0.5, 1.0}) {
            Distribution direct = tau_wigner(tau, f, w);
            Distribution engine = metaplectic_wigner(gen_tau(tau, 1), f, w, DistPath::Dense);
            worst = std::max(worst,
                             max_diff_up_to_phase(engine.sig.values, direct.sig.values));
        }
        rep.check_le("W_{A_tau} (dense) = direct tau-Wigner up to phase", worst, 1e-5);
    }

    // criterion 4: closed forms
    {
        Signal phi = normalized(gaussian(g64));
        Distribution W = tau_wigner(0.5, phi, phi);
        double worst = 0.0;
        double z[2];
        for (int64_t i = 0; i < W.sig.size(); ++i) {
            W.sig.grid.coords(i, z);
            double want = 2.0 * std::exp(-2.0 * M_PI * (z[0] * z[0] + z[1] * z[1]));
            worst = std::max(worst, std::abs(W.sig.values[i] - cd(want, 0.0)));
        }
        rep.check_le("Gaussian Wigner closed form (N=64)", worst, 1e-5);

        Signal f = random_signal(g32, rng), h = random_signal(g32, rng);
        Distribution R = tau_wigner(0.0, f, h);
        Signal hhat = dft_centered(h);
        double dev = 0.0;
        for (int i = 0; i < g32.n; ++i)
            for (int j = 0; j < g32.n; ++j) {
                double x = g32.point(i), xi = g32.point(j);
                cd want = f.values[i] * std::conj(hhat.values[j]) *
                          std::polar(1.0, -2.0 * M_PI * xi * x);
                dev = std::max(dev, std::abs(R.sig.values[i * g32.n + j] - want));
            }
        rep.check_le("Rihaczek product formula (N=32)", dev, 1e-8);
    }

    // criterion 5: fast path vs dense oracle on seeded decomposable matrices
    // (grid-exact warps at N=16; see the README periodization note)
    {
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            SymplecticMatrix A = random_decomposable_exact_warp(rng);
            Signal f = random_signal(g16, rng, 3, 1), h = random_signal(g16, rng, 3, 1);
            Distribution fast = fast_decomposable(A, f, h);
            Distribution dense = metaplectic_wigner(A, f, h, DistPath::Dense);
            worst = std::max(worst, max_diff_up_to_phase(fast.sig.values, dense.sig.values));
        }
        rep.check_le("fast path vs dense oracle (10 matrices, N=16)", worst, 1e-5);

        // non-integer warps at N=32, where periodization tails are resolved
        double worst32 = 0.0;
        for (int k = 0; k < 4; ++k) {
            SymplecticMatrix A = random_decomposable(1, rng);
            Signal f = random_signal(g32, rng, 3, 1), h = random_signal(g32, rng, 3, 1);
            Distribution fast = fast_decomposable(A, f, h);
            Distribution word = metaplectic_wigner(A, f, h, DistPath::Word);
            worst32 = std::max(worst32, max_diff_up_to_phase(fast.sig.values, word.sig.values));
        }
        rep.check_le("fast path vs word path, generic warps (N=32)", worst32, 1e-3);
        Signal phi = normalized(gaussian(g32));
        Signal q = random_signal(g32, rng, 3, 1);
        rep.check_le("fast path reproduces the classical Wigner (N=32)",
                     max_diff_up_to_phase(fast_decomposable(gen_tau(0.5, 1), phi, q).sig.values,
                                          tau_wigner(0.5, phi, q).sig.values),
                     1e-5);
    }

    // criterion 7: Cohen class
    {
        double worst = 0.0;
        Signal f = normalized(gaussian(g32)), h = random_signal(g32, rng, 2, 1);
        Distribution W = tau_wigner(0.5, f, h);
        for (double tau : {0.25, 0.75}) {
            SymplecticMatrix A = gen_tau(tau, 1);
            Distribution sigma = cohen_kernel(A, Grid(32, 2));
            Distribution conv = convolve(W, sigma);
            Distribution ref = tau_wigner(tau, f, h);
            worst = std::max(worst, max_abs_diff(conv.sig.values, ref.sig.values));
        }
        rep.check_le("Cohen convolution W * Sigma_{A_tau} = W_{A_tau} (N=32)", worst, 1e-3);

        // kernel spectrum is unimodular
        Distribution sigma = cohen_kernel(gen_tau(0.25, 1), Grid(32, 2));
        Signal back = dft_centered(sigma.sig);
        double moddev = 0.0;
        for (const cd& v : back.values) moddev = std::max(moddev, std::abs(std::abs(v) - 1.0));
        rep.check_le("Cohen kernel has unimodular spectrum", moddev, 1e-10);
    }

    // covariance: |W_A(pi(z)f, pi(z)g)| = |T_z W_A(f,g)| on the lattice
    {
        double worst = 0.0;
        Signal f = random_signal(g32, rng), h = random_signal(g32, rng);
        for (double tau : {0.25, 0.5}) {
            int xs = 4, fs = -3;
            Signal fz = phase_space_shift(f, &xs, &fs), hz = phase_space_shift(h, &xs, &fs);
            Distribution Wz = tau_wigner(tau, fz, hz);
            Distribution W = tau_wigner(tau, f, h);
            int shift2[2] = {xs, fs};
            Signal Tz = translate(W.sig, shift2);
            for (int64_t i = 0; i < Wz.sig.size(); ++i)
                worst = std::max(worst, std::abs(std::abs(Wz.sig.values[i]) -
                                                 std::abs(Tz.values[i])));
        }
        rep.check_le("covariance shift identity (A_tau, lattice z)", worst, 1e-8);
    }

    // shift-invertibility: |W_A(pi(w)f, g)| = |T_{E_A w} W_A(f,g)|
    {
        double worst = 0.0;
        Signal f = random_signal(g32, rng), h = random_signal(g32, rng);
        for (double tau : {0.25, 0.5, 0.75}) {
            SymplecticMatrix A = gen_tau(tau, 1);
            Eigen::MatrixXd E = shift_matrix(A);
            int xs = 8, fs = -4;
            Signal fw = phase_space_shift(f, &xs, &fs);
            Distribution Ww = tau_wigner(tau, fw, h);
            Distribution W = tau_wigner(tau, f, h);
            Eigen::Vector2d wvec(xs * g32.delta(), fs * g32.delta());
            Eigen::Vector2d Ew = E * wvec;
            int shift2[2] = {static_cast<int>(std::lround(Ew(0) / g32.delta())),
                             static_cast<int>(std::lround(Ew(1) / g32.delta()))};
            Signal TW = translate(W.sig, shift2);
            for (int64_t i = 0; i < Ww.sig.size(); ++i)
                worst = std::max(worst,
                                 std::abs(std::abs(Ww.sig.values[i]) - std::abs(TW.values[i])));
        }
        rep.check_le("shift-invertibility identity (A_tau, E_A w on lattice)", worst, 1e-8);
    }

    // fundamental identity and STFT recovery
    {
        Signal f = normalized(gaussian(g32)), h = random_signal(g32, rng, 2, 1);
        double worst = 0.0;
        worst = std::max(worst, fundamental_identity_check(gen_stft(1), f, h).deviation);
        worst = std::max(worst, fundamental_identity_check(gen_tau(0.5, 1), f, h).deviation);
        rep.check_le("fundamental identity W_A(Ff,Fg) = W_{A'}(f,g)", worst, 1e-6);

        Signal g1 = normalized(gaussian(g32));
        int xs = 3, fs = 2;
        RecoveryResult r1 = stft_recovery(gen_tau(0.5, 1), f, g1, g1, g1, &xs, &fs);
        RecoveryResult r2 = stft_recovery(gen_stft(1), f, g1, g1, g1, &xs, &fs);
        rep.check_le("STFT recovery matches <f, pi(w)g>", std::max(r1.deviation, r2.deviation),
                     1e-5);
        rep.check_le("STFT recovery independent of A", std::abs(r1.recovered - r2.recovered),
                     1e-5);
    }

    // Donoho-Stark style support report (numbers only)
    {
        Signal f = normalized(gaussian(g32));
        SupportReport s = support_report(gen_tau(0.5, 1), f, f, 1e-3);
        rep.report_only("support measure of Gaussian Wigner above 1e-3 relative", s.measure);
    }
    return rep;
}

// ---------------------------------------------------------------- analysis -

VerifyReport verify_analysis(uint64_t seed) {
    VerifyReport rep{"analysis", seed, {}};
    Rng rng(seed ^ 0xa0a1050cULL);
    Grid g32(32, 1), g64(64, 1);

    // criterion 8: Lieb constants and bounds
    {
        double dev = 0.0;
        for (double tau : {0.3, 0.5, 0.7})
            dev = std::max(dev,
                           std::abs(lieb_constants(gen_tau(tau, 1), 2.0).derived_constant - 1.0));
        dev = std::max(dev, std::abs(lieb_constants(gen_stft(1), 2.0).derived_constant - 1.0));
        rep.check_le("derived Lieb constant at p=2 equals 1", dev, 1e-12);
        rep.report_only("printed Lieb constant at p=2 for A_{1/2} (not asserted)",
                        lieb_constants(gen_tau(0.5, 1), 2.0).paper_constant);

        Signal phi = normalized(gaussian(g64));
        LiebReport lr = lieb_check(gen_tau(0.5, 1), phi, phi, 4.0);
        rep.check_le("Gaussian attains 2^{1/4} at p=4 (relative gap)",
                     std::abs(lr.ratio - std::pow(2.0, 0.25)) / std::pow(2.0, 0.25), 0.01);

        double worst_margin = 1e300;
        bool all_hold = true;
        for (int k = 0; k < 100; ++k) {
            SymplecticMatrix A = (k % 2 == 0) ? gen_tau(0.5, 1) : gen_tau(0.3, 1);
            Signal f = random_signal(g32, rng), h = random_signal(g32, rng);
            for (double p : {1.0, 4.0}) {
                LiebReport r = lieb_check(A, f, h, p);
                worst_margin = std::min(worst_margin, r.margin);
                all_hold = all_hold && r.holds;
            }
        }
        rep.check_true("Lieb bounds hold on 100 seeded pairs (p in {1,4})", all_hold);
        rep.report_only("minimum Lieb margin over the 100 pairs", worst_margin);
    }

    // criterion 8: weak uncertainty floors
    {
        Signal phi = normalized(gaussian(g64));
        bool ok = true;
        for (double eps : {0.1, 0.5}) {
            UncertaintyReport u = weak_uncertainty(gen_tau(0.5, 1), phi, phi, eps);
            ok = ok && u.satisfied;
            rep.report_only("weak uncertainty |U| at eps=" + std::to_string(eps), u.measure);
            rep.report_only("simple floor at eps=" + std::to_string(eps), u.simple_floor);
        }
        UncertaintyReport u1 = weak_uncertainty(gen_tau(0.5, 1), phi, phi, 1.0);
        ok = ok && u1.satisfied;
        rep.check_true("weak uncertainty floors satisfied (eps in {0.1, 0.5, 1})", ok);
    }

    // criterion 10: frames
    {
        Grid g16(16, 1);
        Signal imp = impulse(g16, 8, /*unit_norm=*/true);
        FrameBounds fb = frame_bounds(FrameSpec{imp, 1, 16});
        rep.check_le("impulse frame: |A-1| and |B-1|",
                     std::max(std::abs(fb.lower - 1.0), std::abs(fb.upper - 1.0)), 1e-12);

        Signal gw = normalized(gaussian(g16));
        FrameBounds fg = frame_bounds(FrameSpec{gw, 2, 2});
        rep.check_ge("Gaussian frame lower bound (N=16, a=b=2)", fg.lower, 1e-6);
        rep.report_only("Gaussian frame condition B/A", fg.upper / fg.lower);
        // dual-frame reconstruction: solve S x = S f
        Signal f = random_signal(g16, rng);
        Eigen::Map<const Eigen::VectorXcd> fv(f.values.data(), f.size());
        Eigen::VectorXcd Sf = fg.frame_op * fv;
        Eigen::VectorXcd rec = fg.frame_op.fullPivLu().solve(Sf);
        rep.check_le("dual-frame reconstruction error", (rec - fv).cwiseAbs().maxCoeff(), 1e-8);

        FrameBounds fo = frame_bounds(FrameSpec{gw, 4, 8}); // a*b = 32 > 16
        rep.check_le("oversparse lattice lower bound ~ 0", fo.lower, 1e-10);

        // frame operator is quadratic in the window
        Signal g2x = gw;
        for (cd& v : g2x.values) v *= 2.0;
        FrameBounds f4 = frame_bounds(FrameSpec{g2x, 2, 2});
        rep.check_le("doubling the window quadruples the bounds",
                     std::max(std::abs(f4.lower - 4.0 * fg.lower),
                              std::abs(f4.upper - 4.0 * fg.upper)),
                     1e-12 * std::max(1.0, 4.0 * fg.upper));
    }

    // norm relation for decomposable matrices (exact warped relation + ratios)
    {
        std::vector<Signal> family;
        for (int k = 0; k < 20; ++k) family.push_back(random_signal(g32, rng));
        Signal gw = normalized(gaussian(g32));
        NormRelationReport nr = norm_relation_report(gen_tau(0.5, 1), family, gw, 2.0, 0.0);
        rep.check_le("norm relation: Moyal ratio spread at p=2 (A_{1/2})",
                     nr.ratio_max - nr.ratio_min, 1e-6);
        if (nr.exact_rel_dev)
            rep.check_le("norm relation: warped-STFT identity (A_{1/2}, p=2)",
                         *nr.exact_rel_dev, 1e-4);
        SymplecticMatrix Ad = random_decomposable(1, rng);
        NormRelationReport n1 = norm_relation_report(Ad, family, gw, 1.0, 0.0);
        if (n1.exact_rel_dev)
            rep.check_le("norm relation: warped-STFT identity (random decomposable, p=1)",
                         *n1.exact_rel_dev, 1e-4);
        rep.report_only("norm relation ratio min (p=1)", n1.ratio_min);
        rep.report_only("norm relation ratio max (p=1)", n1.ratio_max);
    }
    return rep;
}

// ---------------------------------------------------------------- quant ----

VerifyReport verify_quant(uint64_t seed) {
    VerifyReport rep{"quant", seed, {}};
    Rng rng(seed ^ 0x0b5e55edULL);
    Grid g16(16, 1);
    Grid pg(16, 2);

    auto gaussian_symbol = [](double wx, double wxi) {
        return [wx, wxi](const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
            double q = 0.0;
            for (int a = 0; a < x.size(); ++a) q += x(a) * x(a) / (wx * wx);
            for (int a = 0; a < xi.size(); ++a) q += xi(a) * xi(a) / (wxi * wxi);
            return cd(std::exp(-M_PI * q), 0.0);
        };
    };
    auto sample_symbol = [&](const SymbolFn& fn) {
        Signal s(pg);
        double z[2];
        Eigen::VectorXd x(1), xi(1);
        for (int64_t i = 0; i < s.size(); ++i) {
            pg.coords(i, z);
            x(0) = z[0];
            xi(0) = z[1];
            s.values[i] = fn(x, xi);
        }
        return Distribution{std::move(s), "sampled symbol", Eigen::MatrixXd()};
    };

    Distribution one{Signal(pg, std::vector<cd>(pg.size(), cd(1.0, 0.0))), "one",
                     Eigen::MatrixXd()};
    Distribution gsym = sample_symbol(gaussian_symbol(1.0, 1.0));

    // criterion 9: Op(1) = Id
    {
        QuantizedOperator W1 = op_weyl(g16, one);
        double dev = (W1.op - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff();
        for (double tau : {0.0, 0.5, 1.0}) {
            QuantizedOperator Q = op_general(gen_tau(tau, 1), one, g16);
            dev = std::max(dev,
                           (Q.op - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff());
        }
        rep.check_le("Op(1) = Id (Weyl quadrature and A_tau duality)", dev, 1e-8);
    }

    // criterion 9: Weyl vs general quantization at A_{1/2}
    {
        QuantizedOperator Qw = op_weyl(g16, gsym);
        QuantizedOperator Qg = op_general(gen_tau(0.5, 1), gsym, g16);
        std::vector<cd> a(Qw.op.data(), Qw.op.data() + Qw.op.size());
        std::vector<cd> b(Qg.op.data(), Qg.op.data() + Qg.op.size());
        rep.check_le("Op_{A_{1/2}} matches the Weyl quadrature", max_diff_up_to_phase(a, b),
                     1e-6);
        // self-adjointness for the real symbol
        rep.check_le("Weyl operator of a real symbol is self-adjoint",
                     (Qw.op - Qw.op.adjoint()).cwiseAbs().maxCoeff(), 1e-8);
        rep.report_only("operator norm of Op_w(gaussian symbol) (report only)",
                        Qw.op.operatorNorm());
    }

    // Kohn-Nirenberg multiplier: A_0 with an x-only symbol
    {
        Signal s(pg);
        double z[2];
        for (int64_t i = 0; i < s.size(); ++i) {
            pg.coords(i, z);
            s.values[i] = cd(std::cos(z[0]), 0.0); // m(x) = cos(x)
        }
        Distribution msym{std::move(s), "x multiplier", Eigen::MatrixXd()};
        QuantizedOperator Q = op_general(gen_tau(0.0, 1), msym, g16);
        double dev = 0.0;
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) {
                cd want = (i == j) ? cd(std::cos(g16.point(i)), 0.0) : cd(0.0, 0.0);
                dev = std::max(dev, std::abs(Q.op(i, j) - want));
            }
        rep.check_le("Kohn-Nirenberg x-multiplier is diagonal", dev, 1e-8);
    }

    // criterion 9: change of quantization
    {
        Distribution b = change_quantization(gen_tau(0.5, 1), gen_tau(0.5, 1), gsym);
        rep.check_le("change_quantization roundtrip B=A",
                     max_diff_up_to_phase(b.sig.values, gsym.sig.values), 1e-8);
        Distribution ab = change_quantization(gen_tau(0.0, 1), gen_tau(0.5, 1), gsym);
        Distribution back = change_quantization(gen_tau(0.5, 1), gen_tau(0.0, 1), ab);
        rep.check_le("change_quantization roundtrip A->B->A",
                     max_diff_up_to_phase(back.sig.values, gsym.sig.values), 1e-7);
        QuantizedOperator Qa = op_general(gen_tau(0.0, 1), gsym, g16);
        QuantizedOperator Qb = op_general(gen_tau(0.5, 1), ab, g16);
        std::vector<cd> va(Qa.op.data(), Qa.op.data() + Qa.op.size());
        std::vector<cd> vb(Qb.op.data(), Qb.op.data() + Qb.op.size());
        rep.check_le("Op_B(change(a)) = Op_A(a) up to phase", max_diff_up_to_phase(va, vb),
                     1e-5);
    }

    // criterion 9: kernel vs duality assembly
    {
        double worst = 0.0;
        for (double tau : {0.0, 0.5}) {
            SymplecticMatrix A = gen_tau(tau, 1);
            QuantizedOperator Qd = op_general(A, gsym, g16);
            QuantizedOperator Qk = kernel_assemble(kernel_of(A, gsym), g16);
            std::vector<cd> va(Qd.op.data(), Qd.op.data() + Qd.op.size());
            std::vector<cd> vb(Qk.op.data(), Qk.op.data() + Qk.op.size());
            worst = std::max(worst, max_diff_up_to_phase(va, vb));
        }
        rep.check_le("kernel assembly matches duality assembly", worst, 1e-6);
    }

    // criterion 9: intertwining identity
    {
        Signal f = normalized(gaussian(g16));
        Signal h = random_signal(g16, rng, 2, 1);
        double worst = 0.0;
        for (const auto& A : {gen_tau(0.5, 1), gen_stft(1)}) {
            IntertwiningReport ir = intertwining_check(A, gaussian_symbol(1.0, 1.0), f, h);
            worst = std::max(worst, ir.deviation);
        }
        rep.check_le("intertwining W_A(Op_w(a)f, g) = Op_w((a x 1) o A^{-1}) W_A(f,g)", worst,
                     1e-4);
        IntertwiningReport tr = intertwining_check(
            gen_tau(0.5, 1),
            [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return cd(1.0, 0.0); }, f, h);
        rep.check_le("intertwining with a = 1", tr.deviation, 1e-8);
    }
    return rep;
}

std::vector<VerifyReport> verify_suite(const std::string& name, uint64_t seed) {
    if (name == "core") return {verify_core(seed)};
    if (name == "engine") return {verify_engine(seed)};
    if (name == "dist") return {verify_dist(seed)};
    if (name == "analysis") return {verify_analysis(seed)};
    if (name == "quant") return {verify_quant(seed)};
    if (name == "all")
        return {verify_core(seed), verify_engine(seed), verify_dist(seed),
                verify_analysis(seed), verify_quant(seed)};
    throw domain_error("unknown suite '" + name + "'");
}

} // namespace metawig
