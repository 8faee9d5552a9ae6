// Command-line surface: classification reports, transforms, distributions and
// the verification suites, with file-based I/O.
//
// Exit codes: 0 success, 1 verification failure, 2 domain error, 3 parse
// error, 4 resource cap exceeded.
#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "metawig/io.hpp"
#include "metawig/verify.hpp"

using namespace metawig;

namespace {

GeneratorWord parse_word(const std::string& text, int dim) {
    GeneratorWord w(dim);
    size_t pos = 0;
    auto fail = [&](const std::string& why) { throw parse_error("generator word: " + why); };
    while (pos < text.size()) {
        size_t next = text.find(',', pos);
        // a parameterized token carries its own commas inside parentheses
        size_t open = text.find('(', pos);
        if (open != std::string::npos && (next == std::string::npos || open < next)) {
            size_t close = text.find(')', open);
            if (close == std::string::npos) fail("missing ')'");
            next = text.find(',', close);
        }
        std::string tok = text.substr(pos, (next == std::string::npos ? text.size() : next) - pos);
        pos = (next == std::string::npos) ? text.size() : next + 1;
        if (tok.empty()) continue;

        std::string name = tok;
        std::vector<double> args;
        size_t p = tok.find('(');
        if (p != std::string::npos) {
            name = tok.substr(0, p);
            std::string body = tok.substr(p + 1, tok.find(')') - p - 1);
            std::istringstream bs(body);
            std::string cell;
            while (std::getline(bs, cell, ',')) {
                try {
                    args.push_back(std::stod(cell));
                } catch (...) {
                    fail("bad number '" + cell + "'");
                }
            }
        }
        auto square = [&](const char* who) {
            if (static_cast<int>(args.size()) != dim * dim)
                fail(std::string(who) + " needs " + std::to_string(dim * dim) + " entries");
            Eigen::MatrixXd M(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) M(i, j) = args[i * dim + j];
            return M;
        };
        if (name == "J" || name == "F") {
            w.atoms.push_back(Atom::fourier());
        } else if (name == "F2") {
            if (dim % 2 != 0) fail("F2 needs an even number of axes");
            std::vector<int> axes;
            for (int a = dim / 2; a < dim; ++a) axes.push_back(a);
            w.atoms.push_back(Atom::partial_fourier(axes));
        } else if (name == "dil") {
            w.atoms.push_back(Atom::dilation(square("dil")));
        } else if (name == "chirp") {
            w.atoms.push_back(Atom::chirp_mul(square("chirp")));
        } else if (name == "chirpconv") {
            w.atoms.push_back(Atom::chirp_conv(square("chirpconv")));
        } else {
            fail("unknown atom '" + name + "'");
        }
    }
    if (w.atoms.empty()) fail("empty word");
    return w;
}

int run(int argc, char** argv) {
    CLI::App app{"metawig: metaplectic time-frequency analysis toolkit"};
    app.require_subcommand(1);

    uint64_t seed = 1;
    double tol = 1e-9;
    app.add_option("--seed", seed, "seed for all randomized trials");
    app.add_option("--tol", tol, "structural tolerance override");

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "classify a symplectic matrix");
    std::string matrix_path, out_path;
    classify_cmd->add_option("matrix", matrix_path, "matrix JSON file")->required();
    classify_cmd->add_option("--out", out_path, "output JSON path");

    // transform
    auto* transform_cmd = app.add_subcommand("transform", "apply a metaplectic operator");
    std::string sig_path, t_matrix, t_word, t_out = "transformed.csv", t_path = "auto";
    int t_dim = 1;
    transform_cmd->add_option("signal", sig_path, "input signal CSV")->required();
    transform_cmd->add_option("--matrix", t_matrix, "matrix JSON file");
    transform_cmd->add_option("--generator", t_word,
                              "generator word, e.g. 'J' or 'chirp(0.5),J'");
    transform_cmd->add_option("--dim", t_dim, "signal dimension for --generator");
    transform_cmd->add_option("--out", t_out, "output CSV path");
    transform_cmd->add_option("--path", t_path, "auto | word | dense");

    // distribution
    auto* dist_cmd = app.add_subcommand("distribution", "compute a metaplectic Wigner distribution");
    std::string f_path, g_path, d_matrix, d_out = "distribution.csv", d_path = "auto";
    dist_cmd->add_option("f", f_path, "first signal CSV")->required();
    dist_cmd->add_option("g", g_path, "second signal CSV")->required();
    dist_cmd->add_option("--matrix", d_matrix, "matrix JSON file")->required();
    dist_cmd->add_option("--out", d_out, "output CSV path");
    dist_cmd->add_option("--path", d_path, "auto | dense | word | fast");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the verification suites");
    std::string suite = "all", v_out = "verify_report.json";
    verify_cmd->add_option("--suite", suite, "core | engine | dist | analysis | quant | all");
    verify_cmd->add_option("--out", v_out, "report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    if (const char* mut = std::getenv("METAWIG_MUTATE"))
        if (std::string(mut) == "shift-sign") testhooks::mutate_shift_sign = true;

    if (classify_cmd->parsed()) {
        SymplecticMatrix A = read_matrix(matrix_path, /*check=*/false);
        Classification c = classify(A, Tolerances{tol, 1e-12, 1e-8});
        std::string out = classification_to_json(c).dump(2) + "\n";
        if (out_path.empty()) out_path = "classification.json";
        write_text_atomic(out_path, out);
        std::cout << out;
        return c.is_symplectic ? 0 : 2;
    }

    if (transform_cmd->parsed()) {
        Signal f = read_signal(sig_path);
        Signal out;
        if (!t_word.empty()) {
            GeneratorWord w = parse_word(t_word, t_dim);
            if (w.dim != f.grid.dim) throw domain_error("transform: --dim does not match the signal");
            out = apply_word(w, f);
        } else if (!t_matrix.empty()) {
            SymplecticMatrix A = read_matrix(t_matrix);
            EnginePath p = t_path == "word" ? EnginePath::Word
                           : t_path == "dense" ? EnginePath::General
                                               : EnginePath::Auto;
            out = apply_metaplectic(A, f, p);
        } else {
            throw parse_error("transform: provide --matrix or --generator");
        }
        double in_norm = l2_norm(f), out_norm = l2_norm(out);
        std::cout << "unitarity defect: "
                  << format_double(std::abs(out_norm - in_norm) / std::max(in_norm, 1e-300))
                  << "\n";
        write_signal(t_out, out);
        return 0;
    }

    if (dist_cmd->parsed()) {
        Signal f = read_signal(f_path), g = read_signal(g_path);
        if (f.grid != g.grid) throw domain_error("distribution: signal grids differ");
        Grid pg(f.grid.n, 2 * f.grid.dim);
        if (pg.size() > dense_oracle_cap())
            throw resource_error("distribution: phase-space grid exceeds the cap");
        SymplecticMatrix A = read_matrix(d_matrix);
        DistPath p = d_path == "dense" ? DistPath::Dense
                     : d_path == "word" ? DistPath::Word
                     : d_path == "fast" ? DistPath::Fast
                                        : DistPath::Auto;
        Distribution W = metaplectic_wigner(A, f, g, p);
        std::cout << "moyal defect: " << format_double(moyal_defect(W, f, g)) << "\n";
        write_distribution(d_out, W);
        return 0;
    }

    if (verify_cmd->parsed()) {
        std::vector<VerifyReport> reports = verify_suite(suite, seed);
        bool all = true;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) {
            all = all && r.pass();
            arr.push_back(r.to_json());
            for (const auto& e : r.entries) {
                std::cout << (e.asserted ? (e.pass ? "PASS " : "FAIL ") : "INFO ") << "["
                          << r.suite << "] " << e.quantity << " (value "
                          << format_double(e.value);
                if (e.asserted) std::cout << ", margin " << format_double(e.margin);
                std::cout << ")\n";
            }
        }
        nlohmann::json doc{{"seed", seed}, {"pass", all}, {"suites", arr}};
        write_text_atomic(v_out, doc.dump(2) + "\n");
        std::cout << (all ? "verification passed" : "verification FAILED") << "\n";
        return all ? 0 : 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 4;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
