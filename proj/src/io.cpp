#include "metawig/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace metawig {

using nlohmann::json;

void write_text_atomic(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    std::filesystem::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw parse_error("cannot open " + tmp.string() + " for writing");
        out << content;
    }
    std::filesystem::rename(tmp, p);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json matrix_to_json(const SymplecticMatrix& A) {
    json rows = json::array();
    for (int i = 0; i < A.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < A.dim(); ++j) row.push_back(A.entries(i, j));
        rows.push_back(row);
    }
    return json{{"half_dim", A.m}, {"rows", rows}};
}

SymplecticMatrix matrix_from_json(const json& j, bool check) {
    try {
        int m = j.at("half_dim").get<int>();
        const json& rows = j.at("rows");
        if (!rows.is_array() || static_cast<int>(rows.size()) != 2 * m)
            throw parse_error("matrix JSON: expected " + std::to_string(2 * m) + " rows");
        Eigen::MatrixXd M(2 * m, 2 * m);
        for (int i = 0; i < 2 * m; ++i) {
            if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != 2 * m)
                throw parse_error("matrix JSON: row " + std::to_string(i) + " has wrong length");
            for (int k = 0; k < 2 * m; ++k) M(i, k) = rows[i][k].get<double>();
        }
        return SymplecticMatrix(M, check);
    } catch (const json::exception& e) {
        throw parse_error(std::string("matrix JSON: ") + e.what());
    }
}

SymplecticMatrix read_matrix(const std::string& path, bool check) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw parse_error(std::string("matrix JSON: ") + e.what());
    }
    return matrix_from_json(j, check);
}

void write_matrix(const std::string& path, const SymplecticMatrix& A) {
    write_text_atomic(path, matrix_to_json(A).dump(2) + "\n");
}

static std::string csv_of(const Signal& f, const std::vector<std::string>& labels) {
    std::ostringstream out;
    for (size_t a = 0; a < labels.size(); ++a) out << labels[a] << ",";
    out << "re,im\n";
    int idx[4];
    for (int64_t i = 0; i < f.size(); ++i) {
        f.grid.unravel(i, idx);
        for (int a = 0; a < f.grid.dim; ++a) out << idx[a] << ",";
        out << format_double(f.values[i].real()) << "," << format_double(f.values[i].imag())
            << "\n";
    }
    return out.str();
}

std::string signal_to_csv(const Signal& f) {
    std::vector<std::string> labels;
    if (f.grid.dim == 1) {
        labels.push_back("index");
    } else {
        for (int a = 0; a < f.grid.dim; ++a) labels.push_back("i" + std::to_string(a));
    }
    return csv_of(f, labels);
}

Signal signal_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw parse_error("signal CSV: empty file");
    int ncols = 1;
    for (char c : line) if (c == ',') ++ncols;
    int dim = ncols - 2;
    if (dim < 1 || dim > 4) throw parse_error("signal CSV: unsupported column count");

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (...) {
                throw parse_error("signal CSV: bad number '" + cell + "'");
            }
        }
        if (static_cast<int>(vals.size()) != ncols)
            throw parse_error("signal CSV: ragged row");
        rows.push_back(std::move(vals));
    }
    double count = std::pow(static_cast<double>(rows.size()), 1.0 / dim);
    int n = static_cast<int>(std::lround(count));
    if (static_cast<int64_t>(rows.size()) != [&] { int64_t s = 1; for (int a = 0; a < dim; ++a) s *= n; return s; }())
        throw parse_error("signal CSV: row count is not N^dim");
    Grid g(n, dim);
    Signal f(g);
    int idx[4];
    for (const auto& r : rows) {
        for (int a = 0; a < dim; ++a) idx[a] = static_cast<int>(std::lround(r[a]));
        f.values[g.ravel(idx)] = cd(r[dim], r[dim + 1]);
    }
    return f;
}

Signal read_signal(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return signal_from_csv(ss.str());
}

void write_signal(const std::string& path, const Signal& f) {
    write_text_atomic(path, signal_to_csv(f));
}

std::string distribution_to_csv(const Distribution& W) {
    int d = W.sig.grid.dim / 2;
    std::vector<std::string> labels;
    if (d == 1) {
        labels = {"ix", "ixi"};
    } else {
        for (int a = 0; a < d; ++a) labels.push_back("ix" + std::to_string(a));
        for (int a = 0; a < d; ++a) labels.push_back("ixi" + std::to_string(a));
    }
    return csv_of(W.sig, labels);
}

json distribution_sidecar(const Distribution& W) {
    json mat = json::array();
    for (int i = 0; i < W.matrix.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < W.matrix.cols(); ++j) row.push_back(W.matrix(i, j));
        mat.push_back(row);
    }
    return json{{"grid", {{"N", W.sig.grid.n}, {"dim", W.sig.grid.dim}}},
                {"matrix", mat},
                {"path", W.provenance}};
}

void write_distribution(const std::string& path, const Distribution& W) {
    write_text_atomic(path, distribution_to_csv(W));
    write_text_atomic(path + ".json", distribution_sidecar(W).dump(2) + "\n");
}

static json matrix_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(row);
    }
    return rows;
}

json classification_to_json(const Classification& c) {
    json j{{"is_symplectic", c.is_symplectic},
           {"is_free", c.is_free},
           {"is_covariant", c.is_covariant},
           {"is_shift_invertible", c.is_shift_invertible},
           {"is_wigner_decomposable", c.is_wigner_decomposable}};
    j["shift_matrix"] = c.shift_mat ? matrix_json(*c.shift_mat) : json(nullptr);
    j["cohen_matrix"] = c.cohen_mat ? matrix_json(*c.cohen_mat) : json(nullptr);
    if (c.decomposition) {
        j["decomposition"] = json{{"C", matrix_json(c.decomposition->C)},
                                  {"L", matrix_json(c.decomposition->L)}};
    } else {
        j["decomposition"] = json(nullptr);
    }
    j["right_regular"] = c.right_regular ? json(*c.right_regular) : json(nullptr);
    j["reasons"] = c.reasons;
    return j;
}

} // namespace metawig
