#include "metawig/grid.hpp"

#include <algorithm>

namespace metawig {

Grid::Grid(int n_, int dim_) : n(n_), dim(dim_) {
    if (n <= 0 || n % 2 != 0) throw domain_error("grid: N must be a positive even integer");
    if (dim <= 0 || dim > 4) throw domain_error("grid: dimension must be in 1..4");
}

int64_t Grid::size() const {
    int64_t s = 1;
    for (int a = 0; a < dim; ++a) s *= n;
    return s;
}

void Grid::unravel(int64_t flat, int* idx) const {
    for (int a = dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % n);
        flat /= n;
    }
}

int64_t Grid::ravel(const int* idx) const {
    int64_t flat = 0;
    for (int a = 0; a < dim; ++a) flat = flat * n + wrap(idx[a]);
    return flat;
}

void Grid::coords(int64_t flat, double* x) const {
    int idx[4];
    unravel(flat, idx);
    for (int a = 0; a < dim; ++a) x[a] = point(idx[a]);
}

Signal::Signal(const Grid& g, std::vector<cd> v) : grid(g), values(std::move(v)) {
    if (static_cast<int64_t>(values.size()) != g.size())
        throw domain_error("signal: value count does not match grid size");
}

double l2_norm(const Signal& f) {
    double s = 0.0;
    for (const cd& v : f.values) s += std::norm(v);
    return std::sqrt(s) * std::pow(f.grid.delta(), f.grid.dim * 0.5);
}

cd inner(const Signal& f, const Signal& g) {
    if (f.grid != g.grid) throw domain_error("inner: grid mismatch");
    cd s(0.0, 0.0);
    for (int64_t i = 0; i < f.size(); ++i) s += f.values[i] * std::conj(g.values[i]);
    return s * std::pow(f.grid.delta(), f.grid.dim);
}

Signal impulse(const Grid& g, int64_t flat_index, bool unit_norm) {
    Signal f(g);
    double amp = unit_norm ? std::pow(g.delta(), -g.dim * 0.5) : 1.0;
    f.values.at(static_cast<size_t>(flat_index)) = cd(amp, 0.0);
    return f;
}

Signal gaussian(const Grid& g, double width) {
    if (width <= 0.0) throw domain_error("gaussian: width must be positive");
    Signal f(g);
    double x[4];
    for (int64_t i = 0; i < f.size(); ++i) {
        g.coords(i, x);
        double q = 0.0;
        for (int a = 0; a < g.dim; ++a) q += (x[a] / width) * (x[a] / width);
        f.values[i] = cd(std::exp(-M_PI * q), 0.0);
    }
    return f;
}

Signal normalized(const Signal& f) {
    double nrm = l2_norm(f);
    if (nrm == 0.0) throw domain_error("normalized: zero signal");
    Signal g = f;
    for (cd& v : g.values) v /= nrm;
    return g;
}

Signal parity(const Signal& f) {
    const Grid& g = f.grid;
    Signal out(g);
    int idx[4], ridx[4];
    for (int64_t i = 0; i < f.size(); ++i) {
        g.unravel(i, idx);
        for (int a = 0; a < g.dim; ++a) ridx[a] = g.wrap(static_cast<int64_t>(g.n) - idx[a]);
        out.values[g.ravel(ridx)] = f.values[i];
    }
    return out;
}

Signal translate(const Signal& f, const int* shift_idx) {
    const Grid& g = f.grid;
    Signal out(g);
    int idx[4], sidx[4];
    for (int64_t i = 0; i < f.size(); ++i) {
        g.unravel(i, idx);
        for (int a = 0; a < g.dim; ++a) sidx[a] = idx[a] - shift_idx[a];
        out.values[i] = f.values[g.ravel(sidx)];
    }
    return out;
}

Signal modulate(const Signal& f, const int* freq_idx) {
    const Grid& g = f.grid;
    Signal out(g);
    double x[4];
    for (int64_t i = 0; i < f.size(); ++i) {
        g.coords(i, x);
        double phase = 0.0;
        for (int a = 0; a < g.dim; ++a) phase += freq_idx[a] * g.delta() * x[a];
        out.values[i] = f.values[i] * std::polar(1.0, 2.0 * M_PI * phase);
    }
    return out;
}

Signal phase_space_shift(const Signal& f, const int* x_idx, const int* xi_idx) {
    return modulate(translate(f, x_idx), xi_idx);
}

Signal tensor_conj(const Signal& f, const Signal& g) {
    if (f.grid != g.grid) throw domain_error("tensor: grid mismatch");
    Grid tg(f.grid.n, 2 * f.grid.dim);
    Signal out(tg);
    int64_t ng = g.size();
    for (int64_t i = 0; i < f.size(); ++i)
        for (int64_t j = 0; j < ng; ++j)
            out.values[i * ng + j] = f.values[i] * std::conj(g.values[j]);
    return out;
}

double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_diff_up_to_phase(const std::vector<cd>& a, const std::vector<cd>& b) {
    if (a.size() != b.size()) throw domain_error("phase diff: size mismatch");
    cd ip(0.0, 0.0);
    for (size_t i = 0; i < a.size(); ++i) ip += a[i] * std::conj(b[i]);
    cd phase = (std::abs(ip) > 1e-300) ? ip / std::abs(ip) : cd(1.0, 0.0);
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - phase * b[i]));
    return m;
}

uint64_t Rng::next_u64() {
    // splitmix64
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return (next_u64() >> 11) * (1.0 / 9007199254740992.0);
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int Rng::uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
}

cd Rng::complex_normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-std::log(u1));
    return cd(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
}

} // namespace metawig
