// Metaplectic pseudodifferential operators: dense Weyl and general
// quantization, change of quantization, kernels, and the intertwining
// identity. Dense-first: at desk scale every identity is checkable directly.
#pragma once

#include <functional>

#include "metawig/distributions.hpp"

namespace metawig {

// Closed-form symbol: value at (position, momentum), each of grid dimension.
using SymbolFn = std::function<cd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

struct QuantizedOperator {
    Grid grid;            // signal grid (the operator is N^d x N^d)
    Eigen::MatrixXcd op;
    std::string provenance;
};

Signal apply_operator(const QuantizedOperator& Q, const Signal& f);

// Momentum quadrature of the Weyl double integral. refine subdivides the
// momentum spacing (restores discrete symplectic covariance at even N);
// range_factor extends the momentum box for symbols whose decay outruns it
// (range_factor > 1 assumes a decaying symbol; constants would be
// over-counted).
struct WeylQuadrature {
    int refine = 1;
    int range_factor = 1;
};

// Weyl quantization by double quadrature of
//   Op(a) f(x) = int int e^{2 pi i (x-y).xi} a((x+y)/2, xi) f(y) dy dxi.
QuantizedOperator op_weyl(const Grid& g, const SymbolFn& symbol, WeylQuadrature quad = {});
// Gridded symbol on the doubled grid; midpoints are filled by trigonometric
// interpolation along the position axes (d = 1 grids).
QuantizedOperator op_weyl(const Grid& g, const Distribution& symbol);

// Duality assembly: Op[i][j] = delta^{-d} <a, W_A(e_i, e_j)>, realized through
// the dense engine matrix on the phase-space grid. Construction checks the
// defining duality on seeded signal pairs.
QuantizedOperator op_general(const SymplecticMatrix& A, const Distribution& symbol,
                             const Grid& g);

// b = mu(B) mu(A)^{-1} a, so Op_B(b) = Op_A(a) up to phase.
Distribution change_quantization(const SymplecticMatrix& A, const SymplecticMatrix& B,
                                 const Distribution& symbol);

// k_A(a) = mu(A)^{-1} a with <Op_A(a) f, g> = <k, g tensor conj f>.
Distribution kernel_of(const SymplecticMatrix& A, const Distribution& symbol);
// Operator from an integral kernel: Op[i][j] = delta^d k(i, j).
QuantizedOperator kernel_assemble(const Distribution& kernel, const Grid& g);

struct IntertwiningReport {
    double deviation = 0.0; // up to one global phase
    double scale = 0.0;     // max modulus of the left side
};
// Checks W_A(Op_w(a) f, g) = Op_w((a tensor 1) o A^{-1}) W_A(f, g) for
// A in Sp(2d, R); the outer Weyl operator acts on the phase-space grid.
IntertwiningReport intertwining_check(const SymplecticMatrix& A, const SymbolFn& a,
                                      const Signal& f, const Signal& g);

} // namespace metawig
