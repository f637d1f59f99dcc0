#pragma once

#include "stiefelsdp/conic.hpp"
#include "stiefelsdp/instances.hpp"
#include "stiefelsdp/solver.hpp"

// Semidefinite relaxations of quadratic optimization over St(n,p).
//
// The lifted variable is Y = [[1, u^T], [u, X]] (order 1+np) with X
// standing in for u u^T. All four builders share the Shor core:
//
//   minimize  H . X + 2 g^T u
//   s.t.      Y(0,0) = 1,  tr(X_jj) = 1,  tr(X_jk) = 0 (j < k),  Y psd
//
// diagsum adds an order-n PSD slack S with S = I_n - sum_j X_jj.
// kron adds the order-(n+p)^2 linearization M(u,X) of the Kronecker
// square of the bordered matrix [[I_p, U^T], [U, I_n]].
// hadamard adds the order-(n+p) bordered matrix with matop(diag X) in
// the corner, a principal submatrix of M up to permutation.

namespace stiefel {

struct LiftedPoint {
  Index n = 0;
  Index p = 0;
  Vector u;     // length np
  SymMatrix X;  // order np
  SymMatrix Y;  // order 1 + np

  // n x n block X_jk of X, 0-based block indices.
  Matrix x_block(Index j, Index k) const {
    return X.mat().block(j * n, k * n, n, n);
  }
};

// Assembles Y from (u, X).
LiftedPoint make_lifted(const Vector& u, const SymMatrix& x, Index n, Index p);

// Exact lift of a feasible point: X = u u^T.
LiftedPoint lift_rank1(const Matrix& U);

// Elementary symmetric matrix of order p+n with ones at (p+i, j) and
// (j, p+i); 0-based indices, 0 <= j < p, 0 <= i < n.
struct KjiMatrix {
  Index j = 0;
  Index i = 0;
  SymMatrix matrix;
};

KjiMatrix k_matrix(Index j, Index i, Index n, Index p);

// The linearization M(u, X) of
//   [[I_p, U^T], [U, I_n]] kron [[I_p, U^T], [U, I_n]]
// in the lifted variables: order (n+p)^2, equal to the direct Kronecker
// product when (u, X) is a rank-1 lift.
SymMatrix assemble_M(const Vector& u, const SymMatrix& x, Index n, Index p);

ConicProgram build_shor(const QpsInstance& inst);
ConicProgram build_diagsum(const QpsInstance& inst);
ConicProgram build_kron(const QpsInstance& inst);
ConicProgram build_hadamard(const QpsInstance& inst);

// Reads the Y block of a solved program back into (u, X, Y). Throws
// NumericalError carrying the solver status when it is not optimal.
LiftedPoint extract_lifted(const ConicProgram& prog, const ConicSolution& sol,
                           Index n, Index p);

}  // namespace stiefel
