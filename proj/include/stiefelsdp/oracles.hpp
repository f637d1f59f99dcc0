#pragma once

#include "stiefelsdp/round_refine.hpp"

// Independent ground truth for special cases: the square orthogonal
// Procrustes problem (closed form through the SVD of A^T B) and the
// p = 1 sphere-constrained quadratic (secular equation with hard-case
// handling). Used as oracles by the tests and the acceptance suite.

namespace stiefel {

struct OracleResult {
  double value = 0.0;
  StiefelPoint minimizer;
  std::string method;
};

// Square case n = p. With A^T B = V S W^T (full SVD), the minimizer of
// ||A U - B||_F is U* = V W^T. The reported value drops the constant
// ||B||_F^2, i.e. value = ||A||_F^2 - 2 sum(S).
OracleResult procrustes_closed_form(const Matrix& a, const Matrix& b);

// Global minimum of u^T H u + 2 g^T u over the unit sphere. Exact to
// about 1e-10 through the spectral secular equation; handles g = 0 and
// the hard case where g is orthogonal to the bottom eigenspace.
OracleResult trs_oracle(const SymMatrix& h, const Vector& g);

}  // namespace stiefel
