#pragma once

#include <Eigen/Dense>

#include "stiefelsdp/errors.hpp"

// Dense real linear algebra kernels sized for desk-scale problems
// (matrix orders up to a few hundred). Everything here is a pure
// function of its inputs; values are safe to share across threads.

namespace stiefel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Symmetric matrix with exact entrywise symmetry. Construction from a
// general square matrix averages the two triangles, so entries(i,j) ==
// entries(j,i) holds bit-for-bit afterwards.
class SymMatrix {
 public:
  SymMatrix() : m_(0, 0) {}
  explicit SymMatrix(Index order) : m_(Matrix::Zero(order, order)) {
    if (order < 0) throw DimensionError("SymMatrix: negative order");
  }
  explicit SymMatrix(const Matrix& a);

  static SymMatrix identity(Index order);

  Index order() const { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }

  // Writes both mirror entries.
  void set(Index i, Index j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  void add(Index i, Index j, double v) {
    m_(i, j) += v;
    if (i != j) m_(j, i) += v;
  }

  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

// Thin SVD A = U0 * diag(sigma) * V0^T with U0 (n x p), V0 (p x p)
// orthonormal and sigma nonincreasing and nonnegative.
struct ThinSvd {
  Matrix u0;
  Vector sigma;
  Matrix v0;
};

// Scaled symmetric vectorization: off-diagonal slots carry sqrt(2) times
// the matrix entry, so svec(S) . svec(T) equals the trace inner product
// S . T. Slots run over the upper triangle column by column.
struct SvecVector {
  Index order = 0;
  Vector entries;
};

struct SymEig {
  Vector eigenvalues;  // descending
  Matrix eigenvectors;  // columns aligned with eigenvalues
};

constexpr Index svec_len(Index order) { return order * (order + 1) / 2; }

// Slot of entry (i,j), i <= j, within an svec of the given column-major
// upper-triangle layout.
constexpr Index svec_index(Index i, Index j) { return j * (j + 1) / 2 + i; }

// Column-stacking of an n x p matrix into a vector of length n*p.
Vector vec(const Matrix& u);

// Inverse of vec. Throws DimensionError when u.size() != n*p.
Matrix mat(const Vector& u, Index n, Index p);

// Spectral decomposition S = Q diag(lambda) Q^T with descending lambda.
SymEig sym_eig(const SymMatrix& s);

// Thin SVD for n >= p, computed from the spectral decomposition of A^T A.
// Singular directions below 1e-12 * sigma_max are treated as rank
// deficient and the corresponding left columns are completed by a
// deterministic orthonormal extension.
ThinSvd thin_svd(const Matrix& a);

Matrix kron(const Matrix& a, const Matrix& b);

SvecVector svec(const SymMatrix& s);

// Throws DimensionError when the length is not a triangular number.
SymMatrix smat(const SvecVector& v);

}  // namespace stiefel
