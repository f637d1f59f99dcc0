#include "stiefelsdp/linalg.hpp"

#include <cmath>
#include <string>

namespace stiefel {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2 = 0.7071067811865476;

}  // namespace

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("SymMatrix: input is " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + ", expected square");
  }
  m_ = 0.5 * (a + a.transpose());
  // Averaging in floating point can still differ across the diagonal when
  // the compiler reassociates; mirror the upper triangle to make the
  // symmetry exact.
  for (Index j = 0; j < m_.cols(); ++j)
    for (Index i = 0; i < j; ++i) m_(j, i) = m_(i, j);
}

SymMatrix SymMatrix::identity(Index order) {
  SymMatrix s(order);
  s.m_ = Matrix::Identity(order, order);
  return s;
}

Vector vec(const Matrix& u) {
  Vector out(u.size());
  Index k = 0;
  for (Index j = 0; j < u.cols(); ++j)
    for (Index i = 0; i < u.rows(); ++i) out(k++) = u(i, j);
  return out;
}

Matrix mat(const Vector& u, Index n, Index p) {
  if (u.size() != n * p) {
    throw DimensionError("mat: vector length " + std::to_string(u.size()) +
                         " does not equal n*p = " + std::to_string(n * p));
  }
  Matrix out(n, p);
  Index k = 0;
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i) out(i, j) = u(k++);
  return out;
}

SymEig sym_eig(const SymMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.mat());
  if (es.info() != Eigen::Success) {
    throw NumericalError("sym_eig: QL iteration failed to converge on order " +
                         std::to_string(s.order()) + " matrix");
  }
  const Index n = s.order();
  SymEig out;
  out.eigenvalues = Vector(n);
  out.eigenvectors = Matrix(n, n);
  // Eigen reports ascending order; flip to descending.
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = es.eigenvalues()(n - 1 - k);
    out.eigenvectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

ThinSvd thin_svd(const Matrix& a) {
  const Index n = a.rows(), p = a.cols();
  if (n < p) {
    throw DimensionError("thin_svd: need n >= p, got " + std::to_string(n) +
                         "x" + std::to_string(p));
  }
  SymEig ge = sym_eig(SymMatrix(Matrix(a.transpose() * a)));

  ThinSvd out;
  out.sigma = Vector(p);
  out.v0 = ge.eigenvectors;
  out.u0 = Matrix::Zero(n, p);
  for (Index k = 0; k < p; ++k)
    out.sigma(k) = std::sqrt(std::max(ge.eigenvalues(k), 0.0));

  const double sigma_max = p > 0 ? out.sigma(0) : 0.0;
  const double tol = 1e-12 * sigma_max;

  // Twice-repeated Gram-Schmidt against the columns built so far;
  // returns false when the direction collapses into their span.
  const auto orthonormalize = [&](Vector& cand, Index k) {
    for (int pass = 0; pass < 2; ++pass)
      for (Index c = 0; c < k; ++c)
        cand -= out.u0.col(c).dot(cand) * out.u0.col(c);
    const double norm = cand.norm();
    if (norm < 0.5) return false;
    cand /= norm;
    return true;
  };

  for (Index k = 0; k < p; ++k) {
    bool placed = false;
    if (out.sigma(k) > tol) {
      // For singular values within roundoff of zero the quotient drifts
      // off the unit sphere; re-orthonormalizing keeps the factor exact
      // and costs nothing in the reconstruction, which sees sigma * u.
      Vector cand = a * out.v0.col(k) / out.sigma(k);
      placed = orthonormalize(cand, k);
      if (placed) out.u0.col(k) = cand;
    } else {
      out.sigma(k) = 0.0;
    }
    if (!placed) {
      // Deficient direction: take the first coordinate axis that
      // survives against the current columns.
      for (Index e = 0; e < n && !placed; ++e) {
        Vector cand = Vector::Unit(n, e);
        placed = orthonormalize(cand, k);
        if (placed) out.u0.col(k) = cand;
      }
      if (!placed)
        throw NumericalError("thin_svd: orthonormal completion failed");
    }
  }

  // The Gram route computes tiny singular values to roughly the square
  // root of machine precision; one Rayleigh pass u^T A v restores them.
  const double refine_below = 1e-6 * sigma_max;
  for (Index k = 0; k < p; ++k) {
    if (out.sigma(k) >= refine_below && out.sigma(k) != 0.0) continue;
    const double upper = k == 0 ? sigma_max : out.sigma(k - 1);
    const double r = out.u0.col(k).dot(a * out.v0.col(k));
    out.sigma(k) = std::clamp(r, 0.0, upper);
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SvecVector svec(const SymMatrix& s) {
  const Index n = s.order();
  SvecVector out;
  out.order = n;
  out.entries = Vector(svec_len(n));
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) out.entries(k++) = kSqrt2 * s(i, j);
    out.entries(k++) = s(j, j);
  }
  return out;
}

SymMatrix smat(const SvecVector& v) {
  const Index n = v.order;
  if (v.entries.size() != svec_len(n)) {
    throw DimensionError("smat: entry count " +
                         std::to_string(v.entries.size()) +
                         " is not the triangular number for order " +
                         std::to_string(n));
  }
  SymMatrix s(n);
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    // Dividing by sqrt(2) undoes the svec scaling to within one ulp;
    // the diagonal round-trips bit for bit.
    for (Index i = 0; i < j; ++i) s.set(i, j, v.entries(k++) / kSqrt2);
    s.set(j, j, v.entries(k++));
  }
  return s;
}

}  // namespace stiefel
