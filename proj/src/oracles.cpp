#include "stiefelsdp/oracles.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace stiefel {

OracleResult procrustes_closed_form(const Matrix& a, const Matrix& b) {
  const Index n = a.cols();
  if (n != b.cols()) {
    throw ParameterError("procrustes_closed_form: square case needs n = p, got " +
                         std::to_string(n) + " and " + std::to_string(b.cols()));
  }
  if (a.rows() != b.rows())
    throw DimensionError("procrustes_closed_form: row counts differ");

  Eigen::JacobiSVD<Matrix> svd(a.transpose() * b,
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  OracleResult out;
  out.minimizer.U = svd.matrixU() * svd.matrixV().transpose();
  out.value = a.squaredNorm() - 2.0 * svd.singularValues().sum();
  out.method = "procrustes-svd";
  return out;
}

namespace {

// Squared norm of -(H - lambda I)^{-1} g restricted to the eigendirections
// with coefficient beta.
double shifted_norm2(const Vector& lam, const Vector& beta, double lambda) {
  double s = 0.0;
  for (Index i = 0; i < lam.size(); ++i) {
    const double d = lam(i) - lambda;
    s += (beta(i) / d) * (beta(i) / d);
  }
  return s;
}

}  // namespace

OracleResult trs_oracle(const SymMatrix& h, const Vector& g) {
  const Index n = h.order();
  if (g.size() != n) throw DimensionError("trs_oracle: length mismatch");

  const SymEig eig = sym_eig(h);  // descending
  // Work in ascending order; the bottom of the spectrum drives the solution.
  Vector lam(n), beta(n);
  Matrix q(n, n);
  for (Index i = 0; i < n; ++i) {
    lam(i) = eig.eigenvalues(n - 1 - i);
    q.col(i) = eig.eigenvectors.col(n - 1 - i);
  }
  beta = q.transpose() * g;
  const double lam_min = lam(0);
  const double gscale = beta.cwiseAbs().maxCoeff();

  OracleResult out;
  out.method = "trs-secular";

  // Coefficients on the bottom eigenspace below 1e-12 of the gradient
  // scale count as zero; that space is then free for the hard case.
  const double tol = 1e-12 * std::max(1.0, gscale);
  std::vector<Index> active;
  bool bottom_coupled = false;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(beta(i)) > tol) {
      active.push_back(i);
      if (lam(i) - lam_min <= 1e-12 * std::max(1.0, std::abs(lam_min)))
        bottom_coupled = true;
    }
  }

  Vector lam_a(active.size()), beta_a(active.size());
  for (size_t k = 0; k < active.size(); ++k) {
    lam_a(k) = lam(active[k]);
    beta_a(k) = beta(active[k]);
  }

  // Norm of the pseudo-solution at lambda = lam_min over the coupled
  // directions; infinite when the bottom eigenspace is coupled.
  double boundary_norm2 = std::numeric_limits<double>::infinity();
  if (!bottom_coupled)
    boundary_norm2 =
        active.empty() ? 0.0 : shifted_norm2(lam_a, beta_a, lam_min);

  Vector u(n);
  if (boundary_norm2 <= 1.0) {
    // Hard case (g = 0 falls out here too): combine the pseudo-solution
    // with enough of the bottom eigenvector to reach the sphere.
    Vector w = Vector::Zero(n);
    for (size_t k = 0; k < active.size(); ++k)
      w -= (beta_a(k) / (lam_a(k) - lam_min)) * q.col(active[k]);
    const double tau = std::sqrt(std::max(0.0, 1.0 - w.squaredNorm()));
    u = w + tau * q.col(0);
  } else {
    // Secular equation: find lambda < lam_min with ||u(lambda)|| = 1.
    // phi(lambda) = 1 - 1/||u(lambda)|| is increasing and brackets zero.
    const double norm_beta = std::sqrt(beta_a.squaredNorm());
    double lo = lam_min - norm_beta - 1.0;  // ||u|| < 1 here
    while (shifted_norm2(lam_a, beta_a, lo) >= 1.0) lo = lam_min - 2 * (lam_min - lo);
    double hi = lam_min - 1e-300;
    // Bisection start from a point with ||u|| > 1 just below lam_min.
    {
      double step = std::max(1e-12, 1e-12 * std::abs(lam_min));
      hi = lam_min - step;
      while (shifted_norm2(lam_a, beta_a, hi) <= 1.0) {
        hi = lam_min - step * 0.5;
        step *= 0.5;
        if (step < 1e-300) break;
      }
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (shifted_norm2(lam_a, beta_a, mid) < 1.0)
        lo = mid;
      else
        hi = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    u = Vector::Zero(n);
    for (size_t k = 0; k < active.size(); ++k)
      u -= (beta_a(k) / (lam_a(k) - lambda)) * q.col(active[k]);
    // Tiny renormalization absorbs the last bisection gap.
    u /= u.norm();
  }

  out.minimizer.U = u;
  out.value = u.dot(h.mat() * u) + 2.0 * g.dot(u);
  return out;
}

}  // namespace stiefel
