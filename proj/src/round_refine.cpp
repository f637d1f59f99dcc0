#include "stiefelsdp/round_refine.hpp"

#include <cmath>

namespace stiefel {

namespace {

void validate_settings(const RefineSettings& s) {
  if (s.max_iters < 1 || s.grad_tolerance <= 0 || s.initial_step <= 0 ||
      s.armijo_constant <= 0)
    throw ParameterError("refine settings must be positive");
  if (!(s.backtracking_factor > 0 && s.backtracking_factor < 1))
    throw ParameterError("backtracking_factor must lie in (0, 1)");
}

double objective(const QpsInstance& inst, const Matrix& U) {
  const Vector u = vec(U);
  return u.dot(inst.H.mat() * u) + 2.0 * inst.g.dot(u);
}

}  // namespace

Matrix qr_retract(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  Matrix q = qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
  const Matrix r = qr.matrixQR().topRows(y.cols());
  for (Index j = 0; j < y.cols(); ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

StiefelPoint round_to_stiefel(const Vector& u, Index n, Index p) {
  const ThinSvd svd = thin_svd(mat(u, n, p));
  return {svd.u0 * svd.v0.transpose()};
}

double primal_value(const QpsInstance& inst, const StiefelPoint& point) {
  return eval_objective(inst, point.U);
}

Matrix riemannian_grad(const QpsInstance& inst, const StiefelPoint& point) {
  const Matrix& U = point.U;
  const Vector hu = inst.H.mat() * vec(U);
  const Matrix G = 2.0 * (mat(hu, inst.n, inst.p) + mat(inst.g, inst.n, inst.p));
  const Matrix utg = U.transpose() * G;
  return G - U * (0.5 * (utg + utg.transpose()));
}

RefineResult refine(const QpsInstance& inst, const StiefelPoint& start,
                    const RefineSettings& settings) {
  validate_settings(settings);
  RefineResult out;
  out.point = start;
  out.value = primal_value(inst, start);

  double step = settings.initial_step;
  for (long it = 0; it < settings.max_iters; ++it) {
    const Matrix grad = riemannian_grad(inst, {out.point.U});
    const double gnorm2 = grad.squaredNorm();
    if (std::sqrt(gnorm2) <= settings.grad_tolerance) {
      out.converged = true;
      break;
    }
    // Armijo backtracking along the retracted steepest-descent ray.
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Matrix cand = qr_retract(out.point.U - step * grad);
      const double val = objective(inst, cand);
      if (val <= out.value - settings.armijo_constant * step * gnorm2) {
        out.point.U = cand;
        out.value = val;
        step *= 2.0;  // optimistic growth, trimmed by the next search
        accepted = true;
        break;
      }
      step *= settings.backtracking_factor;
    }
    ++out.iterations;
    if (!accepted) break;  // step underflowed; current point is the answer
  }
  return out;
}

}  // namespace stiefel
