#pragma once

#include "stiefelsdp/instances.hpp"

// Turning relaxation solutions into feasible points: project the u part
// onto St(n,p) through a thin SVD, then polish with Riemannian gradient
// descent (QR retraction, Armijo backtracking). The descent never
// increases the objective and every iterate stays on the manifold.

namespace stiefel {

struct StiefelPoint {
  Matrix U;  // n x p, ||U^T U - I||_max <= 1e-10
};

struct RefineSettings {
  long max_iters = 500;
  double grad_tolerance = 1e-8;
  double initial_step = 1.0;
  double backtracking_factor = 0.5;  // in (0, 1)
  double armijo_constant = 1e-4;
};

struct RefineResult {
  StiefelPoint point;
  double value = 0.0;
  long iterations = 0;
  bool converged = false;  // gradient norm reached the tolerance
};

// Nearest-in-angle Stiefel point U0 V0^T of mat(u). Rank-deficient
// directions are completed deterministically instead of failing.
StiefelPoint round_to_stiefel(const Vector& u, Index n, Index p);

// Objective value at a feasible point; same contract as eval_objective.
double primal_value(const QpsInstance& inst, const StiefelPoint& point);

// Tangent-space projection of the Euclidean gradient
// G = 2 (mat(H u) + mat(g)): grad = G - U sym(U^T G).
Matrix riemannian_grad(const QpsInstance& inst, const StiefelPoint& point);

RefineResult refine(const QpsInstance& inst, const StiefelPoint& start,
                    const RefineSettings& settings = {});

// QR retraction with positive R diagonal; exposed for tests.
Matrix qr_retract(const Matrix& y);

}  // namespace stiefel
