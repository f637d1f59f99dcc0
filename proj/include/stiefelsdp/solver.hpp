#pragma once

#include <optional>
#include <vector>

#include "stiefelsdp/conic.hpp"

// First-order conic solver. Operator splitting alternates a projection
// onto the affine subspace {A x = b} (one sparse quasi-definite
// factorization per program) with a projection onto the cone product
// (one eigendecomposition per PSD block and iteration), with
// over-relaxation and adaptive penalty rescaling. Ruiz equilibration is
// applied to the data up front and undone on the reported solution.
//
// A solve is single threaded and deterministic: identical program and
// settings give an identical iterate sequence regardless of concurrent
// load.

namespace stiefel {

struct SolverSettings {
  double eps_primal = 1e-9;
  double eps_dual = 1e-9;
  double eps_gap = 1e-9;
  long max_iters = 200000;
  double over_relaxation = 1.6;  // in (1, 2)
  bool adaptive_penalty = true;
  std::optional<double> time_limit_seconds;

  // Tuning knobs; the defaults are fine for every program built here.
  double rho0 = 1.0;
  long check_interval = 25;
  int ruiz_iters = 10;
  bool verbose = false;  // residual trace on stderr
};

enum class SolveStatus {
  optimal,
  max_iters,
  primal_infeasible,
  dual_infeasible,
  time_limit,
};

std::string to_string(SolveStatus s);

struct ConicSolution {
  // Primal cone point (svec per PSD block), equality multipliers, and
  // dual cone point, all in the original problem scaling.
  std::vector<Vector> primal;
  Vector eq_dual;
  std::vector<Vector> cone_dual;

  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double r_primal = 0.0;
  double r_dual = 0.0;
  double gap = 0.0;

  SolveStatus status = SolveStatus::max_iters;
  long iterations = 0;
  double wall_time_seconds = 0.0;
};

struct KktResiduals {
  double r_primal = 0.0;
  double r_dual = 0.0;
  double gap = 0.0;
};

// Validates the program shape, then iterates until the KKT residuals
// meet the tolerances (status optimal), a divergence certificate fires
// (status primal/dual infeasible), or the budget runs out.
ConicSolution solve(const ConicProgram& prog, const SolverSettings& settings = {});

// Recomputes the three KKT residuals of a candidate solution from the
// program data alone, in norms independent of variable ordering. The
// same formulas drive the solver's termination test.
KktResiduals kkt_residuals(const ConicProgram& prog, const ConicSolution& sol);

}  // namespace stiefel
