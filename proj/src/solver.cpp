#include "stiefelsdp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <limits>

namespace stiefel {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kKktReg = 1e-7;

double inf_norm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

void validate_settings(const SolverSettings& s) {
  if (s.eps_primal <= 0 || s.eps_dual <= 0 || s.eps_gap <= 0)
    throw ParameterError("solver tolerances must be positive");
  if (s.max_iters < 1) throw ParameterError("max_iters must be >= 1");
  if (!(s.over_relaxation > 1.0 && s.over_relaxation < 2.0))
    throw ParameterError("over_relaxation must lie in (1, 2)");
  if (s.rho0 <= 0) throw ParameterError("rho0 must be positive");
  if (s.check_interval < 1) throw ParameterError("check_interval must be >= 1");
}

void validate_program(const ConicProgram& prog) {
  if (prog.blocks.empty()) throw ValidationError("program has no blocks");
  for (const auto& b : prog.blocks) {
    if (b.order < 1)
      throw ValidationError("block \"" + b.label + "\" has order " +
                            std::to_string(b.order));
  }
  const Index n = prog.num_vars();
  if (prog.objective.size() != n)
    throw ValidationError("objective length " +
                          std::to_string(prog.objective.size()) +
                          " does not match variable count " +
                          std::to_string(n));
  if (prog.eq_matrix.cols() != n)
    throw ValidationError("equality matrix has " +
                          std::to_string(prog.eq_matrix.cols()) +
                          " columns for " + std::to_string(n) + " variables");
  if (prog.eq_matrix.rows() != prog.eq_rhs.size())
    throw ValidationError("equality rhs length does not match row count");
  if (!prog.eq_rhs.allFinite() || !prog.objective.allFinite())
    throw ValidationError("program data contains non-finite entries");
  for (int k = 0; k < prog.eq_matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(prog.eq_matrix, k); it;
         ++it)
      if (!std::isfinite(it.value()))
        throw ValidationError("equality matrix contains non-finite entries");
}

// Scratch for one PSD block projection.
struct BlockWork {
  Matrix s;
  Matrix w;
  Eigen::SelfAdjointEigenSolver<Matrix> es;

  explicit BlockWork(Index order)
      : s(order, order), w(order, order), es(order) {}
};

void smat_into(const double* src, Matrix& s) {
  const Index n = s.rows();
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double v = kInvSqrt2 * src[k++];
      s(i, j) = v;
      s(j, i) = v;
    }
    s(j, j) = src[k++];
  }
}

void svec_from(const Matrix& s, double* dst) {
  const Index n = s.rows();
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) dst[k++] = kSqrt2 * s(i, j);
    dst[k++] = s(j, j);
  }
}

// Projection of an svec segment onto the PSD cone: clip negative
// eigenvalues. Rebuilds from whichever side of the spectrum is smaller.
void project_psd(BlockWork& bw, const double* src, double* dst) {
  const Index n = bw.s.rows();
  smat_into(src, bw.s);
  bw.es.compute(bw.s);
  if (bw.es.info() != Eigen::Success)
    throw NumericalError("psd projection: eigendecomposition failed");
  const Vector& lam = bw.es.eigenvalues();  // ascending
  Index pos0 = 0;
  while (pos0 < n && lam(pos0) <= 0.0) ++pos0;
  const Index npos = n - pos0;
  if (npos == 0) {
    std::fill(dst, dst + svec_len(n), 0.0);
    return;
  }
  if (pos0 == 0) {
    if (dst != src) std::copy(src, src + svec_len(n), dst);
    return;
  }
  if (npos <= n - npos) {
    bw.w.resize(n, npos);
    for (Index c = 0; c < npos; ++c)
      bw.w.col(c) = bw.es.eigenvectors().col(pos0 + c) *
                    std::sqrt(lam(pos0 + c));
    bw.s.setZero();
    bw.s.selfadjointView<Eigen::Lower>().rankUpdate(bw.w);
    bw.s.triangularView<Eigen::StrictlyUpper>() =
        bw.s.transpose().triangularView<Eigen::StrictlyUpper>();
  } else {
    bw.w.resize(n, pos0);
    for (Index c = 0; c < pos0; ++c)
      bw.w.col(c) = bw.es.eigenvectors().col(c) * std::sqrt(-lam(c));
    // s still holds the input; adding W W^T cancels its negative part.
    bw.s.selfadjointView<Eigen::Lower>().rankUpdate(bw.w);
    bw.s.triangularView<Eigen::StrictlyUpper>() =
        bw.s.transpose().triangularView<Eigen::StrictlyUpper>();
  }
  svec_from(bw.s, dst);
}

struct Residuals {
  double r_primal, r_dual, gap, pobj, dobj;
};

// Shared between the termination test and kkt_residuals: everything in
// the original scaling and in max norms with relative denominators.
Residuals compute_residuals(const ConicProgram& prog, const Vector& z,
                            const Vector& nu, const Vector& s) {
  Residuals res;
  Vector az = prog.eq_matrix * z;
  res.pobj = prog.objective.dot(z);
  res.dobj = -prog.eq_rhs.dot(nu);
  const double pr = inf_norm(az - prog.eq_rhs);
  res.r_primal = pr / (1.0 + std::max(inf_norm(az), inf_norm(prog.eq_rhs)));
  Vector atnu = prog.eq_matrix.transpose() * nu;
  const double dr = inf_norm(prog.objective + atnu - s);
  res.r_dual = dr / (1.0 + std::max({inf_norm(prog.objective), inf_norm(atnu),
                                     inf_norm(s)}));
  res.gap = std::abs(res.pobj - res.dobj) /
            (1.0 + std::max(std::abs(res.pobj), std::abs(res.dobj)));
  return res;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::primal_infeasible: return "primal_infeasible";
    case SolveStatus::dual_infeasible: return "dual_infeasible";
    case SolveStatus::time_limit: return "time_limit";
  }
  return "unknown";
}

KktResiduals kkt_residuals(const ConicProgram& prog, const ConicSolution& sol) {
  const auto off = prog.offsets();
  const Index n = prog.num_vars();
  if (sol.primal.size() != prog.blocks.size() ||
      sol.cone_dual.size() != prog.blocks.size())
    throw DimensionError("kkt_residuals: block count mismatch");
  Vector z(n), s(n);
  for (size_t k = 0; k < prog.blocks.size(); ++k) {
    if (sol.primal[k].size() != prog.blocks[k].dim() ||
        sol.cone_dual[k].size() != prog.blocks[k].dim())
      throw DimensionError("kkt_residuals: block dimension mismatch");
    z.segment(off[k], prog.blocks[k].dim()) = sol.primal[k];
    s.segment(off[k], prog.blocks[k].dim()) = sol.cone_dual[k];
  }
  if (sol.eq_dual.size() != prog.eq_rhs.size())
    throw DimensionError("kkt_residuals: multiplier length mismatch");
  const Residuals r = compute_residuals(prog, z, sol.eq_dual, s);
  return {r.r_primal, r.r_dual, r.gap};
}

ConicSolution solve(const ConicProgram& prog, const SolverSettings& settings) {
  const auto t_start = std::chrono::steady_clock::now();
  validate_settings(settings);
  validate_program(prog);

  const Index nvar = prog.num_vars();
  const Index mrow = prog.eq_matrix.rows();
  const auto off = prog.offsets();

  // --- Equilibration ------------------------------------------------
  // Ruiz passes on A with per-row scaling and per-block column scaling
  // (a PSD block must be scaled by a single scalar to stay a cone).
  Eigen::SparseMatrix<double> a = prog.eq_matrix;
  Vector row_scale = Vector::Ones(mrow);
  Vector col_scale = Vector::Ones(nvar);
  for (int pass = 0; pass < settings.ruiz_iters; ++pass) {
    Vector rmax = Vector::Zero(mrow), cmax = Vector::Zero(nvar);
    for (int k = 0; k < a.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
        const double v = std::abs(it.value());
        rmax(it.row()) = std::max(rmax(it.row()), v);
        cmax(it.col()) = std::max(cmax(it.col()), v);
      }
    }
    Vector rdiv(mrow), cdiv(nvar);
    for (Index i = 0; i < mrow; ++i)
      rdiv(i) = rmax(i) > 0 ? 1.0 / std::sqrt(rmax(i)) : 1.0;
    for (size_t kb = 0; kb < prog.blocks.size(); ++kb) {
      const Index d = prog.blocks[kb].dim();
      if (prog.blocks[kb].kind == BlockKind::psd) {
        const double m = cmax.segment(off[kb], d).maxCoeff();
        const double f = m > 0 ? 1.0 / std::sqrt(m) : 1.0;
        cdiv.segment(off[kb], d).setConstant(f);
      } else {
        for (Index i = 0; i < d; ++i) {
          const double m = cmax(off[kb] + i);
          cdiv(off[kb] + i) = m > 0 ? 1.0 / std::sqrt(m) : 1.0;
        }
      }
    }
    for (int k = 0; k < a.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
        it.valueRef() *= rdiv(it.row()) * cdiv(it.col());
    row_scale.array() *= rdiv.array();
    col_scale.array() *= cdiv.array();
  }
  Vector b = row_scale.asDiagonal() * prog.eq_rhs;
  Vector c = col_scale.asDiagonal() * prog.objective;
  const double sigma_p = 1.0 / std::max(1.0, inf_norm(b));
  const double sigma_d = 1.0 / std::max(1.0, inf_norm(c));
  b *= sigma_p;
  c *= sigma_d;

  // --- KKT factorization --------------------------------------------
  // [ I   A^T ] [x ]   [w]
  // [ A  -dI  ] [mu] = [b], followed by refinement against d = 0.
  Eigen::SparseMatrix<double> kkt(nvar + mrow, nvar + mrow);
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(nvar + mrow + 2 * a.nonZeros());
    for (Index i = 0; i < nvar; ++i) trips.emplace_back(i, i, 1.0);
    for (Index i = 0; i < mrow; ++i)
      trips.emplace_back(nvar + i, nvar + i, -kKktReg);
    for (int k = 0; k < a.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
        trips.emplace_back(nvar + it.row(), it.col(), it.value());
        trips.emplace_back(it.col(), nvar + it.row(), it.value());
      }
    }
    kkt.setFromTriplets(trips.begin(), trips.end());
    kkt.makeCompressed();
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(kkt);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("KKT factorization failed");

  std::vector<BlockWork> work;
  work.reserve(prog.blocks.size());
  for (const auto& blk : prog.blocks)
    work.emplace_back(blk.kind == BlockKind::psd ? blk.order : 1);

  auto project_cone = [&](const Vector& src, Vector& dst) {
    for (size_t k = 0; k < prog.blocks.size(); ++k) {
      const Index d = prog.blocks[k].dim();
      if (prog.blocks[k].kind == BlockKind::psd)
        project_psd(work[k], src.data() + off[k], dst.data() + off[k]);
      else
        dst.segment(off[k], d) = src.segment(off[k], d);
    }
  };

  // Unscaled candidate from scaled iterates.
  auto unscale_primal = [&](const Vector& zs) -> Vector {
    return (col_scale.asDiagonal() * zs) / sigma_p;
  };
  auto unscale_eq_dual = [&](const Vector& mus) -> Vector {
    return (row_scale.asDiagonal() * mus) / sigma_d;
  };
  auto unscale_cone_dual = [&](const Vector& ss) -> Vector {
    return (ss.array() / col_scale.array()).matrix() / sigma_d;
  };

  ConicSolution sol;
  auto fill_solution = [&](const Vector& zu, const Vector& nuu,
                           const Vector& su, const Residuals& res) {
    sol.primal.clear();
    sol.cone_dual.clear();
    for (size_t k = 0; k < prog.blocks.size(); ++k) {
      sol.primal.push_back(zu.segment(off[k], prog.blocks[k].dim()));
      sol.cone_dual.push_back(su.segment(off[k], prog.blocks[k].dim()));
    }
    sol.eq_dual = nuu;
    sol.primal_objective = res.pobj;
    sol.dual_objective = res.dobj;
    sol.r_primal = res.r_primal;
    sol.r_dual = res.r_dual;
    sol.gap = res.gap;
  };

  // --- Main loop ------------------------------------------------------
  Vector z = Vector::Zero(nvar), y = Vector::Zero(nvar);
  Vector w(nvar), x(nvar), xhat(nvar), v(nvar), znew(nvar);
  Vector mu = Vector::Zero(mrow);
  Vector rhs(nvar + mrow), kvec(nvar + mrow), resid(nvar + mrow);
  double rho = settings.rho0;
  const double alpha = settings.over_relaxation;

  Vector nu_prev, z_prev;
  bool have_prev = false;

  auto affine_project = [&](const Vector& win) {
    rhs.head(nvar) = win;
    rhs.tail(mrow) = b;
    kvec = ldlt.solve(rhs);
    // One refinement step against the unregularized system.
    resid.head(nvar) =
        win - kvec.head(nvar) - a.transpose() * kvec.tail(mrow);
    resid.tail(mrow) = b - a * kvec.head(nvar);
    kvec += ldlt.solve(resid);
    x = kvec.head(nvar);
    mu = kvec.tail(mrow);
  };

  long iter = 0;
  for (; iter < settings.max_iters; ++iter) {
    w = z - (y + c) / rho;
    affine_project(w);
    xhat = alpha * x + (1.0 - alpha) * z;
    v = xhat + y / rho;
    project_cone(v, znew);
    y += rho * (xhat - znew);
    z.swap(znew);

    if ((iter + 1) % settings.check_interval != 0) continue;

    const Vector zu = unscale_primal(z);
    const Vector nuu = unscale_eq_dual((rho * mu).eval());
    const Vector su = unscale_cone_dual((-y).eval());
    const Residuals res = compute_residuals(prog, zu, nuu, su);

    if (settings.verbose) {
      std::fprintf(stderr,
                   "%8ld  rp %9.2e  rd %9.2e  gap %9.2e  obj %+.9e  rho %.2e\n",
                   iter + 1, res.r_primal, res.r_dual, res.gap, res.pobj, rho);
    }

    if (res.r_primal <= settings.eps_primal && res.r_dual <= settings.eps_dual &&
        res.gap <= settings.eps_gap) {
      fill_solution(zu, nuu, su, res);
      sol.status = SolveStatus::optimal;
      sol.iterations = iter + 1;
      sol.wall_time_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        t_start)
              .count();
      return sol;
    }

    // Divergence certificates. A drifting multiplier direction that is
    // (approximately) a Farkas certificate ends the solve.
    if (have_prev) {
      Vector dnu = nuu - nu_prev;
      const double ndnu = dnu.norm();
      if (ndnu > 1e-9 * (1.0 + nuu.norm()) &&
          res.r_primal > 100.0 * settings.eps_primal) {
        Vector cand = dnu / ndnu;
        if (prog.eq_rhs.dot(cand) < 0) cand = -cand;
        if (prog.eq_rhs.dot(cand) > 1e-7) {
          Vector t = -(prog.eq_matrix.transpose() * cand);
          Vector tproj(nvar);
          project_cone(t, tproj);
          for (size_t k = 0; k < prog.blocks.size(); ++k)
            if (prog.blocks[k].kind == BlockKind::free_vars)
              tproj.segment(off[k], prog.blocks[k].dim()).setZero();
          if (inf_norm(t - tproj) <= 1e-7 * std::max(1.0, inf_norm(t))) {
            fill_solution(zu, nuu, su, res);
            sol.status = SolveStatus::primal_infeasible;
            sol.iterations = iter + 1;
            sol.wall_time_seconds = std::chrono::duration<double>(
                                        std::chrono::steady_clock::now() -
                                        t_start)
                                        .count();
            return sol;
          }
        }
      }
      Vector dz = zu - z_prev;
      const double ndz = dz.norm();
      if (ndz > 1e-9 * (1.0 + zu.norm()) &&
          res.gap > 100.0 * settings.eps_gap) {
        for (double sign : {1.0, -1.0}) {
          Vector cand = sign * dz / ndz;
          if (prog.objective.dot(cand) > -1e-7) continue;
          Vector candproj(nvar);
          project_cone(cand, candproj);
          if (inf_norm(cand - candproj) > 1e-7) continue;
          if (inf_norm(prog.eq_matrix * cand) > 1e-7) continue;
          fill_solution(zu, nuu, su, res);
          sol.status = SolveStatus::dual_infeasible;
          sol.iterations = iter + 1;
          sol.wall_time_seconds = std::chrono::duration<double>(
                                      std::chrono::steady_clock::now() -
                                      t_start)
                                      .count();
          return sol;
        }
      }
      nu_prev = nuu;
      z_prev = zu;
    } else {
      nu_prev = nuu;
      z_prev = zu;
      have_prev = true;
    }

    if (settings.adaptive_penalty) {
      const double f =
          std::sqrt(std::max(res.r_primal, 1e-16) / std::max(res.r_dual, 1e-16));
      if (f > 2.0 || f < 0.5) {
        rho = std::clamp(rho * std::clamp(f, 0.1, 10.0), 1e-6, 1e6);
      }
    }

    if (settings.time_limit_seconds) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        t_start)
              .count();
      if (elapsed > *settings.time_limit_seconds) {
        fill_solution(zu, nuu, su, res);
        sol.status = SolveStatus::time_limit;
        sol.iterations = iter + 1;
        sol.wall_time_seconds = elapsed;
        return sol;
      }
    }
  }

  const Vector zu = unscale_primal(z);
  const Vector nuu = unscale_eq_dual((rho * mu).eval());
  const Vector su = unscale_cone_dual((-y).eval());
  fill_solution(zu, nuu, su, compute_residuals(prog, zu, nuu, su));
  sol.status = SolveStatus::max_iters;
  sol.iterations = iter;
  sol.wall_time_seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t_start)
                              .count();
  return sol;
}

}  // namespace stiefel
