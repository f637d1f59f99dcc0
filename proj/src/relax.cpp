#include "stiefelsdp/relax.hpp"

#include <fstream>
#include <map>
#include <utility>

#include <nlohmann/json.hpp>

namespace stiefel {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

// Coefficient per svec slot for a unit weight on symmetric-matrix entry
// (a, b): off-diagonal slots store sqrt(2) times the entry.
double slot_scale(Index a, Index b) { return a == b ? 1.0 : kInvSqrt2; }

// Enumerates the nonzero positions of the linear part of M(u, X).
// Every contribution has unit weight and is reported as
// f(R, C, q1, q2): position (R, C) of M picks up the Y entry (q1, q2),
// where q1 == 0 marks a u term (variable Y(0, q2)) and q1 >= 1 an X
// term (variable Y(q1, q2) = [X_jk]_il). Mirrored positions are both
// emitted, matching the symmetry of the term matrices.
template <typename F>
void for_each_m_term(Index n, Index p, F&& f) {
  const Index N = n + p;
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Index q = 1 + j * n + i;
      const Index nz[2][2] = {{p + i, j}, {j, p + i}};
      // I kron K_ji and K_ji kron I.
      for (const auto& ab : nz) {
        for (Index t = 0; t < N; ++t) {
          f(t * N + ab[0], t * N + ab[1], Index{0}, q);
          f(ab[0] * N + t, ab[1] * N + t, Index{0}, q);
        }
      }
      // K_ji kron K_kl against [X_jk]_il.
      for (Index k = 0; k < p; ++k) {
        for (Index l = 0; l < n; ++l) {
          const Index q2 = 1 + k * n + l;
          const Index nz2[2][2] = {{p + l, k}, {k, p + l}};
          for (const auto& ab : nz) {
            for (const auto& cd : nz2) {
              f(ab[0] * N + cd[0], ab[1] * N + cd[1], q, q2);
            }
          }
        }
      }
    }
  }
}

// Incrementally assembled equality system over the program's blocks.
class SystemBuilder {
 public:
  explicit SystemBuilder(std::vector<ConeBlock> blocks)
      : blocks_(std::move(blocks)) {
    offsets_.resize(blocks_.size() + 1, 0);
    for (size_t k = 0; k < blocks_.size(); ++k)
      offsets_[k + 1] = offsets_[k] + blocks_[k].dim();
  }

  Index new_row(double rhs) {
    rows_.emplace_back();
    rhs_.push_back(rhs);
    return static_cast<Index>(rows_.size()) - 1;
  }

  // Adds a coefficient on svec slot (a, b) of a PSD block, expressed per
  // matrix entry.
  void add_entry(Index row, size_t block, Index a, Index b, double w) {
    if (a > b) std::swap(a, b);
    rows_[row][offsets_[block] + svec_index(a, b)] += w * slot_scale(a, b);
  }

  ConicProgram finalize(Vector objective) const {
    ConicProgram prog;
    prog.blocks = blocks_;
    prog.objective = std::move(objective);
    prog.eq_rhs = Eigen::Map<const Vector>(rhs_.data(), rhs_.size());
    std::vector<Eigen::Triplet<double>> trips;
    size_t nnz = 0;
    for (const auto& r : rows_) nnz += r.size();
    trips.reserve(nnz);
    for (size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [col, w] : rows_[r])
        trips.emplace_back(static_cast<int>(r), static_cast<int>(col), w);
    prog.eq_matrix.resize(static_cast<Index>(rows_.size()), offsets_.back());
    prog.eq_matrix.setFromTriplets(trips.begin(), trips.end());
    prog.eq_matrix.makeCompressed();
    return prog;
  }

 private:
  std::vector<ConeBlock> blocks_;
  std::vector<Index> offsets_;
  std::vector<std::map<Index, double>> rows_;
  std::vector<double> rhs_;
};

// Objective svec over the Y block: the bordered matrix [[0, g^T],[g, H]]
// has trace inner product H . X + 2 g^T u with Y.
Vector shor_objective(const QpsInstance& inst) {
  const Index np = inst.n * inst.p;
  SymMatrix cy(1 + np);
  for (Index q = 0; q < np; ++q) cy.set(0, 1 + q, inst.g(q));
  for (Index a = 0; a < np; ++a)
    for (Index b = a; b < np; ++b) cy.set(1 + a, 1 + b, inst.H(a, b));
  return svec(cy).entries;
}

// Y(0,0) = 1, unit diagonal-block traces, zero off-block traces.
void add_shor_rows(SystemBuilder& sys, size_t y_block, Index n, Index p) {
  Index r = sys.new_row(1.0);
  sys.add_entry(r, y_block, 0, 0, 1.0);
  for (Index j = 0; j < p; ++j) {
    r = sys.new_row(1.0);
    for (Index i = 0; i < n; ++i) {
      const Index d = 1 + j * n + i;
      sys.add_entry(r, y_block, d, d, 1.0);
    }
  }
  // tr(X_jk) = 0 deduplicated to j < k; the mirror block shares the trace.
  for (Index j = 0; j < p; ++j) {
    for (Index k = j + 1; k < p; ++k) {
      r = sys.new_row(0.0);
      for (Index i = 0; i < n; ++i)
        sys.add_entry(r, y_block, 1 + j * n + i, 1 + k * n + i, 1.0);
    }
  }
}

// S + sum_j X_jj = I_n, one row per upper-triangle entry.
void add_diagsum_rows(SystemBuilder& sys, size_t y_block, size_t s_block,
                      Index n, Index p) {
  for (Index b = 0; b < n; ++b) {
    for (Index a = 0; a <= b; ++a) {
      const Index r = sys.new_row(a == b ? 1.0 : 0.0);
      sys.add_entry(r, s_block, a, b, 1.0);
      for (Index j = 0; j < p; ++j)
        sys.add_entry(r, y_block, 1 + j * n + a, 1 + j * n + b, 1.0);
    }
  }
}

}  // namespace

LiftedPoint make_lifted(const Vector& u, const SymMatrix& x, Index n,
                        Index p) {
  const Index np = n * p;
  if (u.size() != np || x.order() != np) {
    throw DimensionError("make_lifted: u length " + std::to_string(u.size()) +
                         ", X order " + std::to_string(x.order()) +
                         " incompatible with n*p = " + std::to_string(np));
  }
  LiftedPoint pt;
  pt.n = n;
  pt.p = p;
  pt.u = u;
  pt.X = x;
  pt.Y = SymMatrix(1 + np);
  pt.Y.set(0, 0, 1.0);
  for (Index q = 0; q < np; ++q) pt.Y.set(0, 1 + q, u(q));
  for (Index a = 0; a < np; ++a)
    for (Index b = a; b < np; ++b) pt.Y.set(1 + a, 1 + b, x(a, b));
  return pt;
}

LiftedPoint lift_rank1(const Matrix& U) {
  const Vector u = vec(U);
  SymMatrix x(u.size());
  for (Index a = 0; a < u.size(); ++a)
    for (Index b = a; b < u.size(); ++b) x.set(a, b, u(a) * u(b));
  return make_lifted(u, x, U.rows(), U.cols());
}

KjiMatrix k_matrix(Index j, Index i, Index n, Index p) {
  if (j < 0 || j >= p || i < 0 || i >= n) {
    throw ParameterError("k_matrix: index (j=" + std::to_string(j) +
                         ", i=" + std::to_string(i) + ") out of range for (" +
                         std::to_string(n) + ", " + std::to_string(p) + ")");
  }
  KjiMatrix k;
  k.j = j;
  k.i = i;
  k.matrix = SymMatrix(p + n);
  k.matrix.set(p + i, j, 1.0);
  return k;
}

SymMatrix assemble_M(const Vector& u, const SymMatrix& x, Index n, Index p) {
  const Index np = n * p;
  if (u.size() != np || x.order() != np) {
    throw DimensionError("assemble_M: inconsistent dimensions");
  }
  const Index order = (n + p) * (n + p);
  Matrix full = Matrix::Identity(order, order);
  for_each_m_term(n, p, [&](Index r, Index c, Index q1, Index q2) {
    full(r, c) += q1 == 0 ? u(q2 - 1) : x(q1 - 1, q2 - 1);
  });
  SymMatrix out(order);
  for (Index a = 0; a < order; ++a)
    for (Index b = a; b < order; ++b) out.set(a, b, full(a, b));
  return out;
}

ConicProgram build_shor(const QpsInstance& inst) {
  const Index n = inst.n, p = inst.p;
  SystemBuilder sys({{BlockKind::psd, 1 + n * p, "Y"}});
  add_shor_rows(sys, 0, n, p);
  return sys.finalize(shor_objective(inst));
}

ConicProgram build_diagsum(const QpsInstance& inst) {
  const Index n = inst.n, p = inst.p;
  SystemBuilder sys({{BlockKind::psd, 1 + n * p, "Y"},
                     {BlockKind::psd, n, "slack_diagsum"}});
  add_shor_rows(sys, 0, n, p);
  add_diagsum_rows(sys, 0, 1, n, p);
  Vector c = Vector::Zero(svec_len(1 + n * p) + svec_len(n));
  c.head(svec_len(1 + n * p)) = shor_objective(inst);
  return sys.finalize(std::move(c));
}

ConicProgram build_kron(const QpsInstance& inst) {
  const Index n = inst.n, p = inst.p;
  const Index order = (n + p) * (n + p);
  SystemBuilder sys({{BlockKind::psd, 1 + n * p, "Y"},
                     {BlockKind::psd, n, "slack_diagsum"},
                     {BlockKind::psd, order, "M"}});
  add_shor_rows(sys, 0, n, p);
  add_diagsum_rows(sys, 0, 1, n, p);

  // One row per upper-triangle position of M; collect the coefficient
  // structure in a single pass over the term expansion.
  std::vector<Index> row_of(svec_len(order));
  for (Index c = 0; c < order; ++c) {
    for (Index r = 0; r <= c; ++r) {
      const Index row = sys.new_row(r == c ? 1.0 : 0.0);
      row_of[svec_index(r, c)] = row;
      sys.add_entry(row, 2, r, c, 1.0);
    }
  }
  for_each_m_term(n, p, [&](Index r, Index c, Index q1, Index q2) {
    if (r > c) return;
    sys.add_entry(row_of[svec_index(r, c)], 0, q1, q2, -1.0);
  });

  Vector c = Vector::Zero(svec_len(1 + n * p) + svec_len(n) + svec_len(order));
  c.head(svec_len(1 + n * p)) = shor_objective(inst);
  return sys.finalize(std::move(c));
}

ConicProgram build_hadamard(const QpsInstance& inst) {
  const Index n = inst.n, p = inst.p;
  const Index order = n + p;
  SystemBuilder sys({{BlockKind::psd, 1 + n * p, "Y"},
                     {BlockKind::psd, n, "slack_diagsum"},
                     {BlockKind::psd, order, "hadamard"}});
  add_shor_rows(sys, 0, n, p);
  add_diagsum_rows(sys, 0, 1, n, p);

  // Pin the block to [[I_p, W^T], [W, I_n]] with W_ij = [X_jj]_ii.
  for (Index b = 0; b < order; ++b) {
    for (Index a = 0; a <= b; ++a) {
      const Index row = sys.new_row(a == b ? 1.0 : 0.0);
      sys.add_entry(row, 2, a, b, 1.0);
      if (a < p && b >= p) {
        const Index d = 1 + a * n + (b - p);
        sys.add_entry(row, 0, d, d, -1.0);
      }
    }
  }

  Vector c = Vector::Zero(svec_len(1 + n * p) + svec_len(n) + svec_len(order));
  c.head(svec_len(1 + n * p)) = shor_objective(inst);
  return sys.finalize(std::move(c));
}

LiftedPoint extract_lifted(const ConicProgram& prog, const ConicSolution& sol,
                           Index n, Index p) {
  if (sol.status != SolveStatus::optimal) {
    throw NumericalError("extract_lifted: solver status " +
                         to_string(sol.status));
  }
  const size_t yb = prog.block_index("Y");
  const ConeBlock& blk = prog.blocks[yb];
  if (blk.order != 1 + n * p) {
    throw DimensionError("extract_lifted: Y block order " +
                         std::to_string(blk.order) + " does not match n, p");
  }
  SymMatrix y = smat(SvecVector{blk.order, sol.primal[yb]});
  LiftedPoint pt;
  pt.n = n;
  pt.p = p;
  pt.Y = y;
  pt.u = Vector(n * p);
  for (Index q = 0; q < n * p; ++q) pt.u(q) = y(1 + q, 0);
  pt.X = SymMatrix(n * p);
  for (Index a = 0; a < n * p; ++a)
    for (Index b = a; b < n * p; ++b) pt.X.set(a, b, y(1 + a, 1 + b));
  return pt;
}

size_t ConicProgram::block_index(std::string_view label) const {
  for (size_t k = 0; k < blocks.size(); ++k)
    if (blocks[k].label == label) return k;
  throw ParameterError("no block labeled \"" + std::string(label) + "\"");
}

void dump_program(const ConicProgram& prog, const std::string& path) {
  nlohmann::json j;
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : prog.blocks) {
    j["blocks"].push_back(
        {{"kind", b.kind == BlockKind::psd ? "psd" : "free"},
         {"order", b.order},
         {"label", b.label}});
  }
  nlohmann::json rows = nlohmann::json::array(),
                 cols = nlohmann::json::array(),
                 vals = nlohmann::json::array();
  for (int k = 0; k < prog.eq_matrix.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(prog.eq_matrix, k); it;
         ++it) {
      rows.push_back(it.row());
      cols.push_back(it.col());
      vals.push_back(it.value());
    }
  }
  j["eq_matrix"] = {{"rows", prog.eq_matrix.rows()},
                    {"cols", prog.eq_matrix.cols()},
                    {"entries", {{"row", std::move(rows)},
                                 {"col", std::move(cols)},
                                 {"value", std::move(vals)}}}};
  j["eq_rhs"] = std::vector<double>(prog.eq_rhs.data(),
                                    prog.eq_rhs.data() + prog.eq_rhs.size());
  j["objective"] = std::vector<double>(
      prog.objective.data(), prog.objective.data() + prog.objective.size());
  std::ofstream out(path);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << j.dump(1) << '\n';
}

}  // namespace stiefel
