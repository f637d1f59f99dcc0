#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "stiefelsdp/linalg.hpp"

// Problem instances: minimize u^T H u + 2 g^T u over u = vec(U) with
// U in St(n,p). Four reproducible synthetic classes plus JSON
// persistence. Generation is a pure function of (class, n, p, seed).

namespace stiefel {

enum class ProblemClass { random, blockdiag, procrustes, penrose };

std::string to_string(ProblemClass c);
ProblemClass problem_class_from_string(const std::string& s);

struct QpsInstance {
  Index n = 0;
  Index p = 0;
  SymMatrix H;  // order n*p
  Vector g;     // length n*p
  ProblemClass class_tag = ProblemClass::random;
  std::uint64_t seed = 0;

  // Generator witnesses, kept so tests can evaluate the originating
  // least-squares objective directly.
  std::optional<Matrix> A;  // m x n
  std::optional<Matrix> B;  // m x p (procrustes) or m x q (penrose)
  std::optional<Matrix> C;  // p x q (penrose)
  std::optional<Index> m;
  std::optional<Index> q;
};

// H and g entries i.i.d. standard normal; H fills the upper triangle row
// by row and mirrors it.
QpsInstance gen_random(Index n, Index p, std::uint64_t seed);

// Block-diagonal H = Diag(H_11, ..., H_pp) with i.i.d. standard normal
// symmetric blocks; g = 0.
QpsInstance gen_blockdiag(Index n, Index p, std::uint64_t seed);

// Orthogonal Procrustes data: m uniform on [ceil(n/2), 2n], A (m x n)
// and B (m x p) standard normal, H = I_p kron (A^T A), g = vec(-A^T B).
// The constant ||B||_F^2 of the Frobenius objective is dropped.
QpsInstance gen_procrustes(Index n, Index p, std::uint64_t seed);

// Penrose regression data: m, q independent uniform on [ceil(n/2), 2n],
// A (m x n), B (m x q), C (p x q) standard normal,
// H = (C C^T) kron (A^T A), g = vec(-A^T B C^T).
QpsInstance gen_penrose(Index n, Index p, std::uint64_t seed);

QpsInstance generate(ProblemClass c, Index n, Index p, std::uint64_t seed);

// vec(U)^T H vec(U) + 2 g^T vec(U). U must have orthonormal columns to
// within 1e-8 in the max norm, otherwise FeasibilityError.
double eval_objective(const QpsInstance& inst, const Matrix& U);

void save_instance(const QpsInstance& inst, const std::string& path);
QpsInstance load_instance(const std::string& path);

}  // namespace stiefel
