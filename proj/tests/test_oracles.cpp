#include <doctest.h>

#include "stiefelsdp/oracles.hpp"
#include "stiefelsdp/relax.hpp"
#include "stiefelsdp/rng.hpp"

using namespace stiefel;

namespace {

Matrix random_matrix(Index n, Index p, RngStream& rng) {
  Matrix a(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) a(i, j) = rng.next_normal();
  return a;
}

Vector random_unit(Index n, RngStream& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.next_normal();
  return v / v.norm();
}

}  // namespace

TEST_CASE("procrustes closed form on exact-fit data") {
  const Matrix id = Matrix::Identity(3, 3);
  const OracleResult res = procrustes_closed_form(id, id);
  CHECK((res.minimizer.U - id).cwiseAbs().maxCoeff() <= 1e-12);
  // Fit error ||A U - B||^2 is the value plus ||B||^2.
  CHECK(res.value + id.squaredNorm() == doctest::Approx(0.0).epsilon(1e-12));

  RngStream rng(81);
  const Matrix a = random_matrix(5, 4, rng);
  const Matrix q = qr_retract(random_matrix(4, 4, rng));
  const OracleResult fit = procrustes_closed_form(a, Matrix(a * q));
  CHECK(std::abs(fit.value + (a * q).squaredNorm()) <= 1e-8);
  CHECK((fit.minimizer.U - q).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("procrustes closed form dominates random sampling") {
  RngStream rng(82);
  for (int t = 0; t < 5; ++t) {
    const Matrix a = random_matrix(4, 4, rng), b = random_matrix(4, 4, rng);
    const OracleResult res = procrustes_closed_form(a, b);
    CHECK((res.minimizer.U.transpose() * res.minimizer.U -
           Matrix::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    for (int s = 0; s < 1000; ++s) {
      const Matrix u = qr_retract(random_matrix(4, 4, rng));
      const double val = (a * u - b).squaredNorm() - b.squaredNorm();
      CHECK(res.value <= val + 1e-9);
    }
  }
}

TEST_CASE("procrustes closed form rejects rectangular input") {
  CHECK_THROWS_AS(procrustes_closed_form(Matrix::Zero(4, 3), Matrix::Zero(4, 2)),
                  ParameterError);
}

TEST_CASE("trs oracle, zero linear term") {
  RngStream rng(83);
  Matrix r = random_matrix(6, 6, rng);
  const SymMatrix h(Matrix(r + r.transpose()));
  const OracleResult res = trs_oracle(h, Vector::Zero(6));
  const SymEig eig = sym_eig(h);
  CHECK(res.value == doctest::Approx(eig.eigenvalues(5)).epsilon(1e-10));
  CHECK(std::abs(res.minimizer.U.norm() - 1.0) <= 1e-10);
  const Vector hu = h.mat() * res.minimizer.U.col(0);
  CHECK((hu - eig.eigenvalues(5) * res.minimizer.U.col(0))
            .cwiseAbs()
            .maxCoeff() <= 1e-8);
}

TEST_CASE("trs oracle, zero quadratic term") {
  RngStream rng(84);
  Vector g(5);
  for (Index i = 0; i < 5; ++i) g(i) = rng.next_normal();
  const OracleResult res = trs_oracle(SymMatrix(5), g);
  CHECK(res.value == doctest::Approx(-2.0 * g.norm()).epsilon(1e-12));
  CHECK((res.minimizer.U.col(0) + g / g.norm()).cwiseAbs().maxCoeff() <=
        1e-10);
}

TEST_CASE("trs oracle hard case") {
  // g orthogonal to the bottom eigenspace and small enough that the
  // pseudo-solution stays inside the sphere.
  SymMatrix h(3);
  h.set(0, 0, -2.0);
  h.set(1, 1, 1.0);
  h.set(2, 2, 3.0);
  Vector g(3);
  g << 0.0, 0.3, 0.1;
  const OracleResult res = trs_oracle(h, g);
  CHECK(std::abs(res.minimizer.U.norm() - 1.0) <= 1e-10);
  // Global condition: H - lambda I psd with (H - lambda I) u = -g holds
  // at lambda = lambda_min in the hard case.
  const Vector resid =
      h.mat() * res.minimizer.U.col(0) + 2.0 * res.minimizer.U.col(0) + g;
  CHECK(resid.cwiseAbs().maxCoeff() <= 1e-9);

  RngStream rng(85);
  for (int s = 0; s < 2000; ++s) {
    const Vector u = random_unit(3, rng);
    CHECK(res.value <= u.dot(h.mat() * u) + 2.0 * g.dot(u) + 1e-9);
  }
}

TEST_CASE("trs oracle dominates sampling and the shor bound") {
  SolverSettings st;
  st.eps_primal = st.eps_dual = st.eps_gap = 1e-9;
  RngStream rng(86);
  for (int t = 0; t < 3; ++t) {
    const QpsInstance inst = gen_random(8, 1, 870 + t);
    const OracleResult res = trs_oracle(inst.H, inst.g);
    CHECK(std::abs(res.minimizer.U.norm() - 1.0) <= 1e-10);
    CHECK(res.value ==
          doctest::Approx(eval_objective(inst, res.minimizer.U)).epsilon(1e-10));
    for (int s = 0; s < 10000; ++s) {
      const Vector u = random_unit(8, rng);
      CHECK(res.value <= u.dot(inst.H.mat() * u) + 2.0 * inst.g.dot(u) + 1e-9);
    }
    const ConicSolution shor = solve(build_shor(inst), st);
    REQUIRE(shor.status == SolveStatus::optimal);
    CHECK(res.value >= shor.primal_objective - 1e-6);
  }
}
