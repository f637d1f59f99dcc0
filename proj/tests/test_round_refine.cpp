#include <doctest.h>

#include "stiefelsdp/oracles.hpp"
#include "stiefelsdp/rng.hpp"
#include "stiefelsdp/round_refine.hpp"

using namespace stiefel;

namespace {

Matrix random_stiefel(Index n, Index p, RngStream& rng) {
  Matrix a(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) a(i, j) = rng.next_normal();
  return qr_retract(a);
}

double orth_err(const Matrix& u) {
  return (u.transpose() * u - Matrix::Identity(u.cols(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

TEST_CASE("rounding fixes feasible points and ignores positive scaling") {
  RngStream rng(61);
  const Matrix u = random_stiefel(6, 3, rng);
  const StiefelPoint r1 = round_to_stiefel(vec(u), 6, 3);
  CHECK((r1.U - u).cwiseAbs().maxCoeff() <= 1e-12);
  const StiefelPoint r2 = round_to_stiefel(2.0 * vec(u), 6, 3);
  CHECK((r2.U - u).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("rounding always returns an orthonormal factor") {
  RngStream rng(62);
  for (int t = 0; t < 100; ++t) {
    const Index n = 2 + t % 7;
    const Index p = 1 + t % n;
    Vector u(n * p);
    for (Index k = 0; k < u.size(); ++k) u(k) = rng.next_normal();
    if (t % 5 == 0) u *= 1e-9;  // nearly rank-deficient after mat()
    CHECK(orth_err(round_to_stiefel(u, n, p).U) <= 1e-10);
  }
  // Hard zero.
  CHECK(orth_err(round_to_stiefel(Vector::Zero(8), 4, 2).U) <= 1e-10);
}

TEST_CASE("riemannian gradient vanishes for the constant objective") {
  QpsInstance inst;
  inst.n = 5;
  inst.p = 2;
  inst.H = SymMatrix::identity(10);
  inst.g = Vector::Zero(10);
  RngStream rng(63);
  const StiefelPoint u{random_stiefel(5, 2, rng)};
  CHECK(riemannian_grad(inst, u).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("riemannian gradient is tangent") {
  RngStream rng(64);
  for (int t = 0; t < 20; ++t) {
    const QpsInstance inst = gen_random(5, 3, 700 + t);
    const StiefelPoint u{random_stiefel(5, 3, rng)};
    const Matrix g = riemannian_grad(inst, u);
    const Matrix skew = u.U.transpose() * g + g.transpose() * u.U;
    CHECK(skew.cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("riemannian gradient matches finite differences") {
  RngStream rng(65);
  for (int t = 0; t < 20; ++t) {
    const QpsInstance inst = gen_random(4, 2, 800 + t);
    const Matrix u = random_stiefel(4, 2, rng);
    const Matrix grad = riemannian_grad(inst, {u});

    // Random tangent direction.
    Matrix d(4, 2);
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 2; ++j) d(i, j) = rng.next_normal();
    const Matrix utd = u.transpose() * d;
    const Matrix tang = d - u * (0.5 * (utd + utd.transpose()));

    const double h = 1e-5;
    const double fp = eval_objective(inst, qr_retract(u + h * tang));
    const double fm = eval_objective(inst, qr_retract(u - h * tang));
    const double fd = (fp - fm) / (2 * h);
    const double an = (grad.array() * tang.array()).sum();
    CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("refine is monotone and stays feasible") {
  RngStream rng(66);
  const QpsInstance inst = gen_random(5, 2, 67);
  const StiefelPoint start{random_stiefel(5, 2, rng)};
  const double v0 = primal_value(inst, start);

  double prev = v0;
  for (long iters = 1; iters <= 10; ++iters) {
    RefineSettings st;
    st.max_iters = iters;
    const RefineResult res = refine(inst, start, st);
    CHECK(res.value <= prev + 1e-12);
    CHECK(orth_err(res.point.U) <= 1e-10);
    prev = res.value;
  }
  const RefineResult full = refine(inst, start);
  CHECK(full.value <= v0 + 1e-12);
}

TEST_CASE("refine keeps a stationary start") {
  QpsInstance inst;
  inst.n = 4;
  inst.p = 2;
  inst.H = SymMatrix::identity(8);
  inst.g = Vector::Zero(8);
  RngStream rng(68);
  const StiefelPoint start{random_stiefel(4, 2, rng)};
  const RefineResult res = refine(inst, start);
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.point.U == start.U);
}

TEST_CASE("refine reaches the procrustes optimum from a nearby start") {
  RngStream rng(69);
  for (int t = 0; t < 5; ++t) {
    const QpsInstance inst = gen_procrustes(4, 4, 900 + t);
    const OracleResult oracle = procrustes_closed_form(*inst.A, *inst.B);

    Matrix noise(4, 4);
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) noise(i, j) = 0.05 * rng.next_normal();
    const StiefelPoint start{qr_retract(oracle.minimizer.U + noise)};
    const RefineResult res = refine(inst, start);
    CHECK(std::abs(res.value - oracle.value) <=
          1e-6 * std::max(1.0, std::abs(oracle.value)));
  }
}

TEST_CASE("primal_value matches eval_objective") {
  RngStream rng(70);
  const QpsInstance inst = gen_procrustes(6, 2, 71);
  const StiefelPoint u{random_stiefel(6, 2, rng)};
  CHECK(primal_value(inst, u) == eval_objective(inst, u.U));
}

TEST_CASE("refine settings validation") {
  const QpsInstance inst = gen_random(3, 1, 72);
  const StiefelPoint start{round_to_stiefel(inst.g, 3, 1).U};
  RefineSettings bad;
  bad.backtracking_factor = 1.5;
  CHECK_THROWS_AS(refine(inst, start, bad), ParameterError);
  bad = RefineSettings{};
  bad.max_iters = 0;
  CHECK_THROWS_AS(refine(inst, start, bad), ParameterError);
}
