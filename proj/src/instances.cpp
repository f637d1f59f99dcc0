#include "stiefelsdp/instances.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "stiefelsdp/rng.hpp"

namespace stiefel {

using nlohmann::json;

namespace {

void check_dims(Index n, Index p) {
  if (n < 1 || p < 1 || p > n) {
    throw ParameterError("instance dimensions need 1 <= p <= n, got n=" +
                         std::to_string(n) + " p=" + std::to_string(p));
  }
}

// Upper triangle (diagonal included) row by row, mirrored.
SymMatrix random_symmetric(Index order, RngStream& rng) {
  SymMatrix s(order);
  for (Index i = 0; i < order; ++i)
    for (Index j = i; j < order; ++j) s.set(i, j, rng.next_normal());
  return s;
}

Matrix random_matrix(Index rows, Index cols, RngStream& rng) {
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = rng.next_normal();
  return a;
}

Index uniform_m(Index n, RngStream& rng) {
  const Index lo = (n + 1) / 2;
  return static_cast<Index>(rng.next_int(lo, 2 * n));
}

}  // namespace

std::string to_string(ProblemClass c) {
  switch (c) {
    case ProblemClass::random: return "random";
    case ProblemClass::blockdiag: return "blockdiag";
    case ProblemClass::procrustes: return "procrustes";
    case ProblemClass::penrose: return "penrose";
  }
  throw ParameterError("unknown problem class");
}

ProblemClass problem_class_from_string(const std::string& s) {
  if (s == "random") return ProblemClass::random;
  if (s == "blockdiag") return ProblemClass::blockdiag;
  if (s == "procrustes") return ProblemClass::procrustes;
  if (s == "penrose") return ProblemClass::penrose;
  throw ParameterError("unknown problem class \"" + s + "\"");
}

QpsInstance gen_random(Index n, Index p, std::uint64_t seed) {
  check_dims(n, p);
  RngStream rng(RngStream::derive_key("random", n, p, seed));
  QpsInstance inst;
  inst.n = n;
  inst.p = p;
  inst.class_tag = ProblemClass::random;
  inst.seed = seed;
  inst.H = random_symmetric(n * p, rng);
  inst.g = Vector(n * p);
  for (Index i = 0; i < n * p; ++i) inst.g(i) = rng.next_normal();
  return inst;
}

QpsInstance gen_blockdiag(Index n, Index p, std::uint64_t seed) {
  check_dims(n, p);
  RngStream rng(RngStream::derive_key("blockdiag", n, p, seed));
  QpsInstance inst;
  inst.n = n;
  inst.p = p;
  inst.class_tag = ProblemClass::blockdiag;
  inst.seed = seed;
  inst.H = SymMatrix(n * p);
  for (Index blk = 0; blk < p; ++blk) {
    SymMatrix hjj = random_symmetric(n, rng);
    for (Index i = 0; i < n; ++i)
      for (Index j = i; j < n; ++j)
        inst.H.set(blk * n + i, blk * n + j, hjj(i, j));
  }
  inst.g = Vector::Zero(n * p);
  return inst;
}

QpsInstance gen_procrustes(Index n, Index p, std::uint64_t seed) {
  check_dims(n, p);
  RngStream rng(RngStream::derive_key("procrustes", n, p, seed));
  QpsInstance inst;
  inst.n = n;
  inst.p = p;
  inst.class_tag = ProblemClass::procrustes;
  inst.seed = seed;
  const Index m = uniform_m(n, rng);
  Matrix a = random_matrix(m, n, rng);
  Matrix b = random_matrix(m, p, rng);
  Matrix gram = a.transpose() * a;
  inst.H = SymMatrix(kron(Matrix::Identity(p, p), gram));
  inst.g = vec(Matrix(-a.transpose() * b));
  inst.A = std::move(a);
  inst.B = std::move(b);
  inst.m = m;
  return inst;
}

QpsInstance gen_penrose(Index n, Index p, std::uint64_t seed) {
  check_dims(n, p);
  RngStream rng(RngStream::derive_key("penrose", n, p, seed));
  QpsInstance inst;
  inst.n = n;
  inst.p = p;
  inst.class_tag = ProblemClass::penrose;
  inst.seed = seed;
  const Index m = uniform_m(n, rng);
  const Index q = uniform_m(n, rng);
  Matrix a = random_matrix(m, n, rng);
  Matrix b = random_matrix(m, q, rng);
  Matrix c = random_matrix(p, q, rng);
  Matrix gram = a.transpose() * a;
  Matrix cct = c * c.transpose();
  inst.H = SymMatrix(kron(cct, gram));
  inst.g = vec(Matrix(-a.transpose() * b * c.transpose()));
  inst.A = std::move(a);
  inst.B = std::move(b);
  inst.C = std::move(c);
  inst.m = m;
  inst.q = q;
  return inst;
}

QpsInstance generate(ProblemClass c, Index n, Index p, std::uint64_t seed) {
  switch (c) {
    case ProblemClass::random: return gen_random(n, p, seed);
    case ProblemClass::blockdiag: return gen_blockdiag(n, p, seed);
    case ProblemClass::procrustes: return gen_procrustes(n, p, seed);
    case ProblemClass::penrose: return gen_penrose(n, p, seed);
  }
  throw ParameterError("unknown problem class");
}

double eval_objective(const QpsInstance& inst, const Matrix& U) {
  if (U.rows() != inst.n || U.cols() != inst.p) {
    throw DimensionError("eval_objective: U is " + std::to_string(U.rows()) +
                         "x" + std::to_string(U.cols()));
  }
  const double feas =
      (U.transpose() * U - Matrix::Identity(inst.p, inst.p))
          .cwiseAbs()
          .maxCoeff();
  if (feas > 1e-8) {
    throw FeasibilityError(
        "eval_objective: U'U deviates from identity by " +
        std::to_string(feas));
  }
  const Vector u = vec(U);
  return u.dot(inst.H.mat() * u) + 2.0 * inst.g.dot(u);
}

namespace {

json matrix_to_json(const Matrix& a) {
  json data = json::array();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) data.push_back(a(i, j));
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", data}};
}

const json& require_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw ParseError(std::string("instance file: missing field \"") + name +
                     "\"");
  }
  return *it;
}

Matrix matrix_from_json(const json& j, const char* name) {
  const Index rows = require_field(j, "rows").get<Index>();
  const Index cols = require_field(j, "cols").get<Index>();
  const json& data = require_field(j, "data");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
    throw ParseError(std::string("instance file: field \"") + name +
                     "\" has wrong entry count");
  }
  Matrix a(rows, cols);
  Index k = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index j2 = 0; j2 < cols; ++j2) a(i, j2) = data[k++].get<double>();
  return a;
}

}  // namespace

void save_instance(const QpsInstance& inst, const std::string& path) {
  json j;
  j["schema_version"] = 1;
  j["class"] = to_string(inst.class_tag);
  j["n"] = inst.n;
  j["p"] = inst.p;
  j["seed"] = inst.seed;
  // Row-major full matrix; nlohmann prints shortest round-trip decimals,
  // so reload is bit exact.
  json h = json::array();
  const Index order = inst.H.order();
  for (Index i = 0; i < order; ++i)
    for (Index k = 0; k < order; ++k) h.push_back(inst.H(i, k));
  j["H"] = std::move(h);
  json g = json::array();
  for (Index i = 0; i < inst.g.size(); ++i) g.push_back(inst.g(i));
  j["g"] = std::move(g);
  if (inst.A || inst.B || inst.C) {
    json aux;
    if (inst.A) aux["A"] = matrix_to_json(*inst.A);
    if (inst.B) aux["B"] = matrix_to_json(*inst.B);
    if (inst.C) aux["C"] = matrix_to_json(*inst.C);
    if (inst.m) aux["m"] = *inst.m;
    if (inst.q) aux["q"] = *inst.q;
    j["aux"] = std::move(aux);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write to \"" + path + "\" failed");
}

QpsInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("instance file \"" + path + "\": " + e.what());
  }

  QpsInstance inst;
  try {
    inst.class_tag =
        problem_class_from_string(require_field(j, "class").get<std::string>());
    inst.n = require_field(j, "n").get<Index>();
    inst.p = require_field(j, "p").get<Index>();
    inst.seed = require_field(j, "seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance file: bad header field: ") +
                     e.what());
  }
  if (inst.n < 1 || inst.p < 1 || inst.p > inst.n) {
    throw ValidationError("instance file: need 1 <= p <= n, got n=" +
                          std::to_string(inst.n) + " p=" +
                          std::to_string(inst.p));
  }

  const Index order = inst.n * inst.p;
  const json& h = require_field(j, "H");
  if (!h.is_array() || static_cast<Index>(h.size()) != order * order) {
    throw ParseError("instance file: field \"H\" has wrong entry count");
  }
  Matrix hm(order, order);
  Index k = 0;
  for (Index i = 0; i < order; ++i)
    for (Index c = 0; c < order; ++c) hm(i, c) = h[k++].get<double>();
  const double asym = (hm - hm.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw ValidationError("instance file: field \"H\" asymmetric by " +
                          std::to_string(asym));
  }
  // Mirror instead of averaging so a symmetric file reloads bit exact.
  for (Index j2 = 0; j2 < order; ++j2)
    for (Index i = j2 + 1; i < order; ++i) hm(i, j2) = hm(j2, i);
  inst.H = SymMatrix(order);
  for (Index i = 0; i < order; ++i)
    for (Index j2 = i; j2 < order; ++j2) inst.H.set(i, j2, hm(i, j2));

  const json& g = require_field(j, "g");
  if (!g.is_array() || static_cast<Index>(g.size()) != order) {
    throw ParseError("instance file: field \"g\" has wrong entry count");
  }
  inst.g = Vector(order);
  for (Index i = 0; i < order; ++i) inst.g(i) = g[i].get<double>();

  if (j.contains("aux")) {
    const json& aux = j["aux"];
    if (aux.contains("A")) inst.A = matrix_from_json(aux["A"], "A");
    if (aux.contains("B")) inst.B = matrix_from_json(aux["B"], "B");
    if (aux.contains("C")) inst.C = matrix_from_json(aux["C"], "C");
    if (aux.contains("m")) inst.m = aux["m"].get<Index>();
    if (aux.contains("q")) inst.q = aux["q"].get<Index>();
  }
  return inst;
}

}  // namespace stiefel
