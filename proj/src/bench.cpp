#include "stiefelsdp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "stiefelsdp/rng.hpp"
#include "stiefelsdp/toml.hpp"

namespace stiefel {

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

double parse_double(const std::string& s, const char* field) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(std::string("results file: bad ") + field + " \"" + s +
                     "\"");
  return v;
}

long parse_long(const std::string& s, const char* field) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(std::string("results file: bad ") + field + " \"" + s +
                     "\"");
  return v;
}

SolveStatus status_from_string(const std::string& s) {
  for (SolveStatus st :
       {SolveStatus::optimal, SolveStatus::max_iters,
        SolveStatus::primal_infeasible, SolveStatus::dual_infeasible,
        SolveStatus::time_limit})
    if (to_string(st) == s) return st;
  throw ParseError("results file: unknown status \"" + s + "\"");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

constexpr Relaxation kAllRelaxations[] = {Relaxation::shor, Relaxation::diagsum,
                                          Relaxation::hadamard,
                                          Relaxation::kron};

}  // namespace

std::string to_string(Relaxation r) {
  switch (r) {
    case Relaxation::shor: return "shor";
    case Relaxation::diagsum: return "diagsum";
    case Relaxation::hadamard: return "hadamard";
    case Relaxation::kron: return "kron";
  }
  throw ParameterError("unknown relaxation");
}

Relaxation relaxation_from_string(const std::string& s) {
  for (Relaxation r : kAllRelaxations)
    if (to_string(r) == s) return r;
  throw ParameterError("unknown relaxation \"" + s + "\"");
}

ConicProgram build_relaxation(const QpsInstance& inst, Relaxation r) {
  switch (r) {
    case Relaxation::shor: return build_shor(inst);
    case Relaxation::diagsum: return build_diagsum(inst);
    case Relaxation::hadamard: return build_hadamard(inst);
    case Relaxation::kron: return build_kron(inst);
  }
  throw ParameterError("unknown relaxation");
}

double relative_gap(double p_val, double d_val) {
  return (p_val - d_val) / std::max(1.0, std::abs(0.5 * (p_val + d_val)));
}

std::uint64_t instance_seed(std::uint64_t base_seed, ProblemClass cls, Index n,
                            Index p, int index) {
  return base_seed ^ RngStream::derive_key(to_string(cls), n, p,
                                           static_cast<std::uint64_t>(index));
}

std::vector<BenchRecord> run_instance(const QpsInstance& inst,
                                      const BenchConfig& config,
                                      const std::string& id) {
  std::vector<BenchRecord> out;
  for (Relaxation r : config.relaxations) {
    const auto t0 = std::chrono::steady_clock::now();
    BenchRecord rec;
    rec.id = id;
    rec.cls = inst.class_tag;
    rec.n = inst.n;
    rec.p = inst.p;
    rec.seed = inst.seed;
    rec.relaxation = r;

    const ConicProgram prog = build_relaxation(inst, r);
    const ConicSolution sol = solve(prog, config.solver);
    rec.d = sol.primal_objective;
    rec.t_solve = sol.wall_time_seconds;
    rec.iterations = sol.iterations;
    rec.status = sol.status;

    if (sol.status == SolveStatus::optimal) {
      const LiftedPoint lifted = extract_lifted(prog, sol, inst.n, inst.p);
      const StiefelPoint rounded = round_to_stiefel(lifted.u, inst.n, inst.p);
      rec.p_raw = primal_value(inst, rounded);
      const RefineResult refined = refine(inst, rounded, config.refine);
      rec.p_refined = refined.value;
      rec.gamma_valid = true;
      const double scale =
          std::max({1.0, std::abs(rec.p_refined), std::abs(rec.d)});
      if (rec.p_refined < rec.d - 1e-6 * scale) {
        rec.anomaly = true;
        rec.gamma = 0.0;
      } else {
        rec.gamma = relative_gap(rec.p_refined, rec.d);
      }
      rec.solved = rec.gamma < kSolvedThreshold;
    }
    rec.t_total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    out.push_back(std::move(rec));
  }
  return out;
}

// --- results file ----------------------------------------------------

const char* const kCsvHeader =
    "id,class,n,p,seed,relaxation,d,p_raw,p_refined,gamma,solved,t_total,"
    "t_solve,iterations,status";

std::string format_record(const BenchRecord& r) {
  std::string line = r.id;
  line += ',';
  line += to_string(r.cls);
  line += ',';
  line += std::to_string(r.n);
  line += ',';
  line += std::to_string(r.p);
  line += ',';
  line += std::to_string(r.seed);
  line += ',';
  line += to_string(r.relaxation);
  line += ',';
  line += shortest(r.d);
  line += ',';
  if (r.gamma_valid) {
    line += shortest(r.p_raw);
    line += ',';
    line += shortest(r.p_refined);
    line += ',';
    line += shortest(r.gamma);
  } else {
    line += ",,";
  }
  line += ',';
  line += r.solved ? '1' : '0';
  line += ',';
  line += shortest(r.t_total);
  line += ',';
  line += shortest(r.t_solve);
  line += ',';
  line += std::to_string(r.iterations);
  line += ',';
  line += to_string(r.status);
  return line;
}

namespace {

std::optional<BenchRecord> parse_record_line(const std::string& line) {
  const auto f = split_csv(line);
  if (f.size() != 15) return std::nullopt;
  BenchRecord r;
  try {
    r.id = f[0];
    r.cls = problem_class_from_string(f[1]);
    r.n = parse_long(f[2], "n");
    r.p = parse_long(f[3], "p");
    r.seed = static_cast<std::uint64_t>(
        std::stoull(f[4]));
    r.relaxation = relaxation_from_string(f[5]);
    r.d = parse_double(f[6], "d");
    if (!f[7].empty() && !f[8].empty() && !f[9].empty()) {
      r.p_raw = parse_double(f[7], "p_raw");
      r.p_refined = parse_double(f[8], "p_refined");
      r.gamma = parse_double(f[9], "gamma");
      r.gamma_valid = true;
      const double scale = std::max({1.0, std::abs(r.p_refined), std::abs(r.d)});
      r.anomaly = r.p_refined < r.d - 1e-6 * scale;
    }
    r.solved = f[10] == "1";
    r.t_total = parse_double(f[11], "t_total");
    r.t_solve = parse_double(f[12], "t_solve");
    r.iterations = parse_long(f[13], "iterations");
    r.status = status_from_string(f[14]);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return r;
}

}  // namespace

std::vector<BenchRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results file \"" + path + "\"");
  std::string line;
  if (!std::getline(in, line)) return {};
  if (line != kCsvHeader)
    throw ParseError("results file \"" + path + "\": unexpected header");
  std::vector<BenchRecord> out;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto rec = parse_record_line(line);
    if (!rec)
      throw ParseError("results file \"" + path + "\" line " +
                       std::to_string(lineno) + ": malformed record");
    out.push_back(std::move(*rec));
  }
  return out;
}

// --- config ----------------------------------------------------------

BenchConfig load_bench_config(const std::string& path) {
  const toml::Table tab = toml::parse_file(path);
  BenchConfig cfg;
  cfg.relaxations.clear();

  const std::set<std::string> known = {
      "pairs", "classes", "instances_per_cell", "base_seed", "relaxations",
      "workers", "out",
      "solver.eps_primal", "solver.eps_dual", "solver.eps_gap",
      "solver.max_iters", "solver.over_relaxation", "solver.adaptive_penalty",
      "solver.time_limit_seconds", "solver.rho0", "solver.check_interval",
      "solver.ruiz_iters",
      "refine.max_iters", "refine.grad_tolerance", "refine.initial_step",
      "refine.backtracking_factor", "refine.armijo_constant"};
  for (const auto& [key, value] : tab) {
    if (!known.count(key))
      throw ParseError("config: unknown key \"" + key + "\"");
  }
  const auto get = [&](const char* key) -> const toml::Value* {
    auto it = tab.find(key);
    return it == tab.end() ? nullptr : &it->second;
  };

  if (const auto* v = get("pairs")) {
    for (const auto& pair : v->as_array()) {
      const auto& a = pair.as_array();
      if (a.size() != 2) throw ParseError("config: pairs entries need [n, p]");
      cfg.pairs.emplace_back(a[0].as_int(), a[1].as_int());
    }
  }
  if (const auto* v = get("classes")) {
    for (const auto& c : v->as_array())
      cfg.classes.push_back(problem_class_from_string(c.as_string()));
  }
  if (const auto* v = get("instances_per_cell"))
    cfg.instances_per_cell = static_cast<int>(v->as_int());
  if (const auto* v = get("base_seed"))
    cfg.base_seed = static_cast<std::uint64_t>(v->as_int());
  if (const auto* v = get("relaxations")) {
    for (const auto& r : v->as_array())
      cfg.relaxations.push_back(relaxation_from_string(r.as_string()));
  } else {
    cfg.relaxations = {Relaxation::shor, Relaxation::diagsum, Relaxation::kron};
  }
  if (const auto* v = get("workers")) cfg.workers = static_cast<int>(v->as_int());
  if (const auto* v = get("out")) cfg.out_path = v->as_string();

  if (const auto* v = get("solver.eps_primal")) cfg.solver.eps_primal = v->as_double();
  if (const auto* v = get("solver.eps_dual")) cfg.solver.eps_dual = v->as_double();
  if (const auto* v = get("solver.eps_gap")) cfg.solver.eps_gap = v->as_double();
  if (const auto* v = get("solver.max_iters")) cfg.solver.max_iters = v->as_int();
  if (const auto* v = get("solver.over_relaxation"))
    cfg.solver.over_relaxation = v->as_double();
  if (const auto* v = get("solver.adaptive_penalty"))
    cfg.solver.adaptive_penalty = v->as_bool();
  if (const auto* v = get("solver.time_limit_seconds")) {
    const double t = v->as_double();
    if (t > 0) cfg.solver.time_limit_seconds = t;
  }
  if (const auto* v = get("solver.rho0")) cfg.solver.rho0 = v->as_double();
  if (const auto* v = get("solver.check_interval"))
    cfg.solver.check_interval = v->as_int();
  if (const auto* v = get("solver.ruiz_iters"))
    cfg.solver.ruiz_iters = static_cast<int>(v->as_int());

  if (const auto* v = get("refine.max_iters")) cfg.refine.max_iters = v->as_int();
  if (const auto* v = get("refine.grad_tolerance"))
    cfg.refine.grad_tolerance = v->as_double();
  if (const auto* v = get("refine.initial_step"))
    cfg.refine.initial_step = v->as_double();
  if (const auto* v = get("refine.backtracking_factor"))
    cfg.refine.backtracking_factor = v->as_double();
  if (const auto* v = get("refine.armijo_constant"))
    cfg.refine.armijo_constant = v->as_double();

  if (cfg.pairs.empty()) throw ParameterError("config: pairs is empty");
  for (auto [n, p] : cfg.pairs)
    if (n < 1 || p < 1 || p > n)
      throw ParameterError("config: pair (" + std::to_string(n) + ", " +
                           std::to_string(p) + ") needs 1 <= p <= n");
  if (cfg.classes.empty()) throw ParameterError("config: classes is empty");
  if (cfg.instances_per_cell < 1)
    throw ParameterError("config: instances_per_cell must be >= 1");
  if (cfg.relaxations.empty())
    throw ParameterError("config: relaxations is empty");
  std::set<Relaxation> uniq(cfg.relaxations.begin(), cfg.relaxations.end());
  if (uniq.size() != cfg.relaxations.size())
    throw ParameterError("config: duplicate relaxations");
  return cfg;
}

// --- suite -----------------------------------------------------------

namespace {

struct Task {
  ProblemClass cls;
  Index n, p;
  int index;
  std::string id;
  std::uint64_t seed;
};

std::vector<Task> make_tasks(const BenchConfig& cfg) {
  std::vector<Task> tasks;
  for (const auto& [n, p] : cfg.pairs) {
    for (ProblemClass cls : cfg.classes) {
      for (int i = 0; i < cfg.instances_per_cell; ++i) {
        Task t;
        t.cls = cls;
        t.n = n;
        t.p = p;
        t.index = i;
        t.id = to_string(cls) + "-n" + std::to_string(n) + "-p" +
               std::to_string(p) + "-" + std::to_string(i);
        t.seed = instance_seed(cfg.base_seed, cls, n, p, i);
        tasks.push_back(std::move(t));
      }
    }
  }
  return tasks;
}

}  // namespace

std::vector<BenchRecord> run_suite(const BenchConfig& config, bool resume,
                                   const ProgressFn& progress) {
  const std::vector<Task> tasks = make_tasks(config);

  // Rows carried over from a previous partial run, keyed by
  // (id, relaxation). Unparseable trailing lines are ignored.
  std::map<std::string, std::string> old_rows;
  if (resume && std::filesystem::exists(config.out_path)) {
    std::ifstream in(config.out_path);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (first) {
        first = false;
        if (line != kCsvHeader) break;
        continue;
      }
      const auto rec = parse_record_line(line);
      if (rec) old_rows[rec->id + "," + to_string(rec->relaxation)] = line;
    }
  }
  auto task_cached = [&](const Task& t) {
    for (Relaxation r : config.relaxations)
      if (!old_rows.count(t.id + "," + to_string(r))) return false;
    return true;
  };

  const std::string write_path =
      resume ? config.out_path + ".tmp" : config.out_path;
  std::ofstream out(write_path, std::ios::trunc);
  if (!out) throw IoError("cannot open \"" + write_path + "\" for writing");
  out << kCsvHeader << '\n';

  const size_t ntasks = tasks.size();
  std::vector<std::optional<std::vector<BenchRecord>>> done(ntasks);

  // Pre-fill cached tasks.
  for (size_t i = 0; i < ntasks; ++i) {
    if (!task_cached(tasks[i])) continue;
    std::vector<BenchRecord> recs;
    for (Relaxation r : config.relaxations) {
      auto parsed =
          parse_record_line(old_rows.at(tasks[i].id + "," + to_string(r)));
      recs.push_back(std::move(*parsed));
    }
    done[i] = std::move(recs);
  }

  unsigned workers = config.workers > 0
                         ? static_cast<unsigned>(config.workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(ntasks));

  std::mutex mu;
  std::condition_variable cv;
  std::atomic<size_t> next{0};
  std::exception_ptr failure;

  auto worker_fn = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= ntasks) return;
      if (done[i].has_value()) {  // cached; nothing to compute
        cv.notify_all();
        continue;
      }
      try {
        const Task& t = tasks[i];
        const QpsInstance inst = generate(t.cls, t.n, t.p, t.seed);
        auto recs = run_instance(inst, config, t.id);
        {
          std::lock_guard<std::mutex> lock(mu);
          done[i] = std::move(recs);
        }
        cv.notify_all();
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        cv.notify_all();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  if (workers > 1) {
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker_fn);
  }

  std::vector<BenchRecord> all;
  all.reserve(ntasks * config.relaxations.size());
  for (size_t i = 0; i < ntasks; ++i) {
    if (workers <= 1) {
      if (!done[i].has_value()) {
        const Task& t = tasks[i];
        const QpsInstance inst = generate(t.cls, t.n, t.p, t.seed);
        done[i] = run_instance(inst, config, t.id);
      }
    } else {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return done[i].has_value() || failure; });
      if (failure) break;
    }
    for (const auto& rec : *done[i]) {
      out << format_record(rec) << '\n';
      all.push_back(rec);
    }
    out.flush();
    if (progress) progress(i + 1, ntasks);
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  if (!out) throw IoError("write to \"" + write_path + "\" failed");
  out.close();

  if (resume) {
    std::error_code ec;
    std::filesystem::rename(write_path, config.out_path, ec);
    if (ec)
      throw IoError("cannot move \"" + write_path + "\" over \"" +
                    config.out_path + "\": " + ec.message());
  }
  return all;
}

// --- reporting -------------------------------------------------------

ReportMode report_mode_from_string(const std::string& s) {
  if (s == "timing-table") return ReportMode::timing_table;
  if (s == "gap-histogram") return ReportMode::gap_histogram;
  if (s == "summary") return ReportMode::summary;
  throw ParameterError("unknown report mode \"" + s + "\"");
}

HistogramSpec gap_histogram(const std::vector<BenchRecord>& records) {
  HistogramSpec spec;
  spec.edges.resize(31);
  for (int k = 0; k <= 30; ++k)
    spec.edges[k] = std::pow(10.0, -4.0 + 5.0 * k / 30.0);
  for (const auto& rec : records) {
    auto& counts = spec.counts[rec.relaxation];
    if (counts.empty()) counts.assign(33, 0);
    size_t bucket;
    if (!rec.gamma_valid) {
      bucket = 32;
    } else if (rec.gamma < kSolvedThreshold) {
      bucket = 0;
    } else if (rec.gamma >= spec.edges[30]) {
      bucket = 31;
    } else {
      bucket = 1 + static_cast<size_t>(
                       std::upper_bound(spec.edges.begin(), spec.edges.end(),
                                        rec.gamma) -
                       spec.edges.begin() - 1);
      bucket = std::min<size_t>(bucket, 30);
    }
    ++counts[bucket];
  }
  return spec;
}

namespace {

std::string bucket_label(const HistogramSpec& spec, size_t b) {
  if (b == 0) return "solved";
  if (b == 31) return "overflow";
  if (b == 32) return "failed";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e..%.3e", spec.edges[b - 1],
                spec.edges[b]);
  return buf;
}

std::vector<Relaxation> present_relaxations(
    const std::vector<BenchRecord>& records) {
  std::vector<Relaxation> out;
  for (Relaxation r : kAllRelaxations)
    if (std::any_of(records.begin(), records.end(),
                    [&](const auto& rec) { return rec.relaxation == r; }))
      out.push_back(r);
  return out;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string render_timing(const std::vector<BenchRecord>& records,
                          ReportFormat format) {
  const auto relaxations = present_relaxations(records);
  std::map<std::pair<Index, Index>, std::map<Relaxation, std::pair<double, long>>>
      cells;
  for (const auto& rec : records) {
    auto& cell = cells[{rec.n, rec.p}][rec.relaxation];
    cell.first += rec.t_solve;
    cell.second += 1;
  }
  std::ostringstream os;
  const bool md = format == ReportFormat::md;
  if (md) {
    os << "| n | p |";
    for (Relaxation r : relaxations) os << ' ' << to_string(r) << " |";
    os << "\n|---|---|";
    for (size_t k = 0; k < relaxations.size(); ++k) os << "---|";
    os << '\n';
  } else {
    os << "n,p";
    for (Relaxation r : relaxations) os << ',' << to_string(r);
    os << '\n';
  }
  for (const auto& [np, row] : cells) {
    if (md)
      os << "| " << np.first << " | " << np.second << " |";
    else
      os << np.first << ',' << np.second;
    for (Relaxation r : relaxations) {
      auto it = row.find(r);
      std::string v =
          it == row.end() ? "" : fmt3(it->second.first / it->second.second);
      if (md)
        os << ' ' << v << " |";
      else
        os << ',' << v;
    }
    os << '\n';
  }
  return os.str();
}

std::string render_histogram(const std::vector<BenchRecord>& records,
                             ReportFormat format) {
  std::vector<ProblemClass> classes;
  for (ProblemClass c : {ProblemClass::random, ProblemClass::blockdiag,
                         ProblemClass::procrustes, ProblemClass::penrose})
    if (std::any_of(records.begin(), records.end(),
                    [&](const auto& r) { return r.cls == c; }))
      classes.push_back(c);
  std::ostringstream os;
  const bool md = format == ReportFormat::md;
  if (md) {
    os << "| class | relaxation | bucket | count |\n|---|---|---|---|\n";
  } else {
    os << "class,relaxation,bucket,lower,upper,count\n";
  }
  for (ProblemClass c : classes) {
    std::vector<BenchRecord> sub;
    for (const auto& r : records)
      if (r.cls == c) sub.push_back(r);
    const HistogramSpec spec = gap_histogram(sub);
    for (const auto& [relax, counts] : spec.counts) {
      for (size_t b = 0; b < counts.size(); ++b) {
        if (md) {
          os << "| " << to_string(c) << " | " << to_string(relax) << " | "
             << bucket_label(spec, b) << " | " << counts[b] << " |\n";
        } else {
          os << to_string(c) << ',' << to_string(relax) << ','
             << bucket_label(spec, b) << ',';
          if (b >= 1 && b <= 30)
            os << shortest(spec.edges[b - 1]) << ',' << shortest(spec.edges[b]);
          else
            os << ',';
          os << ',' << counts[b] << '\n';
        }
      }
    }
  }
  return os.str();
}

std::string render_summary(const std::vector<BenchRecord>& records,
                           ReportFormat format) {
  struct Agg {
    long count = 0;
    long solved = 0;
    std::vector<double> gammas;
  };
  std::map<std::pair<ProblemClass, Relaxation>, Agg> agg;
  for (const auto& r : records) {
    auto& a = agg[{r.cls, r.relaxation}];
    ++a.count;
    if (r.solved) ++a.solved;
    if (r.gamma_valid) a.gammas.push_back(r.gamma);
  }
  std::ostringstream os;
  const bool md = format == ReportFormat::md;
  if (md)
    os << "| class | relaxation | instances | solved | solved_rate | "
          "median_gap |\n|---|---|---|---|---|---|\n";
  else
    os << "class,relaxation,instances,solved,solved_rate,median_gap\n";
  for (auto& [key, a] : agg) {
    std::string med;
    if (!a.gammas.empty()) {
      std::sort(a.gammas.begin(), a.gammas.end());
      const size_t n = a.gammas.size();
      const double m = n % 2 ? a.gammas[n / 2]
                             : 0.5 * (a.gammas[n / 2 - 1] + a.gammas[n / 2]);
      med = shortest(m);
    }
    const std::string rate =
        fmt3(static_cast<double>(a.solved) / std::max(1L, a.count));
    if (md)
      os << "| " << to_string(key.first) << " | " << to_string(key.second)
         << " | " << a.count << " | " << a.solved << " | " << rate << " | "
         << med << " |\n";
    else
      os << to_string(key.first) << ',' << to_string(key.second) << ','
         << a.count << ',' << a.solved << ',' << rate << ',' << med << '\n';
  }
  return os.str();
}

}  // namespace

std::string render_report(const std::vector<BenchRecord>& records,
                          ReportMode mode, ReportFormat format) {
  if (records.empty()) return "empty report: no records\n";
  switch (mode) {
    case ReportMode::timing_table: return render_timing(records, format);
    case ReportMode::gap_histogram: return render_histogram(records, format);
    case ReportMode::summary: return render_summary(records, format);
  }
  throw ParameterError("unknown report mode");
}

}  // namespace stiefel
