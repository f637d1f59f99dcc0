#pragma once

#include <functional>
#include <iosfwd>
#include <map>

#include "stiefelsdp/relax.hpp"
#include "stiefelsdp/round_refine.hpp"

// Benchmark harness: per instance it solves the selected relaxations,
// rounds and refines a primal point, and records dual bound, primal
// values, relative gap, and timings. Suites stream deterministic CSV
// (byte identical across reruns and worker counts, timing columns
// aside) and can resume a partial results file.

namespace stiefel {

enum class Relaxation { shor, diagsum, hadamard, kron };

std::string to_string(Relaxation r);
Relaxation relaxation_from_string(const std::string& s);

ConicProgram build_relaxation(const QpsInstance& inst, Relaxation r);

struct BenchConfig {
  std::vector<std::pair<Index, Index>> pairs;  // (n, p)
  std::vector<ProblemClass> classes;
  int instances_per_cell = 50;
  std::uint64_t base_seed = 1;
  std::vector<Relaxation> relaxations = {Relaxation::shor, Relaxation::diagsum,
                                         Relaxation::kron};
  SolverSettings solver;
  RefineSettings refine;
  std::string out_path = "results.csv";
  int workers = 0;  // 0 picks the hardware concurrency
};

// Reads and validates a TOML config; unknown keys are rejected so a
// typo cannot silently fall back to a default.
BenchConfig load_bench_config(const std::string& path);

struct BenchRecord {
  std::string id;
  ProblemClass cls = ProblemClass::random;
  Index n = 0, p = 0;
  std::uint64_t seed = 0;
  Relaxation relaxation = Relaxation::shor;
  double d = 0.0;
  double p_raw = 0.0;
  double p_refined = 0.0;
  double gamma = 0.0;
  bool gamma_valid = false;  // false when the solve was not optimal
  bool anomaly = false;      // primal fell below the bound beyond tolerance
  bool solved = false;       // gamma < 1e-4
  double t_total = 0.0;
  double t_solve = 0.0;
  long iterations = 0;
  SolveStatus status = SolveStatus::max_iters;
};

// (p - d) / max{1, |(p + d)/2|}.
double relative_gap(double p_val, double d_val);

constexpr double kSolvedThreshold = 1e-4;

// Stream seed for one instance cell entry.
std::uint64_t instance_seed(std::uint64_t base_seed, ProblemClass cls, Index n,
                            Index p, int index);

std::vector<BenchRecord> run_instance(const QpsInstance& inst,
                                      const BenchConfig& config,
                                      const std::string& id = "adhoc");

using ProgressFn = std::function<void(size_t done, size_t total)>;

// Runs the whole grid, streaming records to config.out_path in task
// order. With resume = true an existing file's rows are kept verbatim
// and only missing instances are computed.
std::vector<BenchRecord> run_suite(const BenchConfig& config,
                                   bool resume = false,
                                   const ProgressFn& progress = {});

// --- results file ----------------------------------------------------

extern const char* const kCsvHeader;

std::string format_record(const BenchRecord& r);
std::vector<BenchRecord> read_records(const std::string& path);

// --- reporting -------------------------------------------------------

enum class ReportMode { timing_table, gap_histogram, summary };
enum class ReportFormat { csv, md };

ReportMode report_mode_from_string(const std::string& s);

// 30 log-spaced buckets on [1e-4, 1e1] plus a Solved bucket below, an
// overflow bucket above, and a failed bucket for records without a gap.
struct HistogramSpec {
  std::vector<double> edges;                      // 31 edges
  std::map<Relaxation, std::vector<long>> counts;  // 33 buckets each
};

HistogramSpec gap_histogram(const std::vector<BenchRecord>& records);

std::string render_report(const std::vector<BenchRecord>& records,
                          ReportMode mode, ReportFormat format);

}  // namespace stiefel
