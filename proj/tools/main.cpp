#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stiefelsdp/bench.hpp"
#include "stiefelsdp/oracles.hpp"

namespace {

using namespace stiefel;

int cmd_gen(const std::string& cls, long n, long p, std::uint64_t seed,
            const std::string& out) {
  const QpsInstance inst = generate(problem_class_from_string(cls), n, p, seed);
  save_instance(inst, out);
  std::cout << "wrote " << out << " (class=" << cls << " n=" << n
            << " p=" << p << " seed=" << seed << ")\n";
  return 0;
}

int cmd_solve(const std::string& relaxation, const std::string& in,
              bool do_refine, double eps, long max_iters,
              const std::string& dump) {
  const QpsInstance inst = load_instance(in);
  const Relaxation r = relaxation_from_string(relaxation);
  const ConicProgram prog = build_relaxation(inst, r);
  if (!dump.empty()) dump_program(prog, dump);

  SolverSettings settings;
  if (eps > 0) settings.eps_primal = settings.eps_dual = settings.eps_gap = eps;
  if (max_iters > 0) settings.max_iters = max_iters;
  const ConicSolution sol = solve(prog, settings);

  std::cout << "status=" << to_string(sol.status) << '\n'
            << "iterations=" << sol.iterations << '\n'
            << "t_solve=" << sol.wall_time_seconds << '\n'
            << "d=" << sol.primal_objective << '\n';
  if (sol.status != SolveStatus::optimal) return 3;

  const LiftedPoint lifted = extract_lifted(prog, sol, inst.n, inst.p);
  const StiefelPoint rounded = round_to_stiefel(lifted.u, inst.n, inst.p);
  const double p_raw = primal_value(inst, rounded);
  std::cout << "p_raw=" << p_raw << '\n';
  double p_best = p_raw;
  if (do_refine) {
    const RefineResult res = refine(inst, rounded);
    p_best = res.value;
    std::cout << "p_refined=" << res.value << '\n';
  }
  const double gamma = relative_gap(p_best, sol.primal_objective);
  std::cout << "gamma=" << gamma << '\n'
            << "solved=" << (gamma < kSolvedThreshold ? 1 : 0) << '\n';
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out,
              bool resume) {
  BenchConfig cfg = load_bench_config(config_path);
  if (!out.empty()) cfg.out_path = out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto records = run_suite(cfg, resume, [&](size_t done, size_t total) {
    std::fprintf(stderr, "\r[%zu/%zu instances]", done, total);
    if (done == total) std::fprintf(stderr, "\n");
    std::fflush(stderr);
  });
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  long failures = 0;
  for (const auto& r : records)
    if (r.status != SolveStatus::optimal) ++failures;
  std::cout << records.size() << " records -> " << cfg.out_path << " ("
            << elapsed << " s";
  if (failures > 0) std::cout << ", " << failures << " non-optimal solves";
  std::cout << ")\n";
  return failures > 0 ? 3 : 0;
}

int cmd_report(const std::string& in, const std::string& mode,
               const std::string& format) {
  const auto records = read_records(in);
  const ReportFormat fmt =
      format == "md" ? ReportFormat::md : ReportFormat::csv;
  std::cout << render_report(records, report_mode_from_string(mode), fmt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "SDP lower bounds (shor / diagsum / hadamard / kron) for quadratic "
      "optimization over the Stiefel manifold"};
  app.require_subcommand(1);

  std::string cls = "random", in, out, relaxation = "shor";
  std::string mode = "summary", format = "csv", dump;
  long n = 6, p = 2, max_iters = 0;
  std::uint64_t seed = 0;
  double eps = 0;
  bool do_refine = false, resume = false;

  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("--class", cls, "random|blockdiag|procrustes|penrose")
      ->required();
  gen->add_option("--n", n)->required();
  gen->add_option("--p", p)->required();
  gen->add_option("--seed", seed)->required();
  gen->add_option("--out", out)->required();

  auto* solve = app.add_subcommand("solve", "Solve one relaxation of an instance");
  solve->add_option("--relaxation", relaxation, "shor|diagsum|hadamard|kron")
      ->required();
  solve->add_option("--in", in)->required();
  solve->add_flag("--refine", do_refine, "Polish the rounded point");
  solve->add_option("--eps", eps, "Override all solver tolerances");
  solve->add_option("--max-iters", max_iters);
  solve->add_option("--dump-program", dump, "Write the conic program as JSON");

  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("--config", in, "TOML config")->required();
  bench->add_option("--out", out, "Results CSV (overrides config)");
  bench->add_flag("--resume", resume, "Keep rows already in the output file");

  auto* report = app.add_subcommand("report", "Summarize a results CSV");
  report->add_option("--in", in)->required();
  report->add_option("--mode", mode, "timing-table|gap-histogram|summary")
      ->required();
  report->add_option("--format", format, "csv|md");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(cls, n, p, seed, out);
    if (solve->parsed())
      return cmd_solve(relaxation, in, do_refine, eps, max_iters, dump);
    if (bench->parsed()) return cmd_bench(in, out, resume);
    if (report->parsed()) return cmd_report(in, mode, format);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
