#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "mom/datagen.hpp"
#include "mom/harness.hpp"
#include "mom/io.hpp"
#include "mom/verify.hpp"

namespace {

using namespace mom;

struct EstimateArgs {
  std::string data;
  std::string config;
  std::string estimator;
  std::string set_kind;
  double radius = 1.0;
  std::string points;
  int k = 0;
  std::string report;
};

int cmd_estimate(const EstimateArgs& a, std::optional<std::uint64_t> seed) {
  const Matrix data = io::read_dataset(a.data);
  const int d = static_cast<int>(data.cols());
  io::Config cfg;
  if (!a.config.empty()) cfg = io::read_config(a.config);

  SolverConfig solver = io::solver_from_config(cfg.get_child("solver", io::Config()));
  if (seed) solver.seed = *seed;

  io::Config set_section = cfg.get_child("set", io::Config());
  if (!a.set_kind.empty()) set_section.put("kind", a.set_kind);
  if (!set_section.count("kind")) set_section.put("kind", "ball");
  if (!set_section.count("dimension")) set_section.put("dimension", d);
  if (a.radius != 1.0) set_section.put("radius", a.radius);
  if (!a.points.empty()) set_section.put("points", a.points);
  const SymmetricSet s = io::set_from_config(set_section);
  if (s.dim() != d) throw UsageError("estimate: set dimension does not match the data");

  const std::string name = !a.estimator.empty() ? a.estimator : cfg.get<std::string>("estimate.estimator", "fenchel_g");
  const int k = a.k > 0 ? a.k : cfg.get<int>("estimate.k", suggest_k(0.05, static_cast<int>(data.rows())));

  const EstimateResult r = run_estimator(parse_estimator(name), data, k, s, solver);
  std::cout << io::format_vector(r.mu) << "\n";
  const std::string report = to_report(r);
  if (!a.report.empty()) {
    std::ofstream out(a.report);
    if (!out) throw UsageError("estimate: cannot write " + a.report);
    out << report;
  } else {
    std::cerr << report;
  }
  return r.converged ? 0 : 3;
}

int cmd_bench(const std::string& config, const std::string& output, std::optional<std::uint64_t> seed, bool serial) {
  ExperimentConfig cfg = experiment_from_config(io::read_config(config));
  if (seed) cfg.seed = *seed;
  if (!output.empty()) cfg.output = output;
  const RateReport r = run_experiment(cfg, serial ? Exec::serial : Exec::parallel);
  write_report(r, cfg, cfg.output);
  std::cout << cells_table(r);
  if (r.slope) std::cout << "slope\t" << *r.slope << "\n";
  return 0;
}

int cmd_verify(const std::vector<std::string>& selector, std::optional<std::uint64_t> seed, double scale,
               bool inject, bool list) {
  if (list) {
    for (const auto& s : verify::suites()) std::cout << s.name << "\t" << s.default_cases << "\t" << s.description << "\n";
    return 0;
  }
  verify::Options opts;
  if (seed) opts.seed = *seed;
  opts.scale = scale;
  opts.inject_even_k_fault = inject;
  const auto results = verify::run(selector, opts);
  std::cout << verify::format(results);
  for (const auto& r : results)
    if (!r.passed) return 1;
  return 0;
}

int cmd_datagen(const std::string& config, int n, const std::string& out, std::optional<std::uint64_t> seed) {
  const io::Config cfg = io::read_config(config);
  const InlierModel model = io::model_from_config(cfg.get_child("model"));
  const std::uint64_t s = seed ? *seed : cfg.get<std::uint64_t>("datagen.seed", 1);
  if (n <= 0) n = cfg.get<int>("datagen.n", 0);
  if (n <= 0) throw UsageError("datagen: sample size must be positive");
  const ContaminationStrategy strategy =
      io::strategy_from_config(cfg.get_child("contamination", io::Config()), n, model.dim());
  const Matrix clean = sample_inliers(model, n, derive_seed(s, 1));
  const ContaminatedDataset ds = contaminate(clean, strategy, derive_seed(s, 2));
  ContaminatedDataset echo = ds;
  echo.seed = s;
  io::write_dataset(out, ds.data);
  io::write_sidecar(io::sidecar_path(out), echo, strategy_kind(strategy));
  std::cout << "wrote " << n << " x " << model.dim() << " to " << out << " (" << ds.outliers.size() << " outliers)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  CLI::App app{"median-of-means mean estimation over symmetric sets"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "override the master seed");
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (default: MOM_NUM_THREADS or all cores)");

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "estimate the mean of a dataset");
  est->add_option("data", ea.data, "CSV dataset")->required()->check(CLI::ExistingFile);
  est->add_option("-c,--config", ea.config, "INI file with [estimate], [set], [solver]")->check(CLI::ExistingFile);
  est->add_option("-e,--estimator", ea.estimator, "empirical_mean | coordinatewise_mom | fenchel_f | fenchel_g | algorithm1");
  est->add_option("--set", ea.set_kind, "cross | ball | points");
  est->add_option("--radius", ea.radius, "ball radius");
  est->add_option("--points", ea.points, "points of S, rows separated by ';'");
  est->add_option("-K,--blocks", ea.k, "number of blocks (odd, divides N)");
  est->add_option("-r,--report", ea.report, "write the solver report here (default: stderr)");

  std::string bench_config, bench_output;
  bool bench_serial = false;
  auto* bench = app.add_subcommand("bench", "run an experiment and write the rate report");
  bench->add_option("config", bench_config, "experiment INI")->required()->check(CLI::ExistingFile);
  bench->add_option("-o,--output", bench_output, "report prefix (overrides [experiment] output)");
  bench->add_flag("--serial", bench_serial, "run trials on one thread");

  std::vector<std::string> selector;
  double scale = 1.0;
  bool inject = false, list = false;
  auto* ver = app.add_subcommand("verify", "run the invariant suites");
  ver->add_option("suites", selector, "suite names (default: all)");
  ver->add_option("--scale", scale, "multiplier on every suite's case count")->check(CLI::PositiveNumber);
  ver->add_flag("--inject-fault", inject, "negative control: even K with a lower-middle median");
  ver->add_flag("--list", list, "list suites");

  std::string dg_config, dg_out;
  int dg_n = 0;
  auto* dg = app.add_subcommand("datagen", "sample and contaminate a dataset");
  dg->add_option("config", dg_config, "INI with [model], [contamination], [datagen]")->required()->check(CLI::ExistingFile);
  dg->add_option("-n", dg_n, "sample size (overrides [datagen] n)");
  dg->add_option("-o,--out", dg_out, "output CSV; the sidecar goes to <out>.meta")->required();

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) {
    const std::string t = std::to_string(threads);
    setenv("MOM_NUM_THREADS", t.c_str(), 1);
    apply_thread_env();
  }
  try {
    if (*est) return cmd_estimate(ea, seed);
    if (*bench) return cmd_bench(bench_config, bench_output, seed, bench_serial);
    if (*ver) return cmd_verify(selector, seed, scale, inject, list);
    if (*dg) return cmd_datagen(dg_config, dg_n, dg_out, seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
