#include "mom/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace mom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Cell> parse_cells(const std::string& text) {
  std::vector<Cell> cells;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    const auto colon = item.find(':');
    require(colon != std::string::npos, "cells entries must look like N:K");
    cells.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
  }
  require(!cells.empty(), "experiment needs at least one N:K cell");
  return cells;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

SolverConfig solver_for_trial(const SolverConfig& base, std::uint64_t trial_seed) {
  SolverConfig c = base;
  c.seed = derive_seed(trial_seed, 3);
  c.inner.seed = derive_seed(trial_seed, 4);
  return c;
}

}  // namespace

EstimatorKind parse_estimator(const std::string& name) {
  if (name == "empirical_mean") return EstimatorKind::empirical_mean;
  if (name == "coordinatewise_mom") return EstimatorKind::coordinatewise_mom;
  if (name == "fenchel_f") return EstimatorKind::fenchel_f;
  if (name == "fenchel_g") return EstimatorKind::fenchel_g;
  if (name == "algorithm1") return EstimatorKind::algorithm1;
  throw UsageError("unknown estimator '" + name + "'");
}

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::empirical_mean: return "empirical_mean";
    case EstimatorKind::coordinatewise_mom: return "coordinatewise_mom";
    case EstimatorKind::fenchel_f: return "fenchel_f";
    case EstimatorKind::fenchel_g: return "fenchel_g";
    default: return "algorithm1";
  }
}

void ExperimentConfig::validate() const {
  require(trials >= 1, "experiment: trials must be >= 1");
  require(delta > 0.0 && delta < 1.0, "experiment: delta must be in (0, 1)");
  require(!cells.empty(), "experiment: no cells");
  require_dim(model.dim(), set.dim(), "experiment: model vs set");
  for (const Cell& c : cells) {
    if (estimator != EstimatorKind::empirical_mean) check_partition_args(c.n, c.k);
    else require(c.n >= 1, "experiment: N must be >= 1");
  }
  require(width_samples >= 100 && rademacher_samples >= 1, "experiment: sample counts too small");
}

ExperimentConfig experiment_from_config(const io::Config& cfg) {
  ExperimentConfig e;
  const io::Config& ex = cfg.get_child("experiment");
  e.estimator = parse_estimator(ex.get<std::string>("estimator", "fenchel_g"));
  e.cells = parse_cells(ex.get<std::string>("cells"));
  e.trials = ex.get<int>("trials", e.trials);
  e.delta = ex.get<double>("delta", e.delta);
  e.seed = ex.get<std::uint64_t>("seed", e.seed);
  e.output = ex.get<std::string>("output", e.output);
  e.c0 = ex.get<double>("c0", e.c0);
  e.c1 = ex.get<double>("c1", e.c1);
  e.width_samples = ex.get<std::int64_t>("width_samples", e.width_samples);
  e.rademacher_samples = ex.get<std::int64_t>("rademacher_samples", e.rademacher_samples);
  e.set = io::set_from_config(cfg.get_child("set"));
  e.model = io::model_from_config(cfg.get_child("model"));
  if (auto c = cfg.get_child_optional("contamination")) e.contamination.section = *c;
  if (auto s = cfg.get_child_optional("solver")) e.solver = io::solver_from_config(*s);
  e.validate();
  return e;
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile of empty sample");
  require(q >= 0.0 && q <= 1.0, "quantile level must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return values[rank - 1];
}

double fit_rate_slope(const std::vector<std::pair<double, double>>& rows) {
  std::set<double> distinct;
  for (const auto& r : rows) distinct.insert(r.first);
  require(distinct.size() >= 3, "fit_rate_slope needs at least 3 distinct N");
  double mx = 0.0, my = 0.0;
  for (const auto& [n, err] : rows) {
    require(n > 0.0 && err > 0.0, "fit_rate_slope needs positive N and errors");
    mx += std::log(n);
    my += std::log(err);
  }
  mx /= static_cast<double>(rows.size());
  my /= static_cast<double>(rows.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [n, err] : rows) {
    const double dx = std::log(n) - mx;
    sxy += dx * (std::log(err) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

int suggest_k(double delta, int n) {
  require(delta > 0.0 && delta < 1.0, "suggest_k: delta must be in (0, 1)");
  require(n >= 1, "suggest_k: N must be >= 1");
  const int target = std::max(1, static_cast<int>(std::ceil(std::log(1.0 / delta))));
  int largest = 1;
  for (int k = 1; k <= n; k += 2) {
    if (n % k != 0) continue;
    if (k >= target) return k;
    largest = k;
  }
  return largest;
}

EstimateResult run_estimator(EstimatorKind kind, const Matrix& data, int k, const SymmetricSet& s,
                             const SolverConfig& solver) {
  auto closed = [&](Vector mu) {
    EstimateResult r;
    r.mu = std::move(mu);
    r.converged = true;
    r.config = solver;
    r.method = estimator_name(kind);
    return r;
  };
  switch (kind) {
    case EstimatorKind::empirical_mean: return closed(empirical_mean(data));
    case EstimatorKind::coordinatewise_mom: return closed(coordinatewise_mom(data, k, solver.seed));
    case EstimatorKind::fenchel_f: return solve_fenchel_min(data, k, s, Which::f, solver);
    case EstimatorKind::fenchel_g: return solve_fenchel_min(data, k, s, Which::g, solver);
    case EstimatorKind::algorithm1: return solve_algorithm1(data, k, s, solver);
  }
  throw UsageError("run_estimator: unknown estimator");
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const Cell& cell, std::uint64_t trial_seed) {
  const Matrix clean = sample_inliers(cfg.model, cell.n, derive_seed(trial_seed, 1), Exec::serial);
  const ContaminationStrategy strategy = io::strategy_from_config(cfg.contamination.section, cell.n, cfg.model.dim());
  const ContaminatedDataset ds = contaminate(clean, strategy, derive_seed(trial_seed, 2));
  const EstimateResult r = run_estimator(cfg.estimator, ds.data, cell.k, cfg.set, solver_for_trial(cfg.solver, trial_seed));
  TrialOutcome out;
  out.estimate = r.mu;
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.baseline = empirical_mean(ds.data);
  return out;
}

RateReport run_experiment(const ExperimentConfig& cfg, Exec exec) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  RateReport report;
  report.estimator = estimator_name(cfg.estimator);
  report.seed = cfg.seed;
  report.delta = cfg.delta;
  report.span_full = cfg.set.spans_full();

  const auto cov = cfg.model.covariance();
  const Vector& truth = cfg.model.location();
  if (cov) {
    const McEstimate w = gaussian_mean_width(cfg.set, *cov, cfg.width_samples, derive_seed(cfg.seed, 0x3d7), exec);
    report.mean_width = w.value;
    report.mean_width_se = w.std_error;
    report.weak_variance = weak_variance(cfg.set, *cov);
  } else {
    report.mean_width = report.mean_width_se = report.weak_variance = kNaN;
  }

  for (std::size_t ci = 0; ci < cfg.cells.size(); ++ci) {
    const Cell cell = cfg.cells[ci];
    const auto t_cell = std::chrono::steady_clock::now();
    CellReport cr;
    cr.n = cell.n;
    cr.k = cell.k;
    cr.trials = cfg.trials;
    cr.outliers = outlier_count(io::strategy_from_config(cfg.contamination.section, cell.n, cfg.model.dim()));
    cr.errors.assign(static_cast<std::size_t>(cfg.trials), 0.0);
    cr.baseline_errors.assign(static_cast<std::size_t>(cfg.trials), 0.0);
    std::vector<int> iterations(static_cast<std::size_t>(cfg.trials), 0);
    std::vector<char> converged(static_cast<std::size_t>(cfg.trials), 1);

    auto one_trial = [&](int t) {
      const TrialOutcome o = run_trial(cfg, cell, derive_seed(cfg.seed, ci, static_cast<std::uint64_t>(t)));
      const auto idx = static_cast<std::size_t>(t);
      cr.errors[idx] = cfg.set.norm(o.estimate - truth);
      cr.baseline_errors[idx] = cfg.set.norm(o.baseline - truth);
      iterations[idx] = o.iterations;
      converged[idx] = o.converged ? 1 : 0;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (int t = 0; t < cfg.trials; ++t) one_trial(t);
    } else {
      for (int t = 0; t < cfg.trials; ++t) one_trial(t);
    }

    cr.median_error = quantile(cr.errors, 0.5);
    cr.quantile_error = quantile(cr.errors, 1.0 - cfg.delta);
    cr.baseline_median = quantile(cr.baseline_errors, 0.5);
    cr.baseline_quantile = quantile(cr.baseline_errors, 1.0 - cfg.delta);
    double iter_sum = 0.0;
    for (std::size_t i = 0; i < iterations.size(); ++i) {
      iter_sum += iterations[i];
      if (!converged[i]) ++cr.nonconverged;
    }
    cr.mean_iterations = iter_sum / cfg.trials;

    const double n = cell.n;
    const double log_inv_delta = std::log(1.0 / cfg.delta);
    const Matrix clean = sample_inliers(cfg.model, cell.n, derive_seed(cfg.seed, ci, 0x7ad), exec);
    cr.rademacher_term =
        rademacher_complexity(clean, truth, cfg.set, cfg.rademacher_samples, derive_seed(cfg.seed, ci, 0x7ae), exec).value;
    if (cov) {
      cr.r_star = std::max(64.0 / std::sqrt(n) * cr.rademacher_term, report.weak_variance * std::sqrt(64.0 * cell.k / n));
      cr.subgaussian_rate = std::max(report.mean_width / std::sqrt(n), report.weak_variance * std::sqrt(log_inv_delta / n));
      const double r = cr.r_star;
      cr.failure_frequency = static_cast<double>(std::count_if(cr.errors.begin(), cr.errors.end(),
                                                               [r](double e) { return e > 2.0 * r; })) /
                             cfg.trials;
    } else {
      cr.r_star = cr.subgaussian_rate = cr.failure_frequency = kNaN;
    }
    cr.r_diamond = cfg.c0 / cfg.c1 * (std::sqrt((cfg.model.dim() + 1) / n) + std::sqrt(log_inv_delta / n)) +
                   cr.outliers / (cfg.c1 * std::sqrt(cell.k * n));
    cr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_cell).count();
    report.cells.push_back(std::move(cr));
  }

  std::vector<std::pair<double, double>> rows;
  std::set<int> distinct;
  for (const auto& c : report.cells) {
    distinct.insert(c.n);
    rows.emplace_back(c.n, c.median_error);
  }
  const bool positive = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.second > 0.0; });
  if (distinct.size() >= 3 && positive) report.slope = fit_rate_slope(rows);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

std::string cells_table(const RateReport& r) {
  std::ostringstream os;
  os << "N\tK\toutliers\ttrials\tmedian_error\tquantile_error\tbaseline_median\tbaseline_quantile"
        "\tmean_iterations\tnonconverged\trademacher_term\tr_star\tsubgaussian_rate\tr_diamond\tfailure_frequency\n";
  for (const auto& c : r.cells) {
    os << c.n << '\t' << c.k << '\t' << c.outliers << '\t' << c.trials << '\t' << fmt(c.median_error) << '\t'
       << fmt(c.quantile_error) << '\t' << fmt(c.baseline_median) << '\t' << fmt(c.baseline_quantile) << '\t'
       << fmt(c.mean_iterations) << '\t' << c.nonconverged << '\t' << fmt(c.rademacher_term) << '\t' << fmt(c.r_star)
       << '\t' << fmt(c.subgaussian_rate) << '\t' << fmt(c.r_diamond) << '\t' << fmt(c.failure_frequency) << '\n';
  }
  return os.str();
}

std::string summary_json(const RateReport& r, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["estimator"] = r.estimator;
  j["seed"] = r.seed;
  j["delta"] = r.delta;
  j["trials"] = cfg.trials;
  j["set"] = cfg.set.kind();
  j["dimension"] = cfg.set.dim();
  j["span_full"] = r.span_full;
  j["model"] = cfg.model.kind();
  j["contamination"] = cfg.contamination.section.get<std::string>("kind", "none");
  j["mean_width"] = r.mean_width;
  j["mean_width_std_error"] = r.mean_width_se;
  j["weak_variance"] = r.weak_variance;
  j["r_star_note"] = "r_star uses the constant 64 as written; it is a loose upper bound";
  j["slope"] = r.slope ? nlohmann::json(*r.slope) : nlohmann::json(nullptr);
  j["r_diamond_constants"] = {{"C0", cfg.c0}, {"c1", cfg.c1}};
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"N", c.n},
                     {"K", c.k},
                     {"outliers", c.outliers},
                     {"median_error", c.median_error},
                     {"quantile_error", c.quantile_error},
                     {"baseline_median", c.baseline_median},
                     {"baseline_quantile", c.baseline_quantile},
                     {"r_star", c.r_star},
                     {"subgaussian_rate", c.subgaussian_rate},
                     {"r_diamond", c.r_diamond},
                     {"failure_frequency", c.failure_frequency},
                     {"nonconverged", c.nonconverged},
                     {"seconds", c.seconds}});
  }
  j["cells"] = cells;
  j["runtime_seconds"] = r.seconds;
  return j.dump(2);
}

void write_report(const RateReport& r, const ExperimentConfig& cfg, const std::string& prefix) {
  std::ofstream table(prefix + ".cells.tsv");
  if (!table) throw UsageError("cannot write report '" + prefix + ".cells.tsv'");
  table << cells_table(r);
  std::ofstream summary(prefix + ".summary.json");
  if (!summary) throw UsageError("cannot write report '" + prefix + ".summary.json'");
  summary << summary_json(r, cfg) << '\n';
}

void apply_thread_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("MOM_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

}  // namespace mom
