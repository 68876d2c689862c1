#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mom/datagen.hpp"
#include "mom/estimators.hpp"
#include "mom/io.hpp"
#include "mom/set_geometry.hpp"

namespace mom {

enum class EstimatorKind { empirical_mean, coordinatewise_mom, fenchel_f, fenchel_g, algorithm1 };

EstimatorKind parse_estimator(const std::string& name);
std::string estimator_name(EstimatorKind kind);

struct Cell {
  int n;
  int k;
};

struct ContaminationSpec {
  io::Config section;  // resolved per cell, since counts may be fractions of N
};

struct ExperimentConfig {
  EstimatorKind estimator = EstimatorKind::fenchel_g;
  SolverConfig solver;
  InlierModel model = InlierModel::gaussian(Vector::Zero(1), CovarianceModel::identity(1));
  ContaminationSpec contamination;
  SymmetricSet set = SymmetricSet::ball(1);
  std::vector<Cell> cells;
  int trials = 100;
  double delta = 0.05;
  std::uint64_t seed = 1;
  std::string output = "report";

  // Theoretical-rate settings.
  double c0 = 1.0;                          // C_0 in r_diamond
  double c1 = 1.0 / (2.0 * std::numbers::pi);  // c_1 in r_diamond (Cauchy case)
  std::int64_t width_samples = 20000;
  std::int64_t rademacher_samples = 200;

  void validate() const;
};

ExperimentConfig experiment_from_config(const io::Config& cfg);

struct CellReport {
  int n = 0;
  int k = 0;
  int outliers = 0;
  int trials = 0;
  std::vector<double> errors;           // ||mu_hat - mu*||_S per trial
  std::vector<double> baseline_errors;  // empirical mean
  double median_error = 0.0;
  double quantile_error = 0.0;  // 1 - delta
  double baseline_median = 0.0;
  double baseline_quantile = 0.0;
  double mean_iterations = 0.0;
  int nonconverged = 0;
  // theoretical quantities; NaN when the inlier model has no covariance
  double rademacher_term = 0.0;
  double r_star = 0.0;
  double subgaussian_rate = 0.0;
  double r_diamond = 0.0;
  double failure_frequency = 0.0;  // fraction of trials with error > 2 r_star
  double seconds = 0.0;
};

struct RateReport {
  std::vector<CellReport> cells;
  std::optional<double> slope;
  double mean_width = 0.0;
  double mean_width_se = 0.0;
  double weak_variance = 0.0;
  bool span_full = true;
  std::string estimator;
  std::uint64_t seed = 0;
  double delta = 0.0;
  double seconds = 0.0;
};

/// Nearest-rank quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Least-squares slope of log(error) against log(N). Needs >= 3 distinct N.
double fit_rate_slope(const std::vector<std::pair<double, double>>& rows);

/// Smallest odd divisor of n that is >= ceil(log(1/delta)); the largest odd
/// divisor when none is that large.
int suggest_k(double delta, int n);

/// Dispatches to the chosen estimator. The closed-form ones come back as a
/// converged result with zero iterations.
EstimateResult run_estimator(EstimatorKind kind, const Matrix& data, int k, const SymmetricSet& s,
                             const SolverConfig& solver);

struct TrialOutcome {
  Vector estimate;
  Vector baseline;  // empirical mean of the same contaminated data
  int iterations = 0;
  bool converged = true;
};

/// One sample -> contaminate -> estimate pipeline. Everything random is
/// derived from `trial_seed`.
TrialOutcome run_trial(const ExperimentConfig& cfg, const Cell& cell, std::uint64_t trial_seed);

RateReport run_experiment(const ExperimentConfig& cfg, Exec exec = Exec::parallel);

// <prefix>.cells.tsv holds every numeric result; it is reproducible from
// (config, seed). Timings only go to <prefix>.summary.json.
std::string cells_table(const RateReport& r);
std::string summary_json(const RateReport& r, const ExperimentConfig& cfg);
void write_report(const RateReport& r, const ExperimentConfig& cfg, const std::string& prefix);

// Sets the OpenMP thread count from MOM_NUM_THREADS when present.
void apply_thread_env();

}  // namespace mom
