#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mom/common.hpp"
#include "mom/fenchel.hpp"
#include "mom/mom_core.hpp"
#include "mom/set_geometry.hpp"

namespace mom {

enum class PartitionMode { fixed, rerandomized };

struct SolverConfig {
  int max_outer_iters = 2000;
  // Outer step theta_t = theta0 / sqrt(t). When unset, theta0 is the
  // initial objective value / 10 for solve_fenchel_min and 0.5 for
  // solve_algorithm1.
  std::optional<double> theta0;
  double eta0 = 0.1;  // inner ascent step eta_t = eta0 / sqrt(t)
  // Stopping threshold on ||mu_t - mu_{t+1}||_S. When unset it is
  // 1e-6 times the data scale (median distance of the block means to the
  // coordinate-wise MOM).
  std::optional<double> epsilon;
  // Stop after this many outer iterations without a better objective.
  int stall_iters = 200;
  PartitionMode partition_mode = PartitionMode::fixed;
  std::uint64_t seed = 1;
  InnerSolverConfig inner;
  // Restarts per inner solve once a warm start is available.
  int warm_restarts = 3;
};

struct EstimateResult {
  Vector mu;
  double objective = 0.0;
  double initial_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
  SolverConfig config;
  double epsilon_used = 0.0;
  double theta0_used = 0.0;
  std::string method;
};

Vector empirical_mean(const Matrix& data);

/// Per-coordinate median of the K bucketed means (seeded random partition).
Vector coordinatewise_mom(const Matrix& data, int k, std::uint64_t seed);
Vector coordinatewise_mom(const BucketedMeans& means);

// Median over blocks of ||Xbar_k - mu||_2, the reference scale for stopping.
double data_scale(const BucketedMeans& means);

/// Minimizes mu -> h*_S(mu) by subgradient descent from the coordinate-wise
/// MOM. The returned iterate is the best one seen, not the last.
EstimateResult solve_fenchel_min(const Matrix& data, int k, const SymmetricSet& s, Which which,
                                 const SolverConfig& cfg = {});
EstimateResult solve_fenchel_min(const BucketedMeans& means, const SymmetricSet& s, Which which,
                                 const SolverConfig& cfg = {});

/// Alternating ascent (on nu) / descent (on mu) for the regularized
/// inter-quartile objective <mu,nu> - f(nu) - ||nu||_S^2 / 4.
/// Iterates are scored with f*_S on the initial partition.
EstimateResult solve_algorithm1(const Matrix& data, int k, const SymmetricSet& s,
                                const SolverConfig& cfg = {});

/// Median over blocks of P_{B_k}(l_mu - l_nu) for the squared loss, computed
/// from the block means as -2<Xbar_k - mu, mu - nu> - ||mu - nu||^2.
double minmax_mom_objective(const Vector& mu, const Vector& nu, const BucketedMeans& means);

std::string to_report(const EstimateResult& r);

}  // namespace mom
