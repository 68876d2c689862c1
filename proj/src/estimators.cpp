#include "mom/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace mom {

Vector empirical_mean(const Matrix& data) {
  require(data.rows() >= 1, "empirical_mean: empty data");
  return data.colwise().mean().transpose();
}

Vector coordinatewise_mom(const BucketedMeans& means) {
  require(means.k % 2 == 1, "coordinatewise_mom: K must be odd");
  const int d = means.dim();
  Vector out(d);
  for (int j = 0; j < d; ++j) {
    Vector col = means.means.col(j);
    const auto mid = static_cast<Eigen::Index>(means.k / 2);
    std::nth_element(col.data(), col.data() + mid, col.data() + col.size());
    out(j) = col(mid);
  }
  return out;
}

Vector coordinatewise_mom(const Matrix& data, int k, std::uint64_t seed) {
  return coordinatewise_mom(bucketed_means(data, make_partition(static_cast<int>(data.rows()), k, seed)));
}

double data_scale(const BucketedMeans& means) {
  const Vector center = coordinatewise_mom(means);
  Vector dist(means.k);
  for (int b = 0; b < means.k; ++b) dist(b) = (means.means.row(b).transpose() - center).norm();
  const auto mid = static_cast<Eigen::Index>(means.k / 2);
  std::nth_element(dist.data(), dist.data() + mid, dist.data() + dist.size());
  if (dist(mid) > 0.0) return dist(mid);
  const double fallback = means.means.cwiseAbs().maxCoeff();
  return fallback > 0.0 ? fallback : 1.0;
}

namespace {

InnerSolverConfig inner_for_step(const SolverConfig& cfg, int t) {
  InnerSolverConfig inner = cfg.inner;
  inner.seed = derive_seed(cfg.inner.seed, static_cast<std::uint64_t>(t));
  if (t > 0) inner.restarts = std::max(1, std::min(cfg.inner.restarts, cfg.warm_restarts));
  return inner;
}

// Warm-started inner solves use few restarts and can miss the global sup,
// which would make a poor iterate look best. Any heuristic value that would
// improve on the best so far is re-evaluated with the full restart budget;
// both runs are lower bounds, so the larger one is kept.
InnerResult confirm(const Vector& mu, ObjectiveContext& ctx, const InnerResult& cheap, const SolverConfig& cfg,
                    int t, double best) {
  if (cheap.certified || cheap.value >= best) return cheap;
  const InnerSolverConfig saved = ctx.inner;
  ctx.inner = cfg.inner;
  ctx.inner.seed = derive_seed(cfg.inner.seed, 0xc0f, static_cast<std::uint64_t>(t));
  InnerResult full = eval_conjugate(mu, ctx, cheap.maximizer);
  ctx.inner = saved;
  return full.value > cheap.value ? full : cheap;
}

void check_solver_config(const SolverConfig& cfg) {
  require(cfg.max_outer_iters >= 1, "SolverConfig: max_outer_iters must be >= 1");
  require(!cfg.theta0 || *cfg.theta0 > 0.0, "SolverConfig: theta0 must be positive");
  require(cfg.eta0 > 0.0, "SolverConfig: eta0 must be positive");
  require(!cfg.epsilon || *cfg.epsilon > 0.0, "SolverConfig: epsilon must be positive");
  require(cfg.stall_iters >= 1 && cfg.warm_restarts >= 1, "SolverConfig: counts must be positive");
}

BucketedMeans means_for_step(const Matrix& data, int k, const SolverConfig& cfg, int t) {
  const int n = static_cast<int>(data.rows());
  return bucketed_means(data, make_partition(n, k, derive_seed(cfg.seed, 0xb10c, static_cast<std::uint64_t>(t))));
}

// Keeps the best iterate and the stall counter.
struct BestTracker {
  Vector mu;
  double value;
  int stall = 0;

  void offer(const Vector& cand, double v) {
    if (v < value) {
      value = v;
      mu = cand;
      stall = 0;
    } else {
      ++stall;
    }
  }
};

}  // namespace

EstimateResult solve_fenchel_min(const BucketedMeans& means, const SymmetricSet& s, Which which,
                                 const SolverConfig& cfg) {
  check_solver_config(cfg);
  EstimateResult out;
  out.method = which == Which::f ? "fenchel_f" : "fenchel_g";
  out.config = cfg;
  ObjectiveContext ctx(means, s, which, inner_for_step(cfg, 0));

  Vector mu = coordinatewise_mom(means);
  InnerResult inner = eval_conjugate(mu, ctx);
  out.initial_objective = inner.value;
  out.trace.push_back(inner.value);
  out.epsilon_used = cfg.epsilon.value_or(1e-6 * data_scale(means));
  out.theta0_used = cfg.theta0.value_or(inner.value / 10.0);
  BestTracker best{mu, inner.value};

  if (inner.value <= 0.0) {
    out.mu = mu;
    out.objective = inner.value;
    out.converged = true;
    return out;
  }

  for (int t = 1; t <= cfg.max_outer_iters; ++t) {
    const Vector step = (out.theta0_used / std::sqrt(static_cast<double>(t))) * inner.maximizer;
    const double change = s.norm(-step);
    mu -= step;
    ctx.inner = inner_for_step(cfg, t);
    inner = confirm(mu, ctx, eval_conjugate(mu, ctx, inner.maximizer), cfg, t, best.value);
    out.trace.push_back(inner.value);
    best.offer(mu, inner.value);
    out.iterations = t;
    if (change < out.epsilon_used || inner.value <= 0.0) {
      out.converged = true;
      break;
    }
    if (best.stall >= cfg.stall_iters) break;
  }
  out.mu = best.mu;
  out.objective = best.value;
  return out;
}

EstimateResult solve_fenchel_min(const Matrix& data, int k, const SymmetricSet& s, Which which,
                                 const SolverConfig& cfg) {
  require_dim(data.cols(), s.dim(), "solve_fenchel_min");
  const int n = static_cast<int>(data.rows());
  const BucketedMeans means = bucketed_means(data, make_partition(n, k, cfg.seed));
  if (cfg.partition_mode == PartitionMode::fixed) return solve_fenchel_min(means, s, which, cfg);

  // rerandomized: subgradients come from a fresh partition each step, the
  // best iterate is scored on the initial one
  check_solver_config(cfg);
  EstimateResult out;
  out.method = which == Which::f ? "fenchel_f" : "fenchel_g";
  out.config = cfg;
  ObjectiveContext score(means, s, which, inner_for_step(cfg, 0));
  Vector mu = coordinatewise_mom(means);
  InnerResult scored = eval_conjugate(mu, score);
  out.initial_objective = scored.value;
  out.trace.push_back(scored.value);
  out.epsilon_used = cfg.epsilon.value_or(1e-6 * data_scale(means));
  out.theta0_used = cfg.theta0.value_or(scored.value / 10.0);
  BestTracker best{mu, scored.value};
  std::optional<Vector> warm = scored.maximizer;
  for (int t = 1; t <= cfg.max_outer_iters && best.value > 0.0; ++t) {
    ObjectiveContext local(means_for_step(data, k, cfg, t), s, which, inner_for_step(cfg, t));
    const Vector v = eval_conjugate(mu, local, warm).maximizer;
    const Vector step = (out.theta0_used / std::sqrt(static_cast<double>(t))) * v;
    mu -= step;
    score.inner = inner_for_step(cfg, t);
    scored = confirm(mu, score, eval_conjugate(mu, score, warm), cfg, t, best.value);
    warm = scored.maximizer;
    out.trace.push_back(scored.value);
    best.offer(mu, scored.value);
    out.iterations = t;
    if (s.norm(step) < out.epsilon_used) {
      out.converged = true;
      break;
    }
    if (best.stall >= cfg.stall_iters) break;
  }
  if (best.value <= 0.0) out.converged = true;
  out.mu = best.mu;
  out.objective = best.value;
  return out;
}

EstimateResult solve_algorithm1(const Matrix& data, int k, const SymmetricSet& s, const SolverConfig& cfg) {
  check_solver_config(cfg);
  require_dim(data.cols(), s.dim(), "solve_algorithm1");
  const int n = static_cast<int>(data.rows());
  EstimateResult out;
  out.method = "algorithm1";
  out.config = cfg;

  const BucketedMeans means0 = bucketed_means(data, make_partition(n, k, cfg.seed));
  ObjectiveContext score(means0, s, Which::f, inner_for_step(cfg, 0));
  Vector mu = coordinatewise_mom(means0);
  Vector nu = Vector::Zero(s.dim());
  InnerResult scored = eval_conjugate(mu, score);
  out.initial_objective = scored.value;
  out.trace.push_back(scored.value);
  out.epsilon_used = cfg.epsilon.value_or(1e-6 * data_scale(means0));
  out.theta0_used = cfg.theta0.value_or(0.5);
  BestTracker best{mu, scored.value};
  if (scored.value <= 0.0) {
    out.mu = mu;
    out.objective = scored.value;
    out.converged = true;
    return out;
  }

  for (int t = 1; t <= cfg.max_outer_iters; ++t) {
    const BucketedMeans local = cfg.partition_mode == PartitionMode::fixed ? means0 : means_for_step(data, k, cfg, t);
    const auto active = active_interquartile_blocks(nu, local);
    Vector active_mean = Vector::Zero(s.dim());
    for (int b : active) active_mean += local.means.row(b).transpose();
    active_mean /= static_cast<double>(active.size());

    const Vector ascent = mu - active_mean - 0.5 * s.norm(nu) * s.support_argmax(nu);
    nu += (cfg.eta0 / std::sqrt(static_cast<double>(t))) * ascent;
    const Vector step = (out.theta0_used / std::sqrt(static_cast<double>(t))) * nu;
    mu -= step;

    score.inner = inner_for_step(cfg, t);
    scored = confirm(mu, score, eval_conjugate(mu, score, scored.maximizer), cfg, t, best.value);
    out.trace.push_back(scored.value);
    best.offer(mu, scored.value);
    out.iterations = t;
    if (s.norm(step) < out.epsilon_used || scored.value <= 0.0) {
      out.converged = true;
      break;
    }
    if (best.stall >= cfg.stall_iters) break;
  }
  out.mu = best.mu;
  out.objective = best.value;
  return out;
}

double minmax_mom_objective(const Vector& mu, const Vector& nu, const BucketedMeans& means) {
  require(means.k % 2 == 1, "minmax_mom_objective: K must be odd");
  require_dim(mu.size(), means.dim(), "minmax_mom_objective");
  require_dim(nu.size(), means.dim(), "minmax_mom_objective");
  const Vector diff = mu - nu;
  Vector per_block = -2.0 * ((means.means.rowwise() - mu.transpose()) * diff);
  per_block.array() -= diff.squaredNorm();
  const auto mid = static_cast<Eigen::Index>(means.k / 2);
  std::nth_element(per_block.data(), per_block.data() + mid, per_block.data() + per_block.size());
  return per_block(mid);
}

std::string to_report(const EstimateResult& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "[estimate]\n";
  os << "method = " << r.method << "\n";
  os << "mu =";
  for (Eigen::Index j = 0; j < r.mu.size(); ++j) os << (j ? ", " : " ") << r.mu(j);
  os << "\n";
  os << "objective = " << r.objective << "\n";
  os << "initial_objective = " << r.initial_objective << "\n";
  os << "iterations = " << r.iterations << "\n";
  os << "converged = " << (r.converged ? "true" : "false") << "\n";
  os << "\n[config]\n";
  const SolverConfig& c = r.config;
  os << "max_outer_iters = " << c.max_outer_iters << "\n";
  os << "theta0 = " << r.theta0_used << "\n";
  os << "eta0 = " << c.eta0 << "\n";
  os << "epsilon = " << r.epsilon_used << "\n";
  os << "stall_iters = " << c.stall_iters << "\n";
  os << "partition_mode = " << (c.partition_mode == PartitionMode::fixed ? "fixed" : "rerandomized") << "\n";
  os << "seed = " << c.seed << "\n";
  os << "inner_restarts = " << c.inner.restarts << "\n";
  os << "inner_max_iters = " << c.inner.max_iters << "\n";
  os << "inner_initial_step = " << c.inner.initial_step << "\n";
  os << "inner_tolerance = " << c.inner.tolerance << "\n";
  os << "inner_patience = " << c.inner.patience << "\n";
  os << "inner_seed = " << c.inner.seed << "\n";
  os << "warm_restarts = " << c.warm_restarts << "\n";
  os << "\n[trace]\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i) os << i << " " << r.trace[i] << "\n";
  return os.str();
}

}  // namespace mom
