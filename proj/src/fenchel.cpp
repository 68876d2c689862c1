#include "mom/fenchel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace mom {

ObjectiveContext::ObjectiveContext(BucketedMeans m, SymmetricSet s, Which w, InnerSolverConfig cfg)
    : means(std::move(m)), set(std::move(s)), which(w), inner(cfg) {
  require_dim(means.dim(), set.dim(), "ObjectiveContext");
  require(means.k % 2 == 1, "ObjectiveContext: K must be odd");
  require(inner.restarts >= 1 && inner.max_iters >= 1 && inner.initial_step > 0.0 &&
              inner.tolerance > 0.0 && inner.patience >= 1,
          "InnerSolverConfig: all settings must be positive");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Direction {
  double value = kNegInf;
  Vector u;
};

// Ascent of a 0-homogeneous ratio over the Euclidean unit sphere.
// `eval(u)` returns the value at unit u and an ambient (sub)gradient.
template <class Eval>
Direction ascend_sphere(const Vector& start, const InnerSolverConfig& cfg, const Eval& eval) {
  Vector u = start.normalized();
  auto [val, grad] = eval(u);
  Direction best{val, u};
  int stall = 0;
  for (int t = 1; t <= cfg.max_iters; ++t) {
    Vector tangent = grad - grad.dot(u) * u;
    const double tn = tangent.norm();
    if (!(tn > 1e-14 * (grad.norm() + 1e-300))) break;
    u += (cfg.initial_step / std::sqrt(static_cast<double>(t)) / tn) * tangent;
    u.normalize();
    std::tie(val, grad) = eval(u);
    stall = (val > best.value + cfg.tolerance * std::max(1.0, std::abs(best.value))) ? 0 : stall + 1;
    if (val > best.value) best = {val, u};
    if (stall >= cfg.patience) break;
  }
  return best;
}

// Indices of the two largest values, best first.
template <class Eval>
std::vector<Vector> top_two(const std::vector<Vector>& dirs, const Eval& eval) {
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    if (dirs[i].norm() > 0.0) scored.emplace_back(-eval(dirs[i].normalized()).first, i);
  const std::size_t keep = std::min<std::size_t>(2, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end());
  std::vector<Vector> out;
  for (std::size_t i = 0; i < keep; ++i) out.push_back(dirs[scored[i].second].normalized());
  return out;
}

// Unascended directions whose values pick extra starts: evenly spaced
// angles in the plane, Gaussian directions otherwise.
std::vector<Vector> screening_directions(Eigen::Index d, std::mt19937_64& rng) {
  std::vector<Vector> out;
  if (d == 2) {
    constexpr int kAngles = 64;
    for (int i = 0; i < kAngles; ++i) {
      const double a = 2.0 * std::acos(-1.0) * i / kAngles;
      out.push_back(Vector{{std::cos(a), std::sin(a)}});
    }
    return out;
  }
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < 16 * d; ++i) {
    Vector g(d);
    for (Eigen::Index j = 0; j < d; ++j) g(j) = normal(rng);
    out.push_back(std::move(g));
  }
  return out;
}

// Ascent starts, `cfg.restarts` in total: the warm start, then the best
// probe and best screened direction alternately, then random unit vectors.
// Nothing depends on mu's own direction, so the search commutes with
// translating the data.
template <class Eval>
std::vector<Vector> starting_directions(Eigen::Index d, const std::optional<Vector>& warm,
                                        const std::vector<Vector>& probes, const InnerSolverConfig& cfg,
                                        const Eval& eval) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<Vector> starts;
  if (warm && warm->norm() > 0.0) starts.push_back(warm->normalized());
  const std::vector<Vector> from_probes = top_two(probes, eval);
  const std::vector<Vector> screened = top_two(screening_directions(d, rng), eval);
  for (std::size_t i = 0; i < 2; ++i) {
    if (i < from_probes.size()) starts.push_back(from_probes[i]);
    if (i < screened.size()) starts.push_back(screened[i]);
  }
  if (static_cast<int>(starts.size()) > cfg.restarts) starts.resize(static_cast<std::size_t>(cfg.restarts));
  std::normal_distribution<double> normal;
  while (static_cast<int>(starts.size()) < cfg.restarts) {
    Vector g(d);
    for (Eigen::Index j = 0; j < d; ++j) g(j) = normal(rng);
    if (g.norm() > 0.0) starts.push_back(g.normalized());
  }
  return starts;
}

template <class Eval>
Direction best_over_starts(const Vector& mu, const std::optional<Vector>& warm, const std::vector<Vector>& probes,
                           const InnerSolverConfig& cfg, const Eval& eval) {
  Direction best;
  if (mu.size() == 1) {
    // the sphere is {-1, +1}
    for (double s : {1.0, -1.0}) {
      Vector u = Vector::Constant(1, s);
      const double val = eval(u).first;
      if (val > best.value) best = {val, u};
    }
    return best;
  }
  for (const Vector& start : starting_directions(mu.size(), warm, probes, cfg, eval)) {
    Direction cand = ascend_sphere(start, cfg, eval);
    if (cand.value > best.value) best = std::move(cand);
  }
  // polish the winner with shorter steps: the objective is piecewise linear,
  // so the final approach to a kink needs small steps
  InnerSolverConfig fine = cfg;
  for (int stage = 0; stage < 2; ++stage) {
    fine.initial_step *= 0.1;
    Direction cand = ascend_sphere(best.u, fine, eval);
    if (cand.value > best.value) best = std::move(cand);
  }
  return best;
}

// Directions mu - Xbar_k: h(u) is an order statistic of <Xbar_k, u>, so the
// objective <mu,u> - h(u) is an order statistic of <mu - Xbar_k, u>.
std::vector<Vector> block_probes(const Vector& mu, const BucketedMeans& means) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(means.k) + 1);
  for (int k = 0; k < means.k; ++k) out.push_back(mu - means.means.row(k).transpose());
  out.push_back(mu - means.means.colwise().mean().transpose());
  return out;
}

InnerResult enumerate_finite(const Vector& mu, const ObjectiveContext& ctx) {
  InnerResult out;
  out.certified = true;
  out.value = kNegInf;
  const int m = ctx.set.num_points();
  for (int i = 0; i < m; ++i) {
    const Vector v = ctx.set.point(i);
    const double val = mu.dot(v) - objective_h(ctx.which, v, ctx.means);
    if (val > out.value) {
      out.value = val;
      out.maximizer = v;
    }
  }
  return out;
}

// Candidate rays in the plane where either the block ordering or the active
// face of ||.||_S can change. Between consecutive candidates the ratio
// phi(u)/||u||_S is a ratio of linear forms, hence monotone in the angle.
std::vector<Vector> planar_critical_rays(const ObjectiveContext& ctx) {
  std::vector<Vector> rays;
  auto add_normal = [&](const Vector& w) {
    if (w.norm() == 0.0) return;
    Vector n(2);
    n << -w(1), w(0);
    n.normalize();
    rays.push_back(n);
    rays.push_back(-n);
  };
  const Matrix& x = ctx.means.means;
  for (Eigen::Index a = 0; a < x.rows(); ++a)
    for (Eigen::Index b = a + 1; b < x.rows(); ++b) add_normal((x.row(a) - x.row(b)).transpose());
  const int m = ctx.set.num_points();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) add_normal(ctx.set.point(i) - ctx.set.point(j));
  for (int i = 0; i < m; ++i) {
    const Vector p = ctx.set.point(i);
    if (p.norm() > 0.0) rays.push_back(p.normalized());
  }
  for (int j = 0; j < 2; ++j) {
    Vector e = Vector::Zero(2);
    e(j) = 1.0;
    rays.push_back(e);
    rays.push_back(-e);
  }
  return rays;
}

}  // namespace

InnerResult sphere_sup(const Vector& mu, const BucketedMeans& means, Which which,
                       const InnerSolverConfig& cfg, const std::optional<Vector>& warm_start) {
  require_dim(mu.size(), means.dim(), "sphere_sup");
  auto eval = [&](const Vector& u) {
    HEval h = evaluate_h(which, u, means);
    return std::pair<double, Vector>{mu.dot(u) - h.value, mu - h.gradient};
  };
  Direction best = best_over_starts(mu, warm_start, block_probes(mu, means), cfg, eval);
  return {best.value, best.u, mu.size() == 1};
}

InnerResult eval_conjugate(const Vector& mu, const ObjectiveContext& ctx, const std::optional<Vector>& warm_start) {
  require_dim(mu.size(), ctx.dim(), "eval_conjugate");
  if (ctx.set.is_finite()) return enumerate_finite(mu, ctx);
  const double radius = std::get<SymmetricSet::EuclideanBall>(ctx.set.rep()).radius;
  InnerResult sph = sphere_sup(mu, ctx.means, ctx.which, ctx.inner, warm_start);
  InnerResult out;
  out.certified = false;
  if (sph.value > 0.0) {
    out.value = radius * sph.value;
    out.maximizer = radius * sph.maximizer;
  } else {
    out.value = 0.0;
    out.maximizer = Vector::Zero(ctx.dim());
  }
  return out;
}

InnerResult eval_regularized_conjugate(const Vector& mu, const ObjectiveContext& ctx,
                                       const std::optional<Vector>& warm_start) {
  require_dim(mu.size(), ctx.dim(), "eval_regularized_conjugate");
  require(ctx.set.spans_full(), "eval_regularized_conjugate: span(S) must be R^d");
  const SymmetricSet& s = ctx.set;

  // ratio(u) = (<mu,u> - h(u)) / ||u||_S, i.e. the objective on the unit
  // ||.||_S sphere, parametrized by Euclidean directions
  auto ratio = [&](const Vector& u) {
    HEval h = evaluate_h(ctx.which, u, ctx.means);
    const double n = s.norm(u);
    const double phi = mu.dot(u) - h.value;
    Vector grad = ((mu - h.gradient) * n - phi * s.support_argmax(u)) / (n * n);
    return std::pair<double, Vector>{phi / n, std::move(grad)};
  };

  Direction best;
  bool certified = false;
  if (!s.is_finite()) {
    // ||u||_S = r ||u||_2, so the ratio is the sphere sup divided by r
    const InnerResult sph = sphere_sup(mu, ctx.means, ctx.which, ctx.inner, warm_start);
    best = {sph.value / s.norm(sph.maximizer), sph.maximizer};
    certified = sph.certified;
  } else if (s.dim() == 2) {
    for (const Vector& u : planar_critical_rays(ctx)) {
      const double val = ratio(u).first;
      if (val > best.value) best = {val, u};
    }
    certified = true;
  } else {
    std::vector<Vector> probes = block_probes(mu, ctx.means);
    for (int i = 0; i < s.num_points(); ++i) probes.push_back(s.point(i));
    best = best_over_starts(mu, warm_start, probes, ctx.inner, ratio);
    certified = s.dim() == 1;
    for (int i = 0; i < s.num_points(); ++i) {
      const Vector p = s.point(i);
      if (s.norm(p) <= 0.0) continue;
      const double val = ratio(p).first;
      if (val > best.value) best = {val, p.normalized()};
    }
  }

  InnerResult out;
  out.certified = certified;
  const double m = best.value;
  if (m > 0.0) {
    out.value = m * m;
    out.maximizer = (2.0 * m / s.norm(best.u)) * best.u;
  } else {
    out.value = 0.0;
    out.maximizer = Vector::Zero(ctx.dim());
  }
  return out;
}

Vector conjugate_subgradient(const Vector& mu, const ObjectiveContext& ctx) {
  return eval_conjugate(mu, ctx).maximizer;
}

}  // namespace mom
