#include "mom/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mom/estimators.hpp"
#include "mom/fenchel.hpp"
#include "mom/io.hpp"
#include "mom/oracle.hpp"
#include "mom/set_geometry.hpp"

namespace mom::verify {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double normal() { return std::normal_distribution<double>()(gen_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen_); }
  std::uint64_t bits() { return gen_(); }

  Vector normal_vector(int d, double scale = 1.0) {
    Vector v(d);
    for (int j = 0; j < d; ++j) v(j) = scale * normal();
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

// Data in one of three regimes: Gaussian at a random scale and offset,
// heavy-tailed (Gaussian ratio), or small integers (lots of exact ties).
Matrix random_data(Rng& rng, int n, int d) {
  const int regime = rng.integer(0, 2);
  const double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
  const Vector loc = rng.normal_vector(d, scale * rng.uniform(0.0, 3.0));
  Matrix x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      double z = rng.normal();
      if (regime == 1) z /= std::max(std::abs(rng.normal()), 1e-3);
      if (regime == 2) {
        x(i, j) = static_cast<double>(rng.integer(-3, 3));
      } else {
        x(i, j) = loc(j) + scale * z;
      }
    }
  }
  return x;
}

struct Instance {
  Matrix data;
  BucketedMeans means;
};

// N <= 200, K odd and dividing N.
Instance random_instance(Rng& rng, int d, int max_k = 11) {
  const int k = 2 * rng.integer(0, (max_k - 1) / 2) + 1;
  const int block = rng.integer(1, 200 / k);
  Matrix data = random_data(rng, k * block, d);
  BucketedMeans means = bucketed_means(data, make_partition(k * block, k, rng.bits()));
  return {std::move(data), std::move(means)};
}

SymmetricSet random_finite_set(Rng& rng, int d) {
  if (rng.integer(0, 3) == 0) return SymmetricSet::cross(d);
  const int m = rng.integer(1, 6);
  Matrix pts(m, d);
  const bool integer_coords = rng.integer(0, 1) == 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) pts(i, j) = integer_coords ? rng.integer(-2, 2) : rng.normal();
  if (pts.cwiseAbs().maxCoeff() == 0.0) pts(0, 0) = 1.0;
  return SymmetricSet::finite_points(pts);
}

SymmetricSet random_set(Rng& rng, int d) {
  if (rng.integer(0, 2) == 0) return SymmetricSet::ball(d, std::pow(10.0, rng.uniform(-1.0, 1.0)));
  return random_finite_set(rng, d);
}

// A test point at the scale of the data.
Vector random_point(Rng& rng, const Matrix& means) {
  const double spread = std::max(means.cwiseAbs().maxCoeff(), 1e-3);
  return rng.normal_vector(static_cast<int>(means.cols()), spread * rng.uniform(0.1, 3.0));
}

// sum_j |a_j b_j| maximized over S: the magnitude that bounds rounding in
// <v, x> for every v in S.
double dot_magnitude(const SymmetricSet& s, const Vector& x) {
  if (!s.is_finite()) return std::get<SymmetricSet::EuclideanBall>(s.rep()).radius * x.norm();
  double m = 0.0;
  for (int i = 0; i < s.num_points(); ++i) m = std::max(m, s.point(i).cwiseProduct(x).cwiseAbs().sum());
  return m;
}

// Largest sum_j |X_kj v_j| over blocks.
double projection_magnitude(const BucketedMeans& means, const Vector& v) {
  return (means.means.cwiseAbs() * v.cwiseAbs()).maxCoeff();
}

std::string describe(const Vector& v) { return "[" + io::format_vector(v) + "]"; }

class Tracker {
 public:
  explicit Tracker(std::string name) { r_.name = std::move(name); }

  // Records one check; `violation` > 0 means it failed.
  void check(double violation, const std::function<std::string()>& detail) {
    ++checks_;
    if (violation > r_.worst) r_.worst = violation;
    if (violation > 0.0 || std::isnan(violation)) {
      ++r_.failures;
      if (r_.counterexample.empty()) r_.counterexample = detail();
    }
  }
  void case_done() { ++r_.cases; }
  SuiteResult finish() {
    r_.passed = r_.failures == 0;
    return r_;
  }
  SuiteResult& result() { return r_; }

 private:
  SuiteResult r_;
  long checks_ = 0;
};

std::uint64_t case_seed(const Options& o, const std::string& suite, long i) {
  return derive_seed(o.seed, std::hash<std::string>{}(suite), static_cast<std::uint64_t>(i));
}

// ---------------------------------------------------------------------------

SuiteResult norm_axioms(long cases, const Options& o) {
  Tracker t("norm_axioms");
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "norm_axioms", c);
    Rng rng(seed);
    const int d = rng.integer(1, 6);
    const SymmetricSet s = random_set(rng, d);
    const double sc = std::pow(10.0, rng.uniform(-3.0, 3.0));
    const Vector x = rng.normal_vector(d, sc);
    const Vector y = rng.normal_vector(d, sc);
    const double theta = rng.normal() * std::pow(10.0, rng.uniform(-2.0, 2.0));
    const double nx = s.norm(x), ny = s.norm(y);
    auto ctx = [&] { return "seed=" + std::to_string(seed) + " set=" + s.kind() + " x=" + describe(x); };

    t.check(std::abs(s.norm(Vector::Zero(d))), ctx);
    t.check(-nx, ctx);
    t.check(std::abs(s.norm(-x) - nx) - 1e-12 * dot_magnitude(s, x), ctx);
    t.check(std::abs(s.norm(theta * x) - std::abs(theta) * nx) - 1e-12 * std::abs(theta) * dot_magnitude(s, x),
            [&] { return ctx() + " theta=" + std::to_string(theta); });
    t.check(s.norm(x + y) - nx - ny - 1e-12 * (dot_magnitude(s, x) + dot_magnitude(s, y)),
            [&] { return ctx() + " y=" + describe(y); });
    // the argmax attains the norm
    t.check(std::abs(s.support_argmax(x).dot(x) - nx) - 1e-12 * dot_magnitude(s, x), ctx);
    t.case_done();
  }
  return t.finish();
}

SuiteResult homogeneity(long cases, const Options& o) {
  Tracker t("homogeneity");
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "homogeneity", c);
    Rng rng(seed);
    const Instance in = random_instance(rng, rng.integer(1, 5));
    const Vector v = rng.normal_vector(in.means.dim());
    const double theta = std::pow(10.0, rng.uniform(-3.0, 3.0));
    const double mag = theta * projection_magnitude(in.means, v);
    for (Which w : {Which::f, Which::g}) {
      const double lhs = objective_h(w, Vector(theta * v), in.means);
      const double rhs = theta * objective_h(w, v, in.means);
      t.check(std::abs(lhs - rhs) - 1e-12 * mag, [&] {
        std::ostringstream os;
        os << "seed=" << seed << (w == Which::f ? " f" : " g") << " v=" << describe(v) << " theta=" << theta
           << " h(theta v)=" << lhs << " theta h(v)=" << rhs;
        return os.str();
      });
    }
    t.case_done();
  }
  return t.finish();
}

// Lower-middle order statistic of an even number of blocks: the corrupted
// "median" used by the negative control.
double lower_middle(const Vector& v, const Matrix& means) {
  Vector p = means * v;
  std::vector<double> vals(p.data(), p.data() + p.size());
  std::sort(vals.begin(), vals.end());
  return vals[vals.size() / 2 - 1];
}

SuiteResult oddness(long cases, const Options& o) {
  Tracker t("oddness");
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "oddness", c);
    Rng rng(seed);
    const int d = rng.integer(1, 5);
    if (o.inject_even_k_fault) {
      const int k = 2 * rng.integer(1, 5);
      const Matrix means = random_data(rng, k, d);
      const Vector v = rng.normal_vector(d);
      const double a = lower_middle(v, means), b = lower_middle(Vector(-v), means);
      const double mag = (means.cwiseAbs() * v.cwiseAbs()).maxCoeff();
      t.check(std::abs(a + b) - 1e-12 * mag, [&] {
        std::ostringstream os;
        os << "seed=" << seed << " K=" << k << " (even) v=" << describe(v) << " h(v)=" << a << " h(-v)=" << b;
        return os.str();
      });
      t.case_done();
      continue;
    }
    const Instance in = random_instance(rng, d);
    const Vector v = rng.normal_vector(d);
    const double mag = projection_magnitude(in.means, v);
    for (Which w : {Which::f, Which::g}) {
      const double a = objective_h(w, v, in.means), b = objective_h(w, Vector(-v), in.means);
      t.check(std::abs(a + b) - 1e-12 * mag, [&] {
        std::ostringstream os;
        os << "seed=" << seed << (w == Which::f ? " f" : " g") << " K=" << in.means.k << " v=" << describe(v)
           << " h(v)=" << a << " h(-v)=" << b;
        return os.str();
      });
    }
    t.case_done();
  }
  return t.finish();
}

SuiteResult mom_core_properties(long cases, const Options& o) {
  Tracker t("mom_core");
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "mom_core", c);
    Rng rng(seed);
    const Instance in = random_instance(rng, rng.integer(1, 5));
    const Vector v = rng.normal_vector(in.means.dim());
    const Vector p = in.means.means * v;
    const double mag = projection_magnitude(in.means, v);
    const double tol = 1e-12 * mag;
    auto ctx = [&] { return "seed=" + std::to_string(seed) + " K=" + std::to_string(in.means.k) + " v=" + describe(v); };
    for (Which w : {Which::f, Which::g}) {
      const HEval h = evaluate_h(w, v, in.means);
      t.check(p.minCoeff() - h.value - tol, ctx);
      t.check(h.value - p.maxCoeff() - tol, ctx);
      // piecewise linear and 1-homogeneous: h(v) = <grad h(v), v>
      t.check(std::abs(h.gradient.dot(v) - h.value) - tol, ctx);
      if (in.means.k == 1) t.check(std::abs(h.value - p(0)) - tol, ctx);
    }
    const std::vector<int> active = active_interquartile_blocks(v, in.means);
    double avg = 0.0;
    for (int b : active) avg += p(b);
    avg /= static_cast<double>(active.size());
    t.check(std::abs(avg - f_interquartile(v, in.means)) - tol, ctx);
    t.check(static_cast<double>(active.size()) != interquartile_window(in.means.k).size() ? 1.0 : 0.0, ctx);
    t.case_done();
  }
  return t.finish();
}

SuiteResult sandwich(long cases, const Options& o) {
  Tracker t("sandwich");
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "sandwich", c);
    Rng rng(seed);
    const int d = rng.integer(1, 5);
    Instance in = random_instance(rng, d);
    const SymmetricSet s = random_finite_set(rng, d);
    const Vector mu = random_point(rng, in.means.means);
    const Vector b = random_point(rng, in.means.means);
    for (Which w : {Which::f, Which::g}) {
      const ObjectiveContext ctx(in.means, s, w);
      const double hm = eval_conjugate(mu, ctx).value;
      const double hb = eval_conjugate(b, ctx).value;
      const double dist = s.norm(mu - b);
      const double scale = std::max({1.0, std::abs(hm), dist, hb});
      t.check(std::abs(hm - dist) - hb - 1e-9 * scale, [&] {
        std::ostringstream os;
        os << "seed=" << seed << (w == Which::f ? " f" : " g") << " set=" << s.kind() << " mu=" << describe(mu)
           << " b=" << describe(b) << " h*(mu)=" << hm << " |mu-b|_S=" << dist << " h*(b)=" << hb;
        return os.str();
      });
    }
    t.case_done();
  }
  return t.finish();
}

SuiteResult convexity(long cases, const Options& o) {
  Tracker t("convexity");
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "convexity", c);
    Rng rng(seed);
    const int d = rng.integer(1, 5);
    const Instance in = random_instance(rng, d);
    const SymmetricSet s = random_finite_set(rng, d);
    const Vector a = random_point(rng, in.means.means);
    const Vector b = random_point(rng, in.means.means);
    const double lambda = rng.uniform(0.0, 1.0);
    const Vector m = lambda * a + (1.0 - lambda) * b;
    const Which w = rng.integer(0, 1) == 0 ? Which::f : Which::g;
    const ObjectiveContext ctx(in.means, s, w);
    const double ha = eval_conjugate(a, ctx).value, hb = eval_conjugate(b, ctx).value;
    const double hm = eval_conjugate(m, ctx).value;
    const double scale = std::max({1.0, std::abs(ha), std::abs(hb), std::abs(hm)});
    t.check(hm - lambda * ha - (1.0 - lambda) * hb - 1e-12 * scale, [&] {
      std::ostringstream os;
      os << "seed=" << seed << " a=" << describe(a) << " b=" << describe(b) << " lambda=" << lambda
         << " h*(mid)=" << hm << " chord=" << lambda * ha + (1.0 - lambda) * hb;
      return os.str();
    });
    // every individual point of S is a lower-bound witness
    for (int i = 0; i < s.num_points(); ++i) {
      const Vector v = s.point(i);
      const double witness = a.dot(v) - objective_h(w, v, in.means);
      t.check(witness - ha - 1e-12 * scale, [&] { return "seed=" + std::to_string(seed) + " witness v=" + describe(v); });
    }
    t.case_done();
  }
  return t.finish();
}

// Exact enumeration against the brute-force oracle, plus the d = 2
// regularized conjugate (certified path) against the exact planar oracle and
// its convexity.
SuiteResult conjugate_oracle(long cases, const Options& o) {
  Tracker t("conjugate_oracle");
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "conjugate_oracle", c);
    Rng rng(seed);
    const int d = rng.integer(1, 2);
    const Instance in = random_instance(rng, d);
    SymmetricSet s = random_finite_set(rng, d);
    if (!s.spans_full()) s = SymmetricSet::cross(d);
    const Which w = rng.integer(0, 1) == 0 ? Which::f : Which::g;
    const ObjectiveContext ctx(in.means, s, w);
    const Vector a = random_point(rng, in.means.means);
    const Vector b = random_point(rng, in.means.means);
    const double lambda = rng.uniform(0.0, 1.0);
    const Vector m = lambda * a + (1.0 - lambda) * b;
    auto ctxs = [&] {
      return "seed=" + std::to_string(seed) + (w == Which::f ? " f" : " g") + " set=" + s.kind() + " mu=" + describe(a);
    };

    const double lib = eval_conjugate(a, ctx).value;
    const double ref = oracle::brute_conjugate(a, in.means.means, s, w);
    t.check(std::abs(lib - ref) - 1e-12 * std::max(1.0, std::abs(ref)), ctxs);

    if (d == 2) {
      const Matrix pts = s.points_matrix();
      auto exact_reg = [&](const Vector& mu) {
        const double r = std::max(0.0, oracle::exact_planar_ratio_sup(mu, in.means.means, pts, w).value);
        return r * r;
      };
      const double fa = eval_regularized_conjugate(a, ctx).value;
      const double fb = eval_regularized_conjugate(b, ctx).value;
      const double fm = eval_regularized_conjugate(m, ctx).value;
      const double ra = exact_reg(a);
      t.check(std::abs(fa - ra) - 1e-9 * std::max(1.0, ra), [&] {
        std::ostringstream os;
        os << ctxs() << " regularized lib=" << fa << " oracle=" << ra;
        return os.str();
      });
      const double scale = std::max({1.0, fa, fb, fm});
      t.check(fm - lambda * fa - (1.0 - lambda) * fb - 1e-12 * scale,
              [&] { return ctxs() + " regularized convexity b=" + describe(b); });
    }
    t.case_done();
  }
  return t.finish();
}

// Ball in d = 2: the heuristic inner solver never beats the exact sup
// (dominance) and reaches it closely in nearly every case.
SuiteResult ball_inner(long cases, const Options& o) {
  Tracker t("ball_inner");
  long close = 0;
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "ball_inner", c);
    Rng rng(seed);
    const Instance in = random_instance(rng, 2, 29);
    const SymmetricSet s = SymmetricSet::ball(2);
    const Which w = rng.integer(0, 1) == 0 ? Which::f : Which::g;
    const ObjectiveContext ctx(in.means, s, w);
    const Vector mu = random_point(rng, in.means.means);
    const double lib = eval_conjugate(mu, ctx).value;
    const double exact = std::max(0.0, oracle::exact_planar_sup(mu, in.means.means, w).value);
    const double scale = std::max({1.0, exact, in.means.means.cwiseAbs().maxCoeff()});
    t.check(lib - exact - 1e-9 * scale, [&] {
      std::ostringstream os;
      os << "seed=" << seed << " mu=" << describe(mu) << " lib=" << lib << " exact=" << exact;
      return os.str();
    });
    if (exact - lib <= 1e-3 * scale) ++close;
    t.case_done();
  }
  SuiteResult r = t.finish();
  const double frac = cases > 0 ? static_cast<double>(close) / static_cast<double>(cases) : 1.0;
  if (frac < 0.95) {
    r.passed = false;
    r.counterexample += (r.counterexample.empty() ? "" : "; ") + std::string("only ") + std::to_string(frac) +
                        " of cases within 1e-3 of the exact sup";
  }
  return r;
}

// For S = cross and which = g the conjugate objective is ||mu - m||_inf with
// m the coordinatewise median of block means, so the solver must land there.
SuiteResult closed_form(long cases, const Options& o) {
  Tracker t("closed_form");
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "closed_form", c);
    Rng rng(seed);
    const Matrix data = random_data(rng, 200, 5);
    SolverConfig cfg;
    cfg.seed = rng.bits();
    const EstimateResult r = solve_fenchel_min(data, 5, SymmetricSet::cross(5), Which::g, cfg);
    const Vector cw = coordinatewise_mom(data, 5, cfg.seed);
    const double scale = data_scale(bucketed_means(data, make_partition(200, 5, cfg.seed)));
    t.check((r.mu - cw).cwiseAbs().maxCoeff() - 1e-3 * scale, [&] {
      return "seed=" + std::to_string(seed) + " solver=" + describe(r.mu) + " cwmom=" + describe(cw);
    });
    t.case_done();
  }
  return t.finish();
}

// sup over nu of the minmax MOM objective, taken over 10^4 directions with
// the step length maximized in closed form, equals the squared clipped
// sphere sup of <mu,u> - g(u) over the same directions.
SuiteResult minmax_equivalence(long cases, const Options& o) {
  Tracker t("minmax_equivalence");
  constexpr int kDirections = 10000;
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "minmax_equivalence", c);
    Rng rng(seed);
    const Matrix data = random_data(rng, 60, 2);
    const BucketedMeans means = bucketed_means(data, make_partition(60, 5, rng.bits()));
    const Vector mu = random_point(rng, means.means);
    double lhs = 0.0;  // nu = mu gives 0
    double sphere = -std::numeric_limits<double>::infinity();
    double identity_gap = 0.0;
    for (int i = 0; i < kDirections; ++i) {
      const double ang = 2.0 * std::numbers::pi * i / kDirections;
      Vector u(2);
      u << std::cos(ang), std::sin(ang);
      // objective(mu, mu + theta u) = 2 theta c(u) - theta^2
      const double cu = 0.5 * (minmax_mom_objective(mu, mu + u, means) + 1.0);
      const double theta = std::max(0.0, cu);
      const double val = minmax_mom_objective(mu, mu + theta * u, means);
      identity_gap = std::max(identity_gap, std::abs(val - theta * theta));
      lhs = std::max(lhs, val);
      sphere = std::max(sphere, mu.dot(u) - g_median(u, means));
    }
    const double rhs = std::pow(std::max(0.0, sphere), 2);
    t.check(std::abs(lhs - rhs) - 1e-6, [&] {
      std::ostringstream os;
      os << "seed=" << seed << " mu=" << describe(mu) << " sup_nu=" << lhs << " sphere^2=" << rhs;
      return os.str();
    });
    t.check(identity_gap - 1e-6, [&] { return "seed=" + std::to_string(seed) + " theta identity gap"; });
    t.case_done();
  }
  return t.finish();
}

SuiteResult minmax_oracle(long cases, const Options& o) {
  Tracker t("minmax_oracle");
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "minmax_oracle", c);
    Rng rng(seed);
    const int d = rng.integer(1, 5);
    const int k = 2 * rng.integer(0, 5) + 1;
    const int n = k * rng.integer(1, 20);
    const Matrix data = random_data(rng, n, d);
    const BlockPartition part = make_partition(n, k, rng.bits());
    const BucketedMeans means = bucketed_means(data, part);
    const Vector mu = random_point(rng, means.means), nu = random_point(rng, means.means);
    const double lib = minmax_mom_objective(mu, nu, means);
    const double ref = oracle::minmax_objective_oracle(mu, nu, data, part);
    // relative to the size of the squared distances being differenced
    double mag = 0.0;
    for (Eigen::Index i = 0; i < data.rows(); ++i)
      mag = std::max(mag, (data.row(i).transpose() - mu).squaredNorm() + (data.row(i).transpose() - nu).squaredNorm());
    t.check(std::abs(lib - ref) - 1e-10 * std::max(std::abs(ref), mag), [&] {
      std::ostringstream os;
      os << "seed=" << seed << " lib=" << lib << " oracle=" << ref;
      return os.str();
    });
    t.case_done();
  }
  return t.finish();
}

// solve_fenchel_min against the dense grid argmin in d = 2 (finite S).
SuiteResult grid_argmin(long cases, const Options& o) {
  Tracker t("grid_argmin");
  for (long c = 0; c < cases; ++c) {
    const std::uint64_t seed = case_seed(o, "grid_argmin", c);
    Rng rng(seed);
    const Matrix data = random_data(rng, 60, 2);
    const BucketedMeans means = bucketed_means(data, make_partition(60, 5, rng.bits()));
    SymmetricSet s = random_finite_set(rng, 2);
    if (!s.spans_full()) s = SymmetricSet::cross(2);
    const Which w = rng.integer(0, 1) == 0 ? Which::f : Which::g;
    const oracle::GridSpec grid = oracle::auto_box(means.means);
    const Vector ref = oracle::grid_argmin_conjugate(means.means, s, w, grid);
    SolverConfig cfg;
    cfg.seed = rng.bits();
    const EstimateResult r = solve_fenchel_min(means, s, w, cfg);
    double cells = 0.0;
    for (int j = 0; j < 2; ++j) {
      const double h = (grid.high[static_cast<std::size_t>(j)] - grid.low[static_cast<std::size_t>(j)]) /
                       (grid.points_per_axis - 1);
      cells = std::max(cells, std::abs(r.mu(j) - ref(j)) / h);
    }
    // a flat minimum is fine as long as the solver's value is no worse
    const double v_lib = oracle::brute_conjugate(r.mu, means.means, s, w);
    const double v_ref = oracle::brute_conjugate(ref, means.means, s, w);
    const bool ok = cells <= 2.0 || v_lib <= v_ref + 1e-9 * std::max(1.0, std::abs(v_ref));
    t.check(ok ? 0.0 : cells - 2.0, [&] {
      std::ostringstream os;
      os << "seed=" << seed << " set=" << s.kind() << " solver=" << describe(r.mu) << " (" << v_lib
         << ") grid=" << describe(ref) << " (" << v_ref << ")";
      return os.str();
    });
    t.case_done();
  }
  return t.finish();
}

}  // namespace

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"norm_axioms", "seminorm axioms of ||.||_S and the support argmax", 10000, norm_axioms},
      {"homogeneity", "h(theta v) = theta h(v) for f and g", 10000, homogeneity},
      {"oddness", "h(-v) = -h(v) for f and g", 10000, oddness},
      {"mom_core", "bounds, K = 1, active-block average, Euler identity", 10000, mom_core_properties},
      {"sandwich", "|h*(mu) - ||mu - b||_S| <= h*(b), finite S", 1000, sandwich},
      {"convexity", "midpoint convexity and lower-bound witnesses, finite S", 10000, convexity},
      {"conjugate_oracle", "enumeration and planar regularized conjugate vs oracles", 2000, conjugate_oracle},
      {"ball_inner", "heuristic ball conjugate vs exact planar sup", 1000, ball_inner},
      {"closed_form", "cross(5), g: solver equals coordinatewise MOM", 50, closed_form},
      {"minmax_equivalence", "sup over nu of minmax MOM = squared clipped sphere sup", 20, minmax_equivalence},
      {"minmax_oracle", "minmax MOM objective vs per-sample recomputation", 1000, minmax_oracle},
      {"grid_argmin", "solver vs dense grid argmin, d = 2", 10, grid_argmin},
  };
  return all;
}

std::vector<SuiteResult> run(const std::vector<std::string>& selector, const Options& opts) {
  for (const auto& name : selector) {
    const bool known = std::any_of(suites().begin(), suites().end(), [&](const Suite& s) { return s.name == name; });
    if (!known) throw UsageError("verify: unknown suite '" + name + "'");
  }
  std::vector<SuiteResult> out;
  for (const Suite& s : suites()) {
    if (!selector.empty() && std::find(selector.begin(), selector.end(), s.name) == selector.end()) continue;
    const long n = std::max(1L, std::lround(static_cast<double>(s.default_cases) * opts.scale));
    out.push_back(s.run(n, opts));
  }
  return out;
}

std::string format(const std::vector<SuiteResult>& results) {
  std::ostringstream os;
  int failed = 0;
  for (const SuiteResult& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << "  cases=" << r.cases << " failures=" << r.failures
       << " worst=" << r.worst << "\n";
    if (!r.passed) {
      ++failed;
      os << "  counterexample: " << r.counterexample << "\n";
    }
  }
  os << (failed == 0 ? "all suites passed" : std::to_string(failed) + " suite(s) failed") << "\n";
  return os.str();
}

}  // namespace mom::verify
