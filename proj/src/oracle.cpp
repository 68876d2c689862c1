#include "mom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mom::oracle {

namespace {

// Fully sorted order statistics; independent of the library's rank logic.
double brute_h(std::vector<double> proj, Which which) {
  const int k = static_cast<int>(proj.size());
  if (k % 2 == 0) throw UsageError("oracle: K must be odd");
  std::sort(proj.begin(), proj.end());
  if (which == Which::g) return proj[static_cast<std::size_t>((k + 1) / 2 - 1)];
  const int lo = static_cast<int>(std::ceil((k + 1) / 4.0));
  const int hi = static_cast<int>(std::floor(3.0 * (k + 1) / 4.0));
  double sum = 0.0;
  for (int r = lo; r <= hi; ++r) sum += proj[static_cast<std::size_t>(r - 1)];
  return sum / (hi - lo + 1);
}

double phi(const Vector& mu, const Matrix& x, const Vector& v, Which which) {
  std::vector<double> proj(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) acc += x(k, j) * v(j);
    proj[static_cast<std::size_t>(k)] = acc;
  }
  double lin = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) lin += mu(j) * v(j);
  return lin - brute_h(std::move(proj), which);
}

Vector unit_direction(int i, int resolution) {
  const double angle = 2.0 * std::numbers::pi * i / resolution;
  Vector v(2);
  v << std::cos(angle), std::sin(angle);
  return v;
}

}  // namespace

GridSpec auto_box(const Matrix& block_means) {
  GridSpec g;
  for (Eigen::Index j = 0; j < block_means.cols(); ++j) {
    const double lo = block_means.col(j).minCoeff();
    const double hi = block_means.col(j).maxCoeff();
    const double range = hi > lo ? hi - lo : 1.0;
    g.low.push_back(lo - range);
    g.high.push_back(hi + range);
  }
  return g;
}

SupResult grid_inner_sup(const Vector& mu, const Matrix& block_means, Which which, int resolution) {
  if (mu.size() != 2 || block_means.cols() != 2) throw UsageError("grid_inner_sup: only d = 2 is supported");
  if (resolution < 4) throw UsageError("grid_inner_sup: resolution must be >= 4");
  SupResult best{-std::numeric_limits<double>::infinity(), Vector()};
  for (int i = 0; i < resolution; ++i) {
    Vector v = unit_direction(i, resolution);
    const double val = phi(mu, block_means, v, which);
    if (val > best.value) best = {val, v};
  }
  return best;
}

SupResult exact_planar_sup(const Vector& mu, const Matrix& block_means, Which which) {
  if (mu.size() != 2 || block_means.cols() != 2) throw UsageError("exact_planar_sup: only d = 2 is supported");
  const Eigen::Index k = block_means.rows();
  std::vector<double> cuts;
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a + 1; b < k; ++b) {
      const double dx = block_means(a, 0) - block_means(b, 0);
      const double dy = block_means(a, 1) - block_means(b, 1);
      if (dx == 0.0 && dy == 0.0) continue;
      const double t = std::atan2(dx, -dy);  // direction orthogonal to the difference
      cuts.push_back(t);
      cuts.push_back(t + std::numbers::pi);
    }
  }
  auto wrap = [](double t) {
    t = std::fmod(t, 2.0 * std::numbers::pi);
    return t < 0.0 ? t + 2.0 * std::numbers::pi : t;
  };
  for (double& c : cuts) c = wrap(c);
  cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto dir = [](double t) {
    Vector v(2);
    v << std::cos(t), std::sin(t);
    return v;
  };
  SupResult best{-std::numeric_limits<double>::infinity(), Vector()};
  auto offer = [&](const Vector& v) {
    const double val = phi(mu, block_means, v, which);
    if (val > best.value) best = {val, v};
  };
  const std::size_t m = cuts.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double lo = cuts[i];
    const double hi = i + 1 < m ? cuts[i + 1] : 2.0 * std::numbers::pi;
    offer(dir(lo));
    // inside the arc the ordering is fixed: phi(v) = <mu - c, v> with c the
    // average of the active block means at the midpoint
    const Vector mid = dir(0.5 * (lo + hi));
    std::vector<std::pair<double, Eigen::Index>> proj;
    for (Eigen::Index b = 0; b < k; ++b) proj.emplace_back(block_means(b, 0) * mid(0) + block_means(b, 1) * mid(1), b);
    std::sort(proj.begin(), proj.end());
    Vector c = Vector::Zero(2);
    int lo_rank = (static_cast<int>(k) + 1) / 2;
    int hi_rank = lo_rank;
    if (which == Which::f) {
      lo_rank = static_cast<int>(std::ceil((k + 1) / 4.0));
      hi_rank = static_cast<int>(std::floor(3.0 * (k + 1) / 4.0));
    }
    for (int r = lo_rank; r <= hi_rank; ++r) c += block_means.row(proj[static_cast<std::size_t>(r - 1)].second).transpose();
    c /= (hi_rank - lo_rank + 1);
    const Vector a = mu - c;
    if (a.norm() > 0.0) {
      const double t = wrap(std::atan2(a(1), a(0)));
      if (t > lo && t < hi) offer(dir(t));
    }
  }
  return best;
}

SupResult exact_planar_ratio_sup(const Vector& mu, const Matrix& block_means, const Matrix& points, Which which) {
  if (mu.size() != 2 || block_means.cols() != 2 || points.cols() != 2)
    throw UsageError("exact_planar_ratio_sup: only d = 2 is supported");
  std::vector<double> cuts{0.0, std::numbers::pi / 2, std::numbers::pi, 1.5 * std::numbers::pi};
  auto add_normals = [&](const Matrix& rows) {
    for (Eigen::Index a = 0; a < rows.rows(); ++a) {
      for (Eigen::Index b = a + 1; b < rows.rows(); ++b) {
        const double dx = rows(a, 0) - rows(b, 0);
        const double dy = rows(a, 1) - rows(b, 1);
        if (dx == 0.0 && dy == 0.0) continue;
        const double t = std::atan2(dx, -dy);
        cuts.push_back(t);
        cuts.push_back(t + std::numbers::pi);
      }
    }
  };
  add_normals(block_means);
  add_normals(points);
  SupResult best{-std::numeric_limits<double>::infinity(), Vector()};
  for (double t : cuts) {
    Vector u(2);
    u << std::cos(t), std::sin(t);
    double norm = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < points.rows(); ++i) norm = std::max(norm, points(i, 0) * u(0) + points(i, 1) * u(1));
    if (!(norm > 0.0)) throw UsageError("exact_planar_ratio_sup: point set does not span the plane");
    const double val = phi(mu, block_means, u, which) / norm;
    if (val > best.value) best = {val, u};
  }
  return best;
}

double brute_conjugate(const Vector& mu, const Matrix& block_means, const SymmetricSet& s, Which which) {
  const int d = s.dim();
  if (s.is_finite()) {
    const Matrix pts = s.points_matrix();
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < pts.rows(); ++i) best = std::max(best, phi(mu, block_means, pts.row(i).transpose(), which));
    return best;
  }
  const double radius = std::get<SymmetricSet::EuclideanBall>(s.rep()).radius;
  double best = 0.0;  // v = 0 is in the ball
  if (d == 1) {
    for (double sign : {1.0, -1.0}) best = std::max(best, radius * phi(mu, block_means, Vector::Constant(1, sign), which));
    return best;
  }
  if (d != 2) throw UsageError("brute_conjugate: ball only supported for d <= 2");
  return std::max(best, radius * exact_planar_sup(mu, block_means, which).value);
}

Vector grid_argmin_conjugate(const Matrix& block_means, const SymmetricSet& s, Which which, const GridSpec& grid,
                             Exec exec) {
  const int d = s.dim();
  if (d > 2 || block_means.cols() != d) throw UsageError("grid_argmin_conjugate: only d <= 2 is supported");
  if (grid.points_per_axis < 3) throw UsageError("grid_argmin_conjugate: need >= 3 points per axis");
  if (static_cast<int>(grid.low.size()) != d || static_cast<int>(grid.high.size()) != d)
    throw UsageError("grid_argmin_conjugate: box dimension mismatch");
  for (int j = 0; j < d; ++j)
    if (!(grid.high[static_cast<std::size_t>(j)] > grid.low[static_cast<std::size_t>(j)]))
      throw UsageError("grid_argmin_conjugate: degenerate box");

  const int p = grid.points_per_axis;
  const int total = d == 1 ? p : p * p;
  auto coord = [&](int j, int i) {
    const double lo = grid.low[static_cast<std::size_t>(j)];
    const double hi = grid.high[static_cast<std::size_t>(j)];
    return lo + (hi - lo) * i / (p - 1);
  };
  auto point = [&](int idx) {
    Vector mu(d);
    mu(0) = coord(0, idx % p);
    if (d == 2) mu(1) = coord(1, idx / p);
    return mu;
  };
  std::vector<double> values(static_cast<std::size_t>(total));
  auto eval = [&](int idx) {
    values[static_cast<std::size_t>(idx)] = brute_conjugate(point(idx), block_means, s, which);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (int idx = 0; idx < total; ++idx) eval(idx);
  } else {
    for (int idx = 0; idx < total; ++idx) eval(idx);
  }
  const auto best = std::min_element(values.begin(), values.end()) - values.begin();
  return point(static_cast<int>(best));
}

double minmax_objective_oracle(const Vector& mu, const Vector& nu, const Matrix& data, const BlockPartition& partition) {
  if (partition.k % 2 == 0) throw UsageError("minmax_objective_oracle: K must be odd");
  if (data.rows() != partition.n) throw UsageError("minmax_objective_oracle: row count mismatch");
  std::vector<double> per_block;
  per_block.reserve(static_cast<std::size_t>(partition.k));
  for (const auto& block : partition.blocks) {
    double acc = 0.0;
    for (int i : block) {
      const Vector x = data.row(i).transpose();
      acc += (x - mu).squaredNorm() - (x - nu).squaredNorm();
    }
    per_block.push_back(acc / static_cast<double>(block.size()));
  }
  std::sort(per_block.begin(), per_block.end());
  return per_block[per_block.size() / 2];
}

}  // namespace mom::oracle
