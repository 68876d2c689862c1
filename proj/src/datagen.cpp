#include "mom/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mom {

InlierModel InlierModel::gaussian(Vector location, CovarianceModel sigma) {
  require_dim(sigma.dim(), location.size(), "gaussian model");
  return InlierModel(GaussianModel{std::move(location), std::move(sigma)});
}

InlierModel InlierModel::coord_cauchy(Vector location, Vector scale) {
  require_dim(scale.size(), location.size(), "coordinate Cauchy model");
  require((scale.array() > 0.0).all(), "coordinate Cauchy scales must be positive");
  return InlierModel(CoordCauchyModel{std::move(location), std::move(scale)});
}

InlierModel InlierModel::spherical(Vector location, RadialLaw radial) {
  require(location.size() >= 1, "spherical model needs dimension >= 1");
  return InlierModel(SphericalModel{std::move(location), radial});
}

InlierModel InlierModel::student_t(Vector location, CovarianceModel sigma, double dof) {
  require_dim(sigma.dim(), location.size(), "student-t model");
  require(dof > 0.0, "student-t degrees of freedom must be positive");
  return InlierModel(StudentTModel{std::move(location), std::move(sigma), dof});
}

const Vector& InlierModel::location() const {
  return std::visit([](const auto& m) -> const Vector& { return m.location; }, rep_);
}

std::string InlierModel::kind() const {
  switch (rep_.index()) {
    case 0: return "gaussian";
    case 1: return "coord_cauchy";
    case 2: return std::get<SphericalModel>(rep_).radial == RadialLaw::chi ? "spherical_chi" : "spherical_half_cauchy";
    default: return "student_t";
  }
}

namespace {

void fill_normal(std::mt19937_64& rng, Eigen::Ref<Vector> out) {
  std::normal_distribution<double> normal;
  for (Eigen::Index j = 0; j < out.size(); ++j) out(j) = normal(rng);
}

}  // namespace

void InlierModel::sample_row(std::mt19937_64& rng, Eigen::Ref<Vector> out) const {
  const int d = dim();
  if (const auto* g = std::get_if<GaussianModel>(&rep_)) {
    Vector z(d);
    fill_normal(rng, z);
    out = g->location + g->sigma.apply_sqrt(z);
  } else if (const auto* c = std::get_if<CoordCauchyModel>(&rep_)) {
    std::cauchy_distribution<double> cauchy;
    for (int j = 0; j < d; ++j) out(j) = c->location(j) + c->scale(j) * cauchy(rng);
  } else if (const auto* s = std::get_if<SphericalModel>(&rep_)) {
    Vector u(d);
    do {
      fill_normal(rng, u);
    } while (u.norm() == 0.0);
    u.normalize();
    double radius;
    if (s->radial == RadialLaw::chi) {
      std::chi_squared_distribution<double> chi2(static_cast<double>(d));
      radius = std::sqrt(chi2(rng));
    } else {
      std::cauchy_distribution<double> cauchy;
      radius = std::abs(cauchy(rng));
    }
    out = s->location + radius * u;
  } else {
    const auto& t = std::get<StudentTModel>(rep_);
    Vector z(d);
    fill_normal(rng, z);
    std::chi_squared_distribution<double> chi2(t.dof);
    const double w = chi2(rng);
    out = t.location + t.sigma.apply_sqrt(z) / std::sqrt(w / t.dof);
  }
}

std::optional<CovarianceModel> InlierModel::covariance() const {
  if (const auto* g = std::get_if<GaussianModel>(&rep_)) return g->sigma;
  if (const auto* s = std::get_if<SphericalModel>(&rep_)) {
    if (s->radial == RadialLaw::chi) return CovarianceModel::identity(dim());
    return std::nullopt;
  }
  if (const auto* t = std::get_if<StudentTModel>(&rep_)) {
    if (t->dof <= 2.0) return std::nullopt;
    return CovarianceModel::dense(t->sigma.matrix() * (t->dof / (t->dof - 2.0)));
  }
  return std::nullopt;
}

Matrix sample_inliers(const InlierModel& model, int n, std::uint64_t seed, Exec exec) {
  require(n >= 1, "sample_inliers: need N >= 1");
  // column-major storage keeps rows strided, so rows are drawn into a
  // row-major buffer first
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor rows(n, model.dim());
  const int chunks = (n + kRowsPerChunk - 1) / kRowsPerChunk;
  auto run_chunk = [&](int c) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    Vector row(model.dim());
    const int hi = std::min(n, (c + 1) * kRowsPerChunk);
    for (int i = c * kRowsPerChunk; i < hi; ++i) {
      model.sample_row(rng, row);
      rows.row(i) = row.transpose();
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  }
  return Matrix(rows);
}

int outlier_count(const ContaminationStrategy& strategy) {
  return std::visit(
      [](const auto& s) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, NoContamination>) return 0;
        else return s.count;
      },
      strategy);
}

std::string strategy_kind(const ContaminationStrategy& strategy) {
  switch (strategy.index()) {
    case 0: return "none";
    case 1: return "far_point";
    case 2: return "largest_norm";
    default: return "mean_shift";
  }
}

ContaminatedDataset contaminate(const Matrix& clean, const ContaminationStrategy& strategy, std::uint64_t seed) {
  const int n = static_cast<int>(clean.rows());
  const auto d = clean.cols();
  const int count = outlier_count(strategy);
  require(count >= 0 && count <= n, "contaminate: outlier count must be in [0, N]");

  ContaminatedDataset out;
  out.data = clean;
  out.seed = seed;
  std::mt19937_64 rng(seed);

  auto random_rows = [&]() {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(static_cast<std::size_t>(count));
    std::sort(idx.begin(), idx.end());
    return idx;
  };

  if (const auto* fp = std::get_if<FarPoint>(&strategy)) {
    out.outliers = random_rows();
    Vector dir;
    if (fp->rule == DirectionRule::fixed) {
      require_dim(fp->direction.size(), d, "contaminate: far-point direction");
      require(fp->direction.norm() > 0.0, "contaminate: far-point direction must be nonzero");
      dir = fp->direction.normalized();
    }
    std::normal_distribution<double> normal;
    for (int i : out.outliers) {
      if (fp->rule == DirectionRule::random_unit) {
        dir.resize(d);
        do {
          for (Eigen::Index j = 0; j < d; ++j) dir(j) = normal(rng);
        } while (dir.norm() == 0.0);
        dir.normalize();
      }
      out.data.row(i) = fp->magnitude * dir.transpose();
    }
  } else if (const auto* ln = std::get_if<LargestNorm>(&strategy)) {
    require_dim(ln->replacement.size(), d, "contaminate: replacement point");
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    const Vector norms = clean.rowwise().norm();
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return norms(a) > norms(b); });
    idx.resize(static_cast<std::size_t>(count));
    std::sort(idx.begin(), idx.end());
    out.outliers = idx;
    for (int i : out.outliers) out.data.row(i) = ln->replacement.transpose();
  } else if (const auto* ms = std::get_if<MeanShiftCluster>(&strategy)) {
    require_dim(ms->shift.size(), d, "contaminate: shift vector");
    out.outliers = random_rows();
    for (int i : out.outliers) out.data.row(i) += ms->shift.transpose();
  }
  return out;
}

std::vector<McEstimate> estimate_tail_H_curve(const InlierModel& model, int n, int k, const Vector& v,
                                              const std::vector<double>& rs, std::int64_t n_trials,
                                              std::uint64_t seed, Exec exec) {
  require(k >= 1 && n >= k && n % k == 0, "estimate_tail_H: K must divide N");
  require(n_trials >= 1, "estimate_tail_H: need at least one trial");
  require_dim(v.size(), model.dim(), "estimate_tail_H");
  require(v.allFinite(), "estimate_tail_H: direction must be finite");
  const int m = n / k;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  const Vector& center = model.location();

  std::vector<double> stats(static_cast<std::size_t>(n_trials));
  const int chunks = static_cast<int>(std::min<std::int64_t>(kMcChunks, n_trials));
  auto run_chunk = [&](int c) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    Vector row(model.dim());
    const std::int64_t lo = n_trials * c / chunks;
    const std::int64_t hi = n_trials * (c + 1) / chunks;
    for (std::int64_t t = lo; t < hi; ++t) {
      double sum = 0.0;
      for (int i = 0; i < m; ++i) {
        model.sample_row(rng, row);
        sum += (row - center).dot(v);
      }
      stats[static_cast<std::size_t>(t)] = scale * sum;
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  }

  std::sort(stats.begin(), stats.end());
  std::vector<McEstimate> out;
  out.reserve(rs.size());
  const double total = static_cast<double>(n_trials);
  for (double r : rs) {
    const auto above = stats.end() - std::upper_bound(stats.begin(), stats.end(), r);
    const double p = static_cast<double>(above) / total;
    out.push_back({p, std::sqrt(p * (1.0 - p) / total), n_trials});
  }
  return out;
}

McEstimate estimate_tail_H(const InlierModel& model, int n, int k, const Vector& v, double r,
                           std::int64_t n_trials, std::uint64_t seed, Exec exec) {
  return estimate_tail_H_curve(model, n, k, v, {r}, n_trials, seed, exec).front();
}

}  // namespace mom
