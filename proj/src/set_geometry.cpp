#include "mom/set_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mom {

SymmetricSet SymmetricSet::finite_points(const Matrix& points) {
  require(points.rows() >= 1, "finite point set needs at least one point");
  require(points.cols() >= 1, "finite point set needs dimension >= 1");
  const int d = static_cast<int>(points.cols());
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(2 * points.rows()));
  auto contains = [&](const Vector& v) {
    return std::any_of(pts.begin(), pts.end(), [&](const Vector& p) { return p == v; });
  };
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    Vector v = points.row(i).transpose();
    require(v.allFinite(), "finite point set contains a non-finite coordinate");
    if (!contains(v)) pts.push_back(std::move(v));
  }
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vector neg = -pts[i];
    if (!contains(neg)) pts.push_back(std::move(neg));
  }
  Matrix stacked(static_cast<Eigen::Index>(pts.size()), d);
  for (std::size_t i = 0; i < pts.size(); ++i) stacked.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  const bool full = Eigen::FullPivLU<Matrix>(stacked).rank() == d;
  return SymmetricSet(FinitePoints{std::move(pts)}, d, full);
}

SymmetricSet SymmetricSet::cross(int dim) {
  require(dim >= 1, "cross needs dimension >= 1");
  return SymmetricSet(CanonicalCross{dim}, dim, true);
}

SymmetricSet SymmetricSet::ball(int dim, double radius) {
  require(dim >= 1, "ball needs dimension >= 1");
  require(radius > 0.0 && std::isfinite(radius), "ball radius must be positive");
  return SymmetricSet(EuclideanBall{dim, radius}, dim, true);
}

std::string SymmetricSet::kind() const {
  switch (rep_.index()) {
    case 0: return "points";
    case 1: return "cross";
    default: return "ball";
  }
}

int SymmetricSet::num_points() const {
  if (const auto* f = std::get_if<FinitePoints>(&rep_)) return static_cast<int>(f->points.size());
  if (std::holds_alternative<CanonicalCross>(rep_)) return 2 * dim_;
  return 0;
}

Vector SymmetricSet::point(int i) const {
  require(i >= 0 && i < num_points(), "point index out of range");
  if (const auto* f = std::get_if<FinitePoints>(&rep_)) return f->points[static_cast<std::size_t>(i)];
  Vector v = Vector::Zero(dim_);
  v(i / 2) = (i % 2 == 0) ? 1.0 : -1.0;
  return v;
}

Matrix SymmetricSet::points_matrix() const {
  Matrix m(num_points(), dim_);
  for (int i = 0; i < num_points(); ++i) m.row(i) = point(i).transpose();
  return m;
}

double SymmetricSet::norm(const Vector& x) const {
  require_dim(x.size(), dim_, "norm_S");
  if (const auto* f = std::get_if<FinitePoints>(&rep_)) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : f->points) best = std::max(best, p.dot(x));
    return best;
  }
  if (std::holds_alternative<CanonicalCross>(rep_)) return x.cwiseAbs().maxCoeff();
  return std::get<EuclideanBall>(rep_).radius * x.norm();
}

Vector SymmetricSet::support_argmax(const Vector& x) const {
  require_dim(x.size(), dim_, "support_argmax");
  if (const auto* f = std::get_if<FinitePoints>(&rep_)) {
    std::size_t best_i = 0;
    double best = f->points[0].dot(x);
    for (std::size_t i = 1; i < f->points.size(); ++i) {
      const double val = f->points[i].dot(x);
      if (val > best) {
        best = val;
        best_i = i;
      }
    }
    return f->points[best_i];
  }
  if (std::holds_alternative<CanonicalCross>(rep_)) {
    // first maximizer in the order e_1, -e_1, e_2, -e_2, ...
    int best_i = 0;
    double best = x(0);
    for (int i = 1; i < 2 * dim_; ++i) {
      const double val = (i % 2 == 0) ? x(i / 2) : -x(i / 2);
      if (val > best) {
        best = val;
        best_i = i;
      }
    }
    return point(best_i);
  }
  const double nx = x.norm();
  if (nx == 0.0) return Vector::Zero(dim_);
  return (std::get<EuclideanBall>(rep_).radius / nx) * x;
}

double norm_S(const Vector& x, const SymmetricSet& s) { return s.norm(x); }
Vector support_argmax(const Vector& x, const SymmetricSet& s) { return s.support_argmax(x); }

// -- covariance ---------------------------------------------------------------

namespace {

Matrix psd_sqrt(const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  if (eig.info() != Eigen::Success) throw UsageError("covariance eigendecomposition failed");
  const Vector& lam = eig.eigenvalues();
  const double top = std::max(0.0, lam.maxCoeff());
  const double tol_psd = 1e-10 * top;
  if (lam.minCoeff() < -tol_psd) throw UsageError("covariance matrix is not positive semidefinite");
  const Vector root = lam.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

CovarianceModel CovarianceModel::identity(int dim) {
  require(dim >= 1, "covariance needs dimension >= 1");
  return CovarianceModel(Kind::identity, Matrix::Identity(dim, dim), Matrix::Identity(dim, dim));
}

CovarianceModel CovarianceModel::diagonal(const Vector& eigenvalues) {
  require(eigenvalues.size() >= 1, "covariance needs dimension >= 1");
  require((eigenvalues.array() >= 0.0).all(), "diagonal covariance entries must be >= 0");
  return CovarianceModel(Kind::diagonal, Matrix(eigenvalues.asDiagonal()),
                         Matrix(eigenvalues.cwiseSqrt().asDiagonal()));
}

CovarianceModel CovarianceModel::dense(const Matrix& sigma) {
  require(sigma.rows() >= 1 && sigma.rows() == sigma.cols(), "covariance must be square");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  require((sigma - sigma.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "covariance must be symmetric");
  return CovarianceModel(Kind::dense, sigma, psd_sqrt(sigma));
}

Vector CovarianceModel::apply_sqrt(const Vector& x) const {
  require_dim(x.size(), dim_, "apply_sqrt");
  switch (kind_) {
    case Kind::identity: return x;
    case Kind::diagonal: return sqrt_.diagonal().cwiseProduct(x);
    default: return sqrt_ * x;
  }
}

double CovarianceModel::largest_eigenvalue() const {
  switch (kind_) {
    case Kind::identity: return 1.0;
    case Kind::diagonal: return sigma_.diagonal().maxCoeff();
    default: return power_iteration_top_eigenvalue(sigma_);
  }
}

double power_iteration_top_eigenvalue(const Matrix& sym, double rel_tol, int max_iters) {
  const Eigen::Index n = sym.rows();
  require(n >= 1 && sym.cols() == n, "power iteration needs a square matrix");
  // deterministic start with no special alignment to coordinate axes
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.1 * std::sin(1.0 + static_cast<double>(i));
  x.normalize();
  double lambda = x.dot(sym * x);
  for (int it = 0; it < max_iters; ++it) {
    Vector y = sym * x;
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    const Vector ax = sym * x;
    const double next = x.dot(ax);
    // the Rayleigh quotient can stall without x being an eigenvector (e.g.
    // eigenvalues +1 and -1), so the residual has to be small too
    const bool settled = std::abs(next - lambda) <= rel_tol * std::abs(next);
    if (settled && (ax - next * x).norm() <= std::sqrt(rel_tol) * std::abs(next)) return next;
    lambda = next;
  }
  throw ConvergenceError("power iteration did not converge", x);
}

// -- complexity quantities ----------------------------------------------------

McEstimate gaussian_mean_width(const SymmetricSet& s, const CovarianceModel& sigma,
                               std::int64_t n_samples, std::uint64_t seed, Exec exec) {
  require(n_samples >= 100, "gaussian_mean_width needs n_samples >= 100");
  require_dim(sigma.dim(), s.dim(), "gaussian_mean_width");
  const int d = s.dim();
  auto draw = [&](std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vector g(d);
    for (int j = 0; j < d; ++j) g(j) = normal(rng);
    return s.norm(sigma.apply_sqrt(g));
  };
  return to_estimate(run_chunked(n_samples, seed, exec, draw));
}

double weak_variance(const SymmetricSet& s, const CovarianceModel& sigma) {
  require_dim(sigma.dim(), s.dim(), "weak_variance");
  if (s.is_finite()) {
    double best = 0.0;
    for (int i = 0; i < s.num_points(); ++i) best = std::max(best, sigma.apply_sqrt(s.point(i)).norm());
    return best;
  }
  const double radius = std::get<SymmetricSet::EuclideanBall>(s.rep()).radius;
  return radius * std::sqrt(std::max(0.0, sigma.largest_eigenvalue()));
}

McEstimate rademacher_complexity(const Matrix& data, const Vector& center, const SymmetricSet& s,
                                 std::int64_t n_samples, std::uint64_t seed, Exec exec) {
  require(data.rows() >= 1, "rademacher_complexity needs N >= 1");
  require(n_samples >= 1, "rademacher_complexity needs n_samples >= 1");
  require_dim(data.cols(), s.dim(), "rademacher_complexity");
  require_dim(center.size(), s.dim(), "rademacher_complexity center");
  const Matrix centered = data.rowwise() - center.transpose();
  const double scale = 1.0 / std::sqrt(static_cast<double>(data.rows()));
  auto draw = [&](std::mt19937_64& rng) {
    std::bernoulli_distribution coin;
    Vector acc = Vector::Zero(s.dim());
    for (Eigen::Index i = 0; i < centered.rows(); ++i) {
      if (coin(rng)) acc += centered.row(i).transpose();
      else acc -= centered.row(i).transpose();
    }
    return s.norm(scale * acc);
  };
  return to_estimate(run_chunked(n_samples, seed, exec, draw));
}

}  // namespace mom
