#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mom/common.hpp"
#include "mom/monte_carlo.hpp"

namespace mom {

/// A symmetric set S in R^d together with the pseudo-norm
/// ||x||_S = sup_{v in S} <v, x> it induces.
///
/// Three representations are supported: an explicit finite point set (closed
/// under negation on construction), the canonical cross {+-e_j}, and a
/// Euclidean ball of given radius. The first two are "finite": every
/// supremum over S is an exact enumeration.
class SymmetricSet {
 public:
  struct FinitePoints {
    std::vector<Vector> points;
  };
  struct CanonicalCross {
    int dim;
  };
  struct EuclideanBall {
    int dim;
    double radius;
  };
  using Variant = std::variant<FinitePoints, CanonicalCross, EuclideanBall>;

  /// Rows of `points` are kept in order; the negation of each row is appended
  /// unless it is already present.
  static SymmetricSet finite_points(const Matrix& points);
  static SymmetricSet cross(int dim);
  static SymmetricSet ball(int dim, double radius = 1.0);

  int dim() const { return dim_; }
  bool is_finite() const { return !std::holds_alternative<EuclideanBall>(rep_); }
  bool spans_full() const { return spans_full_; }
  const Variant& rep() const { return rep_; }
  std::string kind() const;

  // Number of enumerable points (2d for the cross). Zero for the ball.
  int num_points() const;
  // i-th enumerable point. Cross ordering is e_1, -e_1, e_2, -e_2, ...
  Vector point(int i) const;
  Matrix points_matrix() const;

  double norm(const Vector& x) const;
  // A point of conv(S) attaining the supremum; a subgradient of ||.||_S at x.
  Vector support_argmax(const Vector& x) const;

 private:
  SymmetricSet(Variant rep, int dim, bool spans_full)
      : rep_(std::move(rep)), dim_(dim), spans_full_(spans_full) {}

  Variant rep_;
  int dim_;
  bool spans_full_;
};

class CovarianceModel {
 public:
  static CovarianceModel identity(int dim);
  static CovarianceModel diagonal(const Vector& eigenvalues);
  static CovarianceModel dense(const Matrix& sigma);

  int dim() const { return dim_; }
  const Matrix& matrix() const { return sigma_; }
  const Matrix& sqrt_matrix() const { return sqrt_; }
  bool is_identity() const { return kind_ == Kind::identity; }

  // Sigma^{1/2} x
  Vector apply_sqrt(const Vector& x) const;

  /// Largest eigenvalue. Exact for identity/diagonal models, power
  /// iteration to relative tolerance 1e-10 (at most 10^4 steps) for dense
  /// ones. Throws ConvergenceError carrying the last iterate.
  double largest_eigenvalue() const;

 private:
  enum class Kind { identity, diagonal, dense };
  CovarianceModel(Kind kind, Matrix sigma, Matrix sqrt)
      : kind_(kind), dim_(static_cast<int>(sigma.rows())), sigma_(std::move(sigma)), sqrt_(std::move(sqrt)) {}

  Kind kind_;
  int dim_;
  Matrix sigma_;
  Matrix sqrt_;
};

double power_iteration_top_eigenvalue(const Matrix& sym, double rel_tol = 1e-10, int max_iters = 10000);

double norm_S(const Vector& x, const SymmetricSet& s);
Vector support_argmax(const Vector& x, const SymmetricSet& s);

/// Monte Carlo estimate of E ||Sigma^{1/2} G||_S for standard Gaussian G.
McEstimate gaussian_mean_width(const SymmetricSet& s, const CovarianceModel& sigma,
                               std::int64_t n_samples, std::uint64_t seed,
                               Exec exec = Exec::parallel);

/// sup_{v in S} ||Sigma^{1/2} v||_2
double weak_variance(const SymmetricSet& s, const CovarianceModel& sigma);

/// Monte Carlo estimate of E_eps || N^{-1/2} sum_i eps_i (X_i - center) ||_S
/// over Rademacher sign vectors, data held fixed.
McEstimate rademacher_complexity(const Matrix& data, const Vector& center, const SymmetricSet& s,
                                 std::int64_t n_samples, std::uint64_t seed,
                                 Exec exec = Exec::parallel);

}  // namespace mom
