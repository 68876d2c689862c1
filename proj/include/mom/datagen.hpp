#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "mom/common.hpp"
#include "mom/monte_carlo.hpp"
#include "mom/set_geometry.hpp"

namespace mom {

enum class RadialLaw { chi, half_cauchy };

struct GaussianModel {
  Vector location;
  CovarianceModel sigma;
};
struct CoordCauchyModel {
  Vector location;
  Vector scale;
};
// location + R U with U uniform on the sphere, R independent.
struct SphericalModel {
  Vector location;
  RadialLaw radial;
};
// Multivariate t: location + Sigma^{1/2} Z / sqrt(W / dof), W ~ chi^2(dof).
struct StudentTModel {
  Vector location;
  CovarianceModel sigma;
  double dof;
};

class InlierModel {
 public:
  using Variant = std::variant<GaussianModel, CoordCauchyModel, SphericalModel, StudentTModel>;

  static InlierModel gaussian(Vector location, CovarianceModel sigma);
  static InlierModel coord_cauchy(Vector location, Vector scale);
  static InlierModel spherical(Vector location, RadialLaw radial);
  static InlierModel student_t(Vector location, CovarianceModel sigma, double dof);

  int dim() const { return static_cast<int>(location().size()); }
  const Vector& location() const;
  const Variant& rep() const { return rep_; }
  std::string kind() const;

  // One i.i.d. row.
  void sample_row(std::mt19937_64& rng, Eigen::Ref<Vector> out) const;

  // Covariance if it exists (Gaussian; Student-t with dof > 2).
  std::optional<CovarianceModel> covariance() const;

 private:
  explicit InlierModel(Variant rep) : rep_(std::move(rep)) {}
  Variant rep_;
};

// Rows are generated in fixed-size chunks with their own derived seeds, so
// the serial and parallel paths produce identical matrices.
inline constexpr int kRowsPerChunk = 256;

Matrix sample_inliers(const InlierModel& model, int n, std::uint64_t seed, Exec exec = Exec::parallel);

enum class DirectionRule { fixed, random_unit };

struct NoContamination {};
struct FarPoint {
  int count;
  double magnitude;
  DirectionRule rule;
  Vector direction;  // used when rule == fixed; normalized on use
};
struct LargestNorm {
  int count;
  Vector replacement;
};
struct MeanShiftCluster {
  int count;
  Vector shift;
};
using ContaminationStrategy = std::variant<NoContamination, FarPoint, LargestNorm, MeanShiftCluster>;

int outlier_count(const ContaminationStrategy& strategy);
std::string strategy_kind(const ContaminationStrategy& strategy);

struct ContaminatedDataset {
  Matrix data;
  // Hidden from estimators; only the harness reads it.
  std::vector<int> outliers;
  std::string model_echo;
  std::uint64_t seed = 0;
};

/// Replaces exactly outlier_count(strategy) rows of `clean`. FarPoint and
/// MeanShiftCluster pick rows uniformly at random; LargestNorm picks the rows
/// with the largest Euclidean norm (lowest index first on ties).
ContaminatedDataset contaminate(const Matrix& clean, const ContaminationStrategy& strategy, std::uint64_t seed);

/// Monte Carlo estimate of P[(N/K)^{-1/2} sum_{i<=N/K} <X_i - mu*, v> > r].
McEstimate estimate_tail_H(const InlierModel& model, int n, int k, const Vector& v, double r,
                           std::int64_t n_trials, std::uint64_t seed, Exec exec = Exec::parallel);

/// Same estimator for several thresholds on one common sample of block sums,
/// hence non-increasing in r.
std::vector<McEstimate> estimate_tail_H_curve(const InlierModel& model, int n, int k, const Vector& v,
                                              const std::vector<double>& rs, std::int64_t n_trials,
                                              std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace mom
