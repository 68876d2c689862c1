#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "mom/set_geometry.hpp"

using namespace mom;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Matrix rows(std::initializer_list<std::initializer_list<double>> rs) {
  Matrix m(static_cast<Eigen::Index>(rs.size()), static_cast<Eigen::Index>(rs.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rs) m.row(i++) = vec(r).transpose();
  return m;
}

SymmetricSet two_axes() { return SymmetricSet::finite_points(rows({{2, 0}, {0, 3}})); }

}  // namespace

TEST_CASE("norm_S examples") {
  CHECK(norm_S(vec({3, -7}), SymmetricSet::cross(2)) == 7.0);
  CHECK(norm_S(vec({3, 4}), SymmetricSet::ball(2)) == 5.0);
  CHECK(norm_S(vec({1, 1}), two_axes()) == 3.0);
  CHECK(norm_S(vec({3, 4}), SymmetricSet::ball(2, 2.5)) == 12.5);
  CHECK_THROWS_AS(norm_S(vec({1, 2, 3}), SymmetricSet::cross(2)), UsageError);
}

TEST_CASE("support_argmax examples") {
  CHECK(support_argmax(vec({3, -7}), SymmetricSet::cross(2)) == vec({0, -1}));
  CHECK(support_argmax(vec({0, 0}), SymmetricSet::ball(2)) == vec({0, 0}));
  CHECK(support_argmax(vec({1, 1}), two_axes()) == vec({0, 3}));
  CHECK_THROWS_AS(support_argmax(vec({1}), SymmetricSet::ball(2)), UsageError);
  // ties go to the lowest index: e1 comes before e2 in the cross ordering
  CHECK(support_argmax(vec({2, 2}), SymmetricSet::cross(2)) == vec({1, 0}));
  CHECK(support_argmax(vec({-2, 2}), SymmetricSet::cross(2)) == vec({-1, 0}));
}

TEST_CASE("construction invariants") {
  const SymmetricSet s = SymmetricSet::finite_points(rows({{1, 2}}));
  CHECK(s.num_points() == 2);
  CHECK(s.point(1) == vec({-1, -2}));
  CHECK_FALSE(s.spans_full());
  CHECK(two_axes().spans_full());
  CHECK(two_axes().num_points() == 4);
  // a point and its negation given explicitly are not duplicated
  CHECK(SymmetricSet::finite_points(rows({{1, 0}, {-1, 0}, {0, 1}})).num_points() == 4);
  CHECK(SymmetricSet::cross(3).spans_full());
  CHECK(SymmetricSet::cross(3).num_points() == 6);
  CHECK_THROWS_AS(SymmetricSet::ball(2, 0.0), UsageError);
  CHECK_THROWS_AS(SymmetricSet::ball(2, -1.0), UsageError);
  CHECK_THROWS_AS(SymmetricSet::cross(0), UsageError);
  CHECK(SymmetricSet::cross(2).kind() == "cross");
  CHECK(SymmetricSet::ball(2).kind() == "ball");
  CHECK(two_axes().kind() == "points");
}

TEST_CASE("cross is l_inf and the unit ball is l_2") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + t % 6;
    Vector x(d);
    for (int j = 0; j < d; ++j) x(j) = n(rng) * 100.0;
    CHECK(norm_S(x, SymmetricSet::cross(d)) == x.lpNorm<Eigen::Infinity>());
    CHECK(norm_S(x, SymmetricSet::ball(d)) == x.norm());
    const Vector v = support_argmax(x, SymmetricSet::ball(d));
    CHECK(std::abs(v.dot(x) - x.norm()) <= 1e-12 * x.norm());
  }
}

TEST_CASE("covariance models") {
  CHECK_THROWS_AS(CovarianceModel::diagonal(vec({1, -1})), UsageError);
  CHECK_THROWS_AS(CovarianceModel::dense(rows({{1, 2}, {0, 1}})), UsageError);
  CHECK_THROWS_AS(CovarianceModel::dense(rows({{1, 2}, {2, 1}})), UsageError);  // eigenvalue -1
  const Matrix sigma = rows({{4, 1}, {1, 2}});
  const CovarianceModel c = CovarianceModel::dense(sigma);
  CHECK((c.sqrt_matrix() * c.sqrt_matrix() - sigma).cwiseAbs().maxCoeff() < 1e-12);
  const double top = 3.0 + std::sqrt(2.0);  // (tr + sqrt((a - c)^2 + 4 b^2)) / 2
  CHECK(c.largest_eigenvalue() == doctest::Approx(top).epsilon(1e-10));
  CHECK(CovarianceModel::diagonal(vec({4, 1})).largest_eigenvalue() == 4.0);
  CHECK(CovarianceModel::identity(3).largest_eigenvalue() == 1.0);
  // a PSD matrix with a zero eigenvalue is accepted
  CHECK_NOTHROW(CovarianceModel::dense(rows({{1, 1}, {1, 1}})));
}

TEST_CASE("power iteration") {
  const Matrix m = rows({{2, 0, 0}, {0, 5, 0}, {0, 0, 1}});
  CHECK(power_iteration_top_eigenvalue(m) == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(power_iteration_top_eigenvalue(Matrix::Zero(2, 2)) == 0.0);
  // equal and opposite top eigenvalues never settle
  CHECK_THROWS_AS(power_iteration_top_eigenvalue(rows({{1, 0}, {0, -1}}), 1e-10, 50), ConvergenceError);
}

TEST_CASE("weak_variance examples") {
  const CovarianceModel diag = CovarianceModel::diagonal(vec({4, 1}));
  CHECK(weak_variance(SymmetricSet::ball(2), diag) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(weak_variance(SymmetricSet::cross(2), diag) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(weak_variance(SymmetricSet::finite_points(rows({{1, 1}})), CovarianceModel::identity(2)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("gaussian_mean_width examples") {
  const McEstimate b = gaussian_mean_width(SymmetricSet::ball(2), CovarianceModel::identity(2), 1000000, 11);
  CHECK(std::abs(b.value - std::sqrt(std::numbers::pi / 2.0)) <= 3.0 * b.std_error);
  CHECK(b.samples == 1000000);
  const McEstimate c = gaussian_mean_width(SymmetricSet::cross(1), CovarianceModel::identity(1), 200000, 12);
  CHECK(std::abs(c.value - std::sqrt(2.0 / std::numbers::pi)) <= 3.0 * c.std_error);
  const McEstimate z = gaussian_mean_width(SymmetricSet::ball(2), CovarianceModel::diagonal(vec({0, 0})), 1000, 13);
  CHECK(z.value == 0.0);
  CHECK_THROWS_AS(gaussian_mean_width(SymmetricSet::ball(2), CovarianceModel::identity(2), 99, 1), UsageError);
  CHECK_THROWS_AS(gaussian_mean_width(SymmetricSet::ball(2), CovarianceModel::identity(3), 1000, 1), UsageError);
}

TEST_CASE("mean width is monotone under inclusion (common random numbers)") {
  const SymmetricSet small = SymmetricSet::finite_points(rows({{1, 0, 0}, {0, 1, 1}}));
  const SymmetricSet large = SymmetricSet::finite_points(rows({{1, 0, 0}, {0, 1, 1}, {0.5, -2, 0}}));
  const CovarianceModel sigma = CovarianceModel::diagonal(vec({1, 2, 3}));
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    CHECK(gaussian_mean_width(small, sigma, 5000, seed).value <= gaussian_mean_width(large, sigma, 5000, seed).value);
}

TEST_CASE("serial and parallel Monte Carlo are bit-identical") {
  const CovarianceModel sigma = CovarianceModel::dense(rows({{2, 0.3}, {0.3, 1}}));
  const McEstimate a = gaussian_mean_width(SymmetricSet::ball(2), sigma, 100000, 5, Exec::serial);
  const McEstimate b = gaussian_mean_width(SymmetricSet::ball(2), sigma, 100000, 5, Exec::parallel);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  const Matrix data = rows({{1, 2}, {3, -1}, {0, 0}, {2, 2}});
  const McEstimate r1 = rademacher_complexity(data, vec({1, 1}), SymmetricSet::cross(2), 3000, 9, Exec::serial);
  const McEstimate r2 = rademacher_complexity(data, vec({1, 1}), SymmetricSet::cross(2), 3000, 9, Exec::parallel);
  CHECK(r1.value == r2.value);
}

TEST_CASE("rademacher_complexity examples") {
  const Matrix same = rows({{1, 2}, {1, 2}, {1, 2}});
  CHECK(rademacher_complexity(same, vec({1, 2}), SymmetricSet::ball(2), 500, 1).value == 0.0);
  CHECK(rademacher_complexity(rows({{1, 0}}), vec({0, 0}), SymmetricSet::cross(2), 500, 1).value == 1.0);
  const McEstimate r = rademacher_complexity(rows({{1, 0}, {-1, 0}}), vec({0, 0}), SymmetricSet::ball(2), 100000, 3);
  CHECK(std::abs(r.value - std::sqrt(2.0) / 2.0) <= 3.0 * r.std_error);
}
