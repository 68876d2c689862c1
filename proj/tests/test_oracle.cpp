#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "mom/estimators.hpp"
#include "mom/oracle.hpp"

using namespace mom;
using namespace mom::oracle;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Matrix identical_rows(const Vector& x0, int k) {
  Matrix rows(k, x0.size());
  rows.rowwise() = x0.transpose();
  return rows;
}

}  // namespace

TEST_CASE("grid_inner_sup examples") {
  const Vector x0 = vec({0.3, -1.2});
  const Vector mu = vec({2, 1});
  const double d = (mu - x0).norm();
  const SupResult r = grid_inner_sup(mu, identical_rows(x0, 5), Which::g);
  CHECK(r.value <= d + 1e-12);
  CHECK(r.value >= d * std::cos(std::numbers::pi / 10000) - 1e-12);

  Matrix one(1, 2);
  one << 0.5, 0.25;
  CHECK(std::abs(grid_inner_sup(vec({0.5, 0.25}), one, Which::f).value) < 1e-15);
  CHECK_THROWS_AS(grid_inner_sup(vec({1, 2, 3}), Matrix::Zero(3, 3), Which::g), UsageError);
  CHECK_THROWS_AS(grid_inner_sup(vec({1, 2}), one, Which::g, 3), UsageError);
}

TEST_CASE("exact_planar_sup agrees with a fine grid") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int t = 0; t < 50; ++t) {
    Matrix m(7, 2);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    const Vector mu = vec({n(rng), n(rng)});
    for (Which w : {Which::f, Which::g}) {
      const double exact = exact_planar_sup(mu, m, w).value;
      const double grid = grid_inner_sup(mu, m, w, 100000).value;
      CHECK(exact >= grid - 1e-12);
      CHECK(exact - grid <= 1e-3);
    }
  }
}

TEST_CASE("grid_argmin_conjugate examples") {
  // identical data inside the box: nearest grid point to x0
  const Vector x0 = vec({0.31, -0.77});
  GridSpec g;
  g.low = {-1, -1};
  g.high = {1, 1};
  g.points_per_axis = 201;
  const Vector best = grid_argmin_conjugate(identical_rows(x0, 3), SymmetricSet::cross(2), Which::g, g);
  CHECK(std::abs(best(0) - 0.31) <= 0.005 + 1e-12);
  CHECK(std::abs(best(1) + 0.77) <= 0.005 + 1e-12);

  // d = 1, S = {+-1}: nearest grid point to the median of the block means
  Matrix m1(5, 1);
  m1 << 0.1, 3.0, -2.0, 0.737, 1.5;
  GridSpec g1;
  g1.low = {-3};
  g1.high = {4};
  g1.points_per_axis = 701;
  const Vector b1 = grid_argmin_conjugate(m1, SymmetricSet::cross(1), Which::g, g1);
  CHECK(std::abs(b1(0) - 0.737) <= 0.005 + 1e-12);

  GridSpec bad = g;
  bad.points_per_axis = 2;
  CHECK_THROWS_AS(grid_argmin_conjugate(identical_rows(x0, 3), SymmetricSet::cross(2), Which::g, bad), UsageError);
  bad = g;
  bad.high = {-1, 1};
  CHECK_THROWS_AS(grid_argmin_conjugate(identical_rows(x0, 3), SymmetricSet::cross(2), Which::g, bad), UsageError);
  CHECK_THROWS_AS(grid_argmin_conjugate(Matrix::Zero(3, 3), SymmetricSet::cross(3), Which::g, g), UsageError);
}

TEST_CASE("grid_argmin serial and parallel agree") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  Matrix m(5, 2);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  const GridSpec g = auto_box(m);
  CHECK(grid_argmin_conjugate(m, SymmetricSet::ball(2), Which::f, g, Exec::serial) ==
        grid_argmin_conjugate(m, SymmetricSet::ball(2), Which::f, g, Exec::parallel));
}

TEST_CASE("solver lands within 2 grid cells of the oracle argmin (d = 2)") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 5; ++t) {
    Matrix data(45, 2);
    for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = n(rng);
    const BucketedMeans bm = bucketed_means(data, make_partition(45, 5, 10 + t));
    const GridSpec g = auto_box(bm.means);
    const Vector ref = grid_argmin_conjugate(bm.means, SymmetricSet::cross(2), Which::g, g);
    const EstimateResult r = solve_fenchel_min(bm, SymmetricSet::cross(2), Which::g);
    for (int j = 0; j < 2; ++j) {
      const double cell = (g.high[static_cast<std::size_t>(j)] - g.low[static_cast<std::size_t>(j)]) / (g.points_per_axis - 1);
      CHECK(std::abs(r.mu(j) - ref(j)) <= 2.0 * cell);
    }
  }
}

TEST_CASE("minmax_objective_oracle examples") {
  Matrix data(3, 1);
  data << 1, 2, 3;
  const BlockPartition p = make_contiguous_partition(3, 3);
  CHECK(minmax_objective_oracle(vec({0.7}), vec({0.7}), data, p) == 0.0);
  CHECK(minmax_objective_oracle(vec({0}), vec({2}), data, p) == 4.0);
  BlockPartition even = make_contiguous_partition(3, 3);
  even.k = 2;
  CHECK_THROWS_AS(minmax_objective_oracle(vec({0}), vec({2}), data, even), UsageError);
}

TEST_CASE("minmax oracle matches the library on random triples") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + t % 3;
    const int k = 2 * (t % 4) + 1;
    const int N = k * (1 + t % 6);
    Matrix data(N, d);
    for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = n(rng);
    const BlockPartition p = make_partition(N, k, static_cast<std::uint64_t>(t));
    Vector mu(d), nu(d);
    for (int j = 0; j < d; ++j) {
      mu(j) = n(rng);
      nu(j) = n(rng);
    }
    const double a = minmax_objective_oracle(mu, nu, data, p);
    const double b = minmax_mom_objective(mu, nu, bucketed_means(data, p));
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
}
