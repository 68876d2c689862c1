#include "mom/mom_core.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <utility>

namespace mom {

void check_partition_args(int n, int k) {
  require(n >= 1, "partition: need N >= 1");
  require(k >= 1 && k <= n, "partition: need 1 <= K <= N (K=" + std::to_string(k) + ", N=" + std::to_string(n) + ")");
  require(k % 2 == 1, "partition: K must be odd (K=" + std::to_string(k) + ")");
  require(n % k == 0, "partition: K must divide N (K=" + std::to_string(k) + ", N=" + std::to_string(n) + ")");
}

namespace {

BlockPartition split_contiguous(const std::vector<int>& order, int n, int k) {
  BlockPartition p;
  p.n = n;
  p.k = k;
  const int m = n / k;
  p.blocks.resize(static_cast<std::size_t>(k));
  for (int b = 0; b < k; ++b) {
    auto first = order.begin() + static_cast<std::ptrdiff_t>(b) * m;
    p.blocks[static_cast<std::size_t>(b)].assign(first, first + m);
  }
  return p;
}

// Blocks holding ranks lo..hi (1-based, inclusive) under the order
// (projection, block index), listed in that order. Partial selection gives
// the same blocks as a full stable sort at O(K + window log window).
std::vector<int> ranked_window(const Vector& proj, int lo, int hi) {
  // pairs compare exactly as (projection, block index)
  std::vector<std::pair<double, int>> key(static_cast<std::size_t>(proj.size()));
  for (Eigen::Index i = 0; i < proj.size(); ++i) key[static_cast<std::size_t>(i)] = {proj(i), static_cast<int>(i)};
  const auto first = key.begin() + (lo - 1);
  const auto last = key.begin() + hi;
  std::nth_element(key.begin(), first, key.end());
  if (last != key.end()) std::nth_element(first, last - 1, key.end());
  std::sort(first, last);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (auto it = first; it != last; ++it) out.push_back(it->second);
  return out;
}

void check_odd(const BucketedMeans& means, const Vector& v, const char* what) {
  require(means.k % 2 == 1, std::string(what) + ": K must be odd");
  require_dim(v.size(), means.means.cols(), what);
}

}  // namespace

BlockPartition make_partition(int n, int k, std::uint64_t seed) {
  check_partition_args(n, k);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  BlockPartition p = split_contiguous(order, n, k);
  p.seed = seed;
  return p;
}

BlockPartition make_contiguous_partition(int n, int k) {
  check_partition_args(n, k);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  return split_contiguous(order, n, k);
}

BucketedMeans bucketed_means(const Matrix& data, const BlockPartition& partition) {
  require_dim(data.rows(), partition.n, "bucketed_means");
  BucketedMeans out;
  out.k = partition.k;
  out.seed = partition.seed;
  out.means = Matrix::Zero(partition.k, data.cols());
  for (int b = 0; b < partition.k; ++b) {
    const auto& block = partition.blocks[static_cast<std::size_t>(b)];
    for (int i : block) out.means.row(b) += data.row(i);
    out.means.row(b) /= static_cast<double>(block.size());
  }
  return out;
}

RankWindow interquartile_window(int k) {
  require(k >= 1 && k % 2 == 1, "interquartile window: K must be odd");
  // ceil((K+1)/4) and floor(3(K+1)/4) in integer arithmetic
  return {(k + 1 + 3) / 4, 3 * (k + 1) / 4};
}

double g_median(const Vector& v, const BucketedMeans& means) {
  check_odd(means, v, "g_median");
  Vector proj = means.means * v;
  const auto mid = static_cast<Eigen::Index>(means.k / 2);
  std::nth_element(proj.data(), proj.data() + mid, proj.data() + proj.size());
  return proj(mid);
}

std::vector<int> active_interquartile_blocks(const Vector& v, const BucketedMeans& means) {
  check_odd(means, v, "active_interquartile_blocks");
  const Vector proj = means.means * v;
  const RankWindow w = interquartile_window(means.k);
  return ranked_window(proj, w.lo, w.hi);
}

double f_interquartile(const Vector& v, const BucketedMeans& means) {
  check_odd(means, v, "f_interquartile");
  const Vector proj = means.means * v;
  const RankWindow w = interquartile_window(means.k);
  double sum = 0.0;
  for (int b : ranked_window(proj, w.lo, w.hi)) sum += proj(b);
  return sum / static_cast<double>(w.size());
}

int median_block(const Vector& v, const BucketedMeans& means) {
  check_odd(means, v, "median_block");
  const Vector proj = means.means * v;
  const int mid = means.k / 2 + 1;
  return ranked_window(proj, mid, mid).front();
}

double objective_h(Which which, const Vector& v, const BucketedMeans& means) {
  return which == Which::f ? f_interquartile(v, means) : g_median(v, means);
}

Vector objective_h_gradient(Which which, const Vector& v, const BucketedMeans& means) {
  if (which == Which::g) return means.means.row(median_block(v, means)).transpose();
  const auto active = active_interquartile_blocks(v, means);
  Vector acc = Vector::Zero(means.dim());
  for (int b : active) acc += means.means.row(b).transpose();
  return acc / static_cast<double>(active.size());
}

HEval evaluate_h(Which which, const Vector& v, const BucketedMeans& means) {
  check_odd(means, v, "evaluate_h");
  const Vector proj = means.means * v;
  if (which == Which::g) {
    const int mid = means.k / 2 + 1;
    const int b = ranked_window(proj, mid, mid).front();
    return {proj(b), means.means.row(b).transpose()};
  }
  const RankWindow w = interquartile_window(means.k);
  double sum = 0.0;
  Vector acc = Vector::Zero(means.dim());
  for (int b : ranked_window(proj, w.lo, w.hi)) {
    sum += proj(b);
    acc += means.means.row(b).transpose();
  }
  const double n = static_cast<double>(w.size());
  return {sum / n, acc / n};
}

}  // namespace mom
