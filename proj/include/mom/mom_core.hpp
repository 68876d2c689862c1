#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mom/common.hpp"

namespace mom {

struct BlockPartition {
  int n = 0;
  int k = 0;
  std::optional<std::uint64_t> seed;  // empty for the contiguous partition
  std::vector<std::vector<int>> blocks;

  int block_size() const { return k > 0 ? n / k : 0; }
};

struct BucketedMeans {
  Matrix means;  // K x d, row k is the average of block k
  int k = 0;
  std::optional<std::uint64_t> seed;

  int dim() const { return static_cast<int>(means.cols()); }
};

// Throws UsageError unless 1 <= k <= n, k odd and k | n.
void check_partition_args(int n, int k);

/// Uniformly random equipartition of {0, ..., n-1} into k blocks.
BlockPartition make_partition(int n, int k, std::uint64_t seed);
/// Blocks {0..m-1}, {m..2m-1}, ... with m = n / k.
BlockPartition make_contiguous_partition(int n, int k);

BucketedMeans bucketed_means(const Matrix& data, const BlockPartition& partition);

// Rank window I_K = [ceil((K+1)/4), floor(3(K+1)/4)], 1-based.
struct RankWindow {
  int lo;
  int hi;
  int size() const { return hi - lo + 1; }
};
RankWindow interquartile_window(int k);

/// Median of the block projections <Xbar_k, v>. K must be odd.
double g_median(const Vector& v, const BucketedMeans& means);

/// Average of the block projections whose ranks fall in I_K.
double f_interquartile(const Vector& v, const BucketedMeans& means);

/// Blocks whose projections occupy the ranks of I_K, listed in rank order.
/// Equal projections are ordered by block index.
std::vector<int> active_interquartile_blocks(const Vector& v, const BucketedMeans& means);

/// Block holding the median projection (same tie-break as above).
int median_block(const Vector& v, const BucketedMeans& means);

enum class Which { f, g };

// f_interquartile or g_median.
double objective_h(Which which, const Vector& v, const BucketedMeans& means);

/// Gradient of the piecewise-linear h at v: the average of the active block
/// means (f) or the median block mean (g).
Vector objective_h_gradient(Which which, const Vector& v, const BucketedMeans& means);

struct HEval {
  double value;
  Vector gradient;
};
// objective_h and objective_h_gradient from a single sort.
HEval evaluate_h(Which which, const Vector& v, const BucketedMeans& means);

}  // namespace mom
