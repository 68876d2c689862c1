#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mom/common.hpp"

namespace mom {

// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(count + o.count);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.count) / n;
    m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
    count += o.count;
  }

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const {
    return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

inline McEstimate to_estimate(const RunningStats& s) { return {s.mean, s.std_error(), s.count}; }

// Number of independently seeded streams a sample budget is split into. Fixed
// so that results do not depend on the thread count.
inline constexpr int kMcChunks = 64;

// Runs `n_samples` draws of `draw(rng)` split across kMcChunks streams seeded
// from `seed`. Chunk statistics are merged in chunk order, so the serial and
// parallel paths agree bit for bit.
template <class Draw>
RunningStats run_chunked(std::int64_t n_samples, std::uint64_t seed, Exec exec, const Draw& draw) {
  const int chunks = static_cast<int>(std::min<std::int64_t>(kMcChunks, std::max<std::int64_t>(n_samples, 1)));
  std::vector<RunningStats> partial(static_cast<std::size_t>(chunks));
  auto run_chunk = [&](int c) {
    const std::int64_t lo = n_samples * c / chunks;
    const std::int64_t hi = n_samples * (c + 1) / chunks;
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    RunningStats s;
    for (std::int64_t i = lo; i < hi; ++i) s.push(draw(rng));
    partial[static_cast<std::size_t>(c)] = s;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  }
  RunningStats total;
  for (const auto& s : partial) total.merge(s);
  return total;
}

}  // namespace mom
