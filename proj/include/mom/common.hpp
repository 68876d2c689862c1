#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace mom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Caller violated a documented precondition (bad K, dimension mismatch, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative routine ran out of budget. Carries the last iterate so callers
// can still inspect it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Vector last_iterate)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}
  const Vector& last_iterate() const { return last_iterate_; }

 private:
  Vector last_iterate_;
};

// Every Monte Carlo kernel exists in two flavours. `serial` is the reference
// path kept for testing; `parallel` splits the same seeded chunks over OpenMP
// threads and must produce bit-identical results.
enum class Exec { serial, parallel };

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix_seed(mix_seed(base) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(base, a), b);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw UsageError(msg);
}

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw UsageError(std::string(what) + ": dimension mismatch (got " + std::to_string(got) +
                     ", expected " + std::to_string(want) + ")");
  }
}

}  // namespace mom
