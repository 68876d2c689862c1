#pragma once

#include <cstdint>
#include <optional>

#include "mom/common.hpp"
#include "mom/mom_core.hpp"
#include "mom/set_geometry.hpp"

namespace mom {

// Settings for the sphere search used when S is a Euclidean ball.
struct InnerSolverConfig {
  int restarts = 8;
  int max_iters = 500;
  double initial_step = 0.5;  // step t is initial_step / sqrt(t), in radians
  double tolerance = 1e-9;    // minimum improvement that resets the patience counter
  int patience = 50;          // iterations without such an improvement before stopping
  std::uint64_t seed = 0x5eed;
};

struct ObjectiveContext {
  BucketedMeans means;
  SymmetricSet set;
  Which which = Which::g;
  InnerSolverConfig inner;

  ObjectiveContext(BucketedMeans m, SymmetricSet s, Which w, InnerSolverConfig cfg = {});
  int dim() const { return set.dim(); }
};

struct InnerResult {
  double value = 0.0;
  Vector maximizer;
  bool certified = false;  // true iff the supremum was an exact enumeration
};

/// h*_S(mu) = sup_{v in S} (<mu, v> - h(v)) with h = f or g.
///
/// Finite sets are enumerated exactly; the first point reaching the maximum
/// wins ties. For a ball, positive homogeneity reduces the problem to the
/// sphere: value = radius * max(0, sup_{|w|=1} (<mu,w> - h(w))), searched by
/// restarted projected subgradient ascent. `warm_start`, when given, is used
/// as one of the starting directions.
InnerResult eval_conjugate(const Vector& mu, const ObjectiveContext& ctx,
                           const std::optional<Vector>& warm_start = std::nullopt);

/// sup_{nu in R^d} (<mu, nu> - h(nu) - ||nu||_S^2 / 4).
/// Equals m_+^2 where m is the supremum of <mu,w> - h(w) over ||w||_S = 1;
/// the maximizer returned is 2 m_+ w. Requires span(S) = R^d.
InnerResult eval_regularized_conjugate(const Vector& mu, const ObjectiveContext& ctx,
                                       const std::optional<Vector>& warm_start = std::nullopt);

/// The maximizer of eval_conjugate, which is a subgradient of mu -> h*_S(mu).
Vector conjugate_subgradient(const Vector& mu, const ObjectiveContext& ctx);

// Sphere search used by the ball case; exposed for tests and benchmarks.
// Returns the best direction found and sup_{|w|=1} (<mu,w> - h(w)) there.
InnerResult sphere_sup(const Vector& mu, const BucketedMeans& means, Which which,
                       const InnerSolverConfig& cfg, const std::optional<Vector>& warm_start = std::nullopt);

}  // namespace mom
