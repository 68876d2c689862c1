#pragma once

#include <vector>

#include "mom/common.hpp"
#include "mom/mom_core.hpp"
#include "mom/set_geometry.hpp"

// Brute-force references for the solvers. Nothing in here calls into the
// objective or solver code it is used to check; it only reads raw data
// (block-mean matrices, point lists, partitions).
namespace mom::oracle {

struct GridSpec {
  std::vector<double> low;
  std::vector<double> high;
  int points_per_axis = 401;
  int angular_resolution = 10000;
};

// Box [min - range, max + range] of the block means per coordinate.
GridSpec auto_box(const Matrix& block_means);

struct SupResult {
  double value;
  Vector direction;
};

/// max over `resolution` equally spaced unit directions of <mu,v> - h(v).
/// Only d = 2.
SupResult grid_inner_sup(const Vector& mu, const Matrix& block_means, Which which, int resolution = 10000);

/// Exact sup over the unit circle of <mu,v> - h(v) (d = 2). The circle is cut
/// at every direction where two block projections swap order; on each arc the
/// objective is <a, v> for a fixed a, maximized in closed form.
SupResult exact_planar_sup(const Vector& mu, const Matrix& block_means, Which which);

/// Exact sup over the unit circle of (<mu,u> - h(u)) / ||u||_S for a finite,
/// spanning point set in d = 2. Between consecutive directions where either
/// the block ordering or the maximizing point of S changes, the ratio is a
/// quotient of two linear forms, so it is monotone and peaks at a cut.
SupResult exact_planar_ratio_sup(const Vector& mu, const Matrix& block_means, const Matrix& points, Which which);

/// Conjugate value by exhaustive enumeration: all points of a finite S, or the
/// exact planar sup for a ball (d <= 2).
double brute_conjugate(const Vector& mu, const Matrix& block_means, const SymmetricSet& s, Which which);

/// Grid point minimizing the conjugate objective (d <= 2).
Vector grid_argmin_conjugate(const Matrix& block_means, const SymmetricSet& s, Which which, const GridSpec& grid,
                             Exec exec = Exec::parallel);

/// Median over blocks of |B_k|^{-1} sum_{i in B_k} (|X_i - mu|^2 - |X_i - nu|^2),
/// straight from the samples.
double minmax_objective_oracle(const Vector& mu, const Vector& nu, const Matrix& data, const BlockPartition& partition);

}  // namespace mom::oracle
