#pragma once

// Closed-form eigenvalue bounds for compact metric trees and the certified
// two-sided bounds they imply for lambda_k of the infinite diagonal comb.
// All values are in inverse length squared and keep their factor pi^2.

#include <cstdint>
#include <optional>
#include <string>

namespace combspec::bounds {

/// (k - 2 + nD + nN/2)^2 pi^2 / vol^2 for a compact tree with nD Dirichlet
/// and nN Neumann pendants. nullopt when the prefactor is not positive
/// (vacuous bound).
std::optional<double> bkkm_upper(double k, double vol, double n_dirichlet, double n_neumann);

/// k^2 pi^2 / (4 vol^2), valid for compact trees with a Dirichlet vertex.
double bkkm_lower(double k, double vol);

/// (2a - 1)/2 * n^{2a-1}: lower bound for the bottom of the spectrum of the
/// comb tail beyond tooth n (the end at 0 acts as a Dirichlet point).
double tail_infimum_bound(double alpha, std::int64_t n);

/// Integral lower estimate of the finite-part volume: (n^{1-a} - 1)/(1 - a),
/// or ln n at a = 1.
double finite_part_volume_integral(double alpha, std::int64_t n);

/// (k - 2 + k/2)^2 pi^2 / V(n)^2 with V the integral estimate above. This
/// keeps the k-dependent pendant factor exactly as used in the lower-bound
/// pipeline; see finite_part_upper_strict for the literal tree bound.
double finite_part_upper_paper(double alpha, std::int64_t n, std::int64_t k);

/// bkkm_upper(k, exact finite-part volume, 0, n).
double finite_part_upper_strict(double alpha, std::int64_t n, std::int64_t k);

enum class Side { Lower, Upper };

struct BoundReport {
  std::int64_t k = 0;
  double alpha = 0.0;
  double value = 0.0;
  Side side = Side::Upper;
  std::string source;
  std::int64_t n = 0;      // truncation / split index used
  double volume = 0.0;     // volume entering the bound
  std::int64_t n_dirichlet = 0;
  std::int64_t n_neumann = 0;
  bool vacuous = false;
};

struct BoundOptions {
  /// Use the integral volume estimates instead of exact partial sums.
  bool paper_constants = false;
  std::int64_t n_max = 1'000'000'000;
};

/// Upper bound for lambda_k(G_alpha): BKKM on the Dirichlet-cut truncation
/// G_{alpha,k}; alpha > 1/2, k >= 1.
BoundReport certified_upper_bound(double alpha, std::int64_t k, const BoundOptions& opt = {});

/// Lower bound for lambda_k(G_alpha), alpha in (1/2, 1], k >= 2: the
/// smallest split index n (doubling, then bisection) with
/// finite_part_upper_paper(n, k) <= tail_infimum_bound(n), then BKKM lower
/// on the finite part. Throws std::runtime_error if no n <= n_max works.
BoundReport certified_lower_bound(double alpha, std::int64_t k, const BoundOptions& opt = {});

/// Predicate of the split-index search.
bool split_condition_holds(double alpha, std::int64_t n, std::int64_t k);

/// Smallest admissible split index by exhaustive scan (reference for tests).
std::int64_t split_index_by_scan(double alpha, std::int64_t k, std::int64_t n_max);

struct FiniteVolumeBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// pi^2 k^2 / (4 |G_a|^2) and pi^2 k^2 / 4, alpha > 1.
FiniteVolumeBounds finite_volume_bounds(double alpha, std::int64_t k);

/// Sum over decoupled Dirichlet intervals of floor(sqrt(lambda) l / pi).
std::int64_t decoupled_counting(double alpha, double lambda, std::int64_t truncation);

/// k-th eigenvalue of the decoupled Dirichlet system: smallest lambda with
/// decoupled_counting >= k, found by bisection.
double decoupled_eigenvalue(double alpha, std::int64_t k, std::int64_t truncation);

}  // namespace combspec::bounds
