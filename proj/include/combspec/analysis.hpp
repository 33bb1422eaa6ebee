#pragma once

// Two-sided enclosures of lambda_k(G_alpha) from solver runs on finite
// pieces, exponent fits, surgery checks, and the invariant battery.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "combspec/comb.hpp"
#include "combspec/graph.hpp"
#include "combspec/spectrum.hpp"

namespace combspec::analysis {

struct SolveOptions {
  double abs_tol = 1e-10;      // secular bracket width
  double fem_rel_tol = 1e-8;   // refine_until tolerance for cross-checks
  std::size_t fem_stride = 0;  // cross-check every stride-th row with FEM; 0 = off
  std::size_t threads = 1;
};

/// Lowest `count` eigenvalues of any compact graph: secular backend for
/// chain-shaped trees, refined FEM otherwise.
Spectrum solve(const MetricGraph& g, std::size_t count, const SolveOptions& opt = {});

struct BracketRow {
  std::int64_t k = 0;
  // Solver lower side: lambda_k of the Neumann-detached finite part
  // (alpha <= 1) or lambda_{k-1} of it (alpha > 1, where the detached tail
  // contributes its constant mode).
  double lower_solver = 0.0;
  double threshold = 0.0;  // the solver lower side is asserted only below this
  bool valid = false;
  // Closed-form certified bounds; NaN where none applies.
  double lower_certified = std::numeric_limits<double>::quiet_NaN();
  double upper_certified = std::numeric_limits<double>::quiet_NaN();
  double lower = 0.0;  // best lower bound: max of the asserted ones and 0
  double upper = 0.0;  // lambda_k of the Dirichlet-cut truncation
  // |secular - fem| / secular on sampled rows, NaN elsewhere.
  double fem_discrepancy = std::numeric_limits<double>::quiet_NaN();
  bool fem_agrees = true;
};

struct BracketTable {
  double alpha = 0.0;
  std::int64_t n = 0;
  std::vector<BracketRow> rows;

  std::size_t valid_rows() const;
  const BracketRow& row(std::int64_t k) const { return rows.at(static_cast<std::size_t>(k - 1)); }
};

/// alpha > 1/2; n >= 2 is both the split index of the finite part and the
/// tooth count of the Dirichlet-cut truncation.
BracketTable bracket_spectrum(double alpha, std::size_t k_max, std::int64_t n,
                              const SolveOptions& opt = {});

/// Lower-side threshold for a split at foot n: the tail infimum bound for
/// alpha <= 1, pi^2 / |tail|^2 (second tail eigenvalue) for alpha > 1.
double split_threshold(double alpha, std::int64_t n);

struct MarkedCut {
  std::size_t edge = 0;
  double offset = 0.0;
};

struct InterlacingReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::vector<std::string> failures;  // human-readable, one per violation
  double min_slack = 0.0;  // smallest (b - a + errors) / max(|a|, |b|) over all checks
  bool ok() const { return violations == 0; }
};

/// Across the cut: pooled Neumann-cut <= whole <= pooled Dirichlet-cut and
/// Dirichlet-cut lambda_k <= whole lambda_{k+1}. On the piece holding the
/// edge's first endpoint: lambda_k(N) <= lambda_k(D) <= lambda_{k+1}(N).
/// Relative tolerance rel_tol on top of the solver error estimates. g must
/// be a tree.
InterlacingReport interlacing_check(const MetricGraph& g, const MarkedCut& cut, std::size_t count,
                                    const SolveOptions& opt = {}, double rel_tol = 1e-9);

/// The cut that produces build_truncated_comb(alpha, k, .) from a longer
/// truncation: middle of the backbone edge between feet k and k+1.
MarkedCut standard_cut(const MetricGraph& truncation, std::int64_t k);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  std::size_t points = 0;
};

/// Least squares of ln(value) against ln(k) over k in [k_lo, k_hi].
/// Needs at least 5 points and positive values.
FitResult fit_exponent(const std::vector<double>& ks, const std::vector<double>& values,
                       double k_lo, double k_hi);
/// values[i] belongs to k = i + 1.
FitResult fit_exponent(const std::vector<double>& values, double k_lo, double k_hi);

/// Fraction of computed indices kept for fits on a truncated graph.
inline constexpr double kStableFraction = 0.8;

struct StudyRow {
  double alpha = 0.0;
  std::int64_t k_lo = 0;
  std::int64_t k_hi = 0;
  double slope_lower = 0.0;
  double slope_upper = 0.0;
  double predicted_lo = 0.0;
  double predicted_hi = 0.0;
  std::int64_t n = 0;
  std::size_t valid_rows = 0;
  BracketTable table;
};

/// One row per alpha, in input order. Eigenvalues are computed up to
/// ceil(k_hi / kStableFraction) so that the window stays clear of the
/// truncation's own Weyl range.
std::vector<StudyRow> phase_transition_study(const std::vector<double>& alphas, std::int64_t k_lo,
                                             std::int64_t k_hi, std::int64_t n,
                                             const SolveOptions& opt = {});

/// Exponent band predicted for the window: [4a - 2, 2a] for a < 1, the fitted
/// slopes of k^2/ln(k)^4 and k^2/ln(k)^2 for a = 1, [2, 2] for a > 1.
std::pair<double, double> predicted_band(double alpha, double k_lo, double k_hi);

struct FinitePartRow {
  double alpha = 0.0;
  std::int64_t n = 0;
  std::int64_t k = 0;
  double lambda = 0.0;         // lambda_k of the finite part
  double paper_bound = 0.0;    // finite_part_upper_paper
  double strict_bound = 0.0;   // finite_part_upper_strict
  double volume = 0.0;         // exact finite-part volume
  double volume_displayed = 0.0;
  double scaled = 0.0;         // lambda * n^{2 - 2a} / k^2
  bool paper_holds = false;
  bool strict_holds = false;
};

/// Compares the finite-part upper bound variants with computed eigenvalues
/// over the (alpha, n, k) grid; n, k >= 2.
std::vector<FinitePartRow> finite_part_comparison(const std::vector<double>& alphas,
                                                  const std::vector<std::int64_t>& ns,
                                                  const std::vector<std::int64_t>& ks,
                                                  const SolveOptions& opt = {});

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  bool corrupt_edge = false;   // perturb one edge length before the volume check
  double fem_rel_tol = 1e-8;   // FEM refinement tolerance in cross-backend rows
  double fem_h_scale = 1.0;    // > 1 starts FEM refinement on a coarser mesh
  std::size_t threads = 1;
};

/// Interval analytics, volume identities, cross-backend agreement, bound
/// nesting and interlacing.
std::vector<CheckResult> verify_suite(const VerifyOptions& opt = {});

}  // namespace combspec::analysis
