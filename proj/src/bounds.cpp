#include "combspec/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "combspec/comb.hpp"

namespace combspec::bounds {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

void require_discrete_infinite(double alpha, const char* who) {
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    throw std::invalid_argument(std::string(who) + ": alpha must lie in (1/2, 1]");
  }
}

}  // namespace

std::optional<double> bkkm_upper(double k, double vol, double n_dirichlet, double n_neumann) {
  if (!(vol > 0.0)) throw std::invalid_argument("bkkm_upper: volume must be positive");
  const double factor = k - 2.0 + n_dirichlet + 0.5 * n_neumann;
  if (!(factor > 0.0)) return std::nullopt;
  return factor * factor * kPi2 / (vol * vol);
}

double bkkm_lower(double k, double vol) {
  if (!(vol > 0.0)) throw std::invalid_argument("bkkm_lower: volume must be positive");
  return k * k * kPi2 / (4.0 * vol * vol);
}

double tail_infimum_bound(double alpha, std::int64_t n) {
  require_discrete_infinite(alpha, "tail_infimum_bound");
  if (n < 2) throw std::invalid_argument("tail_infimum_bound: n must be >= 2");
  return 0.5 * (2.0 * alpha - 1.0) * std::pow(static_cast<double>(n), 2.0 * alpha - 1.0);
}

double finite_part_volume_integral(double alpha, std::int64_t n) {
  if (!(alpha > 0.0)) throw std::invalid_argument("finite_part_volume_integral: alpha > 0");
  const double nd = static_cast<double>(n);
  if (alpha == 1.0) return std::log(nd);
  return std::expm1((1.0 - alpha) * std::log(nd)) / (1.0 - alpha);
}

double finite_part_upper_paper(double alpha, std::int64_t n, std::int64_t k) {
  if (n < 2 || k < 2) throw std::invalid_argument("finite_part_upper_paper: n, k must be >= 2");
  const double kd = static_cast<double>(k);
  const double factor = kd - 2.0 + 0.5 * kd;
  const double v = finite_part_volume_integral(alpha, n);
  return factor * factor * kPi2 / (v * v);
}

double finite_part_upper_strict(double alpha, std::int64_t n, std::int64_t k) {
  if (n < 2 || k < 2) throw std::invalid_argument("finite_part_upper_strict: n, k must be >= 2");
  return *bkkm_upper(static_cast<double>(k), finite_part_volume(alpha, n), 0.0,
                     static_cast<double>(n));
}

BoundReport certified_upper_bound(double alpha, std::int64_t k, const BoundOptions& opt) {
  if (!(alpha > 0.5)) throw std::invalid_argument("certified_upper_bound: alpha must exceed 1/2");
  if (k < 1) throw std::invalid_argument("certified_upper_bound: k must be >= 1");
  BoundReport r;
  r.k = k;
  r.alpha = alpha;
  r.side = Side::Upper;
  r.n = k;
  r.n_dirichlet = 1;
  r.n_neumann = k;
  if (opt.paper_constants && alpha <= 1.0 && k >= 2) {
    r.volume = truncated_volume_lower_bound(alpha, k);
    r.source = "bkkm-upper:dirichlet-truncation:integral-volume";
  } else {
    r.volume = truncated_comb_volume(alpha, k);
    r.source = "bkkm-upper:dirichlet-truncation";
  }
  const auto v = bkkm_upper(static_cast<double>(k), r.volume, 1.0, static_cast<double>(k));
  r.vacuous = !v.has_value();
  r.value = v.value_or(std::numeric_limits<double>::infinity());
  return r;
}

bool split_condition_holds(double alpha, std::int64_t n, std::int64_t k) {
  return finite_part_upper_paper(alpha, n, k) <= tail_infimum_bound(alpha, n);
}

std::int64_t split_index_by_scan(double alpha, std::int64_t k, std::int64_t n_max) {
  for (std::int64_t n = 2; n <= n_max; ++n) {
    if (split_condition_holds(alpha, n, k)) return n;
  }
  return -1;
}

BoundReport certified_lower_bound(double alpha, std::int64_t k, const BoundOptions& opt) {
  require_discrete_infinite(alpha, "certified_lower_bound");
  if (k < 2) throw std::invalid_argument("certified_lower_bound: k must be >= 2");
  // The predicate is monotone: its left side decreases and its right side
  // increases with n.
  std::int64_t hi = 2;
  while (!split_condition_holds(alpha, hi, k)) {
    if (hi > opt.n_max / 2) {
      throw std::runtime_error("certified_lower_bound: no split index n <= " +
                               std::to_string(opt.n_max) + " for k = " + std::to_string(k));
    }
    hi *= 2;
  }
  std::int64_t lo = hi / 2;  // fails (or is below the search start)
  if (lo < 2) lo = 1;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (split_condition_holds(alpha, mid, k)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  BoundReport r;
  r.k = k;
  r.alpha = alpha;
  r.side = Side::Lower;
  r.n = hi;
  r.n_neumann = hi;
  if (opt.paper_constants) {
    r.volume = 1.0 + finite_part_volume_integral(alpha, hi);
    r.source = "bkkm-lower:finite-part:integral-volume";
  } else {
    r.volume = finite_part_volume(alpha, hi);
    r.source = "bkkm-lower:finite-part";
  }
  r.value = bkkm_lower(static_cast<double>(k), r.volume);
  return r;
}

FiniteVolumeBounds finite_volume_bounds(double alpha, std::int64_t k) {
  if (!(alpha > 1.0)) throw std::invalid_argument("finite_volume_bounds: alpha must exceed 1");
  if (k < 1) throw std::invalid_argument("finite_volume_bounds: k must be >= 1");
  const double vol = comb_volume(alpha);
  const double kd = static_cast<double>(k);
  return {kPi2 * kd * kd / (4.0 * vol * vol), kPi2 * kd * kd / 4.0};
}

std::int64_t decoupled_counting(double alpha, double lambda, std::int64_t truncation) {
  if (lambda < 0.0) throw std::invalid_argument("decoupled_counting: lambda must be >= 0");
  if (truncation < 1) throw std::invalid_argument("decoupled_counting: truncation must be >= 1");
  const double s = std::sqrt(lambda);
  std::int64_t total = 0;
  // Teeth and backbone gaps both shrink with n; stop once pi/s is out of reach.
  for (std::int64_t n = 1; n <= truncation; ++n) {
    const double x = s * std::pow(static_cast<double>(n), -alpha) / std::numbers::pi;
    if (x < 1.0) break;
    total += static_cast<std::int64_t>(std::floor(x));
  }
  for (std::int64_t n = 1; n < truncation; ++n) {
    const double x = s * backbone_gap(alpha, static_cast<double>(n)) / std::numbers::pi;
    if (x < 1.0) break;
    total += static_cast<std::int64_t>(std::floor(x));
  }
  return total;
}

double decoupled_eigenvalue(double alpha, std::int64_t k, std::int64_t truncation) {
  if (k < 1) throw std::invalid_argument("decoupled_eigenvalue: k must be >= 1");
  double lo = 0.0;
  double hi = 1.0;
  while (decoupled_counting(alpha, hi, truncation) < k) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("decoupled_eigenvalue: counting never reaches k");
  }
  // Smallest lambda with N(lambda) >= k; N is right-continuous.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (decoupled_counting(alpha, mid, truncation) >= k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace combspec::bounds
