#include "combspec/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace combspec::secular {

namespace {

constexpr double kPi = std::numbers::pi;

// Tooth phase x = s*l reduced to its pole branch: x = poles*pi + r, with the
// branch chosen so that the point-interaction angle map is continuous in r
// and the pole count increments exactly where the map wraps.
struct ReducedPhase {
  double poles;
  double r;
};

ReducedPhase reduce(const Tooth& tooth, double s) {
  const double x = s * tooth.length;
  const double shift = tooth.tip == Condition::KirchhoffNeumann ? 0.5 : 0.0;
  const double poles = std::floor(x / kPi + shift);
  return {poles, x - poles * kPi};
}

// New angle in [0, pi] after crossing a foot: cot(phi') = cot(phi) + g with
// g = -tan(r) (Neumann tip) or cot(r) (Dirichlet tip), written as num/den
// with den >= 0 to stay finite at the poles.
double point_interaction(double phi, const Tooth& tooth, const ReducedPhase& ph) {
  double num, den;
  if (tooth.tip == Condition::KirchhoffNeumann) {
    num = -std::sin(ph.r);
    den = std::max(0.0, std::cos(ph.r));
  } else {
    num = std::cos(ph.r);
    den = std::max(0.0, std::sin(ph.r));
  }
  const double sp = std::sin(phi);
  return std::atan2(sp * den, std::cos(phi) * den + num * sp);
}

double apply_teeth(double theta, const std::vector<Tooth>& teeth, double s) {
  for (const Tooth& tooth : teeth) {
    const double m = std::floor(theta / kPi);
    const double phi = theta - m * kPi;
    if (phi == 0.0) continue;  // solution vanishes at the foot
    theta = m * kPi + point_interaction(phi, tooth, reduce(tooth, s));
  }
  return theta;
}

std::size_t pendant_count(const BackboneChain& chain) {
  std::size_t p = chain.tooth_count();
  if (chain.teeth.front().empty()) ++p;
  if (chain.teeth.back().empty()) ++p;
  return p;
}

struct Bracket {
  double lo, hi;
  std::size_t count_lo, count_hi;
};

}  // namespace

double tooth_dtn(double length, double s) {
  return tooth_dtn(Tooth{length, Condition::KirchhoffNeumann}, s);
}

double tooth_dtn(const Tooth& tooth, double s) {
  if (!(tooth.length > 0.0)) throw std::invalid_argument("tooth_dtn: length must be positive");
  if (s < 0.0) throw std::invalid_argument("tooth_dtn: frequency must be nonnegative");
  const double x = s * tooth.length;
  const double c = std::cos(x);
  const double sn = std::sin(x);
  const double eps = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (tooth.tip == Condition::KirchhoffNeumann) {
    if (std::abs(c) <= eps) return std::copysign(inf, sn * (c < 0.0 ? -1.0 : 1.0));
    return s * sn / c;
  }
  // Dirichlet tip: -s cot(s l); at s = 0 the limit is -1/l.
  if (s == 0.0) return -1.0 / tooth.length;
  if (std::abs(sn) <= eps) return std::copysign(inf, -c * (sn < 0.0 ? -1.0 : 1.0));
  return -s * c / sn;
}

std::size_t tooth_pole_count(const Tooth& tooth, double s) {
  return static_cast<std::size_t>(std::max(0.0, reduce(tooth, s).poles));
}

SweepState sweep(const BackboneChain& chain, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("sweep: lambda must be nonnegative");
  const double s = std::sqrt(lambda);
  SweepState st;
  st.s = s;
  for (const auto& list : chain.teeth) {
    for (const auto& tooth : list) st.pole_windings += tooth_pole_count(tooth, s);
  }
  const std::size_t m = chain.segments.size();
  if (chain.left == Condition::Dirichlet) {
    st.theta = 0.0;
  } else {
    st.theta = apply_teeth(0.5 * kPi, chain.teeth.front(), s);
  }
  for (std::size_t i = 0; i < m; ++i) {
    st.theta += s * chain.segments[i];
    const bool last = i + 1 == m;
    if (last && chain.right == Condition::Dirichlet) break;
    st.theta = apply_teeth(st.theta, chain.teeth[i + 1], s);
  }
  st.target = chain.right == Condition::Dirichlet ? kPi : 0.5 * kPi;
  return st;
}

std::size_t count_from_sweep(const SweepState& st) {
  std::size_t backbone = 0;
  if (st.theta > st.target) {
    backbone = static_cast<std::size_t>(std::ceil((st.theta - st.target) / kPi));
  }
  return st.pole_windings + backbone;
}

std::size_t secular_count(const BackboneChain& chain, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("secular_count: lambda must be nonnegative");
  if (lambda == 0.0) return 0;
  return count_from_sweep(sweep(chain, lambda));
}

CheckedCount secular_count_checked(const BackboneChain& chain, double lambda) {
  CheckedCount out;
  out.count = secular_count(chain, lambda);
  if (lambda > 0.0) {
    const std::size_t below = secular_count(chain, lambda * (1.0 - 1e-13));
    const std::size_t above = secular_count(chain, lambda * (1.0 + 1e-13));
    out.ambiguous = below != above;
  }
  return out;
}

double frequency_ceiling(const BackboneChain& chain, std::size_t count) {
  return kPi * static_cast<double>(count + pendant_count(chain) + 2) / chain.min_edge_length();
}

Spectrum eigenvalues_by_bisection(const BackboneChain& chain, std::size_t count,
                                  double abs_tol) {
  chain.validate();
  if (!(abs_tol > 0.0)) throw std::invalid_argument("eigenvalues_by_bisection: abs_tol must be > 0");
  Spectrum out;
  out.backend = "secular";
  out.fingerprint = chain_to_graph(chain).fingerprint();
  if (count == 0) return out;

  const double s_max = frequency_ceiling(chain, count);
  double hi = s_max * s_max;
  std::size_t count_hi = secular_count(chain, hi);
  for (int i = 0; count_hi < count; ++i) {
    if (i >= 16) {
      throw SolverError("eigenvalues_by_bisection: fewer than " + std::to_string(count) +
                        " eigenvalues below the frequency ceiling " + std::to_string(s_max));
    }
    hi *= 4.0;
    count_hi = secular_count(chain, hi);
  }
  out.eigenvalues.assign(count, 0.0);
  out.errors.assign(count, 0.0);
  std::vector<Bracket> stack{{0.0, hi, 0, count_hi}};
  while (!stack.empty()) {
    const Bracket b = stack.back();
    stack.pop_back();
    if (b.count_hi <= b.count_lo || b.count_lo >= count) continue;
    const double mid = 0.5 * (b.lo + b.hi);
    if (b.hi - b.lo < abs_tol || mid <= b.lo || mid >= b.hi) {
      for (std::size_t j = b.count_lo; j < std::min(b.count_hi, count); ++j) {
        out.eigenvalues[j] = mid;
        out.errors[j] = 0.5 * (b.hi - b.lo);
      }
      continue;
    }
    const std::size_t count_mid = secular_count(chain, mid);
    stack.push_back({mid, b.hi, count_mid, b.count_hi});
    stack.push_back({b.lo, mid, b.count_lo, count_mid});
  }
  return out;
}

}  // namespace combspec::secular
