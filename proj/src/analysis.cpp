#include "combspec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "combspec/bounds.hpp"
#include "combspec/fem.hpp"
#include "combspec/parallel.hpp"
#include "combspec/secular.hpp"
#include "combspec/series.hpp"

namespace combspec::analysis {

namespace {

constexpr double kPi = std::numbers::pi;

Spectrum pooled(const std::vector<MetricGraph>& pieces, std::size_t count,
                const SolveOptions& opt) {
  std::vector<std::pair<double, double>> all;
  for (const auto& p : pieces) {
    const Spectrum s = solve(p, count, opt);
    for (std::size_t i = 0; i < s.size(); ++i) all.emplace_back(s.eigenvalues[i], s.errors[i]);
  }
  std::sort(all.begin(), all.end());
  Spectrum out;
  out.backend = "pooled";
  for (std::size_t i = 0; i < std::min(count, all.size()); ++i) {
    out.eigenvalues.push_back(all[i].first);
    out.errors.push_back(all[i].second);
  }
  return out;
}

struct LeChecker {
  InterlacingReport& report;
  double rel_tol;

  // a <= b up to the solver errors plus a relative tolerance.
  void operator()(double a, double ea, double b, double eb, const std::string& what) {
    ++report.checked;
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    const double slack = (b - a + ea + eb) / scale;
    if (report.checked == 1 || slack < report.min_slack) report.min_slack = slack;
    if (a - b > ea + eb + rel_tol * scale) {
      ++report.violations;
      std::ostringstream os;
      os.precision(17);
      os << what << ": " << a << " > " << b;
      report.failures.push_back(os.str());
    }
  }
};

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

}  // namespace

Spectrum solve(const MetricGraph& g, std::size_t count, const SolveOptions& opt) {
  if (is_chain_graph(g)) {
    Spectrum s = secular::eigenvalues_by_bisection(graph_to_chain(g), count, opt.abs_tol);
    s.fingerprint = g.fingerprint();
    return s;
  }
  return fem::refine_until(g, count, opt.fem_rel_tol);
}

std::size_t BracketTable::valid_rows() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const BracketRow& r) { return r.valid; }));
}

double split_threshold(double alpha, std::int64_t n) {
  if (alpha <= 1.0) return bounds::tail_infimum_bound(alpha, n);
  if (n < 2) throw std::invalid_argument("split_threshold: n must be >= 2");
  const double tail = riemann_zeta(alpha) -
                      power_partial_sum(alpha, static_cast<std::uint64_t>(n - 1)) +
                      std::pow(static_cast<double>(n), -alpha);
  return kPi * kPi / (tail * tail);
}

BracketTable bracket_spectrum(double alpha, std::size_t k_max, std::int64_t n,
                              const SolveOptions& opt) {
  if (!(alpha > 0.5)) throw std::invalid_argument("bracket_spectrum: alpha must exceed 1/2");
  if (n < 2) throw std::invalid_argument("bracket_spectrum: n must be >= 2");
  if (k_max < 1) throw std::invalid_argument("bracket_spectrum: k_max must be >= 1");

  const BackboneChain upper_chain = truncated_comb_chain(alpha, n, Condition::Dirichlet);
  const BackboneChain lower_chain = finite_part_chain(alpha, n);
  const bool with_fem = opt.fem_stride > 0;
  auto spectra = parallel_map(with_fem ? 3 : 2, opt.threads, [&](std::size_t job) {
    switch (job) {
      case 0:
        return secular::eigenvalues_by_bisection(upper_chain, k_max, opt.abs_tol);
      case 1:
        return secular::eigenvalues_by_bisection(lower_chain, k_max, opt.abs_tol);
      default:
        return fem::refine_until(chain_to_graph(upper_chain), k_max, opt.fem_rel_tol);
    }
  });
  const Spectrum& up = spectra[0];
  const Spectrum& lo = spectra[1];

  BracketTable table;
  table.alpha = alpha;
  table.n = n;
  const double threshold = split_threshold(alpha, n);
  const bool finite_volume = alpha > 1.0;
  for (std::size_t i = 0; i < k_max; ++i) {
    BracketRow r;
    r.k = static_cast<std::int64_t>(i + 1);
    double err = 0.0;
    if (!finite_volume) {
      r.lower_solver = lo.eigenvalues[i];
      err = lo.errors[i];
    } else if (i > 0) {
      r.lower_solver = lo.eigenvalues[i - 1];
      err = lo.errors[i - 1];
    }
    r.threshold = threshold;
    r.valid = r.lower_solver + err <= threshold;
    if (r.k >= 2 && !finite_volume) {
      r.lower_certified = bounds::certified_lower_bound(alpha, r.k).value;
    }
    if (const auto ub = bounds::certified_upper_bound(alpha, r.k); !ub.vacuous) {
      r.upper_certified = ub.value;
    }
    r.lower = 0.0;
    if (r.valid) r.lower = std::max(r.lower, r.lower_solver - err);
    if (!std::isnan(r.lower_certified)) r.lower = std::max(r.lower, r.lower_certified);
    r.upper = up.eigenvalues[i] + up.errors[i];
    if (with_fem && (r.k == 1 || r.k % static_cast<std::int64_t>(opt.fem_stride) == 0)) {
      const Spectrum& fe = spectra[2];
      const double d = std::abs(up.eigenvalues[i] - fe.eigenvalues[i]);
      r.fem_discrepancy = d / up.eigenvalues[i];
      r.fem_agrees = d <= 10.0 * (up.errors[i] + fe.errors[i]);
    }
    table.rows.push_back(r);
  }
  return table;
}

MarkedCut standard_cut(const MetricGraph& truncation, std::int64_t k) {
  const auto a = truncation.find("foot" + std::to_string(k));
  const auto b = truncation.find("foot" + std::to_string(k + 1));
  if (!a || !b) throw std::invalid_argument("standard_cut: feet k and k+1 not present");
  for (std::size_t e = 0; e < truncation.edge_count(); ++e) {
    const Edge& ed = truncation.edges()[e];
    if ((ed.a == *a && ed.b == *b) || (ed.a == *b && ed.b == *a)) {
      return {e, 0.5 * ed.length};
    }
  }
  throw std::invalid_argument("standard_cut: feet k and k+1 are not adjacent");
}

InterlacingReport interlacing_check(const MetricGraph& g, const MarkedCut& cut, std::size_t count,
                                    const SolveOptions& opt, double rel_tol) {
  if (!is_tree(g)) throw std::invalid_argument("interlacing_check: graph must be a tree");
  const auto n_pieces = cut_at(g, cut.edge, cut.offset, Condition::KirchhoffNeumann);
  const auto d_pieces = cut_at(g, cut.edge, cut.offset, Condition::Dirichlet);

  const Spectrum whole = solve(g, count + 1, opt);
  const Spectrum pooled_n = pooled(n_pieces, count, opt);
  const Spectrum pooled_d = pooled(d_pieces, count, opt);
  const Spectrum side_n = solve(n_pieces.front(), count + 1, opt);
  const Spectrum side_d = solve(d_pieces.front(), count, opt);

  InterlacingReport rep;
  LeChecker le{rep, rel_tol};
  for (std::size_t i = 0; i < count; ++i) {
    const std::string k = std::to_string(i + 1);
    le(pooled_n[i], pooled_n.errors[i], whole[i], whole.errors[i], "N-cut > whole at k=" + k);
    le(whole[i], whole.errors[i], pooled_d[i], pooled_d.errors[i], "whole > D-cut at k=" + k);
    le(pooled_d[i], pooled_d.errors[i], whole[i + 1], whole.errors[i + 1],
       "D-cut(k) > whole(k+1) at k=" + k);
    le(side_n[i], side_n.errors[i], side_d[i], side_d.errors[i], "side N > side D at k=" + k);
    le(side_d[i], side_d.errors[i], side_n[i + 1], side_n.errors[i + 1],
       "side D(k) > side N(k+1) at k=" + k);
  }
  return rep;
}

FitResult fit_exponent(const std::vector<double>& ks, const std::vector<double>& values,
                       double k_lo, double k_hi) {
  if (ks.size() != values.size()) throw std::invalid_argument("fit_exponent: size mismatch");
  if (!(k_lo > 0.0) || !(k_hi > k_lo)) throw std::invalid_argument("fit_exponent: bad window");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < k_lo || ks[i] > k_hi) continue;
    if (!(values[i] > 0.0)) {
      throw std::invalid_argument("fit_exponent: nonpositive value at k = " + fmt(ks[i]));
    }
    x.push_back(std::log(ks[i]));
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 5) {
    throw std::invalid_argument("fit_exponent: window holds " + std::to_string(x.size()) +
                                " points, need 5");
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponent: degenerate window");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  f.k_lo = k_lo;
  f.k_hi = k_hi;
  f.points = x.size();
  return f;
}

FitResult fit_exponent(const std::vector<double>& values, double k_lo, double k_hi) {
  std::vector<double> ks(values.size());
  for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = static_cast<double>(i + 1);
  return fit_exponent(ks, values, k_lo, k_hi);
}

std::pair<double, double> predicted_band(double alpha, double k_lo, double k_hi) {
  if (alpha > 1.0) return {2.0, 2.0};
  if (alpha < 1.0) return {4.0 * alpha - 2.0, 2.0 * alpha};
  std::vector<double> ks, lo, hi;
  for (double k = std::max(2.0, std::ceil(k_lo)); k <= k_hi; k += 1.0) {
    const double l = std::log(k);
    ks.push_back(k);
    lo.push_back(k * k / (l * l * l * l));
    hi.push_back(k * k / (l * l));
  }
  return {fit_exponent(ks, lo, k_lo, k_hi).slope, fit_exponent(ks, hi, k_lo, k_hi).slope};
}

std::vector<StudyRow> phase_transition_study(const std::vector<double>& alphas, std::int64_t k_lo,
                                             std::int64_t k_hi, std::int64_t n,
                                             const SolveOptions& opt) {
  for (double a : alphas) {
    if (!(a > 0.5)) throw std::invalid_argument("phase_transition_study: every alpha must exceed 1/2");
  }
  if (k_lo < 1 || k_hi <= k_lo) throw std::invalid_argument("phase_transition_study: bad window");
  const auto k_max = static_cast<std::size_t>(std::ceil(static_cast<double>(k_hi) / kStableFraction));
  SolveOptions inner = opt;
  inner.threads = 1;
  return parallel_map(alphas.size(), opt.threads, [&](std::size_t i) {
    StudyRow row;
    row.alpha = alphas[i];
    row.k_lo = k_lo;
    row.k_hi = k_hi;
    row.n = n;
    row.table = bracket_spectrum(alphas[i], k_max, n, inner);
    std::vector<double> ks, lower, upper_ks, upper;
    for (const auto& r : row.table.rows) {
      if (r.k < k_lo || r.k > k_hi) continue;
      if (r.valid) ++row.valid_rows;
      upper_ks.push_back(static_cast<double>(r.k));
      upper.push_back(r.upper);
      if (r.lower > 0.0) {
        ks.push_back(static_cast<double>(r.k));
        lower.push_back(r.lower);
      }
    }
    const double lo = static_cast<double>(k_lo), hi = static_cast<double>(k_hi);
    row.slope_upper = fit_exponent(upper_ks, upper, lo, hi).slope;
    row.slope_lower = ks.size() >= 5 ? fit_exponent(ks, lower, lo, hi).slope
                                     : std::numeric_limits<double>::quiet_NaN();
    std::tie(row.predicted_lo, row.predicted_hi) = predicted_band(alphas[i], lo, hi);
    return row;
  });
}

std::vector<FinitePartRow> finite_part_comparison(const std::vector<double>& alphas,
                                                  const std::vector<std::int64_t>& ns,
                                                  const std::vector<std::int64_t>& ks,
                                                  const SolveOptions& opt) {
  if (ks.empty()) return {};
  const std::int64_t k_top = *std::max_element(ks.begin(), ks.end());
  struct Cell {
    double alpha;
    std::int64_t n;
  };
  std::vector<Cell> cells;
  for (double a : alphas) {
    for (std::int64_t n : ns) cells.push_back({a, n});
  }
  auto blocks = parallel_map(cells.size(), opt.threads, [&](std::size_t c) {
    const auto [a, n] = cells[c];
    const Spectrum s = secular::eigenvalues_by_bisection(finite_part_chain(a, n),
                                                         static_cast<std::size_t>(k_top), opt.abs_tol);
    std::vector<FinitePartRow> rows;
    for (std::int64_t k : ks) {
      FinitePartRow r;
      r.alpha = a;
      r.n = n;
      r.k = k;
      r.lambda = s.lambda(static_cast<std::size_t>(k));
      r.paper_bound = bounds::finite_part_upper_paper(a, n, k);
      r.strict_bound = bounds::finite_part_upper_strict(a, n, k);
      r.volume = finite_part_volume(a, n);
      r.volume_displayed = finite_part_volume_displayed(a, n);
      r.scaled = r.lambda * std::pow(static_cast<double>(n), 2.0 - 2.0 * a) /
                 static_cast<double>(k * k);
      r.paper_holds = r.lambda <= r.paper_bound;
      r.strict_holds = r.lambda <= r.strict_bound;
      rows.push_back(r);
    }
    return rows;
  });
  std::vector<FinitePartRow> out;
  for (auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<CheckResult> verify_suite(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const double pi2 = kPi * kPi;

  {  // interval analytics, both backends
    CheckResult c{"interval-analytics", true, ""};
    const Condition D = Condition::Dirichlet, N = Condition::KirchhoffNeumann;
    const std::pair<Condition, Condition> cases[] = {{D, D}, {D, N}, {N, N}};
    double worst_sec = 0.0, worst_fem = 0.0;
    for (const auto& [l, r] : cases) {
      GraphBuilder b;
      b.add_edge(b.add_vertex("a", l), b.add_vertex("b", r), 1.0);
      const MetricGraph g = std::move(b).build();
      const double shift = (l == D && r == D) ? 0.0 : (l == N && r == N ? 1.0 : 0.5);
      const Spectrum sec = secular::eigenvalues_by_bisection(graph_to_chain(g), 10, 1e-10);
      const Spectrum fe = fem::refine_until(g, 5, 1e-8);
      for (std::size_t k = 1; k <= 10; ++k) {
        const double m = static_cast<double>(k) - shift;
        const double exact = m * m * pi2;
        worst_sec = std::max(worst_sec, std::abs(sec.lambda(k) - exact));
        if (k <= 5 && exact > 0.0) {
          worst_fem = std::max(worst_fem, std::abs(fe.lambda(k) - exact) / exact);
        }
      }
    }
    c.passed = worst_sec <= 1e-9 && worst_fem <= 1e-6;
    c.detail = "secular max abs err " + fmt(worst_sec) + ", fem max rel err " + fmt(worst_fem);
    out.push_back(c);
  }

  {  // volume identity
    CheckResult c{"volume-identity", true, ""};
    double worst = 0.0;
    for (double a : {0.6, 1.0, 2.0}) {
      for (std::int64_t k : {1, 5, 40}) {
        MetricGraph g = build_truncated_comb(a, k, Condition::Dirichlet);
        if (opt.corrupt_edge) {
          auto edges = g.edges();
          edges.front().length *= 1.01;
          g = MetricGraph(g.vertices(), edges);
        }
        const double exact = truncated_comb_volume(a, k);
        worst = std::max(worst, std::abs(volume(g) - exact) / exact);
      }
    }
    c.passed = worst <= 1e-12;
    c.detail = "max rel deviation " + fmt(worst);
    out.push_back(c);
  }

  {  // cross-backend
    CheckResult c{"cross-backend", true, ""};
    const std::vector<double> alphas{0.6, 1.0, 1.5};
    auto flagged = parallel_map(alphas.size(), opt.threads, [&](std::size_t i) {
      const BackboneChain chain = truncated_comb_chain(alphas[i], 20, Condition::Dirichlet);
      const Spectrum sec = secular::eigenvalues_by_bisection(chain, 10, 1e-10);
      fem::RefineOptions ro;
      if (opt.fem_h_scale != 1.0) ro.initial_h = opt.fem_h_scale * fem::resolving_h(sec.eigenvalues.back());
      const Spectrum fe = fem::refine_until(chain_to_graph(chain), 10, opt.fem_rel_tol, ro);
      std::size_t bad = 0;
      for (std::size_t k = 0; k < 10; ++k) {
        const double d = std::abs(sec[k] - fe[k]);
        if (d > 10.0 * (sec.errors[k] + fe.errors[k]) || d > 1e-5 * sec[k]) ++bad;
      }
      return bad;
    });
    std::size_t bad = 0;
    for (auto f : flagged) bad += f;
    c.passed = bad == 0;
    c.detail = std::to_string(bad) + " of 30 rows flagged";
    out.push_back(c);
  }

  {  // certified bounds nest
    CheckResult c{"bound-nesting", true, ""};
    std::size_t bad = 0, rows = 0;
    for (double a : {0.6, 0.75, 0.9, 1.0}) {
      for (std::int64_t k = 2; k <= 64; ++k) {
        ++rows;
        if (bounds::certified_lower_bound(a, k).value > bounds::certified_upper_bound(a, k).value) {
          ++bad;
        }
      }
    }
    c.passed = bad == 0;
    c.detail = std::to_string(bad) + " of " + std::to_string(rows) + " rows inverted";
    out.push_back(c);
  }

  {  // BKKM sharpness on the interval
    CheckResult c{"bkkm-interval-sharpness", true, ""};
    double worst = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double kd = k;
      worst = std::max(worst, std::abs(*bounds::bkkm_upper(kd, 1.0, 2, 0) / (kd * kd * pi2) - 1.0));
      worst = std::max(worst,
                       std::abs(*bounds::bkkm_upper(kd, 1.0, 1, 1) / ((kd - 0.5) * (kd - 0.5) * pi2) - 1.0));
      if (k >= 2) {
        worst = std::max(worst,
                         std::abs(*bounds::bkkm_upper(kd, 1.0, 0, 2) / ((kd - 1) * (kd - 1) * pi2) - 1.0));
      }
    }
    c.passed = worst <= 1e-12;
    c.detail = "max rel deviation " + fmt(worst);
    out.push_back(c);
  }

  {  // interlacing across the standard cut
    CheckResult c{"interlacing", true, ""};
    const MetricGraph g = build_truncated_comb(1.0, 30, Condition::KirchhoffNeumann);
    const auto rep = interlacing_check(g, standard_cut(g, 20), 20);
    c.passed = rep.ok();
    c.detail = std::to_string(rep.violations) + " violations in " + std::to_string(rep.checked) +
               " checks" + (rep.failures.empty() ? "" : "; first: " + rep.failures.front());
    out.push_back(c);
  }

  {  // decoupled Dirichlet system dominates the truncation
    CheckResult c{"decoupled-domination", true, ""};
    const std::int64_t t = 50;
    const Spectrum s =
        secular::eigenvalues_by_bisection(truncated_comb_chain(2.0, t, Condition::Dirichlet), 30);
    std::size_t bad = 0;
    for (std::size_t k = 1; k <= 30; ++k) {
      const double d = bounds::decoupled_eigenvalue(2.0, static_cast<std::int64_t>(k), t);
      if (s.lambda(k) > d * (1.0 + 1e-9)) ++bad;
    }
    c.passed = bad == 0;
    c.detail = std::to_string(bad) + " of 30 indices violated";
    out.push_back(c);
  }
  return out;
}

}  // namespace combspec::analysis
