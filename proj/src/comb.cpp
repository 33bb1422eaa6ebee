#include "combspec/comb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "combspec/series.hpp"

namespace combspec {

namespace {

double foot(double alpha, double n) { return std::pow(n, -alpha); }

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("comb: alpha must be positive");
  }
}

std::string foot_name(std::int64_t n) { return "foot" + std::to_string(n); }

}  // namespace

Regime classify(double alpha) {
  require_alpha(alpha);
  if (alpha <= 0.5) return Regime::EssentialSpectrum;
  if (alpha <= 1.0) return Regime::DiscreteInfiniteVolume;
  return Regime::FiniteVolume;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::EssentialSpectrum:
      return "essential-spectrum";
    case Regime::DiscreteInfiniteVolume:
      return "discrete-infinite-volume";
    case Regime::FiniteVolume:
      return "finite-volume";
  }
  return "unknown";
}

void CombSpec::validate() const {
  require_alpha(alpha);
  if (truncation_index < 1) throw std::invalid_argument("comb: truncation index must be >= 1");
  if (variant == CombVariant::FinitePart && truncation_index < 2) {
    throw std::invalid_argument("comb: finite part needs n >= 2");
  }
  if (variant == CombVariant::TailApproximation && depth <= truncation_index) {
    throw std::invalid_argument("comb: tail approximation needs depth > n");
  }
}

void BackboneChain::validate() const {
  if (segments.empty()) throw std::invalid_argument("chain: at least one backbone segment");
  if (teeth.size() != nodes()) throw std::invalid_argument("chain: teeth list size mismatch");
  if (!positions.empty() && positions.size() != nodes()) {
    throw std::invalid_argument("chain: positions size mismatch");
  }
  if (!names.empty() && names.size() != nodes()) {
    throw std::invalid_argument("chain: names size mismatch");
  }
  auto ok = [](double x) { return x > 0.0 && std::isfinite(x); };
  for (double s : segments) {
    if (!ok(s)) throw std::invalid_argument("chain: segment lengths must be positive");
  }
  for (const auto& list : teeth) {
    for (const auto& t : list) {
      if (!ok(t.length)) throw std::invalid_argument("chain: tooth lengths must be positive");
    }
  }
}

double BackboneChain::min_edge_length() const {
  double m = std::numeric_limits<double>::infinity();
  for (double s : segments) m = std::min(m, s);
  for (const auto& list : teeth) {
    for (const auto& t : list) m = std::min(m, t.length);
  }
  return m;
}

std::size_t BackboneChain::tooth_count() const {
  std::size_t n = 0;
  for (const auto& list : teeth) n += list.size();
  return n;
}

MetricGraph chain_to_graph(const BackboneChain& chain) {
  chain.validate();
  const std::size_t m = chain.segments.size();
  GraphBuilder b;
  std::vector<std::size_t> node(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    Condition c = Condition::KirchhoffNeumann;
    if (i == 0) c = chain.left;
    if (i == m) c = chain.right;
    node[i] = b.add_vertex(chain.names.empty() ? "v" + std::to_string(i) : chain.names[i], c);
  }
  // Edge order: backbone segments first, then teeth node by node.
  for (std::size_t i = 0; i < m; ++i) b.add_edge(node[i], node[i + 1], chain.segments[i]);
  for (std::size_t i = 0; i <= m; ++i) {
    const auto& list = chain.teeth[i];
    const std::string base = chain.names.empty() ? "v" + std::to_string(i) : chain.names[i];
    for (std::size_t j = 0; j < list.size(); ++j) {
      const std::string tip = list.size() == 1 ? base + ".tip" : base + ".tip" + std::to_string(j);
      b.add_edge(node[i], b.add_vertex(tip, list[j].tip), list[j].length);
    }
  }
  return std::move(b).build();
}

bool is_chain_graph(const MetricGraph& g) {
  try {
    (void)graph_to_chain(g);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

BackboneChain graph_to_chain(const MetricGraph& g) {
  if (!is_tree(g)) throw std::invalid_argument("graph_to_chain: graph is not a tree");
  BackboneChain chain;
  if (g.edge_count() == 1) {
    const Edge& e = g.edges()[0];
    chain.segments = {e.length};
    chain.teeth = {{}, {}};
    chain.left = g.condition(e.a);
    chain.right = g.condition(e.b);
    chain.names = {g.vertices()[e.a].id, g.vertices()[e.b].id};
    return chain;
  }
  const std::size_t n = g.vertex_count();
  auto other = [&](std::size_t e, std::size_t v) {
    return g.edges()[e].a == v ? g.edges()[e].b : g.edges()[e].a;
  };
  auto is_leaf = [&](std::size_t v) { return g.degree(v) == 1; };

  // Spine: non-leaf vertices; must induce a path.
  std::vector<std::vector<std::size_t>> spine_nbrs(n);
  std::vector<std::size_t> spine;
  for (std::size_t v = 0; v < n; ++v) {
    if (is_leaf(v)) continue;
    spine.push_back(v);
    for (std::size_t e : g.incidence()[v]) {
      const std::size_t w = other(e, v);
      if (!is_leaf(w)) spine_nbrs[v].push_back(w);
    }
    if (spine_nbrs[v].size() > 2) {
      throw std::invalid_argument("graph_to_chain: tree is not a caterpillar");
    }
  }
  std::size_t start = spine.front();
  for (std::size_t v : spine) {
    if (spine_nbrs[v].size() <= 1) {
      start = v;
      break;
    }
  }
  std::vector<std::size_t> path{start};
  while (path.size() < spine.size()) {
    const std::size_t v = path.back();
    std::size_t next = n;
    for (std::size_t w : spine_nbrs[v]) {
      if (path.size() < 2 || w != path[path.size() - 2]) next = w;
    }
    if (next == n) throw std::invalid_argument("graph_to_chain: spine is not a path");
    path.push_back(next);
  }

  // Terminal choice: a Dirichlet spine end is itself the terminal, otherwise
  // the backbone is extended through one of its leaves.
  std::vector<bool> used_leaf(n, false);
  auto first_leaf = [&](std::size_t v) -> std::size_t {
    for (std::size_t e : g.incidence()[v]) {
      const std::size_t w = other(e, v);
      if (is_leaf(w) && !used_leaf[w]) return w;
    }
    return n;
  };
  std::vector<std::size_t> nodes;
  std::size_t left_leaf = n;
  if (g.condition(path.front()) == Condition::KirchhoffNeumann) {
    left_leaf = first_leaf(path.front());
    used_leaf[left_leaf] = true;
    nodes.push_back(left_leaf);
  }
  nodes.insert(nodes.end(), path.begin(), path.end());
  const bool right_is_terminal =
      g.condition(path.back()) == Condition::Dirichlet && !(path.size() == 1 && left_leaf == n);
  if (!right_is_terminal) {
    const std::size_t leaf = first_leaf(path.back());
    if (leaf == n) throw std::invalid_argument("graph_to_chain: no leaf to end the backbone");
    used_leaf[leaf] = true;
    nodes.push_back(leaf);
  }
  const std::size_t m = nodes.size() - 1;
  for (std::size_t i = 1; i < m; ++i) {
    if (g.condition(nodes[i]) == Condition::Dirichlet) {
      throw std::invalid_argument("graph_to_chain: Dirichlet vertex inside the backbone");
    }
  }

  auto edge_between = [&](std::size_t u, std::size_t v) {
    for (std::size_t e : g.incidence()[u]) {
      if (other(e, u) == v) return g.edges()[e].length;
    }
    throw std::logic_error("graph_to_chain: missing backbone edge");
  };
  chain.left = g.condition(nodes.front());
  chain.right = g.condition(nodes.back());
  chain.teeth.assign(m + 1, {});
  for (std::size_t i = 0; i <= m; ++i) {
    chain.names.push_back(g.vertices()[nodes[i]].id);
    if (i < m) chain.segments.push_back(edge_between(nodes[i], nodes[i + 1]));
    if (is_leaf(nodes[i])) continue;
    for (std::size_t e : g.incidence()[nodes[i]]) {
      const std::size_t w = other(e, nodes[i]);
      if (is_leaf(w) && !used_leaf[w]) chain.teeth[i].push_back({g.edges()[e].length, g.condition(w)});
    }
  }
  return chain;
}

double backbone_gap(double alpha, double n) {
  // n^-a (1 - (1 + 1/n)^-a)
  return -foot(alpha, n) * std::expm1(-alpha * std::log1p(1.0 / n));
}

BackboneChain truncated_comb_chain(double alpha, std::int64_t k, Condition cut) {
  require_alpha(alpha);
  if (k < 1) throw std::invalid_argument("truncated comb: k must be >= 1");
  BackboneChain chain;
  chain.left = Condition::KirchhoffNeumann;
  chain.right = cut;
  for (std::int64_t n = 1; n <= k; ++n) {
    const double p = foot(alpha, static_cast<double>(n));
    chain.positions.push_back(p);
    chain.names.push_back(foot_name(n));
    chain.teeth.push_back({{p, Condition::KirchhoffNeumann}});
    const double gap = backbone_gap(alpha, static_cast<double>(n));
    chain.segments.push_back(n < k ? gap : 0.5 * gap);
  }
  chain.positions.push_back(chain.positions.back() - chain.segments.back());
  chain.names.push_back("cut");
  chain.teeth.push_back({});
  return chain;
}

MetricGraph build_truncated_comb(double alpha, std::int64_t k, Condition cut) {
  return chain_to_graph(truncated_comb_chain(alpha, k, cut));
}

BackboneChain finite_part_chain(double alpha, std::int64_t n) {
  require_alpha(alpha);
  if (n < 2) throw std::invalid_argument("finite part: n must be >= 2");
  BackboneChain chain;
  chain.left = Condition::KirchhoffNeumann;
  chain.right = Condition::KirchhoffNeumann;
  for (std::int64_t l = 1; l < n; ++l) {
    const double p = foot(alpha, static_cast<double>(l));
    chain.positions.push_back(p);
    chain.names.push_back(foot_name(l));
    chain.teeth.push_back({{p, Condition::KirchhoffNeumann}});
    chain.segments.push_back(backbone_gap(alpha, static_cast<double>(l)));
  }
  chain.positions.push_back(foot(alpha, static_cast<double>(n)));
  chain.names.push_back("detach");
  chain.teeth.push_back({});
  return chain;
}

MetricGraph build_finite_part(double alpha, std::int64_t n) {
  return chain_to_graph(finite_part_chain(alpha, n));
}

BackboneChain tail_approximation_chain(double alpha, std::int64_t n, std::int64_t depth) {
  require_alpha(alpha);
  if (n < 1) throw std::invalid_argument("tail approximation: n must be >= 1");
  if (depth <= n) throw std::invalid_argument("tail approximation: depth must exceed n");
  BackboneChain chain;
  chain.left = Condition::KirchhoffNeumann;
  chain.right = Condition::Dirichlet;
  for (std::int64_t l = n; l <= depth; ++l) {
    const double p = foot(alpha, static_cast<double>(l));
    chain.positions.push_back(p);
    chain.names.push_back(foot_name(l));
    chain.teeth.push_back({{p, Condition::KirchhoffNeumann}});
    if (l < depth) chain.segments.push_back(backbone_gap(alpha, static_cast<double>(l)));
  }
  return chain;
}

MetricGraph build_tail_approximation(double alpha, std::int64_t n, std::int64_t depth) {
  return chain_to_graph(tail_approximation_chain(alpha, n, depth));
}

BackboneChain build_comb_chain(const CombSpec& spec) {
  spec.validate();
  switch (spec.variant) {
    case CombVariant::MidpointTruncation:
      return truncated_comb_chain(spec.alpha, spec.truncation_index, spec.cut_condition);
    case CombVariant::FinitePart:
      return finite_part_chain(spec.alpha, spec.truncation_index);
    case CombVariant::TailApproximation:
      return tail_approximation_chain(spec.alpha, spec.truncation_index, spec.depth);
  }
  throw std::logic_error("unknown comb variant");
}

MetricGraph build_comb(const CombSpec& spec) { return chain_to_graph(build_comb_chain(spec)); }

double truncated_comb_volume(double alpha, std::int64_t k) {
  require_alpha(alpha);
  const double pk = foot(alpha, static_cast<double>(k));
  const double pk1 = foot(alpha, static_cast<double>(k + 1));
  return power_partial_sum(alpha, static_cast<std::uint64_t>(k)) + 1.0 - 0.5 * (pk + pk1);
}

double truncated_comb_volume_displayed(double alpha, std::int64_t k) {
  require_alpha(alpha);
  const double pk = foot(alpha, static_cast<double>(k));
  const double pk1 = foot(alpha, static_cast<double>(k + 1));
  return power_partial_sum(alpha, static_cast<std::uint64_t>(k)) + 1.0 - 0.5 * (pk - pk1);
}

double finite_part_volume(double alpha, std::int64_t n) {
  require_alpha(alpha);
  if (n < 2) throw std::invalid_argument("finite part: n must be >= 2");
  return (1.0 - foot(alpha, static_cast<double>(n))) +
         power_partial_sum(alpha, static_cast<std::uint64_t>(n - 1));
}

double finite_part_volume_displayed(double alpha, std::int64_t n) {
  require_alpha(alpha);
  if (n < 2) throw std::invalid_argument("finite part: n must be >= 2");
  const double pn = foot(alpha, static_cast<double>(n));
  return (1.0 - pn) + static_cast<double>(n - 1) * pn;
}

double tail_approximation_volume(double alpha, std::int64_t n, std::int64_t depth) {
  require_alpha(alpha);
  const auto upto = [alpha](std::int64_t j) {
    return j <= 0 ? 0.0 : power_partial_sum(alpha, static_cast<std::uint64_t>(j));
  };
  return (upto(depth) - upto(n - 1)) + (foot(alpha, static_cast<double>(n)) -
                                        foot(alpha, static_cast<double>(depth)));
}

double comb_volume(double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("comb volume is finite only for alpha > 1");
  return 1.0 + riemann_zeta(alpha);
}

double truncated_volume_lower_bound(double alpha, std::int64_t k) {
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    throw std::invalid_argument("truncated_volume_lower_bound: alpha must lie in (1/2, 1]");
  }
  if (k < 2) throw std::invalid_argument("truncated_volume_lower_bound: k must be >= 2");
  const double kd = static_cast<double>(k);
  if (alpha == 1.0) return std::log(kd);
  return std::pow(kd, 1.0 - alpha) / (2.0 * (1.0 - alpha));
}

std::vector<double> decoupled_dirichlet_lengths(double alpha, std::int64_t truncation) {
  require_alpha(alpha);
  if (truncation < 1) throw std::invalid_argument("decoupled lengths: truncation must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * truncation));
  for (std::int64_t n = 1; n <= truncation; ++n) out.push_back(foot(alpha, static_cast<double>(n)));
  for (std::int64_t n = 1; n < truncation; ++n) {
    out.push_back(backbone_gap(alpha, static_cast<double>(n)));
  }
  return out;
}

}  // namespace combspec
