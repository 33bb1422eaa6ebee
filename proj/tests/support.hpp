#pragma once

// Helpers shared by unit and acceptance tests: a canonical form for metric
// trees (rooted AHU encoding minimized over roots) and a fixed-seed corpus.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "combspec/comb.hpp"
#include "combspec/graph.hpp"

namespace testsupport {

inline constexpr std::uint64_t kSeed = 20240611;

inline std::string exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

inline std::string encode_rooted(const combspec::MetricGraph& g, std::size_t v, std::size_t parent_edge) {
  std::vector<std::string> kids;
  for (std::size_t e : g.incidence()[v]) {
    if (e == parent_edge) continue;
    const auto& ed = g.edges()[e];
    const std::size_t w = ed.a == v ? ed.b : ed.a;
    kids.push_back(exact(ed.length) + encode_rooted(g, w, e));
  }
  std::sort(kids.begin(), kids.end());
  std::string out = g.condition(v) == combspec::Condition::Dirichlet ? "(D" : "(N";
  for (const auto& k : kids) out += k;
  return out + ")";
}

/// Equal strings iff the trees are isomorphic as metric graphs with
/// conditions (lengths compared bit-exactly).
inline std::string tree_canonical(const combspec::MetricGraph& g) {
  std::string best;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    std::string s = encode_rooted(g, v, static_cast<std::size_t>(-1));
    if (best.empty() || s < best) best = std::move(s);
  }
  return best;
}

/// Random tree on n vertices (n >= 2); each leaf gets Dirichlet with
/// probability p_dirichlet.
inline combspec::MetricGraph random_tree(std::mt19937_64& rng, std::size_t n, double p_dirichlet) {
  std::uniform_real_distribution<double> len(0.2, 1.5);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  combspec::GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex("v" + std::to_string(i));
  std::vector<int> deg(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t p = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    b.add_edge(p, i, len(rng));
    ++deg[p];
    ++deg[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (deg[i] == 1 && coin(rng) < p_dirichlet) b.set_condition(i, combspec::Condition::Dirichlet);
  }
  return std::move(b).build();
}

inline combspec::MetricGraph star(std::size_t arms, double length,
                                  combspec::Condition tips = combspec::Condition::KirchhoffNeumann) {
  combspec::GraphBuilder b;
  const auto c = b.add_vertex("c");
  for (std::size_t i = 0; i < arms; ++i) {
    const auto t = b.add_vertex("t" + std::to_string(i), tips);
    b.add_edge(c, t, length);
  }
  return std::move(b).build();
}

inline combspec::MetricGraph interval(double length, combspec::Condition left,
                                      combspec::Condition right) {
  combspec::GraphBuilder b;
  b.add_vertex("l", left);
  b.add_vertex("r", right);
  b.add_edge(0, 1, length);
  return std::move(b).build();
}

/// Caterpillar with random spine segments and teeth; may carry Dirichlet
/// ends and Dirichlet tooth tips.
inline combspec::BackboneChain random_chain(std::mt19937_64& rng, std::size_t segments,
                                            bool dirichlet_allowed) {
  std::uniform_real_distribution<double> len(0.1, 1.2);
  std::uniform_int_distribution<int> teeth(0, 2);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  combspec::BackboneChain c;
  for (std::size_t i = 0; i < segments; ++i) c.segments.push_back(len(rng));
  c.teeth.resize(segments + 1);
  for (std::size_t i = 0; i <= segments; ++i) {
    const int t = teeth(rng);
    for (int j = 0; j < t; ++j) {
      combspec::Tooth tooth{len(rng), combspec::Condition::KirchhoffNeumann};
      if (dirichlet_allowed && coin(rng) < 0.2) tooth.tip = combspec::Condition::Dirichlet;
      c.teeth[i].push_back(tooth);
    }
  }
  if (dirichlet_allowed) {
    if (coin(rng) < 0.5) c.left = combspec::Condition::Dirichlet;
    if (coin(rng) < 0.3) c.right = combspec::Condition::Dirichlet;
  }
  return c;
}

/// Comb with every tooth length scaled by a factor in [1 - spread, 1 + spread].
inline combspec::BackboneChain perturbed_comb(std::mt19937_64& rng, double alpha, std::int64_t k,
                                              combspec::Condition cut, double spread) {
  std::uniform_real_distribution<double> f(1.0 - spread, 1.0 + spread);
  combspec::BackboneChain c = combspec::truncated_comb_chain(alpha, k, cut);
  for (auto& node : c.teeth) {
    for (auto& t : node) t.length *= f(rng);
  }
  return c;
}

}  // namespace testsupport
