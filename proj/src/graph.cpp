#include "combspec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace combspec {

std::string_view to_string(Condition c) {
  return c == Condition::Dirichlet ? "D" : "KN";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Union-find over vertex indices.
class Dsu {
 public:
  explicit Dsu(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<double> dijkstra(const MetricGraph& g, std::size_t source) {
  std::vector<double> dist(g.vertex_count(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (std::size_t e : g.incidence()[v]) {
      const Edge& edge = g.edges()[e];
      const std::size_t w = edge.a == v ? edge.b : edge.a;
      const double nd = d + edge.length;
      if (nd < dist[w]) {
        dist[w] = nd;
        queue.emplace(nd, w);
      }
    }
  }
  return dist;
}

// Farthest vertex from `source` in a tree, with its distance.
std::pair<std::size_t, double> tree_farthest(const MetricGraph& g, std::size_t source) {
  std::vector<double> dist(g.vertex_count(), -1.0);
  std::vector<std::size_t> stack{source};
  dist[source] = 0.0;
  std::size_t best = source;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (dist[v] > dist[best]) best = v;
    for (std::size_t e : g.incidence()[v]) {
      const Edge& edge = g.edges()[e];
      const std::size_t w = edge.a == v ? edge.b : edge.a;
      if (dist[w] < 0.0) {
        dist[w] = dist[v] + edge.length;
        stack.push_back(w);
      }
    }
  }
  return {best, dist[best]};
}

// Maximum of a concave function on [lo, hi].
template <class F>
double maximize_concave(F&& f, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return std::max({f(lo), f(hi), f(0.5 * (lo + hi))});
}

std::string unique_id(const MetricGraph& g, std::string base,
                      const std::vector<std::string>& taken = {}) {
  auto used = [&](const std::string& id) {
    return g.find(id).has_value() || std::find(taken.begin(), taken.end(), id) != taken.end();
  };
  while (used(base)) base += "'";
  return base;
}

}  // namespace

MetricGraph::MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  if (vertices_.empty() || edges_.empty()) {
    throw std::invalid_argument("metric graph needs at least one vertex and one edge");
  }
  {
    std::vector<std::string> ids;
    ids.reserve(vertices_.size());
    for (const auto& v : vertices_) ids.push_back(v.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw std::invalid_argument("duplicate vertex id in metric graph");
    }
  }
  degree_.assign(vertices_.size(), 0);
  incidence_.assign(vertices_.size(), {});
  Dsu dsu(vertices_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.a >= vertices_.size() || edge.b >= vertices_.size()) {
      throw std::invalid_argument("edge references a missing vertex");
    }
    if (!(edge.length > 0.0) || !std::isfinite(edge.length)) {
      throw std::invalid_argument("edge length must be positive and finite");
    }
    ++degree_[edge.a];
    ++degree_[edge.b];
    incidence_[edge.a].push_back(e);
    incidence_[edge.b].push_back(e);
    dsu.unite(edge.a, edge.b);
  }
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (dsu.find(v) != 0) throw std::invalid_argument("metric graph must be connected");
  }
}

std::optional<std::size_t> MetricGraph::find(std::string_view id) const {
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v].id == id) return v;
  }
  return std::nullopt;
}

std::size_t MetricGraph::index_of(std::string_view id) const {
  auto v = find(id);
  if (!v) throw std::invalid_argument("unknown vertex id '" + std::string(id) + "'");
  return *v;
}

bool MetricGraph::has_dirichlet() const {
  return std::any_of(vertices_.begin(), vertices_.end(),
                     [](const Vertex& v) { return v.condition == Condition::Dirichlet; });
}

std::string MetricGraph::fingerprint() const {
  // FNV-1a, 64 bit.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& v : vertices_) {
    mix(v.id.data(), v.id.size());
    const char c = v.condition == Condition::Dirichlet ? 'D' : 'N';
    mix(&c, 1);
  }
  for (const auto& e : edges_) {
    const std::uint64_t ends[2] = {e.a, e.b};
    mix(ends, sizeof ends);
    mix(&e.length, sizeof e.length);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::size_t GraphBuilder::add_vertex(std::string id, Condition c) {
  vertices_.push_back({std::move(id), c});
  return vertices_.size() - 1;
}

std::size_t GraphBuilder::vertex(const std::string& id, Condition c) {
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v].id == id) return v;
  }
  return add_vertex(id, c);
}

void GraphBuilder::add_edge(std::size_t a, std::size_t b, double length) {
  edges_.push_back({a, b, length});
}

void GraphBuilder::add_edge(const std::string& a, const std::string& b, double length) {
  const std::size_t ia = vertex(a);
  const std::size_t ib = vertex(b);
  add_edge(ia, ib, length);
}

MetricGraph GraphBuilder::build() && { return MetricGraph(std::move(vertices_), std::move(edges_)); }
MetricGraph GraphBuilder::build() const& { return MetricGraph(vertices_, edges_); }

double volume(const MetricGraph& g) {
  double total = 0.0;
  for (const auto& e : g.edges()) total += e.length;
  return total;
}

double diameter(const MetricGraph& g) {
  if (is_tree(g)) {
    // Double sweep: the farthest pair of points in a tree are vertices.
    const auto [far, d0] = tree_farthest(g, 0);
    (void)d0;
    return tree_farthest(g, far).second;
  }
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<double>> dist(n);
  for (std::size_t v = 0; v < n; ++v) dist[v] = dijkstra(g, v);

  double best = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) best = std::max(best, dist[u][v]);
  }
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e1 = edges[i];
    // Two points on the same edge.
    best = std::max(best, std::min(e1.length, 0.5 * (e1.length + dist[e1.a][e1.b])));
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Edge& e2 = edges[j];
      // Distance from the point at t on e1 to the endpoints of e2, then the
      // farthest point on e2; the result is concave in t.
      auto reach = [&](double t) {
        const double to_a = std::min(t + dist[e1.a][e2.a], e1.length - t + dist[e1.b][e2.a]);
        const double to_b = std::min(t + dist[e1.a][e2.b], e1.length - t + dist[e1.b][e2.b]);
        return std::min({0.5 * (to_a + to_b + e2.length), to_a + e2.length, to_b + e2.length});
      };
      best = std::max(best, maximize_concave(reach, 0.0, e1.length));
    }
  }
  return best;
}

std::vector<MetricGraph> connected_pieces(const std::vector<Vertex>& vertices,
                                          const std::vector<Edge>& edges) {
  Dsu dsu(vertices.size());
  for (const auto& e : edges) dsu.unite(e.a, e.b);
  std::map<std::size_t, std::size_t> piece_of_root;
  std::vector<std::size_t> roots;
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const std::size_t r = dsu.find(v);
    if (!piece_of_root.count(r)) {
      piece_of_root[r] = roots.size();
      roots.push_back(r);
    }
  }
  std::vector<std::vector<Vertex>> pv(roots.size());
  std::vector<std::vector<Edge>> pe(roots.size());
  std::vector<std::size_t> local(vertices.size());
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const std::size_t p = piece_of_root[dsu.find(v)];
    local[v] = pv[p].size();
    pv[p].push_back(vertices[v]);
  }
  for (const auto& e : edges) {
    const std::size_t p = piece_of_root[dsu.find(e.a)];
    pe[p].push_back({local[e.a], local[e.b], e.length});
  }
  std::vector<MetricGraph> out;
  for (std::size_t p = 0; p < roots.size(); ++p) {
    if (pe[p].empty()) continue;  // isolated vertex left behind by surgery
    out.emplace_back(std::move(pv[p]), std::move(pe[p]));
  }
  return out;
}

std::vector<MetricGraph> cut_at(const MetricGraph& g, std::size_t edge, double offset,
                                Condition c) {
  if (edge >= g.edge_count()) throw std::invalid_argument("cut_at: edge index out of range");
  const Edge target = g.edges()[edge];
  if (!(offset > 0.0) || !(offset < target.length)) {
    throw std::invalid_argument(
        "cut_at: offset must lie strictly inside the edge (use split_at_vertex at vertices)");
  }
  std::vector<Vertex> vertices = g.vertices();
  const std::string id_a = unique_id(g, "cut" + std::to_string(edge) + "a");
  const std::string id_b = unique_id(g, "cut" + std::to_string(edge) + "b", {id_a});
  vertices.push_back({id_a, c});
  vertices.push_back({id_b, c});
  const std::size_t na = vertices.size() - 2;
  const std::size_t nb = vertices.size() - 1;

  std::vector<Edge> edges;
  edges.reserve(g.edge_count() + 1);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (e == edge) {
      edges.push_back({target.a, na, offset});
      edges.push_back({nb, target.b, target.length - offset});
    } else {
      edges.push_back(g.edges()[e]);
    }
  }
  return connected_pieces(vertices, edges);
}

std::vector<MetricGraph> split_at_vertex(const MetricGraph& g, std::size_t v, Condition c) {
  if (v >= g.vertex_count()) throw std::invalid_argument("split_at_vertex: no such vertex");
  if (g.degree(v) <= 1) {
    throw std::invalid_argument("split_at_vertex: vertex has degree 1, nothing to split");
  }
  // Sides are the components of g - v; a loop at v is a side of its own.
  Dsu dsu(g.vertex_count());
  for (const auto& e : g.edges()) {
    if (e.a != v && e.b != v) dsu.unite(e.a, e.b);
  }
  std::vector<Vertex> vertices = g.vertices();
  std::vector<Edge> edges;
  std::map<std::size_t, std::size_t> copy_of_side;
  std::vector<std::string> taken;
  auto copy_for = [&](std::size_t side_key) {
    auto it = copy_of_side.find(side_key);
    if (it != copy_of_side.end()) return it->second;
    const std::string id =
        unique_id(g, g.vertices()[v].id + "#" + std::to_string(copy_of_side.size()), taken);
    taken.push_back(id);
    vertices.push_back({id, c});
    copy_of_side[side_key] = vertices.size() - 1;
    return vertices.size() - 1;
  };
  const std::size_t loop_base = g.vertex_count();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    Edge edge = g.edges()[e];
    if (edge.a == v && edge.b == v) {
      const std::size_t copy = copy_for(loop_base + e);
      edge.a = edge.b = copy;
    } else if (edge.a == v) {
      edge.a = copy_for(dsu.find(edge.b));
    } else if (edge.b == v) {
      edge.b = copy_for(dsu.find(edge.a));
    }
    edges.push_back(edge);
  }
  // The original vertex is now isolated and dropped by connected_pieces.
  return connected_pieces(vertices, edges);
}

PendantCounts pendant_counts(const MetricGraph& g) {
  PendantCounts counts;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) != 1) continue;
    if (g.condition(v) == Condition::Dirichlet) {
      ++counts.dirichlet;
    } else {
      ++counts.neumann;
    }
  }
  return counts;
}

bool is_tree(const MetricGraph& g) {
  // Connected by construction, so a tree iff |E| = |V| - 1.
  return g.edge_count() + 1 == g.vertex_count();
}

MetricGraph suppress_degree_two(const MetricGraph& g) {
  std::vector<Vertex> vertices = g.vertices();
  std::vector<Edge> edges = g.edges();
  std::vector<bool> alive(edges.size(), true);
  auto incident = [&](std::size_t v) {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!alive[e]) continue;
      if (edges[e].a == v) out.push_back(e);
      if (edges[e].b == v) out.push_back(e);
    }
    return out;
  };
  std::vector<bool> removed(vertices.size(), false);
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (vertices[v].condition != Condition::KirchhoffNeumann) continue;
    const auto inc = incident(v);
    if (inc.size() != 2 || inc[0] == inc[1]) continue;  // skip loops
    const Edge e1 = edges[inc[0]];
    const Edge e2 = edges[inc[1]];
    const std::size_t u = e1.a == v ? e1.b : e1.a;
    const std::size_t w = e2.a == v ? e2.b : e2.a;
    if (u == v || w == v) continue;
    edges[inc[0]] = {u, w, e1.length + e2.length};
    alive[inc[1]] = false;
    removed[v] = true;
  }
  std::vector<std::size_t> remap(vertices.size());
  std::vector<Vertex> out_v;
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (removed[v]) continue;
    remap[v] = out_v.size();
    out_v.push_back(vertices[v]);
  }
  std::vector<Edge> out_e;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (alive[e]) out_e.push_back({remap[edges[e].a], remap[edges[e].b], edges[e].length});
  }
  return MetricGraph(std::move(out_v), std::move(out_e));
}

std::vector<double> sorted_lengths(const MetricGraph& g) {
  std::vector<double> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) out.push_back(e.length);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace combspec
