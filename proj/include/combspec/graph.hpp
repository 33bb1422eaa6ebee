#pragma once

// Finite compact metric graphs with vertex conditions, plus the surgery
// operations (cutting an edge, splitting a vertex) used to compare spectra.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace combspec {

enum class Condition { KirchhoffNeumann, Dirichlet };

std::string_view to_string(Condition c);

struct Vertex {
  std::string id;
  Condition condition = Condition::KirchhoffNeumann;
};

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double length = 0.0;
};

/// A connected metric graph. Immutable once constructed; the constructor
/// rejects nonpositive or non-finite lengths, dangling endpoints, duplicate
/// vertex ids and disconnected input. Loops and parallel edges are allowed.
class MetricGraph {
 public:
  MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Number of edge ends at v (a loop counts twice).
  std::size_t degree(std::size_t v) const { return degree_[v]; }
  Condition condition(std::size_t v) const { return vertices_[v].condition; }
  std::optional<std::size_t> find(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;

  bool has_dirichlet() const;

  /// Incident edge indices per vertex, in edge order. A loop appears twice.
  const std::vector<std::vector<std::size_t>>& incidence() const { return incidence_; }

  /// Stable hex digest of ids, conditions and bit-exact lengths.
  std::string fingerprint() const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> degree_;
  std::vector<std::vector<std::size_t>> incidence_;
};

/// Incremental construction by vertex id.
class GraphBuilder {
 public:
  std::size_t add_vertex(std::string id, Condition c = Condition::KirchhoffNeumann);
  /// Adds the vertex if missing; returns its index.
  std::size_t vertex(const std::string& id, Condition c = Condition::KirchhoffNeumann);
  void add_edge(std::size_t a, std::size_t b, double length);
  void add_edge(const std::string& a, const std::string& b, double length);
  void set_condition(std::size_t v, Condition c) { vertices_[v].condition = c; }
  MetricGraph build() &&;
  MetricGraph build() const&;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

// Sum of edge lengths in edge-index order.
double volume(const MetricGraph& g);

/// Largest shortest-path distance between any two points of the graph,
/// edge interiors included.
double diameter(const MetricGraph& g);

/// Severs `edge` at distance `offset` from its first endpoint. Both new
/// pendant vertices carry `c`. Returns one graph, or two when the edge was
/// a bridge (the component holding the edge's first endpoint comes first).
std::vector<MetricGraph> cut_at(const MetricGraph& g, std::size_t edge, double offset,
                                Condition c);

/// Replaces vertex v by one copy per connected side of g - v; every copy
/// carries `c`. Throws for degree-1 vertices.
std::vector<MetricGraph> split_at_vertex(const MetricGraph& g, std::size_t v, Condition c);

struct PendantCounts {
  std::size_t dirichlet = 0;
  std::size_t neumann = 0;
  friend bool operator==(const PendantCounts&, const PendantCounts&) = default;
};

PendantCounts pendant_counts(const MetricGraph& g);

bool is_tree(const MetricGraph& g);

/// Merges edges through degree-2 Kirchhoff-Neumann vertices (spectrally
/// invisible). Vertices on a pure cycle keep one representative.
MetricGraph suppress_degree_two(const MetricGraph& g);

/// Sorted multiset of edge lengths.
std::vector<double> sorted_lengths(const MetricGraph& g);

/// Splits an arbitrary (possibly disconnected) vertex/edge list into
/// connected graphs, ordered by their smallest vertex index.
std::vector<MetricGraph> connected_pieces(const std::vector<Vertex>& vertices,
                                          const std::vector<Edge>& edges);

}  // namespace combspec
