#pragma once

// Diagonal combs: a backbone (0, 1] with a tooth of length n^-alpha attached
// at backbone coordinate n^-alpha for every n >= 1. Only finite pieces are
// ever materialized.

#include <cstdint>
#include <string>
#include <vector>

#include "combspec/graph.hpp"

namespace combspec {

enum class Regime {
  EssentialSpectrum,       // alpha <= 1/2
  DiscreteInfiniteVolume,  // 1/2 < alpha <= 1
  FiniteVolume,            // alpha > 1
};

Regime classify(double alpha);
std::string_view to_string(Regime r);

enum class CombVariant { MidpointTruncation, FinitePart, TailApproximation };

struct CombSpec {
  double alpha = 1.0;
  std::int64_t truncation_index = 1;
  Condition cut_condition = Condition::Dirichlet;
  CombVariant variant = CombVariant::MidpointTruncation;
  std::int64_t depth = 0;  // last tooth for TailApproximation

  void validate() const;
  Regime regime() const { return classify(alpha); }
};

struct Tooth {
  double length = 0.0;
  Condition tip = Condition::KirchhoffNeumann;
};

/// A path ("backbone") of nodes 0..m joined by m segments, with pendant
/// teeth hanging off the nodes. Interior nodes are Kirchhoff-Neumann;
/// the terminal nodes carry `left` / `right`.
struct BackboneChain {
  std::vector<double> positions;  // backbone coordinate per node, may be empty
  std::vector<double> segments;   // size m >= 1
  std::vector<std::vector<Tooth>> teeth;  // size m + 1
  Condition left = Condition::KirchhoffNeumann;
  Condition right = Condition::KirchhoffNeumann;
  std::vector<std::string> names;  // optional node names, size m + 1

  std::size_t nodes() const { return segments.size() + 1; }
  void validate() const;
  double min_edge_length() const;
  std::size_t tooth_count() const;
};

/// Graph with node names (or "v<i>") and tips named "<node>.tip<j>".
MetricGraph chain_to_graph(const BackboneChain& chain);

/// Inverse for caterpillar trees with no interior Dirichlet vertices on the
/// spine. Throws std::invalid_argument otherwise. The chain need not equal
/// the one a graph was built from; the metric graph it describes does.
BackboneChain graph_to_chain(const MetricGraph& g);

bool is_chain_graph(const MetricGraph& g);

/// Teeth 1..k, backbone from the midpoint between feet k and k+1 up to 1.
/// Nodes ordered foot 1, ..., foot k, cut.
BackboneChain truncated_comb_chain(double alpha, std::int64_t k, Condition cut);
MetricGraph build_truncated_comb(double alpha, std::int64_t k, Condition cut);

/// Teeth 1..n-1 and the backbone from foot n up to 1, Kirchhoff-Neumann at
/// the detachment point (foot n itself, without its tooth).
BackboneChain finite_part_chain(double alpha, std::int64_t n);
MetricGraph build_finite_part(double alpha, std::int64_t n);

/// Teeth n..depth with connecting backbone; Dirichlet at foot `depth`
/// (the side facing the end at 0), Kirchhoff-Neumann at foot n.
BackboneChain tail_approximation_chain(double alpha, std::int64_t n, std::int64_t depth);
MetricGraph build_tail_approximation(double alpha, std::int64_t n, std::int64_t depth);

MetricGraph build_comb(const CombSpec& spec);
BackboneChain build_comb_chain(const CombSpec& spec);

/// Backbone distance between feet n and n+1, n^-a - (n+1)^-a, without
/// cancellation.
double backbone_gap(double alpha, double n);

// Closed-form volumes; no graph is built. Valid for any n reachable in
// double precision.
double truncated_comb_volume(double alpha, std::int64_t k);
/// The same quantity with the sign of the (k+1)-term flipped, as it appears
/// in some printed derivations. Reported for comparison only.
double truncated_comb_volume_displayed(double alpha, std::int64_t k);
double finite_part_volume(double alpha, std::int64_t n);
/// (1 - n^-a) + (n - 1) n^-a: the finite-part volume read literally with the
/// summation index frozen at n. Reported for comparison only.
double finite_part_volume_displayed(double alpha, std::int64_t n);
double tail_approximation_volume(double alpha, std::int64_t n, std::int64_t depth);

/// 1 + zeta(alpha), the volume of the whole comb; alpha > 1.
double comb_volume(double alpha);

/// k^{1-a} / (2(1-a)) for a in (1/2, 1), ln k for a = 1.
double truncated_volume_lower_bound(double alpha, std::int64_t k);

/// Edge lengths of the comb with Dirichlet conditions at every vertex:
/// teeth 1..t and backbone segments between consecutive feet 1..t.
std::vector<double> decoupled_dirichlet_lengths(double alpha, std::int64_t truncation);

}  // namespace combspec
