#pragma once

// Piecewise-linear Galerkin discretization of the Dirichlet energy on a
// metric graph. Vertex values are shared across incident edges (continuity);
// Dirichlet vertices carry no degree of freedom.

#include <Eigen/SparseCore>
#include <cstddef>
#include <vector>

#include "combspec/graph.hpp"
#include "combspec/spectrum.hpp"

namespace combspec::fem {

inline constexpr int kMinSegments = 4;

class Mesh {
 public:
  /// Every edge gets max(min_segments, ceil(length / h_max)) equal segments.
  static Mesh uniform(const MetricGraph& g, double h_max, int min_segments = kMinSegments);
  /// Explicit per-edge segment counts.
  Mesh(const MetricGraph& g, std::vector<int> segments);

  /// Each edge split into twice as many segments.
  Mesh halved() const;

  const std::vector<int>& segments() const { return segments_; }
  std::size_t dofs() const { return dofs_; }
  /// -1 for Dirichlet vertices.
  long vertex_dof(std::size_t v) const { return vertex_dof_[v]; }
  /// Global dof of the first interior node of edge e.
  std::size_t interior_offset(std::size_t e) const { return interior_offset_[e]; }
  double h_max() const { return h_max_; }
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  Mesh() = default;
  void index(const MetricGraph& g);

  std::vector<int> segments_;
  std::vector<long> vertex_dof_;
  std::vector<std::size_t> interior_offset_;
  std::vector<double> lengths_;
  std::size_t dofs_ = 0;
  double h_max_ = 0.0;
  std::string fingerprint_;
};

enum class MassKind { Consistent, Lumped };

struct DiscreteOperator {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> mass;
  std::size_t dofs = 0;
  std::string fingerprint;
};

DiscreteOperator assemble(const MetricGraph& g, const Mesh& mesh,
                          MassKind mass = MassKind::Consistent);

/// Number of discrete eigenvalues strictly below lambda, from the inertia of
/// stiffness - lambda * mass. Shifts that hit an eigenvalue are nudged by a
/// relative 1e-9, at most twice.
std::size_t counting_function(const DiscreteOperator& op, double lambda);

/// Reusable inertia evaluator; the symbolic factorization is done once.
class InertiaCounter {
 public:
  explicit InertiaCounter(const DiscreteOperator& op);
  ~InertiaCounter();
  InertiaCounter(const InertiaCounter&) = delete;
  InertiaCounter& operator=(const InertiaCounter&) = delete;

  std::size_t operator()(double lambda);
  std::size_t factorizations() const { return factorizations_; }

 private:
  struct Impl;
  Impl* impl_;
  std::size_t factorizations_ = 0;
};

/// The `count` smallest eigenvalues of the discrete pencil, located by
/// bisection on the inertia count to relative width `rel_tol`. Errors are
/// the bracket half-widths.
Spectrum lowest_eigenvalues(const DiscreteOperator& op, std::size_t count, double rel_tol = 1e-12);

/// Solves on `mesh` and on `mesh.halved()`. Reports the halved-mesh values
/// with error |lambda_h - lambda_{h/2}| / 3 (order-2 estimate).
Spectrum lowest_eigenvalues(const MetricGraph& g, const Mesh& mesh, std::size_t count,
                            double rel_tol = 1e-12);

struct RefineOptions {
  int max_depth = 8;
  int min_segments = kMinSegments;
  /// Initial h_max; <= 0 picks (largest requested eigenvalue)^{-1/2} / 10
  /// from a coarse pilot solve.
  double initial_h = 0.0;
  /// Cap on degrees of freedom before giving up.
  std::size_t max_dofs = 4'000'000;
};

/// Halves h until the top requested Richardson-extrapolated eigenvalue
/// changes by less than rel_tol. Reported eigenvalues are extrapolated;
/// errors are |extrapolated - finest|. Throws SolverError past max_depth.
Spectrum refine_until(const MetricGraph& g, std::size_t count, double rel_tol,
                      const RefineOptions& options = {});

/// Heuristic mesh width for resolving eigenvalues up to lambda_top.
double resolving_h(double lambda_top);

}  // namespace combspec::fem
