#include "combspec/fem.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace combspec::fem {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct Bracket {
  double lo, hi;
  std::size_t count_lo, count_hi;
};

}  // namespace

Mesh Mesh::uniform(const MetricGraph& g, double h_max, int min_segments) {
  if (!(h_max > 0.0)) throw std::invalid_argument("mesh: h_max must be positive");
  if (min_segments < 1) throw std::invalid_argument("mesh: min_segments must be >= 1");
  std::vector<int> segments;
  segments.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    const double n = std::ceil(e.length / h_max * (1.0 - 1e-12));
    if (n > 1e9) throw std::invalid_argument("mesh: too many segments on one edge");
    segments.push_back(std::max(min_segments, static_cast<int>(n)));
  }
  return Mesh(g, std::move(segments));
}

Mesh::Mesh(const MetricGraph& g, std::vector<int> segments) : segments_(std::move(segments)) {
  if (segments_.size() != g.edge_count()) {
    throw std::invalid_argument("mesh: one segment count per edge required");
  }
  for (int s : segments_) {
    if (s < 1) throw std::invalid_argument("mesh: every edge needs at least one segment");
  }
  index(g);
}

void Mesh::index(const MetricGraph& g) {
  fingerprint_ = g.fingerprint();
  vertex_dof_.assign(g.vertex_count(), -1);
  std::size_t next = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.condition(v) == Condition::KirchhoffNeumann) vertex_dof_[v] = static_cast<long>(next++);
  }
  interior_offset_.resize(g.edge_count());
  lengths_.resize(g.edge_count());
  h_max_ = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    interior_offset_[e] = next;
    next += static_cast<std::size_t>(segments_[e] - 1);
    lengths_[e] = g.edges()[e].length;
    h_max_ = std::max(h_max_, lengths_[e] / segments_[e]);
  }
  dofs_ = next;
}

Mesh Mesh::halved() const {
  Mesh out = *this;
  for (int& s : out.segments_) s *= 2;
  // Interior dofs grow; vertex dofs keep their indices.
  std::size_t next = 0;
  for (long d : out.vertex_dof_) {
    if (d >= 0) ++next;
  }
  out.h_max_ = 0.0;
  for (std::size_t e = 0; e < out.segments_.size(); ++e) {
    out.interior_offset_[e] = next;
    next += static_cast<std::size_t>(out.segments_[e] - 1);
    out.h_max_ = std::max(out.h_max_, out.lengths_[e] / out.segments_[e]);
  }
  out.dofs_ = next;
  return out;
}

DiscreteOperator assemble(const MetricGraph& g, const Mesh& mesh, MassKind mass_kind) {
  if (mesh.fingerprint() != g.fingerprint()) {
    throw std::invalid_argument("assemble: mesh was built for a different graph");
  }
  if (mesh.dofs() == 0) throw std::invalid_argument("assemble: mesh has no degrees of freedom");
  std::vector<Triplet> k_entries;
  std::vector<Triplet> m_entries;
  const std::size_t reserve = 4 * (mesh.dofs() + g.edge_count());
  k_entries.reserve(reserve);
  m_entries.reserve(reserve);

  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edges()[e];
    const int n = mesh.segments()[e];
    const double h = edge.length / n;
    auto node = [&](int i) -> long {
      if (i == 0) return mesh.vertex_dof(edge.a);
      if (i == n) return mesh.vertex_dof(edge.b);
      return static_cast<long>(mesh.interior_offset(e)) + i - 1;
    };
    const double k_diag = 1.0 / h;
    const double k_off = -1.0 / h;
    const double m_diag = mass_kind == MassKind::Consistent ? h / 3.0 : h / 2.0;
    const double m_off = mass_kind == MassKind::Consistent ? h / 6.0 : 0.0;
    for (int i = 0; i < n; ++i) {
      const long p = node(i);
      const long q = node(i + 1);
      // Identical patterns for both matrices (explicit zeros kept for lumped mass).
      if (p >= 0) {
        k_entries.emplace_back(p, p, k_diag);
        m_entries.emplace_back(p, p, m_diag);
      }
      if (q >= 0) {
        k_entries.emplace_back(q, q, k_diag);
        m_entries.emplace_back(q, q, m_diag);
      }
      if (p >= 0 && q >= 0) {
        k_entries.emplace_back(p, q, k_off);
        k_entries.emplace_back(q, p, k_off);
        m_entries.emplace_back(p, q, m_off);
        m_entries.emplace_back(q, p, m_off);
      }
    }
  }
  DiscreteOperator op;
  op.dofs = mesh.dofs();
  op.fingerprint = g.fingerprint();
  op.stiffness.resize(static_cast<Eigen::Index>(op.dofs), static_cast<Eigen::Index>(op.dofs));
  op.mass.resize(static_cast<Eigen::Index>(op.dofs), static_cast<Eigen::Index>(op.dofs));
  op.stiffness.setFromTriplets(k_entries.begin(), k_entries.end());
  op.mass.setFromTriplets(m_entries.begin(), m_entries.end());
  op.stiffness.makeCompressed();
  op.mass.makeCompressed();
  return op;
}

struct InertiaCounter::Impl {
  const DiscreteOperator& op;
  SpMat shifted;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;

  double resolution = 0.0;  // shifts below this vanish in K - lambda M rounding

  explicit Impl(const DiscreteOperator& o) : op(o), shifted(o.stiffness) {
    if (op.stiffness.nonZeros() != op.mass.nonZeros()) {
      throw std::invalid_argument("inertia: stiffness and mass patterns differ");
    }
    ldlt.analyzePattern(shifted);
    const Eigen::VectorXd kd = op.stiffness.diagonal();
    const Eigen::VectorXd md = op.mass.diagonal();
    if (kd.size() > 0 && md.minCoeff() > 0.0) {
      resolution = 64.0 * std::numeric_limits<double>::epsilon() * kd.cwiseAbs().maxCoeff() /
                   md.minCoeff();
    }
  }

  // Returns false when the factorization broke down.
  bool negatives(double lambda, std::size_t& out) {
    const double* k = op.stiffness.valuePtr();
    const double* m = op.mass.valuePtr();
    double* a = shifted.valuePtr();
    const auto nnz = op.stiffness.nonZeros();
    for (Eigen::Index i = 0; i < nnz; ++i) a[i] = k[i] - lambda * m[i];
    ldlt.factorize(shifted);
    if (ldlt.info() != Eigen::Success) return false;
    const auto& d = ldlt.vectorD();
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (!std::isfinite(d[i])) return false;
      if (d[i] < 0.0) ++count;
    }
    out = count;
    return true;
  }
};

InertiaCounter::InertiaCounter(const DiscreteOperator& op) : impl_(new Impl(op)) {}
InertiaCounter::~InertiaCounter() { delete impl_; }

std::size_t InertiaCounter::operator()(double lambda) {
  // Nothing lies strictly below 0: the pencil is semidefinite.
  if (!(lambda > 0.0)) return 0;
  std::size_t count = 0;
  // A singular stiffness (Neumann null space) breaks down for shifts below
  // the rounding resolution, so the second nudge also steps past it.
  const double shifts[] = {lambda, lambda * (1.0 - 1e-9),
                           lambda * (1.0 + 1e-9) + impl_->resolution};
  for (double shift : shifts) {
    ++factorizations_;
    if (impl_->negatives(shift, count)) return count;
  }
  throw SolverError("inertia: factorization broke down at lambda = " + std::to_string(lambda) +
                    " after two nudges");
}

std::size_t counting_function(const DiscreteOperator& op, double lambda) {
  InertiaCounter counter(op);
  return counter(lambda);
}

Spectrum lowest_eigenvalues(const DiscreteOperator& op, std::size_t count, double rel_tol) {
  if (count > op.dofs) {
    throw std::invalid_argument("lowest_eigenvalues: count exceeds the number of dofs");
  }
  if (!(rel_tol > 0.0)) throw std::invalid_argument("lowest_eigenvalues: rel_tol must be > 0");
  Spectrum out;
  out.backend = "fem";
  out.fingerprint = op.fingerprint;
  out.mesh_dofs = op.dofs;
  if (count == 0) return out;

  InertiaCounter counter(op);
  double hi = 1.0;
  std::size_t count_hi = counter(hi);
  while (count_hi < count) {
    hi *= 4.0;
    if (hi > 1e300) throw SolverError("lowest_eigenvalues: no upper bracket found");
    count_hi = counter(hi);
  }
  const double abs_floor = 1e-14 * hi;
  out.eigenvalues.assign(count, 0.0);
  out.errors.assign(count, 0.0);

  std::vector<Bracket> stack{{0.0, hi, 0, count_hi}};
  int guard = 0;
  while (!stack.empty()) {
    const Bracket b = stack.back();
    stack.pop_back();
    if (b.count_hi <= b.count_lo || b.count_lo >= count) continue;
    const double mid = 0.5 * (b.lo + b.hi);
    const bool narrow = b.hi - b.lo <= rel_tol * b.hi + abs_floor || mid <= b.lo || mid >= b.hi;
    if (narrow) {
      for (std::size_t j = b.count_lo; j < std::min(b.count_hi, count); ++j) {
        out.eigenvalues[j] = mid;
        out.errors[j] = 0.5 * (b.hi - b.lo);
      }
      continue;
    }
    if (++guard > 10'000'000) throw SolverError("lowest_eigenvalues: bisection did not finish");
    const std::size_t count_mid = counter(mid);
    // Upper half first so the lower half is processed next (stack order).
    stack.push_back({mid, b.hi, count_mid, b.count_hi});
    stack.push_back({b.lo, mid, b.count_lo, count_mid});
  }
  return out;
}

Spectrum lowest_eigenvalues(const MetricGraph& g, const Mesh& mesh, std::size_t count,
                            double rel_tol) {
  const Spectrum coarse = lowest_eigenvalues(assemble(g, mesh), count, rel_tol);
  Spectrum fine = lowest_eigenvalues(assemble(g, mesh.halved()), count, rel_tol);
  for (std::size_t j = 0; j < count; ++j) {
    fine.errors[j] += std::abs(coarse.eigenvalues[j] - fine.eigenvalues[j]) / 3.0;
  }
  return fine;
}

double resolving_h(double lambda_top) {
  if (!(lambda_top > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / (10.0 * std::sqrt(lambda_top));
}

Spectrum refine_until(const MetricGraph& g, std::size_t count, double rel_tol,
                      const RefineOptions& options) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("refine_until: rel_tol must be > 0");
  if (count == 0) throw std::invalid_argument("refine_until: count must be >= 1");
  double h = options.initial_h;
  if (!(h > 0.0)) {
    const double vol = volume(g);
    const Mesh pilot = Mesh::uniform(g, vol / (8.0 * static_cast<double>(count) + 8.0),
                                     options.min_segments);
    if (pilot.dofs() < count) throw SolverError("refine_until: pilot mesh too small");
    const Spectrum est = lowest_eigenvalues(assemble(g, pilot), count, 1e-6);
    h = std::min(resolving_h(est.eigenvalues.back()), vol / (8.0 * static_cast<double>(count)));
  }
  Mesh mesh = Mesh::uniform(g, h, options.min_segments);
  if (mesh.dofs() < count) throw std::invalid_argument("refine_until: count exceeds mesh dofs");
  Spectrum previous_raw = lowest_eigenvalues(assemble(g, mesh), count);
  std::vector<double> previous_ext;
  for (int depth = 1; depth <= options.max_depth; ++depth) {
    mesh = mesh.halved();
    if (mesh.dofs() > options.max_dofs) {
      throw SolverError("refine_until: dof budget exceeded at depth " + std::to_string(depth));
    }
    Spectrum raw = lowest_eigenvalues(assemble(g, mesh), count);
    std::vector<double> ext(count);
    for (std::size_t j = 0; j < count; ++j) {
      ext[j] = std::max(0.0, (4.0 * raw.eigenvalues[j] - previous_raw.eigenvalues[j]) / 3.0);
    }
    std::sort(ext.begin(), ext.end());
    if (!previous_ext.empty()) {
      const double scale = std::max(std::abs(ext.back()), 1e-300);
      const double change = std::abs(ext.back() - previous_ext.back());
      if (change < rel_tol * scale || ext.back() == 0.0) {
        Spectrum out;
        out.backend = "fem";
        out.fingerprint = g.fingerprint();
        out.mesh_dofs = mesh.dofs();
        out.eigenvalues = ext;
        out.errors.resize(count);
        for (std::size_t j = 0; j < count; ++j) {
          out.errors[j] = std::abs(ext[j] - raw.eigenvalues[j]);
        }
        return out;
      }
    }
    previous_ext = std::move(ext);
    previous_raw = std::move(raw);
  }
  throw SolverError("refine_until: no convergence to rel_tol " + std::to_string(rel_tol) +
                    " within depth " + std::to_string(options.max_depth));
}

}  // namespace combspec::fem
