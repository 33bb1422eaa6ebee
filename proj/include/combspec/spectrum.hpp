#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace combspec {

/// Lowest eigenvalues of one graph, nondecreasing, repeated by multiplicity.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> errors;  // absolute, one per eigenvalue
  std::string backend;         // "fem" or "secular"
  std::string fingerprint;     // of the graph that was solved
  std::size_t mesh_dofs = 0;   // fem only

  std::size_t size() const { return eigenvalues.size(); }
  double operator[](std::size_t i) const { return eigenvalues[i]; }
  /// 1-based, as in lambda_k.
  double lambda(std::size_t k) const { return eigenvalues.at(k - 1); }
};

/// Raised when an eigenvalue computation cannot deliver the requested
/// accuracy (refinement budget, bracket ceiling, factorization breakdown).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace combspec
