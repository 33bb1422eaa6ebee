#pragma once

// Eigenvalue counting for backbone chains without discretization. On each
// segment the solution of -u'' = s^2 u rotates its Pruefer angle at rate s;
// at a node, each tooth acts as a point interaction whose strength is the
// tooth's Dirichlet-to-Neumann value. Tooth-localized modes (tooth
// eigenvalues with a Dirichlet condition at the foot) are counted directly
// as pole crossings, each worth +pi of winding.

#include <cstddef>

#include "combspec/comb.hpp"
#include "combspec/spectrum.hpp"

namespace combspec::secular {

/// s * tan(s * l) for a Neumann-tipped tooth: outgoing derivative per unit
/// value at the foot. +/-infinity at the poles s*l = pi/2 + k*pi.
double tooth_dtn(double length, double s);

/// Dirichlet-to-Neumann value for either tip condition (Dirichlet tip:
/// -s * cot(s * l)).
double tooth_dtn(const Tooth& tooth, double s);

/// Eigenvalues below s^2 of the tooth with a Dirichlet condition at its foot.
std::size_t tooth_pole_count(const Tooth& tooth, double s);

struct SweepState {
  double s = 0.0;       // frequency, sqrt(lambda)
  double theta = 0.0;   // final backbone Pruefer angle (continuous lift)
  double target = 0.0;  // terminal angle of the right condition, in (0, pi]
  std::size_t pole_windings = 0;  // pi-increments from tooth poles
};

/// Runs the sweep from the left terminal to the right terminal.
SweepState sweep(const BackboneChain& chain, double lambda);

/// Eigenvalue count of a finished sweep: pole windings plus the number of
/// n >= 0 with theta > target + n*pi.
std::size_t count_from_sweep(const SweepState& state);

/// Number of eigenvalues strictly below lambda.
std::size_t secular_count(const BackboneChain& chain, double lambda);

struct CheckedCount {
  std::size_t count = 0;
  bool ambiguous = false;  // an eigenvalue lies within 1e-13 (relative) of lambda
};

CheckedCount secular_count_checked(const BackboneChain& chain, double lambda);

/// Frequency below which `count` eigenvalues are guaranteed:
/// pi (count + pendants + 2) / shortest edge.
double frequency_ceiling(const BackboneChain& chain, std::size_t count);

/// First `count` eigenvalues, each bracketed by bisection on secular_count
/// to absolute width < abs_tol (or to adjacent doubles). Reported value is
/// the bracket midpoint; error is the half-width.
Spectrum eigenvalues_by_bisection(const BackboneChain& chain, std::size_t count,
                                  double abs_tol = 1e-10);

}  // namespace combspec::secular
