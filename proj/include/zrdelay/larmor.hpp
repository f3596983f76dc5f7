#pragma once

// Larmor clock with an infinitely heavy pointer. The pointer reading f is
// coupled to the time spent in [a, b]; its final state is
//
//   Phi(f) = (2 pi)^{-1} \int Ghat(lambda) T(p, U + lambda) exp(i lambda f) dlambda,
//
// the Fourier image of the initial Gaussian pointer weighted by the barrier
// transmission at shifted height.

#include <vector>

#include "zrdelay/amplitudes.hpp"
#include "zrdelay/propagator.hpp"

namespace zrdelay {

struct PointerSpec {
  double df = 1.0;

  /// C in G(f) = C exp(-f^2 / df^2), L2-normalised.
  [[nodiscard]] double amplitude() const;
  [[nodiscard]] double initial(double f) const;
  /// Ghat(lambda) = \int G(f) exp(-i lambda f) df = C sqrt(pi) df exp(-lambda^2 df^2 / 4).
  [[nodiscard]] double spectrum(double lambda) const;
  void validate() const;
};

struct ComplexTime {
  cplx value;
};

/// Sampling of the lambda integral: +-12/df, n points.
struct LambdaGrid {
  double half_span = 0.0;
  std::size_t n = 0;
};

struct PointerState {
  SpatialGrid grid;  // over pointer readings f
  std::vector<cplx> values;
  LambdaGrid lambda;
};

/// Phi on the given f grid. The lambda step is chosen so that the periodic
/// images of Phi (period 2 pi / dlambda) lie beyond the grid.
[[nodiscard]] PointerState pointer_final_state(const PointerSpec& pointer, double p, const PotentialSpec& potential,
                                               const SpatialGrid& f_grid);

/// f window of Phi: [-10 df, tau + 10 df + tail], doubled on the right
/// until the outer tenth carries < 1e-13 of the mass.
[[nodiscard]] PointerState pointer_final_state(const PointerSpec& pointer, double p, const PotentialSpec& potential);

/// <f> = \int f |Phi|^2 df / \int |Phi|^2 df by trapezoid over the adaptive
/// window above.
[[nodiscard]] double mean_pointer_reading(const PointerSpec& pointer, double p, const PotentialSpec& potential);

/// \int |Phi|^2 df, evaluated as (2 pi)^{-1} \int Ghat^2 |T|^2 dlambda.
[[nodiscard]] double transmitted_weight(const PointerSpec& pointer, double p, const PotentialSpec& potential);

/// i d/dlambda ln T(p, U + lambda) at lambda = 0 (central differences with
/// one Richardson step).
[[nodiscard]] ComplexTime complex_time(double p, const PotentialSpec& potential);

/// 1/s for the zero-range distribution of the given width.
[[nodiscard]] ComplexTime larmor_moment_zero_range(double p, double omega, double width);

}  // namespace zrdelay
