#pragma once

// Closed-form scattering amplitudes and their shift/duration distributions.
//
// Conventions: a plane wave exp(ikx) is incident from the left; the
// transmitted wave is T exp(ikx) beyond the scatterer and the reflected wave
// is R exp(-ikx) before it. Zero-range scatterers sit at the origin.

#include <optional>

#include "zrdelay/special.hpp"
#include "zrdelay/types.hpp"

namespace zrdelay {

/// T(k, Omega) = k / (k + i Omega). Throws DomainError at the pole k = -i Omega.
[[nodiscard]] cplx transmission_zero_range(cplx k, double omega);
/// R(k, Omega) = -i Omega / (k + i Omega).
[[nodiscard]] cplx reflection_zero_range(cplx k, double omega);
/// S(k, alpha) = -(k + i/alpha) / (k - i/alpha); unimodular for real k.
[[nodiscard]] cplx s_matrix_radial(cplx k, double alpha);

/// Rectangular barrier/well of the given height on [left, right].
///
/// Written through the entire functions cos(qL) and sin(qL)/q of q^2, so the
/// result needs no branch choice for the interior wavenumber and is smooth
/// across E = U. The height may be complex (absorbing or emitting region),
/// which the Larmor machinery uses for shifted-contour evaluations.
[[nodiscard]] cplx transmission_rectangular(double k, cplx height, double left, double right);
[[nodiscard]] cplx reflection_rectangular(double k, cplx height, double left, double right);

/// Dispatch on the potential kind. Radial potentials have no transmission
/// channel; their S-matrix is returned by scattering_amplitude.
[[nodiscard]] cplx transmission(double k, const PotentialSpec& potential);
[[nodiscard]] cplx reflection(double k, const PotentialSpec& potential);
/// Amplitude multiplying the outgoing wave of the given channel.
[[nodiscard]] cplx channel_amplitude(double k, const PotentialSpec& potential, Channel channel);

/// Phase derivative d arg(amplitude)/dk of a channel at real k.
///
/// Closed form for the zero-range kinds; otherwise the phase difference
/// arg(A(k+h)/A(k-h)) / 2h, which is unwrapped by construction.
[[nodiscard]] double channel_phase_derivative(double k, const PotentialSpec& potential,
                                              Channel channel, double step);

/// Piecewise-analytic amplitude density over spatial shifts x':
///
///   eta(x') = delta_weight * delta(x')
///           + branch_amplitude * exp(-i p x' - decay |x'|)   on branch_side.
struct ShiftDistribution {
  enum class Side { None, NegativeAxis, PositiveAxis };

  cplx delta_weight{0.0, 0.0};
  Side branch_side = Side::None;
  cplx branch_amplitude{0.0, 0.0};
  double decay_rate = 0.0;
  double oscillation_momentum = 0.0;

  /// Value of the smooth part at x' (the delta term is not representable).
  [[nodiscard]] cplx branch_value(double x) const;
  /// Analytic integral over all x'; equals the generating amplitude.
  [[nodiscard]] cplx zeroth_moment() const;
  [[nodiscard]] cplx first_moment() const;
  /// First moment over zeroth moment: the complex ("weak") shift.
  [[nodiscard]] cplx mean_shift() const;
  [[nodiscard]] bool empty() const noexcept {
    return delta_weight == cplx{} && branch_side == Side::None;
  }

  /// \int G(x - x') eta(x') dx' for a Gaussian envelope G, in closed form.
  [[nodiscard]] cplx convolve(const special::GaussianEnvelope& envelope, double x) const;
};

[[nodiscard]] ShiftDistribution shift_distribution_transmission(double p, double omega);
[[nodiscard]] ShiftDistribution shift_distribution_reflection(double p, double omega);
[[nodiscard]] ShiftDistribution shift_distribution_radial(double p, double alpha);

/// Shift distribution for any zero-range channel; empty optional for
/// potentials without a single-exponential distribution (rectangular).
[[nodiscard]] std::optional<ShiftDistribution> shift_distribution(double p, const PotentialSpec& potential,
                                                                  Channel channel);

/// Zero-range limit of the traversal-time amplitude distribution:
/// A_T(p, tau) = prefactor * exp(-complex_decay * tau) for tau >= 0.
struct LarmorDistribution {
  cplx prefactor;
  cplx complex_decay;

  [[nodiscard]] cplx operator()(double tau) const;
  /// \int_0^\infty A_T dtau = prefactor / s.
  [[nodiscard]] cplx zeroth_moment() const { return prefactor / complex_decay; }
  [[nodiscard]] cplx first_moment() const { return prefactor / (complex_decay * complex_decay); }
  [[nodiscard]] cplx mean_duration() const { return 1.0 / complex_decay; }
};

[[nodiscard]] LarmorDistribution larmor_distribution_zero_range(double p, double omega, double width);

/// Classical time spent over a rectangular barrier at energy E > U.
[[nodiscard]] double classical_traversal_time(double energy, const PotentialSpec& potential);

}  // namespace zrdelay
