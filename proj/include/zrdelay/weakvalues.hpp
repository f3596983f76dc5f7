#pragma once

// Complex shifts, phase times, asymptotic delay predictions and the weak
// average of a Gaussian convolved with a shift distribution.

#include "zrdelay/amplitudes.hpp"
#include "zrdelay/special.hpp"

namespace zrdelay {

struct ComplexShift {
  cplx value;
  Channel channel = Channel::Transmitted;
};

/// i d/dp ln a_c(p). Closed form for zero-range potentials, otherwise a
/// central difference of the log ratio with h = 1e-6 max(p, 1).
/// Throws DomainError when |a_c(p)| < 1e-300.
[[nodiscard]] ComplexShift complex_shift(double p, const PotentialSpec& potential, Channel channel);
[[nodiscard]] ComplexShift complex_shift_transmission(double p, const PotentialSpec& potential);

/// width / v - Re[complex shift] / v with v = p.
[[nodiscard]] double phase_time(double p, const PotentialSpec& potential);

/// Re x' + Im x' dk^2 t / 2 at p for the zero-range barrier.
[[nodiscard]] double asymptote_transmission_dispersive(double p, double omega, double dk, double t);
/// -Omega / (p^2 + Omega^2): the broad-packet limit without filtering.
[[nodiscard]] double asymptote_transmission(double p, double omega);
/// Omega / (p^2 + Omega^2).
[[nodiscard]] double asymptote_reflection(double p, double omega);
/// 1 / (2 Omega): narrow dispersionless limit.
[[nodiscard]] double asymptote_reflection_narrow(double omega);
/// 2 alpha / (1 + p^2 alpha^2).
[[nodiscard]] double asymptote_radial(double p, double alpha);

/// Excess drift from momentum filtering under the quadratic law:
/// +-(d/dp ln|a_c|) dk^2 t / 2, positive sign for transmission, negative for
/// reflection (the mirror flips the drift), zero for radial scattering.
[[nodiscard]] double filtering_term(double p, const PotentialSpec& potential, Channel channel, double dk, double t);

enum class WeakMode { Exact, FirstOrder };

/// <x> = \int x |g|^2 / \int |g|^2 with g = G * eta.
///
/// Exact convolves in closed form and integrates by trapezoid. FirstOrder is
/// base + Re x' + 2 Im x' \int x Im(G* G') / \int |G|^2, the last term being
/// envelope_term (zero for real G).
struct WeakAverage {
  double mean = 0.0;
  double base = 0.0;
  double shift_term = 0.0;
  double envelope_term = 0.0;
};

[[nodiscard]] WeakAverage weak_average(const ShiftDistribution& eta, const special::GaussianEnvelope& envelope,
                                       WeakMode mode);

}  // namespace zrdelay
