#pragma once

// Gaussian probe packets: spectral amplitudes on uniform momentum grids and
// the closed-form free envelopes for both dispersion laws.

#include <cstddef>
#include <vector>

#include "zrdelay/special.hpp"
#include "zrdelay/types.hpp"

namespace zrdelay {

struct PacketSpec {
  double p = 1.0;        // mean momentum
  double dx = 1.0;       // spatial width
  double x_start = 0.0;  // launch position
  Dispersion dispersion{};

  /// Momentum width, fixed to 2 / dx.
  [[nodiscard]] double dk() const noexcept { return 2.0 / dx; }
  /// Group velocity at the mean momentum.
  [[nodiscard]] double velocity() const noexcept { return dispersion.velocity(p); }
  /// Free centre of mass at time t.
  [[nodiscard]] double free_center(double t) const noexcept { return x_start + velocity() * t; }

  void validate() const;
  /// Throws DomainError unless |x_start| >= factor * dx.
  void check_separation(double factor) const;
};

/// Uniform grid k_j = k_min + j * step, j = 0..n-1.
struct MomentumGrid {
  double k_min = 0.0;
  double step = 0.0;
  std::size_t n = 0;

  [[nodiscard]] double at(std::size_t j) const noexcept { return k_min + static_cast<double>(j) * step; }
  [[nodiscard]] double k_max() const noexcept { return at(n - 1); }
  /// Trapezoid weight of node j.
  [[nodiscard]] double weight(std::size_t j) const noexcept {
    return (j == 0 || j + 1 == n) ? 0.5 * step : step;
  }
};

/// A(k) sampled on a momentum grid. The packet psi(x) = \int A(k) exp(ikx) dk
/// is unit-normalised in x, so 2 pi \int |A|^2 dk = 1.
struct SpectralAmplitude {
  PacketSpec packet;
  MomentumGrid grid;
  std::vector<cplx> values;

  /// 2 pi \int |A|^2 dk by trapezoid.
  [[nodiscard]] double norm() const;
  /// max(|A(k_min)|, |A(k_max)|) / max|A|.
  [[nodiscard]] double endpoint_ratio() const;
};

/// Peak modulus of A, reached at k = p.
[[nodiscard]] double gaussian_peak(const PacketSpec& spec);

/// A(k) at a single momentum.
[[nodiscard]] cplx gaussian_spectral_value(const PacketSpec& spec, double k);

/// Samples A on [p - half_span * dk, p + half_span * dk] with n points.
/// Throws DomainError when half_span < 8 or n < 3; doubles the span until
/// the endpoint ratio drops below 1e-12.
[[nodiscard]] SpectralAmplitude gaussian_spectral(const PacketSpec& spec, std::size_t n = 4096,
                                                  double half_span = 8.0);

/// Spatial width of |G0| at time t: sqrt(dx^2 + dk^2 t^2) for the quadratic
/// law, dx for the linear law.
[[nodiscard]] double spread_width(const PacketSpec& spec, double t);

/// Free envelope G0(., t) as a complex Gaussian: squared width dx^2 + 2it
/// (quadratic) or dx^2 (linear), centred on x_start + v t.
[[nodiscard]] special::GaussianEnvelope free_envelope(const PacketSpec& spec, double t);
[[nodiscard]] cplx free_envelope(const PacketSpec& spec, double x, double t);

/// Carrier exp(i(p x - E_p t)) so that psi0 = carrier * G0.
[[nodiscard]] cplx plane_wave(const PacketSpec& spec, double x, double t);

}  // namespace zrdelay
