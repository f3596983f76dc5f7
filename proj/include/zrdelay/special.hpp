#pragma once

// Special functions and Gaussian-envelope integrals shared by the
// closed-form convolution routes.

#include "zrdelay/types.hpp"

namespace zrdelay::special {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
///
/// Weideman's rational expansion (N = 40) in the closed upper half plane,
/// relative accuracy ~1e-14; the lower half plane uses the reflection
/// w(z) = 2 exp(-z^2) - w(-z), which overflows for large |z| there.
[[nodiscard]] cplx faddeeva(cplx z);

/// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z) = w(iz).
[[nodiscard]] cplx erfcx(cplx z);

/// J(y) = \int_0^\infty exp(-(y+u)^2 / width_sq) exp(-rate u) du
///
/// for complex width_sq with Re(1/width_sq) > 0 and complex rate with
/// Re(rate) > 0. Evaluated in closed form through erfcx, choosing the
/// representation that neither overflows on the Gaussian side nor on the
/// exponential side.
[[nodiscard]] cplx gaussian_exponential_tail(double y, cplx width_sq, cplx rate);

/// Complex Gaussian envelope amplitude * exp(-(x - center)^2 / width_sq).
/// Real whenever amplitude and width_sq are real.
struct GaussianEnvelope {
  cplx amplitude{1.0, 0.0};
  double center = 0.0;
  cplx width_sq{1.0, 0.0};

  /// L2-normalised envelope of the given complex squared width.
  static GaussianEnvelope normalized(double center, cplx width_sq);

  [[nodiscard]] cplx operator()(double x) const;
  [[nodiscard]] cplx derivative(double x) const;
  /// Width of |G|: |G| ~ exp(-(x-c)^2 / w^2) with w^2 = 1 / Re(1/width_sq).
  [[nodiscard]] double modulus_width() const;
  [[nodiscard]] bool is_real() const noexcept {
    return amplitude.imag() == 0.0 && width_sq.imag() == 0.0;
  }
};

}  // namespace zrdelay::special
