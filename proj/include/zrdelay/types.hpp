#pragma once

// Shared domain types. Natural units throughout: hbar = 1, particle mass m = 1.

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zrdelay {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Raised when an operation is evaluated outside its mathematical domain
/// (amplitude poles, classically forbidden traversal, singular event times).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical gate (grid refinement, window coverage) cannot be
/// met within the configured resource limits.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PotentialKind { ZeroRange, Rectangular, RadialZeroRange };

/// The scatterer under study.
///
/// ZeroRange is Omega * delta(x) at the origin. Rectangular is a barrier
/// (height > 0) or well (height < 0) occupying [left, right]. RadialZeroRange
/// is the s-wave zero-range potential characterised by its scattering length.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::ZeroRange;
  double omega = 0.0;
  double height = 0.0;
  double left = 0.0;
  double right = 0.0;
  double alpha = 0.0;

  static PotentialSpec zero_range(double omega);
  static PotentialSpec rectangular(double height, double left, double right);
  static PotentialSpec radial(double alpha);

  /// Spatial extent right - left; zero for the zero-range kinds.
  [[nodiscard]] double width() const noexcept;

  /// Throws DomainError when the invariants of the chosen kind are broken.
  void validate() const;
};

enum class Channel { Transmitted, Reflected, Radial, Free };

[[nodiscard]] std::string_view to_string(Channel channel) noexcept;
[[nodiscard]] std::string_view to_string(PotentialKind kind) noexcept;

/// Energy-momentum relation of the probe.
struct Dispersion {
  enum class Law { Quadratic, Linear };
  Law law = Law::Quadratic;
  double speed = 1.0;  // only used by the linear law

  static Dispersion quadratic() { return {Law::Quadratic, 1.0}; }
  static Dispersion linear(double c) { return {Law::Linear, c}; }

  [[nodiscard]] double energy(double k) const noexcept {
    return law == Law::Quadratic ? 0.5 * k * k : speed * k;
  }
  [[nodiscard]] double velocity(double k) const noexcept {
    return law == Law::Quadratic ? k : speed;
  }
  [[nodiscard]] bool dispersive() const noexcept { return law == Law::Quadratic; }
};

[[nodiscard]] std::string_view to_string(Dispersion::Law law) noexcept;

}  // namespace zrdelay
