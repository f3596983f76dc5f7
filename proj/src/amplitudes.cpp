#include "zrdelay/amplitudes.hpp"

#include <cmath>
#include <string>

namespace zrdelay {

PotentialSpec PotentialSpec::zero_range(double omega) {
  PotentialSpec spec;
  spec.kind = PotentialKind::ZeroRange;
  spec.omega = omega;
  return spec;
}

PotentialSpec PotentialSpec::rectangular(double height, double left, double right) {
  PotentialSpec spec;
  spec.kind = PotentialKind::Rectangular;
  spec.height = height;
  spec.left = left;
  spec.right = right;
  return spec;
}

PotentialSpec PotentialSpec::radial(double alpha) {
  PotentialSpec spec;
  spec.kind = PotentialKind::RadialZeroRange;
  spec.alpha = alpha;
  return spec;
}

double PotentialSpec::width() const noexcept {
  return kind == PotentialKind::Rectangular ? right - left : 0.0;
}

void PotentialSpec::validate() const {
  switch (kind) {
    case PotentialKind::ZeroRange:
      if (!std::isfinite(omega)) throw DomainError("zero-range strength must be finite");
      return;
    case PotentialKind::Rectangular:
      if (!std::isfinite(height) || !std::isfinite(left) || !std::isfinite(right))
        throw DomainError("rectangular potential parameters must be finite");
      if (!(right > left)) throw DomainError("rectangular potential requires right edge > left edge");
      return;
    case PotentialKind::RadialZeroRange:
      if (!std::isfinite(alpha) || alpha == 0.0)
        throw DomainError("radial scattering length must be finite and nonzero");
      return;
  }
}

std::string_view to_string(Channel channel) noexcept {
  switch (channel) {
    case Channel::Transmitted: return "transmitted";
    case Channel::Reflected: return "reflected";
    case Channel::Radial: return "radial";
    case Channel::Free: return "free";
  }
  return "?";
}

std::string_view to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::ZeroRange: return "zero_range";
    case PotentialKind::Rectangular: return "rectangular";
    case PotentialKind::RadialZeroRange: return "radial";
  }
  return "?";
}

std::string_view to_string(Dispersion::Law law) noexcept {
  return law == Dispersion::Law::Quadratic ? "quadratic" : "linear";
}

cplx transmission_zero_range(cplx k, double omega) {
  const cplx denom = k + kI * omega;
  if (denom == cplx{}) throw DomainError("transmission amplitude evaluated at its pole k = -i*Omega");
  return k / denom;
}

cplx reflection_zero_range(cplx k, double omega) {
  const cplx denom = k + kI * omega;
  if (denom == cplx{}) throw DomainError("reflection amplitude evaluated at its pole k = -i*Omega");
  return -kI * omega / denom;
}

cplx s_matrix_radial(cplx k, double alpha) {
  if (alpha == 0.0) throw DomainError("radial S-matrix needs a nonzero scattering length");
  const cplx pole = kI / alpha;
  const cplx denom = k - pole;
  if (denom == cplx{}) throw DomainError("radial S-matrix evaluated at its pole k = i/alpha");
  return -(k + pole) / denom;
}

namespace {

// cos(sqrt(z) L) and sin(sqrt(z) L)/sqrt(z): both even in sqrt(z), hence
// entire in z. Near z = 0 the Taylor series removes the 0/0.
struct InteriorFunctions {
  cplx cosine;
  cplx sine_over_q;
};

InteriorFunctions interior(cplx z, double length) {
  const cplx w2 = z * length * length;
  if (std::abs(w2) < 1e-2) {
    cplx c{1.0, 0.0};
    cplx s{1.0, 0.0};
    cplx term_c{1.0, 0.0};
    cplx term_s{1.0, 0.0};
    for (int n = 1; n <= 7; ++n) {
      term_c *= -w2 / static_cast<double>((2 * n - 1) * (2 * n));
      term_s *= -w2 / static_cast<double>((2 * n) * (2 * n + 1));
      c += term_c;
      s += term_s;
    }
    return {c, s * length};
  }
  const cplx q = std::sqrt(z);
  return {std::cos(q * length), std::sin(q * length) / q};
}

struct RectangularParts {
  cplx denominator;
  cplx sine_over_q;
  cplx z;
};

RectangularParts rectangular_parts(double k, cplx height, double length) {
  const cplx z = k * k - 2.0 * height;
  const auto f = interior(z, length);
  const cplx denom = f.cosine - kI * (k * k + z) / (2.0 * k) * f.sine_over_q;
  if (denom == cplx{}) throw DomainError("rectangular amplitude denominator vanished");
  return {denom, f.sine_over_q, z};
}

}  // namespace

cplx transmission_rectangular(double k, cplx height, double left, double right) {
  const double length = right - left;
  if (!(length > 0.0)) throw DomainError("rectangular potential requires right edge > left edge");
  if (k == 0.0) return {};
  const auto parts = rectangular_parts(k, height, length);
  return std::exp(-kI * (k * length)) / parts.denominator;
}

cplx reflection_rectangular(double k, cplx height, double left, double right) {
  const double length = right - left;
  if (!(length > 0.0)) throw DomainError("rectangular potential requires right edge > left edge");
  if (k == 0.0) return {-1.0, 0.0};
  const auto parts = rectangular_parts(k, height, length);
  const cplx r0 = kI * (parts.z - k * k) / (2.0 * k) * parts.sine_over_q / parts.denominator;
  return std::exp(2.0 * kI * (k * left)) * r0;
}

cplx transmission(double k, const PotentialSpec& potential) {
  switch (potential.kind) {
    case PotentialKind::ZeroRange: return transmission_zero_range(k, potential.omega);
    case PotentialKind::Rectangular:
      return transmission_rectangular(k, potential.height, potential.left, potential.right);
    case PotentialKind::RadialZeroRange: break;
  }
  throw DomainError("radial potentials have no transmission channel");
}

cplx reflection(double k, const PotentialSpec& potential) {
  switch (potential.kind) {
    case PotentialKind::ZeroRange: return reflection_zero_range(k, potential.omega);
    case PotentialKind::Rectangular:
      return reflection_rectangular(k, potential.height, potential.left, potential.right);
    case PotentialKind::RadialZeroRange: break;
  }
  throw DomainError("radial potentials have no reflection channel");
}

cplx channel_amplitude(double k, const PotentialSpec& potential, Channel channel) {
  switch (channel) {
    case Channel::Transmitted: return transmission(k, potential);
    case Channel::Reflected: return reflection(k, potential);
    case Channel::Radial:
      if (potential.kind != PotentialKind::RadialZeroRange)
        throw DomainError("radial channel requires a radial potential");
      return s_matrix_radial(k, potential.alpha);
    case Channel::Free: return {1.0, 0.0};
  }
  return {1.0, 0.0};
}

double channel_phase_derivative(double k, const PotentialSpec& potential, Channel channel, double step) {
  if (channel == Channel::Free) return 0.0;
  switch (potential.kind) {
    case PotentialKind::ZeroRange: {
      // Both T and R carry -arg(k + i Omega) as their k-dependent phase.
      const double om = potential.omega;
      return om / (k * k + om * om);
    }
    case PotentialKind::RadialZeroRange: {
      const double a = potential.alpha;
      return -2.0 * a / (1.0 + a * a * k * k);
    }
    case PotentialKind::Rectangular: break;
  }
  const cplx ratio = channel_amplitude(k + step, potential, channel) / channel_amplitude(k - step, potential, channel);
  return std::arg(ratio) / (2.0 * step);
}

cplx ShiftDistribution::branch_value(double x) const {
  switch (branch_side) {
    case Side::None: return {};
    case Side::NegativeAxis:
      if (x >= 0.0) return {};
      return branch_amplitude * std::exp(cplx{decay_rate * x, -oscillation_momentum * x});
    case Side::PositiveAxis:
      if (x <= 0.0) return {};
      return branch_amplitude * std::exp(cplx{-decay_rate * x, -oscillation_momentum * x});
  }
  return {};
}

cplx ShiftDistribution::zeroth_moment() const {
  switch (branch_side) {
    case Side::None: return delta_weight;
    case Side::NegativeAxis: return delta_weight + branch_amplitude / cplx{decay_rate, -oscillation_momentum};
    case Side::PositiveAxis: return delta_weight + branch_amplitude / cplx{decay_rate, oscillation_momentum};
  }
  return delta_weight;
}

cplx ShiftDistribution::first_moment() const {
  switch (branch_side) {
    case Side::None: return {};
    case Side::NegativeAxis: {
      const cplx rate{decay_rate, -oscillation_momentum};
      return -branch_amplitude / (rate * rate);
    }
    case Side::PositiveAxis: {
      const cplx rate{decay_rate, oscillation_momentum};
      return branch_amplitude / (rate * rate);
    }
  }
  return {};
}

cplx ShiftDistribution::mean_shift() const {
  const cplx m0 = zeroth_moment();
  if (std::abs(m0) < 1e-300) throw DomainError("shift distribution has a vanishing zeroth moment");
  return first_moment() / m0;
}

cplx ShiftDistribution::convolve(const special::GaussianEnvelope& envelope, double x) const {
  const double y = x - envelope.center;
  cplx result = delta_weight * std::exp(-y * y / envelope.width_sq);
  switch (branch_side) {
    case Side::None: break;
    case Side::NegativeAxis:
      result += branch_amplitude *
                special::gaussian_exponential_tail(y, envelope.width_sq, cplx{decay_rate, -oscillation_momentum});
      break;
    case Side::PositiveAxis:
      result += branch_amplitude *
                special::gaussian_exponential_tail(-y, envelope.width_sq, cplx{decay_rate, oscillation_momentum});
      break;
  }
  return envelope.amplitude * result;
}

ShiftDistribution shift_distribution_transmission(double p, double omega) {
  ShiftDistribution eta;
  eta.delta_weight = 1.0;
  eta.oscillation_momentum = p;
  if (omega == 0.0) return eta;
  eta.branch_side = omega > 0.0 ? ShiftDistribution::Side::NegativeAxis : ShiftDistribution::Side::PositiveAxis;
  eta.branch_amplitude = -std::abs(omega);
  eta.decay_rate = std::abs(omega);
  return eta;
}

ShiftDistribution shift_distribution_reflection(double p, double omega) {
  ShiftDistribution eta;
  eta.oscillation_momentum = p;
  if (omega == 0.0) return eta;
  eta.branch_side = omega > 0.0 ? ShiftDistribution::Side::NegativeAxis : ShiftDistribution::Side::PositiveAxis;
  eta.branch_amplitude = -std::abs(omega);
  eta.decay_rate = std::abs(omega);
  return eta;
}

ShiftDistribution shift_distribution_radial(double p, double alpha) {
  if (alpha == 0.0) throw DomainError("radial shift distribution needs a nonzero scattering length");
  ShiftDistribution eta;
  eta.delta_weight = -1.0;
  eta.oscillation_momentum = p;
  eta.branch_side = alpha > 0.0 ? ShiftDistribution::Side::PositiveAxis : ShiftDistribution::Side::NegativeAxis;
  eta.branch_amplitude = 2.0 / std::abs(alpha);
  eta.decay_rate = 1.0 / std::abs(alpha);
  return eta;
}

std::optional<ShiftDistribution> shift_distribution(double p, const PotentialSpec& potential, Channel channel) {
  if (channel == Channel::Free) {
    ShiftDistribution eta;
    eta.delta_weight = 1.0;
    eta.oscillation_momentum = p;
    return eta;
  }
  switch (potential.kind) {
    case PotentialKind::ZeroRange:
      if (channel == Channel::Transmitted) return shift_distribution_transmission(p, potential.omega);
      if (channel == Channel::Reflected) return shift_distribution_reflection(p, potential.omega);
      break;
    case PotentialKind::RadialZeroRange:
      if (channel == Channel::Radial) return shift_distribution_radial(p, potential.alpha);
      break;
    case PotentialKind::Rectangular: break;
  }
  return std::nullopt;
}

cplx LarmorDistribution::operator()(double tau) const {
  if (tau < 0.0) return {};
  return prefactor * std::exp(-complex_decay * tau);
}

LarmorDistribution larmor_distribution_zero_range(double p, double omega, double width) {
  if (!(width > 0.0)) throw DomainError("Larmor distribution needs a positive region width");
  if (!(p > 0.0)) throw DomainError("Larmor distribution needs a positive momentum");
  const double inv_tau0 = p / width;
  return {cplx{inv_tau0, 0.0}, cplx{inv_tau0, omega / width}};
}

double classical_traversal_time(double energy, const PotentialSpec& potential) {
  if (potential.kind != PotentialKind::Rectangular)
    throw DomainError("classical traversal time is defined for rectangular potentials");
  potential.validate();
  if (!(energy > potential.height))
    throw DomainError("classically forbidden: energy " + std::to_string(energy) + " does not exceed barrier height " +
                      std::to_string(potential.height));
  return potential.width() / std::sqrt(2.0 * (energy - potential.height));
}

}  // namespace zrdelay
