#include "zrdelay/weakvalues.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace zrdelay {

ComplexShift complex_shift(double p, const PotentialSpec& potential, Channel channel) {
  if (channel == Channel::Free) return {cplx{}, channel};
  const cplx amp = channel_amplitude(p, potential, channel);
  if (std::abs(amp) < 1e-300) throw DomainError("complex shift undefined: channel amplitude vanishes");
  switch (potential.kind) {
    case PotentialKind::ZeroRange: {
      const double om = potential.omega;
      const double d = p * p + om * om;
      if (channel == Channel::Transmitted) return {cplx{-om / d, om * om / (p * d)}, channel};
      return {cplx{-om / d, -p / d}, channel};
    }
    case PotentialKind::RadialZeroRange: {
      const double a = potential.alpha;
      return {cplx{2.0 * a / (1.0 + a * a * p * p), 0.0}, channel};
    }
    case PotentialKind::Rectangular: break;
  }
  const double h = 1e-6 * std::max(p, 1.0);
  const cplx ratio = channel_amplitude(p + h, potential, channel) / channel_amplitude(p - h, potential, channel);
  return {kI * std::log(ratio) / (2.0 * h), channel};
}

ComplexShift complex_shift_transmission(double p, const PotentialSpec& potential) {
  return complex_shift(p, potential, Channel::Transmitted);
}

double phase_time(double p, const PotentialSpec& potential) {
  if (!(p > 0.0)) throw DomainError("phase time needs p > 0");
  const double v = p;
  return potential.width() / v - complex_shift_transmission(p, potential).value.real() / v;
}

double asymptote_transmission_dispersive(double p, double omega, double dk, double t) {
  const cplx shift = complex_shift_transmission(p, PotentialSpec::zero_range(omega)).value;
  return shift.real() + shift.imag() * dk * dk * t / 2.0;
}

double asymptote_transmission(double p, double omega) { return -omega / (p * p + omega * omega); }

double asymptote_reflection(double p, double omega) { return omega / (p * p + omega * omega); }

double asymptote_reflection_narrow(double omega) {
  if (omega == 0.0) throw DomainError("narrow reflection limit needs Omega != 0");
  return 1.0 / (2.0 * omega);
}

double asymptote_radial(double p, double alpha) { return 2.0 * alpha / (1.0 + p * p * alpha * alpha); }

double filtering_term(double p, const PotentialSpec& potential, Channel channel, double dk, double t) {
  if (channel == Channel::Radial || channel == Channel::Free) return 0.0;
  const double log_slope = complex_shift(p, potential, channel).value.imag();
  const double sign = channel == Channel::Reflected ? -1.0 : 1.0;
  return sign * log_slope * dk * dk * t / 2.0;
}

namespace {

double exact_mean(const ShiftDistribution& eta, const special::GaussianEnvelope& envelope) {
  const double w = envelope.modulus_width();
  double tail = 0.0;
  double scale = w;
  if (eta.branch_side != ShiftDistribution::Side::None) {
    tail = 16.0 / eta.decay_rate;
    scale = std::min(scale, 1.0 / eta.decay_rate);
    if (eta.oscillation_momentum != 0.0) scale = std::min(scale, 2.0 * kPi / std::abs(eta.oscillation_momentum));
  }
  const double lo = envelope.center - 8.0 * w - tail;
  const double hi = envelope.center + 8.0 * w + tail;
  const double h = scale / 24.0;
  const auto n = static_cast<std::size_t>(std::min(std::ceil((hi - lo) / h), 4e6)) + 1;
  const double step = (hi - lo) / static_cast<double>(n - 1);
  double m0 = 0.0;
  double m1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = lo + static_cast<double>(j) * step;
    const double rho = std::norm(eta.convolve(envelope, x));
    const double wt = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    m0 += wt * rho;
    m1 += wt * rho * (x - envelope.center);
  }
  if (!(m0 > 1e-300)) throw DomainError("weak average: convolved envelope has vanishing norm");
  return envelope.center + m1 / m0;
}

}  // namespace

WeakAverage weak_average(const ShiftDistribution& eta, const special::GaussianEnvelope& envelope, WeakMode mode) {
  if (eta.empty()) throw DomainError("weak average of an empty shift distribution");
  WeakAverage out;
  out.base = envelope.center;
  const cplx shift = eta.mean_shift();
  out.shift_term = shift.real();
  const double w = envelope.modulus_width();
  out.envelope_term = envelope.is_real() ? 0.0 : -shift.imag() * (1.0 / envelope.width_sq).imag() * w * w;
  if (mode == WeakMode::FirstOrder) {
    out.mean = out.base + out.shift_term + out.envelope_term;
  } else {
    out.mean = exact_mean(eta, envelope);
  }
  return out;
}

}  // namespace zrdelay
