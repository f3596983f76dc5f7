#include "zrdelay/observables.hpp"

#include <algorithm>
#include <cmath>

#include "zrdelay/kernels.hpp"
#include "zrdelay/weakvalues.hpp"

namespace zrdelay {

std::string_view to_string(ComMethod method) noexcept {
  return method == ComMethod::RealSpace ? "real_space" : "spectral";
}

double com_real_space(const SpatialWave& wave) {
  const double ref = wave.grid.center();
  const auto moments = kernels::density_moments(wave.values.data(), wave.values.size(), wave.grid.x0,
                                                wave.grid.step, ref);
  if (!(moments.m0 > 1e-12)) throw DomainError("centre of mass undefined: wave norm below 1e-12");
  return ref + moments.m1 / moments.m0;
}

namespace {

struct SpectralAverages {
  double weight = 0.0;
  double velocity = 0.0;
  double phase_slope = 0.0;
};

SpectralAverages spectral_averages(const SpectralAmplitude& spectral, const PotentialSpec& potential,
                                   Channel channel) {
  const auto& kg = spectral.grid;
  const auto& law = spectral.packet.dispersion;
  double w_sum = 0.0;
  double v_sum = 0.0;
  double phi_sum = 0.0;
  for (std::size_t m = 0; m < kg.n; ++m) {
    const double k = kg.at(m);
    const cplx amp = channel_amplitude(k, potential, channel);
    const double w = kg.weight(m) * std::norm(spectral.values[m] * amp);
    if (w == 0.0) continue;
    w_sum += w;
    v_sum += w * law.velocity(k);
    phi_sum += w * channel_phase_derivative(k, potential, channel, kg.step);
  }
  if (!(w_sum > 0.0)) throw DomainError("spectral centre of mass undefined: channel carries no weight");
  return {w_sum, v_sum / w_sum, phi_sum / w_sum};
}

}  // namespace

double com_spectral_transmission(const SpectralAmplitude& spectral, const PotentialSpec& potential, double t) {
  const auto avg = spectral_averages(spectral, potential, Channel::Transmitted);
  return spectral.packet.x_start + avg.velocity * t - avg.phase_slope;
}

double com_spectral_reflection(const SpectralAmplitude& spectral, const PotentialSpec& potential, double t) {
  const auto avg = spectral_averages(spectral, potential, Channel::Reflected);
  return -spectral.packet.x_start - avg.velocity * t + avg.phase_slope;
}

double com_spectral_radial(const SpectralAmplitude& spectral, double alpha, double t) {
  const auto avg = spectral_averages(spectral, PotentialSpec::radial(alpha), Channel::Radial);
  return spectral.packet.x_start + avg.velocity * t - avg.phase_slope;
}

double com_spectral(const SpectralAmplitude& spectral, const PotentialSpec& potential, Channel channel, double t) {
  switch (channel) {
    case Channel::Transmitted: return com_spectral_transmission(spectral, potential, t);
    case Channel::Reflected: return com_spectral_reflection(spectral, potential, t);
    case Channel::Radial: return com_spectral_radial(spectral, potential.alpha, t);
    case Channel::Free: break;
  }
  const auto avg = spectral_averages(spectral, potential, Channel::Free);
  return spectral.packet.x_start + avg.velocity * t;
}

bool DelayMeasurement::methods_agree() const {
  const double diff = std::abs(real_space.delay - spectral.delay);
  const double scale = std::max(std::abs(real_space.delay), std::abs(spectral.delay));
  return diff <= 1e-9 || diff <= 1e-6 * scale || diff <= clip_bound;
}

double delay_asymptote(const PacketSpec& spec, const PotentialSpec& potential, Channel channel, double t) {
  switch (channel) {
    case Channel::Free: return 0.0;
    case Channel::Radial: return complex_shift(spec.p, potential, channel).value.real();
    case Channel::Reflected:
      if (potential.kind == PotentialKind::ZeroRange) return asymptote_reflection(spec.p, potential.omega);
      return -complex_shift(spec.p, potential, channel).value.real();
    case Channel::Transmitted: break;
  }
  if (potential.kind == PotentialKind::ZeroRange && potential.omega == 0.0) return 0.0;
  const double base = complex_shift_transmission(spec.p, potential).value.real();
  if (!spec.dispersion.dispersive()) return base;
  return base + filtering_term(spec.p, potential, channel, spec.dk(), t);
}

namespace {

struct Pass {
  double real_delay = 0.0;
  double spectral_delay = 0.0;
  double real_norm = 0.0;
  double spectral_norm = 0.0;
  double leak = 0.0;
  GridPlan plan;
};

Pass run_pass(const PacketSpec& packet, const PotentialSpec& potential, Channel channel, double t, double scale) {
  Pass pass;
  pass.plan = plan_grid(packet, potential, channel, t, scale);
  const auto spectral = gaussian_spectral(packet, pass.plan.n_k);
  const auto wave = synthesize_channel(spectral, potential, channel, t, pass.plan.grid);
  const double reference = channel_reference_center(packet, channel, t);
  pass.real_delay = com_real_space(wave) - reference;
  pass.spectral_delay = com_spectral(spectral, potential, channel, t) - reference;
  pass.real_norm = wave.norm();
  pass.spectral_norm = channel_norm(spectral, potential, channel);
  pass.leak = wave.scatterer_leak;
  return pass;
}

}  // namespace

DelayMeasurement measure_delay(const PacketSpec& spec, const PotentialSpec& potential, Channel channel, double t,
                               const MeasureOptions& options) {
  spec.validate();
  potential.validate();
  if (!(t >= 0.0)) throw DomainError("evaluation time must be non-negative");
  PacketSpec packet = spec;
  if (channel == Channel::Radial) {
    if (!(spec.x_start > 0.0)) throw DomainError("radial packets start at r_I > 0");
    packet.x_start = -spec.x_start;
  }
  const Pass base = run_pass(packet, potential, channel, t, options.grid_scale);
  DelayMeasurement out;
  out.plan = base.plan;
  out.scatterer_leak = base.leak;
  out.completed = base.leak < kCompletedLeakTolerance;
  if (channel == Channel::Radial)
    out.clip_bound = base.leak * (std::abs(channel_reference_center(packet, channel, t)) + 6.0 * spread_width(packet, t));
  const double asymptote = delay_asymptote(packet, potential, channel, t);
  out.real_space = {base.real_delay, channel, t, base.real_norm, asymptote, ComMethod::RealSpace};
  out.spectral = {base.spectral_delay, channel, t, base.spectral_norm, asymptote, ComMethod::Spectral};
  if (packet.dispersion.dispersive()) out.filtering_term = filtering_term(packet.p, potential, channel, packet.dk(), t);
  if (options.refine) {
    const Pass fine = run_pass(packet, potential, channel, t, 2.0 * options.grid_scale);
    out.refinement_residual = std::max(std::abs(fine.real_delay - base.real_delay),
                                       std::abs(fine.spectral_delay - base.spectral_delay));
  }
  return out;
}

DelayMeasurement delay_transmission(const PacketSpec& spec, const PotentialSpec& potential, double t,
                                    const MeasureOptions& options) {
  return measure_delay(spec, potential, Channel::Transmitted, t, options);
}

DelayMeasurement delay_reflection(const PacketSpec& spec, const PotentialSpec& potential, double t,
                                  const MeasureOptions& options) {
  return measure_delay(spec, potential, Channel::Reflected, t, options);
}

DelayMeasurement delay_radial(const PacketSpec& spec, double alpha, double t, const MeasureOptions& options) {
  return measure_delay(spec, PotentialSpec::radial(alpha), Channel::Radial, t, options);
}

}  // namespace zrdelay
