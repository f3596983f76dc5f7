#include "zrdelay/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zrdelay/kernels.hpp"

namespace zrdelay {
namespace {

constexpr double kWindowSigmas = 6.0;
constexpr double kTailDecayLengths = 16.0;
constexpr double kHalfSpanInDk = 8.0;

double reflection_sign(Channel channel) { return channel == Channel::Reflected ? -1.0 : 1.0; }

std::size_t scaled_count(double raw, std::size_t floor_count, double grid_scale) {
  const double n = std::max(raw, static_cast<double>(floor_count)) * grid_scale;
  return static_cast<std::size_t>(std::ceil(n)) + 1;
}

struct Tails {
  double low = 0.0;
  double high = 0.0;
};

// Extra room beyond the Gaussian window for the exponential branch of the
// shift distribution (or its finite-width analogue), on the side where the
// branch pushes the density.
Tails tail_lengths(const PacketSpec& spec, const PotentialSpec& potential, Channel channel) {
  if (channel == Channel::Free) return {};
  double length = 0.0;
  bool branch_low = false;
  switch (potential.kind) {
    case PotentialKind::ZeroRange:
      if (potential.omega == 0.0) return {};
      length = std::min(kTailDecayLengths / std::abs(potential.omega), 1e4);
      // Transmission: branch on x' < 0 for Omega > 0 trails the packet. The
      // mirror puts the reflected tail ahead of the reflected centre.
      branch_low = (potential.omega > 0.0) == (channel == Channel::Transmitted);
      return branch_low ? Tails{length, 0.0} : Tails{0.0, length};
    case PotentialKind::RadialZeroRange:
      length = kTailDecayLengths * std::abs(potential.alpha);
      return potential.alpha > 0.0 ? Tails{0.0, length} : Tails{length, 0.0};
    case PotentialKind::Rectangular: break;
  }
  const double dk = spec.dk();
  double largest = 0.0;
  for (int i = -16; i <= 16; ++i) {
    const double k = spec.p + 0.5 * i * dk;
    if (k <= 0.0) continue;
    largest = std::max(largest, std::abs(channel_phase_derivative(k, potential, channel, 1e-6 * std::max(k, 1.0))));
  }
  length = 8.0 * largest + 2.0 * (std::abs(potential.left) + std::abs(potential.right)) + kTailDecayLengths / spec.p;
  return {length, length};
}

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

Window channel_window(const PacketSpec& spec, const PotentialSpec& potential, Channel channel, double t) {
  const double half = kWindowSigmas * spread_width(spec, t);
  const auto tails = tail_lengths(spec, potential, channel);
  const double center = reflection_sign(channel) * spec.free_center(t);
  return {center - half - tails.low, center + half + tails.high};
}

double density_bandwidth(const PacketSpec& spec) { return 2.0 * kHalfSpanInDk * spec.dk(); }

}  // namespace

SpatialGrid SpatialGrid::span(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw DomainError("spatial grid needs hi > lo and at least two points");
  return {lo, (hi - lo) / static_cast<double>(n - 1), n};
}

double SpatialWave::norm() const {
  return kernels::density_moments(values.data(), values.size(), grid.x0, grid.step, grid.x0).m0;
}

double channel_reference_center(const PacketSpec& spec, Channel channel, double t) {
  return reflection_sign(channel) * spec.free_center(t);
}

GridPlan plan_grid(const PacketSpec& spec, const PotentialSpec& potential, Channel channel, double t,
                   double grid_scale) {
  if (!(grid_scale >= 1.0)) throw DomainError("grid scale must be >= 1");
  auto window = channel_window(spec, potential, channel, t);
  if (channel == Channel::Radial) window.lo = std::max(window.lo, 0.0);
  if (!(window.hi > window.lo)) throw DomainError("radial packet has not returned to r > 0 at this time");
  // Aliasing: the synthesized packet repeats with period 2 pi / dk_grid,
  // which must exceed twice the window. The density's bandwidth is the
  // full momentum span, sampled at twice that rate.
  const double raw = density_bandwidth(spec) * (window.hi - window.lo) / kPi;
  GridPlan plan;
  plan.n_k = scaled_count(raw, kMinMomentumPoints, grid_scale);
  plan.grid = SpatialGrid::span(window.lo, window.hi, scaled_count(raw, kMinSpatialPoints, grid_scale));
  const double work = static_cast<double>(plan.n_k) * static_cast<double>(plan.grid.n);
  if (work > kMaxSynthesisTerms)
    throw ConvergenceError("grid of " + std::to_string(plan.n_k) + " x " + std::to_string(plan.grid.n) +
                           " points exceeds the synthesis budget");
  return plan;
}

SpatialWave synthesize_channel(const SpectralAmplitude& spectral, const PotentialSpec& potential, Channel channel,
                               double t, const SpatialGrid& grid) {
  if (grid.n == 0) throw DomainError("empty spatial grid");
  const auto& kg = spectral.grid;
  const auto& packet = spectral.packet;
  const double sign = reflection_sign(channel);
  const double xc = grid.center();
  std::vector<cplx> weights(kg.n);
  for (std::size_t m = 0; m < kg.n; ++m) {
    const double k = kg.at(m);
    const cplx amp = channel_amplitude(k, potential, channel);
    const double phase = sign * k * xc - packet.dispersion.energy(k) * t;
    weights[m] = kg.weight(m) * spectral.values[m] * amp * std::exp(kI * phase);
  }
  // Local coordinates about the window centre, carrier removed.
  SpatialWave wave;
  wave.grid = grid;
  wave.t = t;
  wave.channel = channel;
  wave.values.resize(grid.n);
  const double u0 = grid.x0 - xc;
  kernels::synthesize(weights.data(), kg.n, kg.k_min - packet.p, kg.step, sign * u0, sign * grid.step, grid.n,
                      wave.values.data());
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double u = u0 + static_cast<double>(j) * grid.step;
    wave.values[j] *= std::exp(kI * (sign * packet.p * u));
  }
  wave.scatterer_leak = scatterer_leak(spectral, potential, channel, t);
  wave.completed = wave.scatterer_leak < kCompletedLeakTolerance;
  return wave;
}

SpatialWave synthesize_transmitted(const SpectralAmplitude& spectral, const PotentialSpec& potential, double t,
                                   const SpatialGrid& grid) {
  return synthesize_channel(spectral, potential, Channel::Transmitted, t, grid);
}

SpatialWave synthesize_reflected(const SpectralAmplitude& spectral, const PotentialSpec& potential, double t,
                                 const SpatialGrid& grid) {
  return synthesize_channel(spectral, potential, Channel::Reflected, t, grid);
}

SpatialWave synthesize_radial(const SpectralAmplitude& spectral, double alpha, double t, const SpatialGrid& grid) {
  if (grid.x0 < 0.0) throw DomainError("radial grid must not extend below r = 0");
  return synthesize_channel(spectral, PotentialSpec::radial(alpha), Channel::Radial, t, grid);
}

SpatialWave synthesize_free(const SpectralAmplitude& spectral, double t, const SpatialGrid& grid) {
  return synthesize_channel(spectral, PotentialSpec::zero_range(0.0), Channel::Free, t, grid);
}

double channel_norm(const SpectralAmplitude& spectral, const PotentialSpec& potential, Channel channel) {
  double acc = 0.0;
  for (std::size_t m = 0; m < spectral.grid.n; ++m) {
    const cplx amp = channel_amplitude(spectral.grid.at(m), potential, channel);
    acc += spectral.grid.weight(m) * std::norm(spectral.values[m] * amp);
  }
  return 2.0 * kPi * acc;
}

double scatterer_leak(const SpectralAmplitude& spectral, const PotentialSpec& potential, Channel channel, double t) {
  if (channel == Channel::Free) return 0.0;
  const double total = channel_norm(spectral, potential, channel);
  if (total < 1e-300) return 0.0;
  const auto& packet = spectral.packet;
  // The channel's asymptotic form is only physical on the outgoing side of
  // the scatterer; whatever it still puts on the other side has not left.
  const auto window = channel_window(packet, potential, channel, t);
  const double width = spread_width(packet, t);
  double lo = 0.0;
  double hi = 0.0;
  if (channel == Channel::Reflected) {
    lo = std::min(potential.left, potential.right);
    hi = std::max(window.hi, lo + width);
  } else {
    hi = channel == Channel::Radial ? 0.0 : std::max(potential.left, potential.right);
    lo = std::min(window.lo, hi - width);
  }
  const auto n = static_cast<std::size_t>(std::ceil(density_bandwidth(packet) * (hi - lo) / kPi)) + 257;
  const SpatialGrid grid = SpatialGrid::span(lo, hi, n);
  const double sign = reflection_sign(channel);
  const auto& kg = spectral.grid;
  const double xc = grid.center();
  std::vector<cplx> weights(kg.n);
  for (std::size_t m = 0; m < kg.n; ++m) {
    const double k = kg.at(m);
    const double phase = sign * k * xc - packet.dispersion.energy(k) * t;
    weights[m] = kg.weight(m) * spectral.values[m] * channel_amplitude(k, potential, channel) * std::exp(kI * phase);
  }
  std::vector<cplx> psi(grid.n);
  const double u0 = grid.x0 - xc;
  kernels::synthesize(weights.data(), kg.n, kg.k_min - packet.p, kg.step, sign * u0, sign * grid.step, grid.n,
                      psi.data());
  return kernels::density_moments(psi.data(), psi.size(), grid.x0, grid.step, grid.x0).m0 / total;
}

double completed_event_time(const PacketSpec& spec, double separation) {
  spec.validate();
  if (!(separation > 0.0)) throw DomainError("separation factor K must be positive");
  const double dx = spec.dx;
  if (!spec.dispersion.dispersive()) return 2.0 * separation * dx / spec.dispersion.speed;
  const double dk = spec.dk();
  const double denom = spec.p * spec.p - separation * separation * dk * dk;
  if (!(denom > 0.0))
    throw DomainError("t(p, dk, K) = 2pK dx / (p^2 - K^2 dk^2) is singular or negative: need p > K*dk, i.e. p*dx > 2K (p*dx = " +
                      std::to_string(spec.p * dx) + ", 2K = " + std::to_string(2.0 * separation) + ")");
  return 2.0 * spec.p * separation * dx / denom;
}

}  // namespace zrdelay
