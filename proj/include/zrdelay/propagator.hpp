#pragma once

// Spectral synthesis of scattered packets on uniform spatial grids.
//
// psi_c(x, t) = \int A(k) a_c(k) exp(+-ikx - iE_k t) dk is evaluated by the
// trapezoid rule on the momentum grid of the SpectralAmplitude, with a_c the
// channel amplitude (T, R, S or 1) and the minus sign for reflection.

#include <cstddef>
#include <vector>

#include "zrdelay/amplitudes.hpp"
#include "zrdelay/wavepackets.hpp"

namespace zrdelay {

struct SpatialGrid {
  double x0 = 0.0;
  double step = 0.0;
  std::size_t n = 0;

  [[nodiscard]] double at(std::size_t j) const noexcept { return x0 + static_cast<double>(j) * step; }
  [[nodiscard]] double x_last() const noexcept { return at(n - 1); }
  [[nodiscard]] double center() const noexcept { return 0.5 * (x0 + x_last()); }

  /// n points spanning [lo, hi] inclusive.
  static SpatialGrid span(double lo, double hi, std::size_t n);
};

struct SpatialWave {
  SpatialGrid grid;
  std::vector<cplx> values;
  double t = 0.0;
  Channel channel = Channel::Free;
  /// Fraction of the channel norm that the asymptotic form still places on
  /// the incoming side of the scatterer.
  double scatterer_leak = 0.0;
  bool completed = true;

  /// \int |psi|^2 dx by trapezoid.
  [[nodiscard]] double norm() const;
};

inline constexpr double kCompletedLeakTolerance = 1e-8;

/// Momentum and spatial sampling chosen so that the periodic images of the
/// synthesized packet fall outside the window and the density is resolved
/// at twice its bandwidth.
struct GridPlan {
  std::size_t n_k = 0;
  SpatialGrid grid;
};

inline constexpr std::size_t kMinMomentumPoints = 4096;
inline constexpr std::size_t kMinSpatialPoints = 8192;
/// Largest n_k * n_x a single synthesis may cost; beyond it the plan throws
/// ConvergenceError instead of running for hours.
inline constexpr double kMaxSynthesisTerms = 1e11;

/// Spatial window for the channel: the free (or mirrored) centre +- 6 dx_t,
/// widened by the decay length of the channel's shift distribution.
/// grid_scale multiplies both point counts. Throws ConvergenceError when the
/// plan exceeds kMaxSynthesisTerms.
[[nodiscard]] GridPlan plan_grid(const PacketSpec& spec, const PotentialSpec& potential, Channel channel, double t,
                                 double grid_scale = 1.0);

/// Centre of the channel's free reference at time t: x_I + v t, mirrored for
/// reflection.
[[nodiscard]] double channel_reference_center(const PacketSpec& spec, Channel channel, double t);

[[nodiscard]] SpatialWave synthesize_channel(const SpectralAmplitude& spectral, const PotentialSpec& potential,
                                             Channel channel, double t, const SpatialGrid& grid);
[[nodiscard]] SpatialWave synthesize_transmitted(const SpectralAmplitude& spectral, const PotentialSpec& potential,
                                                 double t, const SpatialGrid& grid);
[[nodiscard]] SpatialWave synthesize_reflected(const SpectralAmplitude& spectral, const PotentialSpec& potential,
                                               double t, const SpatialGrid& grid);
/// Outgoing radial wave for a packet converging from r_I; the spectral
/// amplitude must be built with x_start = -r_I and the grid must lie in r >= 0.
[[nodiscard]] SpatialWave synthesize_radial(const SpectralAmplitude& spectral, double alpha, double t,
                                            const SpatialGrid& grid);
[[nodiscard]] SpatialWave synthesize_free(const SpectralAmplitude& spectral, double t, const SpatialGrid& grid);

/// 2 pi \int |A|^2 |a_c|^2 dk on the spectral grid.
[[nodiscard]] double channel_norm(const SpectralAmplitude& spectral, const PotentialSpec& potential, Channel channel);

/// Fraction of the channel norm on the incoming side of the scatterer at
/// time t (x < b for transmission, x > a for reflection, r < 0 for radial).
/// An event is completed when this is below kCompletedLeakTolerance.
[[nodiscard]] double scatterer_leak(const SpectralAmplitude& spectral, const PotentialSpec& potential,
                                    Channel channel, double t);

/// t = 2 p K dx / (p^2 - K^2 dk^2): the free centre of mass then lies
/// K dx_t beyond the origin. Throws DomainError unless p > K dk.
/// Linear law: t = 2 K dx / c.
[[nodiscard]] double completed_event_time(const PacketSpec& spec, double separation);

}  // namespace zrdelay
