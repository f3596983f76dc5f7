#pragma once

// Centre-of-mass extraction, by real-space quadrature of a synthesized wave
// and by spectral averages over |a_c A|^2, and assembly of COM delays.

#include <string_view>

#include "zrdelay/propagator.hpp"

namespace zrdelay {

enum class ComMethod { RealSpace, Spectral };

[[nodiscard]] std::string_view to_string(ComMethod method) noexcept;

/// \int x |psi|^2 / \int |psi|^2. Throws DomainError when the norm < 1e-12.
[[nodiscard]] double com_real_space(const SpatialWave& wave);

/// x_I + <v>_T t - <phi_T'>_T over |T A|^2.
[[nodiscard]] double com_spectral_transmission(const SpectralAmplitude& spectral, const PotentialSpec& potential,
                                               double t);
/// -x_I - <v>_R t + <phi_R'>_R over |R A|^2.
[[nodiscard]] double com_spectral_reflection(const SpectralAmplitude& spectral, const PotentialSpec& potential,
                                             double t);
/// x_I + <v> t - <phi_S'> over |A|^2, with x_I = -r_I.
[[nodiscard]] double com_spectral_radial(const SpectralAmplitude& spectral, double alpha, double t);
[[nodiscard]] double com_spectral(const SpectralAmplitude& spectral, const PotentialSpec& potential, Channel channel,
                                  double t);

struct DelayResult {
  double delay = 0.0;
  Channel channel = Channel::Transmitted;
  double t_eval = 0.0;
  double norm = 0.0;
  double asymptote = 0.0;
  ComMethod method = ComMethod::RealSpace;
};

/// Both COM routes for one packet, the grid-refinement residual and the
/// completed-event diagnostics.
struct DelayMeasurement {
  DelayResult real_space;
  DelayResult spectral;
  /// Momentum-filtering drift predicted for the quadratic law (0 otherwise).
  double filtering_term = 0.0;
  /// max over both routes of |delay(refined grid) - delay(base grid)|;
  /// negative when refinement was not requested.
  double refinement_residual = -1.0;
  double scatterer_leak = 0.0;
  bool completed = true;
  /// Radial only: bound on the real-space COM bias from the mass the
  /// asymptotic form puts at r < 0, which the clipped grid does not see.
  double clip_bound = 0.0;
  GridPlan plan;

  /// |real - spectral| within 1e-6 relative, 1e-9 absolute or clip_bound.
  [[nodiscard]] bool methods_agree() const;
};

inline constexpr double kRefinementTolerance = 1e-8;

struct MeasureOptions {
  double grid_scale = 1.0;
  bool refine = true;
};

/// delta = <x>_c - reference, with the reference the free (mirrored for
/// reflection) centre x_I + v t. For the radial channel spec.x_start is the
/// initial distance r_I > 0 and the reference is the hard-wall return v t - r_I.
[[nodiscard]] DelayMeasurement measure_delay(const PacketSpec& spec, const PotentialSpec& potential, Channel channel,
                                             double t, const MeasureOptions& options = {});
[[nodiscard]] DelayMeasurement delay_transmission(const PacketSpec& spec, const PotentialSpec& potential, double t,
                                                  const MeasureOptions& options = {});
[[nodiscard]] DelayMeasurement delay_reflection(const PacketSpec& spec, const PotentialSpec& potential, double t,
                                                const MeasureOptions& options = {});
[[nodiscard]] DelayMeasurement delay_radial(const PacketSpec& spec, double alpha, double t,
                                            const MeasureOptions& options = {});

/// Asymptotic prediction reported next to each measured delay.
[[nodiscard]] double delay_asymptote(const PacketSpec& spec, const PotentialSpec& potential, Channel channel,
                                     double t);

}  // namespace zrdelay
