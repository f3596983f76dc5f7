#include "zrdelay/wavepackets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zrdelay {

void PacketSpec::validate() const {
  if (!std::isfinite(p) || !(p > 0.0)) throw DomainError("packet momentum must be positive");
  if (!std::isfinite(dx) || !(dx > 0.0)) throw DomainError("packet width must be positive");
  if (!std::isfinite(x_start)) throw DomainError("packet launch position must be finite");
  if (dispersion.law == Dispersion::Law::Linear && !(dispersion.speed > 0.0))
    throw DomainError("linear dispersion needs a positive speed");
}

void PacketSpec::check_separation(double factor) const {
  if (std::abs(x_start) < factor * dx * (1.0 - 1e-12))
    throw DomainError("packet starts inside the scatterer region: |x_I| = " + std::to_string(std::abs(x_start)) +
                      " < K*dx = " + std::to_string(factor * dx));
}

double SpectralAmplitude::norm() const {
  double acc = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) acc += grid.weight(j) * std::norm(values[j]);
  return 2.0 * kPi * acc;
}

double SpectralAmplitude::endpoint_ratio() const {
  if (values.empty()) return 0.0;
  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  return std::max(std::abs(values.front()), std::abs(values.back())) / peak;
}

double gaussian_peak(const PacketSpec& spec) {
  return std::pow(2.0, -0.25) * std::pow(kPi, -0.75) / std::sqrt(spec.dk());
}

cplx gaussian_spectral_value(const PacketSpec& spec, double k) {
  const double kappa = k - spec.p;
  const double dk = spec.dk();
  return gaussian_peak(spec) * std::exp(cplx{-kappa * kappa / (dk * dk), -kappa * spec.x_start});
}

SpectralAmplitude gaussian_spectral(const PacketSpec& spec, std::size_t n, double half_span) {
  spec.validate();
  if (half_span < 8.0) throw DomainError("momentum grid must span at least p +- 8 dk");
  if (n < 3) throw DomainError("momentum grid needs at least 3 points");
  SpectralAmplitude out;
  out.packet = spec;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double dk = spec.dk();
    out.grid.k_min = spec.p - half_span * dk;
    out.grid.n = n;
    out.grid.step = 2.0 * half_span * dk / static_cast<double>(n - 1);
    out.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.values[j] = gaussian_spectral_value(spec, out.grid.at(j));
    if (out.endpoint_ratio() < 1e-12) return out;
    half_span *= 2.0;
    n = 2 * n - 1;
  }
  throw DomainError("momentum grid endpoints not negligible");
}

double spread_width(const PacketSpec& spec, double t) {
  if (!spec.dispersion.dispersive()) return spec.dx;
  const double dk = spec.dk();
  return std::sqrt(spec.dx * spec.dx + dk * dk * t * t);
}

special::GaussianEnvelope free_envelope(const PacketSpec& spec, double t) {
  const double center = spec.free_center(t);
  const cplx width_sq = spec.dispersion.dispersive() ? cplx{spec.dx * spec.dx, 2.0 * t} : cplx{spec.dx * spec.dx, 0.0};
  // (2 dx^2 / pi)^{1/4} / sigma_t with the principal root of sigma_t^2.
  const cplx amplitude = std::pow(2.0 * spec.dx * spec.dx / kPi, 0.25) / std::sqrt(width_sq);
  return {amplitude, center, width_sq};
}

cplx free_envelope(const PacketSpec& spec, double x, double t) { return free_envelope(spec, t)(x); }

cplx plane_wave(const PacketSpec& spec, double x, double t) {
  return std::exp(kI * (spec.p * x - spec.dispersion.energy(spec.p) * t));
}

}  // namespace zrdelay
