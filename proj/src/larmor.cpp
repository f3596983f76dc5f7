#include "zrdelay/larmor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zrdelay/kernels.hpp"

namespace zrdelay {
namespace {

constexpr double kLambdaHalfSpanInWidths = 12.0;

void require_rectangular(const PotentialSpec& potential) {
  if (potential.kind != PotentialKind::Rectangular)
    throw DomainError("the Larmor clock needs a finite-width (rectangular) region");
  potential.validate();
}

cplx shifted_transmission(double p, const PotentialSpec& potential, double lambda) {
  return transmission_rectangular(p, potential.height + lambda, potential.left, potential.right);
}

}  // namespace

double PointerSpec::amplitude() const { return std::pow(2.0 / (kPi * df * df), 0.25); }

double PointerSpec::initial(double f) const { return amplitude() * std::exp(-f * f / (df * df)); }

double PointerSpec::spectrum(double lambda) const {
  return amplitude() * std::sqrt(kPi) * df * std::exp(-lambda * lambda * df * df / 4.0);
}

void PointerSpec::validate() const {
  if (!std::isfinite(df) || !(df > 0.0)) throw DomainError("pointer width must be positive");
}

PointerState pointer_final_state(const PointerSpec& pointer, double p, const PotentialSpec& potential,
                                 const SpatialGrid& f_grid) {
  pointer.validate();
  require_rectangular(potential);
  if (!(p > 0.0)) throw DomainError("Larmor clock needs p > 0");
  const double half = kLambdaHalfSpanInWidths / pointer.df;
  // Period of the discrete lambda sum: 2 pi / dlambda >= 2 * (window + margin).
  const double reach = std::max(std::abs(f_grid.x0), std::abs(f_grid.x_last())) + (f_grid.x_last() - f_grid.x0) +
                       10.0 * pointer.df;
  const double dlambda_max = kPi / reach;
  const auto n = std::max<std::size_t>(1025, static_cast<std::size_t>(std::ceil(2.0 * half / dlambda_max)) + 1);
  if (static_cast<double>(n) * static_cast<double>(f_grid.n) > kMaxSynthesisTerms)
    throw ConvergenceError("pointer grid of " + std::to_string(n) + " x " + std::to_string(f_grid.n) +
                           " points exceeds the synthesis budget");
  const double dlambda = 2.0 * half / static_cast<double>(n - 1);
  const double fc = f_grid.center();
  std::vector<cplx> weights(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double lambda = -half + static_cast<double>(m) * dlambda;
    const double trap = (m == 0 || m + 1 == n) ? 0.5 : 1.0;
    weights[m] = trap * dlambda / (2.0 * kPi) * pointer.spectrum(lambda) * shifted_transmission(p, potential, lambda) *
                 std::exp(kI * (lambda * fc));
  }
  PointerState state;
  state.grid = f_grid;
  state.lambda = {half, n};
  state.values.resize(f_grid.n);
  kernels::synthesize(weights.data(), n, -half, dlambda, f_grid.x0 - fc, f_grid.step, f_grid.n, state.values.data());
  return state;
}

ComplexTime complex_time(double p, const PotentialSpec& potential) {
  require_rectangular(potential);
  if (!(p > 0.0)) throw DomainError("complex time needs p > 0");
  if (std::abs(shifted_transmission(p, potential, 0.0)) < 1e-300)
    throw DomainError("complex time undefined: transmission underflows");
  const double h = 1e-3 * std::max({1.0, std::abs(potential.height), 0.5 * p * p});
  auto diff = [&](double step) {
    const cplx ratio = shifted_transmission(p, potential, step) / shifted_transmission(p, potential, -step);
    return kI * std::log(ratio) / (2.0 * step);
  };
  return {(4.0 * diff(0.5 * h) - diff(h)) / 3.0};
}

PointerState pointer_final_state(const PointerSpec& pointer, double p, const PotentialSpec& potential) {
  pointer.validate();
  const double df = pointer.df;
  const double tau = std::max(std::abs(complex_time(p, potential).value), potential.width() / p);
  const double lo = -10.0 * df;
  double hi = tau + 10.0 * df + 10.0 * tau;
  const double h_max = kPi / (2.0 * kLambdaHalfSpanInWidths / df);
  for (int attempt = 0; attempt < 12; ++attempt) {
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h_max)) + 1;
    auto state = pointer_final_state(pointer, p, potential, SpatialGrid::span(lo, hi, std::max<std::size_t>(n, 257)));
    const auto total = kernels::density_moments(state.values.data(), state.values.size(), lo, state.grid.step, 0.0);
    const std::size_t outer = state.values.size() / 10;
    const std::size_t start = state.values.size() - outer;
    const auto tail = kernels::density_moments(state.values.data() + start, outer, state.grid.at(start),
                                               state.grid.step, 0.0);
    if (tail.m0 <= 1e-13 * total.m0) return state;
    hi = lo + 2.0 * (hi - lo);
  }
  throw ConvergenceError("pointer state did not decay inside the f window");
}

double mean_pointer_reading(const PointerSpec& pointer, double p, const PotentialSpec& potential) {
  const auto state = pointer_final_state(pointer, p, potential);
  const double ref = state.grid.center();
  const auto moments =
      kernels::density_moments(state.values.data(), state.values.size(), state.grid.x0, state.grid.step, ref);
  if (!(moments.m0 > 1e-300)) throw DomainError("pointer reading undefined: transmitted weight vanishes");
  return ref + moments.m1 / moments.m0;
}

double transmitted_weight(const PointerSpec& pointer, double p, const PotentialSpec& potential) {
  pointer.validate();
  require_rectangular(potential);
  const double half = kLambdaHalfSpanInWidths / pointer.df;
  auto integrate = [&](std::size_t n) {
    const double step = 2.0 * half / static_cast<double>(n - 1);
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double lambda = -half + static_cast<double>(m) * step;
      const double g = pointer.spectrum(lambda);
      const double trap = (m == 0 || m + 1 == n) ? 0.5 : 1.0;
      acc += trap * g * g * std::norm(shifted_transmission(p, potential, lambda));
    }
    return acc * step / (2.0 * kPi);
  };
  std::size_t n = 4097;
  double previous = integrate(n);
  for (int attempt = 0; attempt < 10; ++attempt) {
    n = 2 * n - 1;
    const double current = integrate(n);
    if (std::abs(current - previous) <= 1e-11 * std::abs(current)) return current;
    previous = current;
  }
  throw ConvergenceError("transmitted pointer weight did not converge in lambda");
}

ComplexTime larmor_moment_zero_range(double p, double omega, double width) {
  return {larmor_distribution_zero_range(p, omega, width).mean_duration()};
}

}  // namespace zrdelay
