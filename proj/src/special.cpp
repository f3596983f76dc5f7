#include "zrdelay/special.hpp"

#include <array>
#include <cmath>

namespace zrdelay::special {
namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
  double scale = 0.0;  // L = sqrt(N / sqrt 2)
  std::array<double, kTerms> coeff{};  // coeff[n] multiplies Z^n

  WeidemanTable() {
    constexpr int m = 2 * kTerms;
    constexpr int m2 = 2 * m;
    scale = std::sqrt(kTerms / std::sqrt(2.0));
    // Samples at theta_k = k pi / M for k = -M+1..M-1, preceded by a zero;
    // the DFT runs over the fft-shifted sequence.
    std::array<double, m2> sample{};
    for (int k = -m + 1; k <= m - 1; ++k) {
      const double t = scale * std::tan(0.5 * k * kPi / m);
      sample[static_cast<std::size_t>(k + m)] = std::exp(-t * t) * (scale * scale + t * t);
    }
    std::array<double, m2> shifted{};
    for (int j = 0; j < m2; ++j) shifted[j] = sample[(j + m) % m2];
    for (int n = 1; n <= kTerms; ++n) {
      double acc = 0.0;
      for (int j = 0; j < m2; ++j) acc += shifted[j] * std::cos(2.0 * kPi * j * n / m2);
      coeff[n - 1] = acc / m2;
    }
  }
};

const WeidemanTable& table() {
  static const WeidemanTable instance;
  return instance;
}

cplx faddeeva_upper(cplx z) {
  const auto& tab = table();
  const cplx denom = tab.scale - kI * z;
  const cplx ratio = (tab.scale + kI * z) / denom;
  cplx poly = tab.coeff[kTerms - 1];
  for (int n = kTerms - 2; n >= 0; --n) poly = poly * ratio + tab.coeff[n];
  return 2.0 * poly / (denom * denom) + (1.0 / std::sqrt(kPi)) / denom;
}

}  // namespace

cplx faddeeva(cplx z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

cplx erfcx(cplx z) { return faddeeva(kI * z); }

cplx gaussian_exponential_tail(double y, cplx width_sq, cplx rate) {
  const cplx sigma = std::sqrt(width_sq);
  const cplx shifted = y + 0.5 * rate * width_sq;
  const cplx arg = shifted / sigma;
  const cplx pref = 0.5 * std::sqrt(kPi) * sigma;
  const cplx gauss = std::exp(-y * y / width_sq);
  if (arg.real() >= 0.0) return pref * gauss * erfcx(arg);
  // erfcx(z) = 2 exp(z^2) - erfcx(-z); exp(z^2) exp(-y^2/s^2) collapses to
  // the bare exponential branch.
  return pref * (2.0 * std::exp(rate * y + 0.25 * rate * rate * width_sq) - gauss * erfcx(-arg));
}

GaussianEnvelope GaussianEnvelope::normalized(double center, cplx width_sq) {
  const double inv_re = (1.0 / width_sq).real();
  return {cplx{std::pow(2.0 * inv_re / kPi, 0.25), 0.0}, center, width_sq};
}

cplx GaussianEnvelope::operator()(double x) const {
  const double d = x - center;
  return amplitude * std::exp(-d * d / width_sq);
}

cplx GaussianEnvelope::derivative(double x) const {
  const double d = x - center;
  return -2.0 * d / width_sq * (*this)(x);
}

double GaussianEnvelope::modulus_width() const {
  return std::sqrt(1.0 / (1.0 / width_sq).real());
}

}  // namespace zrdelay::special
