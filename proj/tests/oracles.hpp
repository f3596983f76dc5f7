#pragma once

// Reference implementations used only by the tests. Each one is written from
// scratch and deliberately shares no code with the library routine it checks.

#include <cmath>
#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// Piecewise-constant potential, incident exp(ikx) from the left. The wave in
// region j is a_j exp(i q_j x) + b_j exp(-i q_j x); continuity of psi and psi'
// at each edge gives a 2x2 matrix, and the product maps the left region's
// coefficients onto the right region's.
struct Scattering {
  cplx t;
  cplx r;
};

inline Scattering transfer_matrix(double k, const std::vector<double>& edges, const std::vector<cplx>& heights) {
  // heights has edges.size() + 1 entries (outer regions included).
  auto wavenumber = [&](cplx u) {
    cplx q = std::sqrt(cplx(k * k) - 2.0 * u);
    if (std::abs(q) < 1e-300) q = 1e-300;
    return q;
  };
  using M = std::array<cplx, 4>;
  auto mul = [](const M& a, const M& b) {
    return M{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
             a[2] * b[1] + a[3] * b[3]};
  };
  const cplx i{0.0, 1.0};
  M total{1.0, 0.0, 0.0, 1.0};
  cplx det_total = 1.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double x = edges[e];
    const cplx ql = wavenumber(heights[e]);
    const cplx qr = wavenumber(heights[e + 1]);
    // Left basis matrix at x, then the inverse of the right basis matrix.
    const M left{std::exp(i * ql * x), std::exp(-i * ql * x), i * ql * std::exp(i * ql * x),
                 -i * ql * std::exp(-i * ql * x)};
    const cplx ep = std::exp(i * qr * x);
    const cplx em = std::exp(-i * qr * x);
    const cplx det = -2.0 * i * qr;
    const M right_inv{-i * qr * em / det, -em / det, -i * qr * ep / det, ep / det};
    total = mul(mul(right_inv, left), total);
    det_total *= ql / qr;
  }
  // t = P00 + P01 r cancels badly under a thick barrier; det(P) / P11 is the
  // same number without the cancellation.
  const cplx r = -total[2] / total[3];
  const cplx t = det_total / total[3];
  return {t, r};
}

inline Scattering barrier(double k, double height, double left, double right) {
  return transfer_matrix(k, {left, right}, {0.0, height, 0.0});
}

// Composite Simpson on [a, b] with n (even) intervals.
template <class F>
auto simpson(F&& f, double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  auto acc = f(a) + f(b);
  for (std::size_t j = 1; j < n; ++j) acc += (j % 2 ? 4.0 : 2.0) * f(a + static_cast<double>(j) * h);
  return acc * (h / 3.0);
}

// out[j] = sum_m w[m] exp(i k_m x_j) with every exponential evaluated directly.
inline std::vector<cplx> direct_sum(const std::vector<cplx>& w, double k0, double dk, double x0, double hx,
                                    std::size_t nx) {
  std::vector<cplx> out(nx);
  for (std::size_t j = 0; j < nx; ++j) {
    const double x = x0 + static_cast<double>(j) * hx;
    cplx acc = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) acc += w[m] * std::polar(1.0, (k0 + static_cast<double>(m) * dk) * x);
    out[j] = acc;
  }
  return out;
}

// Fixed-seed generator for the property suites.
class Draw {
 public:
  explicit Draw(unsigned seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  double sign() { return uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
