#include <immintrin.h>

#include <cmath>

#include "zrdelay/kernels.hpp"

namespace zrdelay::kernels::avx2 {
namespace {

constexpr std::size_t kBlock = 8;  // x-points per iteration: two vectors of four

struct Lanes {
  __m256d re;
  __m256d im;
};

inline Lanes load_phasor(const double* x, double k) {
  alignas(32) double re[4];
  alignas(32) double im[4];
  for (int l = 0; l < 4; ++l) {
    re[l] = std::cos(k * x[l]);
    im[l] = std::sin(k * x[l]);
  }
  return {_mm256_load_pd(re), _mm256_load_pd(im)};
}

inline Lanes cmul(Lanes a, Lanes b) {
  return {_mm256_fmsub_pd(a.re, b.re, _mm256_mul_pd(a.im, b.im)),
          _mm256_fmadd_pd(a.re, b.im, _mm256_mul_pd(a.im, b.re))};
}

inline void accumulate(Lanes& acc, __m256d wr, __m256d wi, Lanes cur) {
  acc.re = _mm256_fmadd_pd(wr, cur.re, _mm256_fnmadd_pd(wi, cur.im, acc.re));
  acc.im = _mm256_fmadd_pd(wr, cur.im, _mm256_fmadd_pd(wi, cur.re, acc.im));
}

inline void store(Lanes v, cplx* out) {
  alignas(32) double re[4];
  alignas(32) double im[4];
  _mm256_store_pd(re, v.re);
  _mm256_store_pd(im, v.im);
  for (int l = 0; l < 4; ++l) out[l] = {re[l], im[l]};
}

}  // namespace

void synthesize(const cplx* weights, std::size_t nk, double k0, double dk, double x0, double hx, std::size_t nx,
                cplx* out) {
  const auto* w = reinterpret_cast<const double*>(weights);
  std::size_t j = 0;
  for (; j + kBlock <= nx; j += kBlock) {
    alignas(32) double x[kBlock];
    for (std::size_t l = 0; l < kBlock; ++l) x[l] = x0 + static_cast<double>(j + l) * hx;
    const Lanes rot_a = load_phasor(x, dk);
    const Lanes rot_b = load_phasor(x + 4, dk);
    Lanes acc_a{_mm256_setzero_pd(), _mm256_setzero_pd()};
    Lanes acc_b = acc_a;
    Lanes cur_a = acc_a;
    Lanes cur_b = acc_a;
    for (std::size_t m = 0; m < nk; ++m) {
      if (m % kAnchorStride == 0) {
        const double k = k0 + static_cast<double>(m) * dk;
        cur_a = load_phasor(x, k);
        cur_b = load_phasor(x + 4, k);
      }
      const __m256d wr = _mm256_broadcast_sd(w + 2 * m);
      const __m256d wi = _mm256_broadcast_sd(w + 2 * m + 1);
      accumulate(acc_a, wr, wi, cur_a);
      accumulate(acc_b, wr, wi, cur_b);
      cur_a = cmul(cur_a, rot_a);
      cur_b = cmul(cur_b, rot_b);
    }
    store(acc_a, out + j);
    store(acc_b, out + j + 4);
  }
  if (j < nx) scalar::synthesize(weights, nk, k0, dk, x0 + static_cast<double>(j) * hx, hx, nx - j, out + j);
}

DensityMoments density_moments(const cplx* psi, std::size_t n, double x0, double hx, double x_ref) {
  DensityMoments out;
  if (n < 2) return scalar::density_moments(psi, n, x0, hx, x_ref);
  const auto* v = reinterpret_cast<const double*>(psi);
  const double offset = x0 - x_ref;
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  const __m256d step = _mm256_set1_pd(hx);
  const __m256d base = _mm256_set1_pd(offset);
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    // Two complex values per load, interleaved re/im.
    const __m256d lo = _mm256_loadu_pd(v + 2 * j);
    const __m256d hi = _mm256_loadu_pd(v + 2 * j + 4);
    const __m256d sq_lo = _mm256_mul_pd(lo, lo);
    const __m256d sq_hi = _mm256_mul_pd(hi, hi);
    // hadd gives [r0, r2, r1, r3]; permute back to index order.
    const __m256d rho = _mm256_permute4x64_pd(_mm256_hadd_pd(sq_lo, sq_hi), 0xD8);
    s0 = _mm256_add_pd(s0, rho);
    s1 = _mm256_fmadd_pd(rho, _mm256_fmadd_pd(idx, step, base), s1);
    idx = _mm256_add_pd(idx, four);
  }
  alignas(32) double a0[4];
  alignas(32) double a1[4];
  _mm256_store_pd(a0, s0);
  _mm256_store_pd(a1, s1);
  double m0 = (a0[0] + a0[1]) + (a0[2] + a0[3]);
  double m1 = (a1[0] + a1[1]) + (a1[2] + a1[3]);
  for (; j < n; ++j) {
    const double rho = std::norm(psi[j]);
    m0 += rho;
    m1 += rho * (offset + static_cast<double>(j) * hx);
  }
  // End corrections of the trapezoid rule.
  const double rho_first = std::norm(psi[0]);
  const double rho_last = std::norm(psi[n - 1]);
  m0 -= 0.5 * (rho_first + rho_last);
  m1 -= 0.5 * (rho_first * offset + rho_last * (offset + static_cast<double>(n - 1) * hx));
  const double h = std::abs(hx);
  out.m0 = m0 * h;
  out.m1 = m1 * h;
  return out;
}

}  // namespace zrdelay::kernels::avx2
