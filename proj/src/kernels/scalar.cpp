#include <cmath>

#include "zrdelay/kernels.hpp"

namespace zrdelay::kernels::scalar {

void synthesize(const cplx* weights, std::size_t nk, double k0, double dk, double x0, double hx, std::size_t nx,
                cplx* out) {
  for (std::size_t j = 0; j < nx; ++j) {
    const double x = x0 + static_cast<double>(j) * hx;
    const double rot_re = std::cos(dk * x);
    const double rot_im = std::sin(dk * x);
    double acc_re = 0.0;
    double acc_im = 0.0;
    double cur_re = 0.0;
    double cur_im = 0.0;
    for (std::size_t m = 0; m < nk; ++m) {
      if (m % kAnchorStride == 0) {
        const double phase = (k0 + static_cast<double>(m) * dk) * x;
        cur_re = std::cos(phase);
        cur_im = std::sin(phase);
      }
      const double wr = weights[m].real();
      const double wi = weights[m].imag();
      acc_re += wr * cur_re - wi * cur_im;
      acc_im += wr * cur_im + wi * cur_re;
      const double next_re = cur_re * rot_re - cur_im * rot_im;
      cur_im = cur_re * rot_im + cur_im * rot_re;
      cur_re = next_re;
    }
    out[j] = {acc_re, acc_im};
  }
}

DensityMoments density_moments(const cplx* psi, std::size_t n, double x0, double hx, double x_ref) {
  DensityMoments out;
  if (n == 0) return out;
  const double offset = x0 - x_ref;
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = std::norm(psi[j]);
    const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    out.m0 += w * rho;
    out.m1 += w * rho * (offset + static_cast<double>(j) * hx);
  }
  const double h = std::abs(hx);
  out.m0 *= h;
  out.m1 *= h;
  return out;
}

}  // namespace zrdelay::kernels::scalar
