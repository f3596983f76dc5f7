#include <atomic>
#include <cstdlib>

#include "zrdelay/kernels.hpp"

namespace zrdelay::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(ZRDELAY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() noexcept {
  if (std::getenv("ZRDELAY_FORCE_SCALAR") != nullptr) return Isa::Scalar;
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) noexcept { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_available(isa)) throw DomainError("instruction set not available on this machine");
  current().store(isa, std::memory_order_relaxed);
}

void synthesize(const cplx* weights, std::size_t nk, double k0, double dk, double x0, double hx, std::size_t nx,
                cplx* out) {
#if defined(ZRDELAY_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::synthesize(weights, nk, k0, dk, x0, hx, nx, out);
#endif
  scalar::synthesize(weights, nk, k0, dk, x0, hx, nx, out);
}

DensityMoments density_moments(const cplx* psi, std::size_t n, double x0, double hx, double x_ref) {
#if defined(ZRDELAY_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::density_moments(psi, n, x0, hx, x_ref);
#endif
  return scalar::density_moments(psi, n, x0, hx, x_ref);
}

}  // namespace zrdelay::kernels
