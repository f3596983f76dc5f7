#pragma once

// Inner loops of the spectral synthesis. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant chosen at runtime.
// Setting ZRDELAY_FORCE_SCALAR in the environment pins the scalar path.

#include <cstddef>
#include <string_view>

#include "zrdelay/types.hpp"

namespace zrdelay::kernels {

enum class Isa { Scalar, Avx2 };

[[nodiscard]] std::string_view to_string(Isa isa) noexcept;
[[nodiscard]] bool isa_available(Isa isa) noexcept;
[[nodiscard]] Isa active_isa() noexcept;
/// Overrides the runtime choice. Throws DomainError if the ISA is missing.
void set_isa(Isa isa);

/// out[j] = sum_m weights[m] * exp(i (k0 + m dk) (x0 + j hx)), j < nx.
///
/// The phasor is advanced by recurrence and re-anchored with an exact
/// sincos every kAnchorStride terms, which bounds the accumulated rounding.
void synthesize(const cplx* weights, std::size_t nk, double k0, double dk, double x0, double hx, std::size_t nx,
                cplx* out);

inline constexpr std::size_t kAnchorStride = 64;

/// Trapezoid moments of |psi|^2 on x_j = x0 + j hx:
/// m0 = \int |psi|^2, m1 = \int (x - x_ref) |psi|^2.
struct DensityMoments {
  double m0 = 0.0;
  double m1 = 0.0;
};

[[nodiscard]] DensityMoments density_moments(const cplx* psi, std::size_t n, double x0, double hx, double x_ref);

namespace scalar {
void synthesize(const cplx* weights, std::size_t nk, double k0, double dk, double x0, double hx, std::size_t nx,
                cplx* out);
DensityMoments density_moments(const cplx* psi, std::size_t n, double x0, double hx, double x_ref);
}  // namespace scalar

namespace avx2 {
void synthesize(const cplx* weights, std::size_t nk, double k0, double dk, double x0, double hx, std::size_t nx,
                cplx* out);
DensityMoments density_moments(const cplx* psi, std::size_t n, double x0, double hx, double x_ref);
}  // namespace avx2

}  // namespace zrdelay::kernels
