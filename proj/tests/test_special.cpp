#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "zrdelay/special.hpp"

using namespace zrdelay;
using namespace zrdelay::special;

namespace {

// w(z) from scipy.special.wofz (double precision), frozen.
struct WofzRow {
  cplx z;
  cplx w;
};

const WofzRow kWofz[] = {
    {{0, 0}, {1, 0}},
    {{0.5, 0.5}, {0.53315670791217484, 0.23048823138445851}},
    {{1, 0}, {0.36787944117144233, 0.60715770584139372}},
    {{0, 1}, {0.427583576155807, 0}},
    {{2.5, 0.1}, {0.014698406828789578, 0.25005039589353695}},
    {{-3, 0.3}, {0.023094513858699015, -0.19798041377165584}},
    {{10, 1}, {0.0056699425669021787, 0.056129645315951264}},
    {{0.1, 20}, {0.028173648761638366, 0.00014051826275430029}},
    {{-7.5, 4}, {0.031698390199825476, -0.058605008609756329}},
    {{0.001, 0.001}, {0.9988716223354106, 0.0011263806715998989}},
    {{5, 5}, {0.056965439888177372, 0.055838742775391428}},
    {{30, 0.5}, {0.00031387498369284789, 0.018811544867725669}},
    {{0.5, -0.5}, {1.2220084158685705, 1.1893393085928645}},
    {{-1.2, -0.3}, {0.11059760830697923, -0.76754540674945582}},
    {{3, -0.8}, {-0.055269954211195488, 0.18190153155315594}},
};

}  // namespace

TEST_SUITE("special") {

TEST_CASE("Faddeeva function against a frozen reference table") {
  for (const auto& row : kWofz) {
    INFO("z = " << row.z);
    CHECK(oracle::rel_err(faddeeva(row.z), row.w) < 1e-13);
  }
}

TEST_CASE("scaled complementary error function") {
  // scipy.special.erfcx
  CHECK(std::abs(erfcx(0.5) - 0.61569034419292587) < 1e-14);
  CHECK(std::abs(erfcx(3.0) - 0.17900115118138998) < 1e-14);
  CHECK(std::abs(erfcx(-1.0) - 5.0089800807622306) < 1e-13);
}

TEST_CASE("Gaussian-exponential tail integral against quadrature") {
  oracle::Draw draw(29);
  for (int trial = 0; trial < 60; ++trial) {
    const double y = draw.uniform(-6.0, 6.0);
    const cplx width_sq{draw.log_uniform(0.2, 5.0), draw.uniform(-4.0, 4.0)};
    const cplx rate{draw.log_uniform(0.05, 5.0), draw.uniform(-3.0, 3.0)};
    auto f = [&](double u) { return std::exp(-(y + u) * (y + u) / width_sq - rate * u); };
    // Integrate until the modulus is negligible, resolving the fastest phase.
    double span = 1.0;
    while (std::abs(f(span)) > 1e-20 || span < std::abs(y)) span *= 1.25;
    const cplx inv = 1.0 / width_sq;
    const double phase_rate = 2.0 * std::abs(inv.imag()) * (std::abs(y) + span) + std::abs(rate.imag()) + 1.0;
    const auto n = static_cast<std::size_t>(span * phase_rate / 0.02) + 1000;
    const cplx want = oracle::simpson(f, 0.0, span, n);
    INFO("y " << y << " s2 " << width_sq << " rate " << rate);
    CHECK(std::abs(gaussian_exponential_tail(y, width_sq, rate) - want) < 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("Gaussian-exponential tail stays finite far out on both sides") {
  for (double y : {-200.0, -40.0, 40.0, 200.0}) {
    const cplx v = gaussian_exponential_tail(y, cplx(1.0, 0.5), cplx(0.3, 1.0));
    CHECK(std::isfinite(v.real()));
    CHECK(std::isfinite(v.imag()));
  }
}

TEST_CASE("normalized envelopes have unit norm and consistent derivatives") {
  for (cplx s2 : {cplx(4.0, 0.0), cplx(4.0, 6.0), cplx(0.3, -1.0)}) {
    const auto g = GaussianEnvelope::normalized(1.5, s2);
    const double w = g.modulus_width();
    const double n = oracle::simpson([&](double x) { return std::norm(g(x)); }, 1.5 - 12 * w, 1.5 + 12 * w, 20000);
    CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : {-1.0, 1.5, 3.7}) {
      const double h = 1e-5;
      const cplx fd = (g(x + h) - g(x - h)) / (2.0 * h);
      CHECK(std::abs(fd - g.derivative(x)) < 1e-8);
    }
    CHECK(g.is_real() == (s2.imag() == 0.0));
  }
}

}  // TEST_SUITE
