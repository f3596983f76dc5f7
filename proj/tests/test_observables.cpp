#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "zrdelay/observables.hpp"
#include "zrdelay/weakvalues.hpp"

using namespace zrdelay;
using doctest::Approx;

namespace {

DelayMeasurement broad(Channel ch, double omega, double dx, Dispersion law) {
  const PacketSpec spec{1.0, dx, -3.0 * dx, law};
  return measure_delay(spec, PotentialSpec::zero_range(omega), ch, completed_event_time(spec, 3.0));
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("real-space centre of mass: free packet and symmetric density") {
  const PacketSpec spec{1.0, 6.0, -18.0, Dispersion::quadratic()};
  const double t = 30.0;
  const auto plan = plan_grid(spec, PotentialSpec::zero_range(0.0), Channel::Free, t);
  const auto wave = synthesize_free(gaussian_spectral(spec, plan.n_k), t, plan.grid);
  CHECK(std::abs(com_real_space(wave) - (-18.0 + t)) < 1e-8);

  SpatialWave sym;
  sym.grid = SpatialGrid::span(-2.0, 8.0, 1001);
  for (std::size_t j = 0; j < sym.grid.n; ++j) {
    const double u = sym.grid.at(j) - 3.0;
    sym.values.push_back(std::exp(-u * u) * (1.0 + 0.3 * std::cos(4.0 * u)));
  }
  CHECK(com_real_space(sym) == Approx(3.0).epsilon(1e-13));

  SpatialWave empty;
  empty.grid = SpatialGrid::span(0.0, 1.0, 11);
  empty.values.assign(11, cplx{});
  CHECK_THROWS_AS((void)com_real_space(empty), DomainError);
}

TEST_CASE("spectral centre of mass without a scatterer") {
  const PacketSpec spec{1.3, 6.0, -18.0, Dispersion::quadratic()};
  const auto a = gaussian_spectral(spec);
  CHECK(com_spectral_transmission(a, PotentialSpec::zero_range(0.0), 25.0) ==
        Approx(-18.0 + 1.3 * 25.0).epsilon(1e-12));
  const auto m = measure_delay(spec, PotentialSpec::zero_range(0.0), Channel::Transmitted, 25.0);
  CHECK(std::abs(m.real_space.delay) < 1e-9);
  CHECK(std::abs(m.spectral.delay) < 1e-12);
}

TEST_CASE("both routes agree on the reference point") {
  for (auto ch : {Channel::Transmitted, Channel::Reflected}) {
    const auto m = broad(ch, 1.0, 20.0, Dispersion::quadratic());
    INFO(to_string(ch) << " real " << m.real_space.delay << " spectral " << m.spectral.delay);
    CHECK(m.completed);
    CHECK(std::abs(m.real_space.delay - m.spectral.delay) <= 1e-6 * std::abs(m.spectral.delay));
    CHECK(m.methods_agree());
    CHECK(m.refinement_residual >= 0.0);
    CHECK(m.refinement_residual < kRefinementTolerance);
  }
}

TEST_CASE("dual-method agreement over random packets") {
  oracle::Draw draw(61);
  for (int trial = 0; trial < 12; ++trial) {
    const double p = draw.uniform(0.5, 2.0);
    const double omega = draw.sign() * draw.log_uniform(0.2, 3.0);
    const double dx = draw.uniform(6.0 / p + 1.0, 40.0);
    const auto law = draw.sign() > 0 ? Dispersion::quadratic() : Dispersion::linear(draw.uniform(0.5, 2.0));
    const PacketSpec spec{p, dx, -3.0 * dx, law};
    const auto ch = draw.sign() > 0 ? Channel::Transmitted : Channel::Reflected;
    double t = 0.0;
    try {
      t = completed_event_time(spec, 3.0);
    } catch (const DomainError&) {
      continue;
    }
    const auto m = measure_delay(spec, PotentialSpec::zero_range(omega), ch, t, {1.0, false});
    INFO("p " << p << " omega " << omega << " dx " << dx << " " << to_string(ch));
    CHECK(m.methods_agree());
  }
}

TEST_CASE("broad dispersionless transmission reaches -Omega/(p^2+Omega^2)") {
  const auto m = broad(Channel::Transmitted, 1.0, 50.0, Dispersion::linear(1.0));
  CHECK(m.real_space.delay == Approx(-0.5).epsilon(0.02));
  CHECK(m.real_space.asymptote == Approx(-0.5));
  CHECK(m.filtering_term == 0.0);
}

TEST_CASE("reflection delay signs follow Omega") {
  const auto barrier = broad(Channel::Reflected, 1.0, 200.0, Dispersion::linear(1.0));
  const auto well = broad(Channel::Reflected, -1.0, 200.0, Dispersion::linear(1.0));
  CHECK(barrier.real_space.delay == Approx(0.5).epsilon(0.01));
  CHECK(well.real_space.delay == Approx(-0.5).epsilon(0.01));
}

TEST_CASE("hard-wall limit of the reflected centre") {
  const PacketSpec spec{1.0, 10.0, -30.0, Dispersion::linear(1.0)};
  const auto a = gaussian_spectral(spec);
  const double t = 60.0;
  const double com = com_spectral_reflection(a, PotentialSpec::zero_range(1e8), t);
  // Residual phase slope ~ 1/Omega.
  CHECK(std::abs(com - (30.0 - t)) < 1e-7);
}

TEST_CASE("sign law in the broad regime") {
  oracle::Draw draw(67);
  for (int trial = 0; trial < 6; ++trial) {
    const double omega = draw.sign() * draw.uniform(0.3, 3.0);
    const double dx = 60.0;
    const auto t = broad(Channel::Transmitted, omega, dx, Dispersion::linear(1.0));
    const auto r = broad(Channel::Reflected, omega, dx, Dispersion::linear(1.0));
    INFO("omega " << omega);
    CHECK(std::signbit(t.real_space.delay) == !std::signbit(omega));
    CHECK(std::signbit(r.real_space.delay) == std::signbit(omega));
  }
}

TEST_CASE("translating a rectangular barrier shifts only the reflected delay") {
  const PacketSpec spec{1.0, 15.0, -45.0, Dispersion::linear(1.0)};
  const double t = completed_event_time(spec, 3.0) + 10.0;
  const double s = 2.5;
  const auto base = PotentialSpec::rectangular(0.4, 0.0, 1.0);
  const auto moved = PotentialSpec::rectangular(0.4, s, 1.0 + s);
  const auto r0 = measure_delay(spec, base, Channel::Reflected, t);
  const auto r1 = measure_delay(spec, moved, Channel::Reflected, t);
  const auto t0 = measure_delay(spec, base, Channel::Transmitted, t);
  const auto t1 = measure_delay(spec, moved, Channel::Transmitted, t);
  CHECK(r0.completed);
  CHECK(t1.completed);
  CHECK(std::abs((r1.real_space.delay - r0.real_space.delay) - 2.0 * s) < 1e-8);
  CHECK(std::abs(t1.real_space.delay - t0.real_space.delay) < 1e-8);
  CHECK(r0.methods_agree());
  CHECK(t0.methods_agree());
}

TEST_CASE("radial delays") {
  for (double alpha : {1e-6, 0.5}) {
    const PacketSpec spec{1.0, 40.0, 120.0, Dispersion::quadratic()};
    const auto m = delay_radial(spec, alpha, completed_event_time(spec, 3.0));
    CHECK(m.methods_agree());
    if (alpha < 1e-3) CHECK(std::abs(m.real_space.delay) < 1e-5);
    CHECK(m.real_space.asymptote == Approx(asymptote_radial(1.0, alpha)));
  }
  CHECK_THROWS_AS((void)delay_radial(PacketSpec{1.0, 10.0, -30.0, {}}, 1.0, 100.0), DomainError);
}

TEST_CASE("asymptote bookkeeping") {
  const PacketSpec quad{1.0, 50.0, -150.0, Dispersion::quadratic()};
  const double t = completed_event_time(quad, 3.0);
  const auto zr = PotentialSpec::zero_range(1.0);
  CHECK(delay_asymptote(quad, zr, Channel::Transmitted, t) ==
        Approx(-0.5 + 0.5 * 0.04 * 0.04 / 2.0 * t).epsilon(1e-12));
  const PacketSpec lin{1.0, 50.0, -150.0, Dispersion::linear(1.0)};
  CHECK(delay_asymptote(lin, zr, Channel::Transmitted, 300.0) == Approx(-0.5));
  CHECK(delay_asymptote(lin, zr, Channel::Reflected, 300.0) == Approx(0.5));
  CHECK(delay_asymptote(lin, PotentialSpec::zero_range(-2.0), Channel::Reflected, 300.0) == Approx(-0.4));
}

}  // TEST_SUITE
