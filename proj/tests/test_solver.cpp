#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "wgqed/experiments.hpp"
#include "wgqed/solver.hpp"
#include "wgqed/spectral.hpp"

using namespace wgqed;
using doctest::Approx;

namespace {

NetworkSpec pass_through(double length = 100.0) {
  NetworkSpec s;
  s.waveguides.push_back({"wg", +1, length, 0.0});
  s.pulses.push_back({"wg", 20.0, 2.0, 0.0});
  s.probes.push_back({"in", WaveguidePoint{"wg", 40.0}, 1});
  s.probes.push_back({"out", WaveguidePoint{"wg", 60.0}, 1});
  s.sim.dx = 0.05;
  s.sim.t_final = 60.0;
  return s;
}

RecordSet simulate(const NetworkSpec& s) {
  const auto sys = build_system(s);
  return run(sys, initial_state(sys));
}

NetworkSpec lone_cavity(double tau_c, double t_final) {
  NetworkSpec s;
  s.waveguides.push_back({"wg", +1, 1.0, 0.0});
  CavitySpec c;
  c.id = "ring";
  c.omega_c0 = 0.3;
  c.tau_c = tau_c;
  c.initial_amplitude = 1.0;
  s.cavities.push_back(c);
  s.probes.push_back({"e", CavityProbe{"ring"}, 1});
  s.sim.dx = 0.05;
  s.sim.t_final = t_final;
  return s;
}

}  // namespace

TEST_CASE("grid construction") {
  auto s = fixtures::single_ring();
  auto sys = build_system(s);
  CHECK(sys.waveguides[0].cells == 2000);
  CHECK(sys.dt == Approx(0.05));

  s.couplings[0].x = 50.012;
  sys = build_system(s);
  CHECK(sys.cell_x(0, sys.couplings[0].cell) == Approx(50.025));
  CHECK(sys.couplings[0].snap == Approx(0.013));

  s.params.v_g = 2.0;
  CHECK(build_system(s).dt == Approx(0.025));

  s.couplings[0].cavity_id = "ghost";
  CHECK_THROWS_AS(build_system(s), BuildError);
}

TEST_CASE("gaussian packet initialisation") {
  const auto sys = build_system(fixtures::single_ring());
  const auto st = init_gaussian_packet(sys, sys.pulses[0]);
  CHECK(total_norm(sys, st) == Approx(1.0).epsilon(1e-12));
  for (const auto& v : st.waveguide_values(0)) {
    CHECK(v.imag() == 0.0);
    CHECK(v.real() >= 0.0);
  }
  CHECK(total_norm(sys, FieldState::zeros(sys)) == 0.0);
}

TEST_CASE("packet spectral width is v_g / (2 sigma)") {
  const auto rec = simulate(pass_through());
  SpectrumWindow w;
  w.omega_min = -2.0;
  w.omega_max = 2.0;
  const auto m = spectral_moments(probe_spectrum(rec.probe("in"), w));
  CHECK(m.mean == Approx(0.0).epsilon(1e-9));
  CHECK(m.stddev == Approx(1.0 / (2.0 * 2.0)).epsilon(1e-3));
}

TEST_CASE("free advection is an exact shift") {
  const auto sys = build_system(pass_through());
  auto st = initial_state(sys);
  const auto before = st.waveguide_values(0);
  Stepper stepper(sys);
  const std::size_t k = 137;
  for (std::size_t i = 0; i < k; ++i) stepper.advance(st);
  const auto after = st.waveguide_values(0);
  for (std::size_t j = 0; j + k < before.size(); ++j) REQUIRE(std::abs(after[j + k]) == std::abs(before[j]));
}

TEST_CASE("pass-through output is the delayed input") {
  const auto rec = simulate(pass_through());
  const auto& in = rec.probe("in");
  const auto& out = rec.probe("out");
  const std::size_t lag = 400;  // 20 / dx
  for (std::size_t i = 0; i + lag < in.values.size(); ++i) REQUIRE(out.values[i + lag] == in.values[i]);

  SpectrumWindow w;
  w.omega_min = -0.5;
  w.omega_max = 0.5;
  const auto est = transmission_estimate(probe_spectrum(in, w), probe_spectrum(out, w), 20.0, 0.0);
  REQUIRE_FALSE(est.omega.empty());
  for (double a : est.abs_t) CHECK(a == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("isolated cavity decays as exp(-t / tau)") {
  const auto rec = simulate(lone_cavity(10.0, 20.0));
  const auto& e = rec.probe("e");
  CHECK(e.t.back() == Approx(20.0));
  CHECK(std::abs(e.values.back()) == Approx(std::exp(-2.0)).epsilon(1e-6));
  CHECK(std::abs(std::abs(e.values.back()) - 0.13534) < 1e-5);
  CHECK(rec.meta.intrinsic_loss == Approx(1.0 - std::exp(-4.0)).epsilon(1e-12));
}

TEST_CASE("coupled cavity decays at gamma + 1/tau") {
  NetworkSpec s;
  s.waveguides.push_back({"wg", +1, 12.0, 0.0});
  CavitySpec c;
  c.id = "ring";
  c.tau_c = 4.0;
  c.initial_amplitude = 1.0;
  s.cavities.push_back(c);
  s.couplings.push_back({"wg", "ring", 1.0, 1.0});  // gamma = 0.5
  s.probes.push_back({"e", CavityProbe{"ring"}, 1});
  s.sim.dx = 0.001;
  s.sim.t_final = 8.0;
  const auto rec = simulate(s);
  const double rate = experiments::fit_decay_rate(rec.probe("e"), 1.0, 8.0);
  CHECK(rate == Approx(0.75).epsilon(1e-3));
}

TEST_CASE("lossless run conserves probability") {
  const auto rec = simulate(fixtures::single_ring());
  CHECK(std::abs(rec.meta.final_norm + rec.meta.absorbed - 1.0) < 1e-6);
  CHECK(rec.meta.deviations.size() >= 3);
}

TEST_CASE("boundary hit is a numerical failure") {
  auto s = fixtures::single_ring();
  s.sim.t_final = 200.0;
  CHECK_THROWS_WITH_AS(simulate(s), "packet reached boundary", NumericalFailure);
}

TEST_CASE("absorbing ramp accounts for what it removes") {
  auto s = fixtures::single_ring(0.5, 8.0);
  s.sim.t_final = 200.0;
  s.sim.boundary = {BoundaryKind::AbsorbingRamp, 5.0};
  const auto rec = simulate(s);
  CHECK(std::abs(rec.meta.final_norm + rec.meta.absorbed + rec.meta.intrinsic_loss - 1.0) < 1e-9);
}

TEST_CASE("lossy norm never increases and falls with 1/tau") {
  double previous_final = 2.0;
  for (double tau : {100.0, 10.0, 2.0}) {
    const auto sys = build_system(fixtures::single_ring(0.5, tau));
    double last = 2.0;
    bool monotone = true;
    RunOptions o;
    o.observer = [&](const FieldState& f, const Stepper&) {
      const double n = total_norm(sys, f);
      if (n > last + 1e-15) monotone = false;
      last = n;
    };
    const auto rec = run(sys, initial_state(sys), o);
    CHECK(monotone);
    CHECK(rec.meta.final_norm < previous_final);
    previous_final = rec.meta.final_norm;
  }
}

TEST_CASE("rotating frame choice does not change magnitudes") {
  auto a = fixtures::single_ring(0.5, 8.0);
  a.cavities[0].omega_c0 = 0.2;
  auto b = a;
  b.params.omega_0 = 3.0;
  b.cavities[0].omega_c0 = 3.2;
  const auto ra = simulate(a), rb = simulate(b);
  for (std::size_t p = 0; p < ra.probes.size(); ++p)
    for (std::size_t i = 0; i < ra.probes[p].values.size(); ++i)
      REQUIRE(std::abs(std::abs(ra.probes[p].values[i]) - std::abs(rb.probes[p].values[i])) < 1e-9);
}

TEST_CASE("linearity in the initial state") {
  const auto sys = build_system(fixtures::single_ring(0.5, 8.0));
  const cplx c(0.3, -1.7);
  auto scaled = initial_state(sys);
  scaled.scale(c);
  const auto r1 = run(sys, initial_state(sys));
  const auto r2 = run(sys, scaled);
  for (std::size_t p = 0; p < r1.probes.size(); ++p)
    for (std::size_t i = 0; i < r1.probes[p].values.size(); ++i)
      REQUIRE(std::abs(r2.probes[p].values[i] - c * r1.probes[p].values[i]) <= 1e-12 * std::abs(c));
}

TEST_CASE("runs are deterministic") {
  const auto r1 = simulate(fixtures::single_ring(0.5, 8.0));
  const auto r2 = simulate(fixtures::single_ring(0.5, 8.0));
  for (std::size_t p = 0; p < r1.probes.size(); ++p) CHECK(r1.probes[p].values == r2.probes[p].values);
}

TEST_CASE("explicit Euler scheme converges to the split step at first order") {
  auto s = fixtures::single_ring(0.1, 20.0);
  double errors[3];
  for (int level = 0; level < 3; ++level) {
    s.sim.dx = 0.05 / (1 << level);
    s.sim.integrator = Integrator::SplitStep;
    const auto ref = simulate(s);
    s.sim.integrator = Integrator::EulerPaper;
    const auto eul = simulate(s);
    double worst = 0.0;
    const auto& a = ref.probe("cavity").values;
    const auto& b = eul.probe("cavity").values;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(std::abs(a[i]) - std::abs(b[i])));
    errors[level] = worst;
  }
  CHECK(errors[0] / errors[1] == Approx(2.0).epsilon(0.2));
  CHECK(errors[1] / errors[2] == Approx(2.0).epsilon(0.2));
}

TEST_CASE("discrete resonance compensation") {
  const auto sys = build_system(fixtures::single_ring());
  const double target = 0.8;
  const double w = compensated_resonance(sys, 0, target);
  CHECK(discrete_resonance(sys, 0, w) == Approx(target).epsilon(1e-10));
  CHECK(w != target);
}
