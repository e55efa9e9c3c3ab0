#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wgqed/experiments.hpp"

using namespace wgqed;
using namespace wgqed::experiments;
using doctest::Approx;

TEST_CASE("transit: critical coupling suppresses the resonant packet") {
  TransitParams p;
  p.gamma = 0.1;
  p.inv_tau = 0.1;
  auto r = transit_experiment(p);
  CHECK(r.min_abs_t < 0.03);
  CHECK(r.omega_at_min == Approx(0.0).epsilon(0.01));
  CHECK(std::abs(r.ledger_sum - 1.0) < 1e-3);
  CHECK(r.to_json()["regime"] == "critical");
  // packet narrower than the linewidth
  p.sigma = 10.0;
  r = transit_experiment(p);
  CHECK(r.output_energy < 0.1 * r.input_energy);
}

TEST_CASE("transit: lossless coupling is all-pass") {
  TransitParams p;
  p.inv_tau = 0.0;
  const auto r = transit_experiment(p);
  CHECK(r.output_energy == Approx(r.input_energy).epsilon(1e-4));
  for (double a : r.numeric.abs_t) CHECK(a == Approx(1.0).epsilon(1e-3));
  // phase flip on resonance
  const std::size_t mid = r.numeric.omega.size() / 2;
  CHECK(std::abs(r.numeric.omega[mid]) < 1e-9);
  CHECK(std::abs(r.numeric.t[mid] + 1.0) < 0.01);
}

TEST_CASE("transit: under-coupled resonance and decay tail") {
  TransitParams p;
  p.gamma = 0.5;
  p.inv_tau = 1.0;
  p.sigma = 0.1;
  p.dx = 0.01;
  p.band_linewidths = 2.0;
  p.fit_tail = true;
  const auto r = transit_experiment(p);
  CHECK(std::pow(r.abs_t_at_resonance, 2) == Approx(1.0 / 9.0).epsilon(0.09));
  REQUIRE(r.tail_rate);
  CHECK(*r.tail_rate == Approx(1.5).epsilon(0.05));
  CHECK(r.rms_gap < 0.02);
}

TEST_CASE("transit: every regime matches the closed form") {
  for (auto [g, it] : {std::pair{0.05, 0.1}, {0.1, 0.1}, {0.1, 0.05}}) {
    TransitParams p;
    p.gamma = g;
    p.inv_tau = it;
    CHECK(transit_experiment(p).rms_gap < 0.02);
  }
}

TEST_CASE("lifter: idealized ramp") {
  LifterParams p;
  const auto r = energy_lifter(p);
  CHECK(r.max_tracking_error < 1e-9);
  CHECK(r.p_final == Approx(1.0).epsilon(1e-12));
  CHECK(r.adiabatic_residual < 1e-6);
}

TEST_CASE("lifter: lossy ramp keeps tracking") {
  LifterParams p;
  p.tau_c = 10.0;
  const auto r = energy_lifter(p);
  CHECK(std::abs(r.p_final - std::exp(-1.0)) < 1e-3);
  CHECK(r.max_tracking_error < 1e-9);
}

TEST_CASE("lifter: released photon sits at the final resonance for either ramp sign") {
  for (double dw : {0.5, -0.5}) {
    LifterParams p;
    p.coupled = true;
    p.delta_omega = dw;
    const auto r = energy_lifter(p);
    CHECK(std::abs(r.peak_offset_bins) <= 1.0);
    CHECK(r.weight_at_original < 0.01);
    CHECK(r.max_tracking_error < 0.02 * (p.omega_start + dw));
  }
}

TEST_CASE("lifter: bad windows are config errors") {
  LifterParams p;
  p.ramp_time = 0.0;
  CHECK_THROWS_AS(energy_lifter(p), ConfigError);
  p.ramp_time = 1.0;
  p.t_start = -1.0;
  CHECK_THROWS_AS(energy_lifter(p), ConfigError);
}

TEST_CASE("efficiency sweep") {
  const double tau = 10.0;
  const std::vector<double> T = {0.1, 1.0, 2.5, 5.0, 10.0, 20.0};
  const auto s = efficiency_sweep(T, tau, {}, 3);
  CHECK(s.monotone);
  CHECK(s.points[0].p_final > 0.98);
  CHECK(s.points[4].p_final == Approx(std::exp(-2.0)).epsilon(0.1));
  CHECK(s.max_envelope_gap < 0.1);
  const auto serial = efficiency_sweep(T, tau, {}, 1);
  for (std::size_t i = 0; i < T.size(); ++i) CHECK(serial.points[i].p_final == s.points[i].p_final);
  CHECK_THROWS_AS(efficiency_sweep({1.0, -1.0}, tau), ConfigError);
}

TEST_CASE("probe verification") {
  const auto d = probe_discrimination({});
  CHECK(d.matched.ratio_to_baseline == Approx(1.0).epsilon(0.05));
  CHECK(d.mismatched.peak_probe < 0.01 * d.matched.peak_probe);
  CHECK(d.ratio_db > 20.0);

  ProbeParams p;
  p.delta_omega = 0.0;
  CHECK_THROWS_WITH_AS(probe_verification(p), "probe cannot discriminate", ConfigError);
}

TEST_CASE("probe discrimination grows with detuning") {
  double last = 0.0;
  for (double dw : {0.15, 0.3, 0.6, 1.2}) {
    ProbeParams p;
    p.delta_omega = dw;
    const double db = probe_discrimination(p).ratio_db;
    CHECK(db > last);
    last = db;
  }
}

TEST_CASE("storage: lossless accept, hold, release") {
  const auto r = cpt_storage({});
  REQUIRE(r.phases.size() == 3);
  CHECK(r.phases[0].stored_end > 0.3);
  CHECK(r.hold_retention_error < 1e-4);
  CHECK(r.phases[1].leakage.at("d1") + r.phases[1].leakage.at("d4") < 1e-3);
  CHECK(std::abs(r.ledger_sum - 1.0) < 1e-3);
  const double budget = r.phases[2].stored_begin - r.release_intrinsic;
  CHECK(r.release_d4 == Approx(budget).epsilon(0.02));
  REQUIRE(r.released);
  CHECK(peak_frequency(*r.released) == Approx(std::numbers::pi).epsilon(0.01));
}

TEST_CASE("storage: lossy hold decays at twice the intrinsic rate") {
  StorageParams p;
  p.prepared = true;
  p.v_loop = 0.2;
  p.loop_length = 0.5;
  p.dx = 0.005;
  p.inv_tau_ab = 0.01;
  p.settle = 5.0;
  p.hold = 40.0;
  p.release = 100.0;
  const auto r = cpt_storage(p);
  CHECK(r.hold_decay_rate == Approx(2.0 * p.inv_tau_ab).epsilon(0.05));
}

TEST_CASE("storage: schedule errors") {
  StorageParams p;
  p.hold = 0.0;
  CHECK_THROWS_AS(cpt_storage(p), ConfigError);
  p = {};
  p.release = 0.5;  // shorter than the gate switch
  CHECK_THROWS_AS(cpt_storage(p), ConfigError);
  p = {};
  p.t_switch = -2.0;
  CHECK_THROWS_AS(cpt_storage(p), ConfigError);
}
