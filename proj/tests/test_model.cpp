#include "doctest.h"
#include "fixtures.hpp"
#include "wgqed/config.hpp"

using namespace wgqed;

TEST_CASE("valid single-ring network has an empty report") {
  CHECK(validate_network(fixtures::single_ring()).ok());
}

TEST_CASE("unknown cavity id is reported") {
  auto s = fixtures::single_ring();
  s.couplings[0].cavity_id = "ghost";
  const auto r = validate_network(s);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.has("unresolved_cavity"));
  CHECK(r.violations[0].message.find("unresolved cavity reference") != std::string::npos);
}

TEST_CASE("packet support past x_min is reported") {
  auto s = fixtures::single_ring();
  s.pulses[0].x0 = 5.0;  // 5 sigma = 7.5
  const auto r = validate_network(s);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.has("packet_support_outside"));
}

TEST_CASE("validation is total over broken specs") {
  std::vector<NetworkSpec> bad;
  auto add = [&](auto mutate) {
    auto s = fixtures::single_ring();
    mutate(s);
    bad.push_back(s);
  };
  add([](NetworkSpec& s) { s.waveguides.clear(); });
  add([](NetworkSpec& s) { s.waveguides[0].length = -1; });
  add([](NetworkSpec& s) { s.waveguides[0].direction = 0; });
  add([](NetworkSpec& s) { s.sim.dx = 0; });
  add([](NetworkSpec& s) { s.sim.dx = NAN; });
  add([](NetworkSpec& s) { s.sim.t_final = -3; });
  add([](NetworkSpec& s) { s.cavities[0].tau_c = 0; });
  add([](NetworkSpec& s) { s.couplings[0].V = 0; });
  add([](NetworkSpec& s) { s.couplings[0].x = 1e9; });
  add([](NetworkSpec& s) { s.couplings[0].waveguide_id = "nowhere"; });
  add([](NetworkSpec& s) { s.pulses[0].sigma = 0; });
  add([](NetworkSpec& s) { s.probes[0].stride = 0; });
  add([](NetworkSpec& s) { s.probes.push_back(s.probes[0]); });
  add([](NetworkSpec& s) { s.params.v_g = 0; });
  add([](NetworkSpec& s) { s.cavities[0].tuning = TuningSchedule(PiecewiseLinear{}); });
  add([](NetworkSpec& s) { s.cavities[0].tuning = TuningSchedule(PiecewiseLinear{{{1, 0}, {0, 1}}}); });
  for (const auto& s : bad) {
    ValidationReport r;
    CHECK_NOTHROW(r = validate_network(s));
    CHECK_FALSE(r.ok());
  }
}

TEST_CASE("schedule is exact at knots and clamped outside") {
  PiecewiseLinear p{{{0.0, 0.1}, {0.3, 0.7}, {1.7, 0.30000000000000004}}};
  TuningSchedule s(p);
  for (const auto& [t, w] : p.knots) CHECK(s(t) == w);
  CHECK(s(-5.0) == 0.1);
  CHECK(s(50.0) == 0.30000000000000004);
  TuningSchedule r(LinearRamp{1.0, 3.0, 2.0, 4.0});
  CHECK(r(1.0) == 2.0);
  CHECK(r(3.0) == 4.0);
  CHECK(r(2.0) == doctest::Approx(3.0));
  CHECK(r.active_window() == std::pair{1.0, 3.0});
  CHECK_FALSE(TuningSchedule(ConstantTuning{1.0}).active_window());
}

TEST_CASE("config round trip preserves the spec") {
  auto s = fixtures::single_ring(0.3, 7.0);
  s.cavities[0].tuning = TuningSchedule(LinearRamp{0.0, 2.0, 0.0, 0.5});
  s.cavities[0].initial_amplitude = cplx(0.6, -0.8);
  s.couplings[0].V = cplx(0.3, 0.4);
  s.sim.boundary = {BoundaryKind::AbsorbingRamp, 5.0};
  s.sim.snapshot_times = {1.0, 2.5};
  s.sim.integrator = Integrator::EulerPaper;
  const auto back = network_from_json(json::parse(network_to_json(s).dump()));
  CHECK(back == s);
}

TEST_CASE("config errors name the problem") {
  CHECK_THROWS_WITH_AS(load_network("/nonexistent/missing.json"), doctest::Contains("config not found"), ConfigError);
  json j = network_to_json(fixtures::single_ring());
  j["sim"]["integrator"] = "rk4";
  CHECK_THROWS_AS(network_from_json(j), ConfigError);
}
