#pragma once

#include "wgqed/model.hpp"

namespace fixtures {

// one waveguide of length 100, one cavity coupled at mid-length, one packet
inline wgqed::NetworkSpec single_ring(double gamma = 0.5, double tau_c = wgqed::kInfinity) {
  using namespace wgqed;
  NetworkSpec s;
  s.waveguides.push_back({"wg", +1, 100.0, 0.0});
  CavitySpec c;
  c.id = "ring";
  c.tau_c = tau_c;
  s.cavities.push_back(c);
  s.couplings.push_back({"wg", "ring", 50.0, std::sqrt(2.0 * gamma)});
  s.pulses.push_back({"wg", 20.0, 1.5, 0.0});
  s.probes.push_back({"in", WaveguidePoint{"wg", 40.0}, 1});
  s.probes.push_back({"out", WaveguidePoint{"wg", 60.0}, 1});
  s.probes.push_back({"cavity", CavityProbe{"ring"}, 1});
  s.sim.dx = 0.05;
  s.sim.t_final = 30.0;
  return s;
}

}  // namespace fixtures
