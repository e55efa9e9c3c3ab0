#include <cmath>

#include "wgqed/experiments.hpp"

namespace wgqed::experiments {

namespace {

double series_energy(const ProbeSeries& s, double dt) {
  double sum = 0.0;
  for (const auto& v : s.values) sum += std::norm(v);
  return sum * dt;
}

// Gaussian amplitude is below 1e-8 of its peak beyond this many sigma
constexpr double kPacketReach = 10.0;

}  // namespace

double fit_decay_rate(const ProbeSeries& s, double t_begin, double t_end) {
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] < t_begin || s.t[i] > t_end) continue;
    const double a = std::abs(s.values[i]);
    if (!(a > 0.0)) continue;
    const double y = std::log(a);
    n += 1;
    st += s.t[i];
    sy += y;
    stt += s.t[i] * s.t[i];
    sty += s.t[i] * y;
  }
  if (n < 3) throw SpectralError("decay fit window holds fewer than 3 samples");
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  return -slope;
}

NetworkSpec transit_network(const TransitParams& p) {
  if (!(p.gamma > 0.0)) throw ConfigError("transit: gamma must be positive");
  if (!(p.inv_tau >= 0.0)) throw ConfigError("transit: inv_tau must be non-negative");
  const double lw = p.gamma + p.inv_tau;
  const double x0 = kPacketReach * p.sigma + 1.0;
  const double x_in = x0 + kPacketReach * p.sigma;
  const double x_c = x_in + 2.0;
  const double x_out = x_c + 2.0;
  const double ringdown = std::log(1e11) / lw;
  const double t_final = (x_out - x0) + kPacketReach * p.sigma + ringdown;

  NetworkSpec s;
  s.waveguides.push_back({"wg", +1, x0 + t_final + kPacketReach * p.sigma + 2.0, 0.0});
  CavitySpec c;
  c.id = "ring";
  c.omega_c0 = p.omega_c;
  c.tau_c = p.inv_tau > 0.0 ? 1.0 / p.inv_tau : kInfinity;
  s.cavities.push_back(c);
  s.couplings.push_back({"wg", "ring", x_c, std::sqrt(2.0 * p.gamma)});
  s.pulses.push_back({"wg", x0, p.sigma, p.detuning});
  s.probes.push_back({"in", WaveguidePoint{"wg", x_in}, 1});
  s.probes.push_back({"out", WaveguidePoint{"wg", x_out}, 1});
  s.probes.push_back({"cavity", CavityProbe{"ring"}, 1});
  s.sim.dx = p.dx;
  s.sim.t_final = t_final;
  s.sim.integrator = p.integrator;
  s.sim.snapshot_times = {p.snapshot_time >= 0.0 ? p.snapshot_time : x_c - x0};
  return s;
}

TransitReport transit_experiment(const TransitParams& p) {
  TransitReport r;
  r.params = p;
  r.spec = transit_network(p);
  const auto sys = build_system(r.spec);
  r.records = run(sys, initial_state(sys));

  const auto& in = r.records.probe("in");
  const auto& out = r.records.probe("out");
  const double lw = p.gamma + p.inv_tau;
  SpectrumWindow w;
  w.omega_min = p.omega_c - p.band_linewidths * lw;
  w.omega_max = p.omega_c + p.band_linewidths * lw;
  w.points = p.band_points;
  r.input = probe_spectrum(in, w);
  r.output = probe_spectrum(out, w);
  const std::size_t k_in = sys.probes[0].cell, k_out = sys.probes[1].cell;
  const double delay = static_cast<double>(k_out - k_in) * sys.dx / sys.v_g;
  r.numeric = transmission_estimate(r.input, r.output, delay, sys.omega_0);

  double gap2 = 0.0, cgap2 = 0.0;
  r.min_abs_t = INFINITY;
  for (std::size_t i = 0; i < r.numeric.omega.size(); ++i) {
    const cplx exact = analytic::transmission(r.numeric.omega[i], p.omega_c, p.inv_tau, p.gamma);
    r.analytic.push_back(exact);
    gap2 += std::pow(r.numeric.abs_t[i] - std::abs(exact), 2);
    cgap2 += std::norm(r.numeric.t[i] - exact);
    if (r.numeric.abs_t[i] < r.min_abs_t) {
      r.min_abs_t = r.numeric.abs_t[i];
      r.omega_at_min = r.numeric.omega[i];
    }
  }
  const auto n = static_cast<double>(r.numeric.omega.size());
  r.rms_gap = n > 0 ? std::sqrt(gap2 / n) : INFINITY;
  r.complex_rms_gap = n > 0 ? std::sqrt(cgap2 / n) : INFINITY;
  r.band_coverage = n / static_cast<double>(r.input.omega.size());

  // bin nearest the resonance
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.input.omega.size(); ++i)
    if (std::abs(r.input.omega[i] - p.omega_c) < std::abs(r.input.omega[best] - p.omega_c)) best = i;
  r.abs_t_at_resonance = std::abs(r.output.values[best] / r.input.values[best]);

  r.input_energy = series_energy(in, sys.dt) * sys.v_g;
  r.output_energy = series_energy(out, sys.dt) * sys.v_g;
  r.intrinsic_loss = r.records.meta.intrinsic_loss;
  const auto& cav = r.records.probe("cavity").values;
  r.ledger_sum = r.output_energy + r.intrinsic_loss + std::norm(cav.back());

  if (p.fit_tail) {
    const double t_peak = (sys.cell_x(0, k_out) - r.spec.pulses[0].x0) / sys.v_g;
    const double t0 = t_peak + 8.0 * p.sigma / sys.v_g + 1.0 / lw;
    r.tail_rate = fit_decay_rate(out, t0, t0 + 6.0 / lw);
  }
  return r;
}

json TransitReport::to_json() const {
  json j;
  j["experiment"] = "transit";
  j["params"] = {{"gamma", params.gamma},   {"inv_tau", params.inv_tau},
                 {"omega_c", params.omega_c}, {"sigma", params.sigma},
                 {"detuning", params.detuning}, {"dx", params.dx},
                 {"integrator", to_string(params.integrator)}};
  j["regime"] = analytic::to_string(
      analytic::coupling_regime(params.gamma, params.inv_tau > 0 ? 1.0 / params.inv_tau : kInfinity, 1e-9));
  j["results"] = {{"rms_gap", rms_gap},
                  {"complex_rms_gap", complex_rms_gap},
                  {"band_coverage", band_coverage},
                  {"abs_t_at_resonance", abs_t_at_resonance},
                  {"min_abs_t", min_abs_t},
                  {"omega_at_min", omega_at_min},
                  {"input_energy", input_energy},
                  {"output_energy", output_energy},
                  {"intrinsic_loss", intrinsic_loss},
                  {"ledger_sum", ledger_sum}};
  if (tail_rate) {
    j["results"]["tail_rate"] = *tail_rate;
    j["results"]["tail_rate_expected"] = params.gamma + params.inv_tau;
  }
  j["deviations"] = records.meta.deviations;
  return j;
}

}  // namespace wgqed::experiments
