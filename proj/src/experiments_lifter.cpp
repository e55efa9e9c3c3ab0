#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "wgqed/experiments.hpp"

namespace wgqed::experiments {

namespace {

std::size_t nearest_sample(const std::vector<double>& t, double when) {
  const auto it = std::lower_bound(t.begin(), t.end(), when);
  if (it == t.begin()) return 0;
  if (it == t.end()) return t.size() - 1;
  const auto i = static_cast<std::size_t>(it - t.begin());
  return (when - t[i - 1] <= t[i] - when) ? i - 1 : i;
}

// central-difference stencil [t_{j-1}, t_{j+1}] contains a schedule corner
bool straddles(const std::vector<double>& t, std::size_t j, double corner) {
  return t[j - 1] < corner && corner < t[j + 1];
}

}  // namespace

NetworkSpec lifter_network(const LifterParams& p) {
  if (!(p.ramp_time > 0.0)) throw ConfigError("lifter: ramp time must be positive");
  if (p.t_start < 0.0) throw ConfigError("lifter: ramp window starts before the simulation");
  if (!(p.omega_start > 0.0) || !(p.omega_start + p.delta_omega > 0.0))
    throw ConfigError("lifter: resonance must stay positive");
  const double t_end = p.t_start + p.ramp_time;

  NetworkSpec s;
  CavitySpec c;
  c.id = "ring";
  c.omega_c0 = p.omega_start;
  c.tau_c = p.tau_c;
  c.tuning = TuningSchedule(LinearRamp{p.t_start, t_end, p.omega_start, p.omega_start + p.delta_omega});
  c.initial_amplitude = 1.0;
  s.cavities.push_back(c);
  s.probes.push_back({"cavity", CavityProbe{"ring"}, 1});
  s.sim.dx = p.dx;

  if (!p.coupled) {
    s.waveguides.push_back({"wg", +1, 20.0 * p.dx, 0.0});
    s.sim.t_final = t_end + p.t_after;
  } else {
    if (!(p.gamma > 0.0)) throw ConfigError("lifter: coupled mode needs gamma > 0");
    const double rate = p.gamma + c.inverse_lifetime();
    const double t_final = t_end + p.release_decades * std::log(10.0) / rate;
    const double x_c = 1.0;
    s.waveguides.push_back({"wg", +1, x_c + 1.0 + t_final + 2.0, 0.0});
    s.couplings.push_back({"wg", "ring", x_c, std::sqrt(2.0 * p.gamma)});
    s.probes.push_back({"out", WaveguidePoint{"wg", x_c + 1.0}, 1});
    s.sim.t_final = t_final;
  }
  s.sim.integrator = p.integrator;
  return s;
}

LifterReport energy_lifter(const LifterParams& p) {
  LifterReport r;
  r.params = p;
  const auto spec = lifter_network(p);
  const auto sys = build_system(spec);
  const auto rec = run(sys, initial_state(sys));
  const auto& cav = rec.probe("cavity");
  const auto& schedule = sys.cavities[0].schedule;
  const double t_end = p.t_start + p.ramp_time;

  r.track = instantaneous_frequency(cav);
  for (double t : r.track.t) r.schedule.push_back(schedule(t));

  std::size_t first = 0, last = 0;
  for (std::size_t j = 1; j + 1 < r.track.t.size(); ++j) {
    if (!r.track.valid[j] || straddles(r.track.t, j, p.t_start) || straddles(r.track.t, j, t_end)) continue;
    r.max_tracking_error = std::max(r.max_tracking_error, std::abs(r.track.omega[j] - r.schedule[j]));
    if (first == 0 && r.track.t[j] >= p.t_start) first = j;
    if (r.track.t[j] <= t_end) last = j;
  }

  r.p_initial = std::norm(cav.values[nearest_sample(cav.t, p.t_start)]);
  r.p_final = std::norm(cav.values[nearest_sample(cav.t, t_end)]);
  r.efficiency = r.p_initial > 0.0 ? r.p_final / r.p_initial : 0.0;
  if (first > 0 && last > 0) {
    // U = omega_inst * population, compared through U / omega_c
    const double u_before = r.track.omega[first] * std::norm(cav.values[first]);
    const double u_after = r.track.omega[last] * std::norm(cav.values[last]);
    r.adiabatic_residual = analytic::adiabatic_shift_check(u_before, r.schedule[first], u_after, r.schedule[last]);
  } else {
    r.adiabatic_residual = INFINITY;
  }

  if (p.coupled) {
    const double w_final = p.omega_start + p.delta_omega;
    const double margin = std::max(20.0 * p.gamma, 0.1);
    SpectrumWindow win;
    win.omega_min = std::min(p.omega_start, w_final) - margin;
    win.omega_max = std::max(p.omega_start, w_final) + margin;
    r.released = probe_spectrum(rec.probe("out"), win);
    r.released_peak = peak_frequency(*r.released);
    r.peak_offset_bins = (r.released_peak - w_final) / r.released->bin_width;
    double peak_power = 0.0;
    for (const auto& v : r.released->values) peak_power = std::max(peak_power, std::norm(v));
    r.weight_at_original = power_at(*r.released, p.omega_start) / peak_power;
  }
  return r;
}

json LifterReport::to_json() const {
  json j;
  j["experiment"] = "lifter";
  j["params"] = {{"omega_start", params.omega_start}, {"delta_omega", params.delta_omega},
                 {"ramp_time", params.ramp_time},     {"t_start", params.t_start},
                 {"tau_c", std::isinf(params.tau_c) ? json(nullptr) : json(params.tau_c)},
                 {"coupled", params.coupled},         {"gamma", params.gamma},
                 {"dx", params.dx},                   {"integrator", to_string(params.integrator)}};
  j["results"] = {{"max_tracking_error", max_tracking_error},
                  {"p_initial", p_initial},
                  {"p_final", p_final},
                  {"efficiency", efficiency},
                  {"adiabatic_residual", adiabatic_residual}};
  if (released) {
    j["results"]["released_peak"] = released_peak;
    j["results"]["peak_offset_bins"] = peak_offset_bins;
    j["results"]["bin_width"] = released->bin_width;
    j["results"]["weight_at_original"] = weight_at_original;
  }
  return j;
}

EfficiencySweep efficiency_sweep(const std::vector<double>& ramp_times, double tau_c, LifterParams base,
                                 unsigned jobs) {
  if (ramp_times.empty()) throw ConfigError("sweep: no ramp times");
  for (double T : ramp_times)
    if (!(T > 0.0)) throw ConfigError("sweep: ramp times must be positive");

  EfficiencySweep out;
  out.tau_c = tau_c;
  out.points.resize(ramp_times.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(ramp_times.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    for (std::size_t i = next++; i < ramp_times.size(); i = next++) {
      try {
        LifterParams p = base;
        p.ramp_time = ramp_times[i];
        p.tau_c = tau_c;
        p.t_start = 0.0;
        p.dx = std::min(base.dx, ramp_times[i] / 10.0);  // at least ten steps per ramp
        const auto r = energy_lifter(p);
        out.points[i] = {ramp_times[i], r.p_final, std::exp(-2.0 * ramp_times[i] / tau_c)};
      } catch (...) {
        std::lock_guard<std::mutex> g(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepPoint> sorted = out.points;
  std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.ramp_time < b.ramp_time; });
  out.monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].p_final > sorted[i - 1].p_final) out.monotone = false;
  for (const auto& pt : out.points)
    out.max_envelope_gap = std::max(out.max_envelope_gap, std::abs(pt.p_final / pt.envelope - 1.0));
  return out;
}

json EfficiencySweep::to_json() const {
  json pts = json::array();
  for (const auto& p : points) pts.push_back({{"ramp_time", p.ramp_time}, {"p_final", p.p_final}, {"envelope", p.envelope}});
  return {{"experiment", "efficiency_sweep"},
          {"tau_c", tau_c},
          {"points", pts},
          {"results", {{"monotone", monotone}, {"max_envelope_gap", max_envelope_gap}}}};
}

}  // namespace wgqed::experiments
