#include <algorithm>
#include <cmath>
#include <numbers>

#include "wgqed/experiments.hpp"

namespace wgqed::experiments {

namespace {

const char* kGuides[] = {"d1", "d2", "d3", "d4"};
const char* kCavities[] = {"a", "b", "c", "d"};
constexpr double kRampWidth = 20.0;

double snap_to_grid(double x, double dx) { return std::round(x / dx) * dx; }

struct Timeline {
  double first_end, hold_end, release_end;
};

Timeline timeline(const StorageParams& p) {
  if (!(p.switch_time > 0.0)) throw ConfigError("storage: switch time must be positive");
  if (!(p.hold > 0.0)) throw ConfigError("storage: hold phase must be positive");
  if (!(p.release > p.switch_time)) throw ConfigError("storage: release phase must outlast the gate switch");
  if (!(p.settle > 0.0)) throw ConfigError("storage: settle time must be positive");
  double first_end = p.settle;
  if (!p.prepared) {
    if (!(p.t_switch > 0.0)) throw ConfigError("storage: gate switch must start after t = 0");
    first_end = p.t_switch + p.switch_time + p.settle;
  }
  return {first_end, first_end + p.hold, first_end + p.hold + p.release};
}

// Positions of a, c, d, b on the loop, already on cell centres.
struct Layout {
  double x_a, x_c, x_d, x_b, length, omega_s;
};

Layout layout(const StorageParams& p) {
  if (!(p.loop_length > 0.0) || !(p.sigma > 0.0) || !(p.dx > 0.0)) throw ConfigError("storage: bad geometry");
  if (p.input_direction != 1 && p.input_direction != -1) throw ConfigError("storage: input_direction must be +1 or -1");
  Layout l;
  const double margin = 12.0 * p.sigma + kRampWidth + 5.0;
  l.x_a = snap_to_grid(margin, p.dx);
  l.x_c = snap_to_grid(l.x_a + p.loop_length / 4.0, p.dx);
  l.x_d = snap_to_grid(l.x_a + 3.0 * p.loop_length / 4.0, p.dx);
  l.x_b = snap_to_grid(l.x_a + p.loop_length, p.dx);
  l.length = l.x_b + margin;
  l.omega_s = 2.0 * std::numbers::pi / (l.x_b - l.x_a);  // Q L = 2 pi
  return l;
}

}  // namespace

NetworkSpec storage_network(const StorageParams& p) {
  const auto tl = timeline(p);
  const auto g = layout(p);
  const double w = g.omega_s;
  const double D = p.gate_detuning;

  NetworkSpec s;
  const double x_min = -p.dx / 2.0;  // cell centres on multiples of dx
  s.waveguides = {{"d1", p.input_direction, g.length, x_min},
                  {"d2", +1, g.length, x_min},
                  {"d3", -1, g.length, x_min},
                  {"d4", +1, g.length, x_min}};
  auto cavity = [&](const char* id, double tau) {
    CavitySpec c;
    c.id = id;
    c.omega_c0 = w;
    c.tau_c = tau;
    return c;
  };
  const double tau_ab = p.inv_tau_ab > 0.0 ? 1.0 / p.inv_tau_ab : kInfinity;
  s.cavities = {cavity("a", tau_ab), cavity("b", tau_ab), cavity("c", kInfinity), cavity("d", kInfinity)};
  const double t_release = tl.hold_end;
  auto set_gates = [&](double wc, double wd) {
    if (p.prepared)
      s.cavities[2].tuning = TuningSchedule(ConstantTuning{wc + D});
    else
      s.cavities[2].tuning = TuningSchedule(LinearRamp{p.t_switch, p.t_switch + p.switch_time, wc, wc + D});
    s.cavities[3].tuning = TuningSchedule(LinearRamp{t_release, t_release + p.switch_time, wd + D, wd});
  };
  set_gates(w, w);

  auto couple = [&](const char* wg, const char* cav, double x, double v) { s.couplings.push_back({wg, cav, x, v}); };
  couple("d2", "a", g.x_a, p.v_loop);
  couple("d3", "a", g.x_a, p.v_loop);
  couple("d2", "b", g.x_b, p.v_loop);
  couple("d3", "b", g.x_b, p.v_loop);
  couple("d1", "c", g.x_c, p.v_gate_port);
  couple("d2", "c", g.x_c, p.v_gate_loop);
  couple("d3", "c", g.x_c, p.v_gate_loop);
  couple("d4", "d", g.x_d, p.v_gate_port);
  couple("d3", "d", g.x_d, p.v_gate_loop);
  couple("d2", "d", g.x_d, p.v_gate_loop);

  if (p.prepared) {
    s.cavities[0].initial_amplitude = std::sqrt(0.5);
    s.cavities[1].initial_amplitude = -std::sqrt(0.5);
  } else {
    s.pulses.push_back({"d1", g.x_c - p.input_direction * 6.0 * p.sigma, p.sigma, w});
  }
  s.probes.push_back({"d4_out", WaveguidePoint{"d4", g.x_d + 2.0}, 1});
  s.probes.push_back({"e_a", CavityProbe{"a"}, 1});
  s.probes.push_back({"e_b", CavityProbe{"b"}, 1});
  s.sim.dx = p.dx;
  s.sim.t_final = tl.release_end;
  s.sim.boundary = {BoundaryKind::AbsorbingRamp, kRampWidth};

  if (p.compensate) {
    // cancel the grid's resonance pulling so the dark state stays dark
    const auto sys = build_system(s);
    const double wa = compensated_resonance(sys, 0, w);
    const double wc = compensated_resonance(sys, 2, w);
    const double wd = compensated_resonance(sys, 3, w);
    s.cavities[0].omega_c0 = wa;
    s.cavities[1].omega_c0 = wa;
    s.cavities[2].omega_c0 = wc;
    s.cavities[3].omega_c0 = wd;
    set_gates(wc, wd);
  }
  return s;
}

StorageReport cpt_storage(const StorageParams& p) {
  const auto tl = timeline(p);
  StorageReport r;
  r.params = p;
  const auto spec = storage_network(p);
  const auto sys = build_system(spec);
  const auto g = layout(p);
  const std::size_t ka = sys.cell_at(1, g.x_a), kb = sys.cell_at(1, g.x_b);

  const double bounds[] = {0.0, tl.first_end, tl.hold_end, tl.release_end};
  const char* names[] = {p.prepared ? "prepare" : "accept", "hold", "release"};
  std::vector<std::size_t> bound_steps;
  for (double b : bounds) bound_steps.push_back(static_cast<std::size_t>(std::llround(b / sys.dt)));
  const auto trace_stride = static_cast<std::size_t>(std::max(1.0, std::round(0.5 / sys.dt)));

  struct Tally {
    double stored = 0.0, intrinsic = 0.0;
    double cav[4] = {};
    double leak[4] = {};
  };
  std::vector<Tally> at_bounds(4);
  auto measure = [&](const FieldState& f, const Stepper& st) {
    Tally t;
    for (std::size_t m = 0; m < 4; ++m) t.cav[m] = std::norm(f.cavity(m));
    // loop field between a and b belongs to the store, not to d2/d3
    double l2 = 0.0, l3 = 0.0;
    for (std::size_t k = ka; k <= kb; ++k) {
      l2 += std::norm(f.field(1, k)) * sys.dx;
      l3 += std::norm(f.field(2, k)) * sys.dx;
    }
    t.stored = t.cav[0] + t.cav[1] + l2 + l3;
    for (std::size_t w = 0; w < 4; ++w) t.leak[w] = f.waveguide_weight(w) * sys.dx + st.outflow()[w];
    t.leak[1] -= l2;
    t.leak[2] -= l3;
    for (double v : st.intrinsic()) t.intrinsic += v;
    return t;
  };

  RunOptions opts;
  opts.observer_stride = 1;
  opts.observer = [&](const FieldState& f, const Stepper& st) {
    const auto step = static_cast<std::size_t>(f.step);
    const bool boundary = std::find(bound_steps.begin(), bound_steps.end(), step) != bound_steps.end();
    if (!boundary && step % trace_stride != 0) return;
    const Tally t = measure(f, st);
    if (step % trace_stride == 0) {
      r.trace_t.push_back(f.t);
      r.trace_stored.push_back(t.stored);
    }
    for (std::size_t b = 0; b < 4; ++b)
      if (bound_steps[b] == step) at_bounds[b] = t;
  };
  r.records = run(sys, initial_state(sys), opts);

  for (std::size_t ph = 0; ph < 3; ++ph) {
    const auto& a = at_bounds[ph];
    const auto& b = at_bounds[ph + 1];
    PhaseLedger l;
    l.name = names[ph];
    l.t_begin = bounds[ph];
    l.t_end = bounds[ph + 1];
    l.stored_begin = a.stored;
    l.stored_end = b.stored;
    for (std::size_t m = 0; m < 4; ++m) l.populations[kCavities[m]] = b.cav[m];
    for (std::size_t w = 0; w < 4; ++w) l.leakage[kGuides[w]] = b.leak[w] - a.leak[w];
    l.intrinsic = b.intrinsic - a.intrinsic;
    r.phases.push_back(l);
  }

  const auto& hold = r.phases[1];
  const auto& rel = r.phases[2];
  r.hold_retention_error = std::abs(hold.stored_end - hold.stored_begin);
  for (const auto& [id, v] : hold.leakage) r.hold_leakage += v;
  r.release_d4 = rel.leakage.at("d4");
  r.release_other = rel.leakage.at("d1") + rel.leakage.at("d2") + rel.leakage.at("d3");
  r.release_intrinsic = rel.intrinsic;

  const auto& end = at_bounds[3];
  r.ledger_sum = end.intrinsic;
  for (std::size_t m = 0; m < 4; ++m) r.ledger_sum += end.cav[m];
  for (std::size_t w = 0; w < 4; ++w) r.ledger_sum += end.leak[w];
  r.ledger_sum += end.stored - end.cav[0] - end.cav[1];  // loop field

  // -d ln(stored)/dt over the hold, by least squares
  ProbeSeries s;
  for (std::size_t i = 0; i < r.trace_t.size(); ++i) {
    if (r.trace_t[i] < hold.t_begin || r.trace_t[i] > hold.t_end) continue;
    s.t.push_back(r.trace_t[i]);
    s.values.push_back(std::sqrt(r.trace_stored[i]));
  }
  r.hold_decay_rate = 2.0 * fit_decay_rate(s, hold.t_begin, hold.t_end);

  SpectrumWindow win;
  win.omega_min = g.omega_s - 1.0;
  win.omega_max = g.omega_s + 1.0;
  win.t_begin = rel.t_begin;
  win.require_compact = false;
  r.released = probe_spectrum(r.records.probe("d4_out"), win);
  return r;
}

json StorageReport::to_json() const {
  json phases_j = json::array();
  for (const auto& l : phases)
    phases_j.push_back({{"name", l.name},
                        {"t_begin", l.t_begin},
                        {"t_end", l.t_end},
                        {"stored_begin", l.stored_begin},
                        {"stored_end", l.stored_end},
                        {"populations", l.populations},
                        {"leakage", l.leakage},
                        {"intrinsic", l.intrinsic}});
  return {{"experiment", "storage"},
          {"params",
           {{"v_loop", params.v_loop},
            {"v_gate_loop", params.v_gate_loop},
            {"v_gate_port", params.v_gate_port},
            {"loop_length", params.loop_length},
            {"sigma", params.sigma},
            {"gate_detuning", params.gate_detuning},
            {"t_switch", params.t_switch},
            {"hold", params.hold},
            {"release", params.release},
            {"inv_tau_ab", params.inv_tau_ab},
            {"dx", params.dx},
            {"prepared", params.prepared}}},
          {"phases", phases_j},
          {"results",
           {{"hold_retention_error", hold_retention_error},
            {"hold_leakage", hold_leakage},
            {"release_d4", release_d4},
            {"release_other", release_other},
            {"release_intrinsic", release_intrinsic},
            {"hold_decay_rate", hold_decay_rate},
            {"ledger_sum", ledger_sum}}},
          {"deviations", records.meta.deviations}};
}

}  // namespace wgqed::experiments
