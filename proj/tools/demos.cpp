#include "demos.hpp"

#include <cmath>

#include "cli_support.hpp"
#include "wgqed/experiments.hpp"
#include "wgqed/svg.hpp"

namespace wgqed::cli {

namespace fs = std::filesystem;
using namespace experiments;

namespace {

void write_report(const fs::path& dir, const json& report) { io::write_atomic(dir / "report.json", report.dump(2) + "\n"); }

void write_svg(const fs::path& dir, const std::string& name, const svg::Plot& plot) {
  io::write_atomic(dir / name, svg::emit_svg(plot));
}

Table spectrum_table(const Spectrum& s) {
  Table t{{"omega", "re", "im", "power"}, {}};
  for (std::size_t i = 0; i < s.omega.size(); ++i)
    t.rows.push_back({s.omega[i], s.values[i].real(), s.values[i].imag(), std::norm(s.values[i])});
  return t;
}

fs::path transit(Params& prm, const OutputOptions& o) {
  TransitParams p;
  std::string regime;
  prm.take("regime", regime);
  if (regime == "under") p.gamma = 0.05, p.inv_tau = 0.1;
  else if (regime == "critical") p.gamma = 0.1, p.inv_tau = 0.1;
  else if (regime == "over") p.gamma = 0.1, p.inv_tau = 0.05;
  else if (!regime.empty()) throw ConfigError("regime must be under, critical or over");
  prm.take("gamma", p.gamma);
  prm.take("inv_tau", p.inv_tau);
  prm.take("omega_c", p.omega_c);
  prm.take("sigma", p.sigma);
  prm.take("detuning", p.detuning);
  prm.take("dx", p.dx);
  prm.take("integrator", p.integrator);
  prm.take("band_linewidths", p.band_linewidths);
  prm.take("fit_tail", p.fit_tail);
  prm.finish();

  const auto r = transit_experiment(p);
  const fs::path dir = o.root / "transit" / prm.run_id();
  write_report(dir, r.to_json());
  io::write_records(dir, r.records, o.format);
  Table t{{"omega", "re_t", "im_t", "abs2_t", "abs2_exact"}, {}};
  for (std::size_t i = 0; i < r.numeric.omega.size(); ++i)
    t.rows.push_back({r.numeric.omega[i], r.numeric.t[i].real(), r.numeric.t[i].imag(), std::norm(r.numeric.t[i]),
                      std::norm(r.analytic[i])});
  write_table(dir, "transmission", t, o.format);
  if (o.svg) {
    svg::Plot plot{"Transmission", "omega", "|t|^2", {}, std::pair{0.0, 1.05}};
    svg::Trace num{"numeric", r.numeric.omega, {}, {}, false};
    svg::Trace ana{"analytic", r.numeric.omega, {}, {}, true};
    for (std::size_t i = 0; i < r.numeric.omega.size(); ++i) {
      num.y.push_back(std::norm(r.numeric.t[i]));
      ana.y.push_back(std::norm(r.analytic[i]));
    }
    plot.traces = {num, ana};
    write_svg(dir, "transmission.svg", plot);
  }
  return dir;
}

fs::path lifter(Params& prm, const OutputOptions& o) {
  LifterParams p;
  prm.take("omega_start", p.omega_start);
  prm.take("delta_omega", p.delta_omega);
  prm.take("ramp_time", p.ramp_time);
  prm.take("t_start", p.t_start);
  prm.take("tau_c", p.tau_c);
  prm.take("coupled", p.coupled);
  prm.take("gamma", p.gamma);
  prm.take("t_after", p.t_after);
  prm.take("dx", p.dx);
  prm.take("integrator", p.integrator);
  prm.finish();

  const auto r = energy_lifter(p);
  const fs::path dir = o.root / "lifter" / prm.run_id();
  write_report(dir, r.to_json());
  Table t{{"t", "omega_inst", "omega_c", "valid"}, {}};
  for (std::size_t i = 0; i < r.track.t.size(); ++i)
    t.rows.push_back({r.track.t[i], r.track.omega[i], r.schedule[i], r.track.valid[i] ? 1.0 : 0.0});
  write_table(dir, "frequency", t, o.format);
  if (r.released) write_table(dir, "spectrum", spectrum_table(*r.released), o.format);
  if (o.svg) {
    svg::Plot plot{"Instantaneous frequency", "t", "omega", {}, std::nullopt};
    plot.traces = {{"omega_inst", r.track.t, r.track.omega, r.track.valid, false},
                   {"omega_c(t)", r.track.t, r.schedule, {}, true}};
    write_svg(dir, "frequency.svg", plot);
    if (r.released) {
      svg::Plot sp{"Released spectrum", "omega", "|S|^2", {}, std::nullopt};
      svg::Trace tr{"output", r.released->omega, {}, {}, false};
      for (const auto& v : r.released->values) tr.y.push_back(std::norm(v));
      sp.traces = {tr};
      write_svg(dir, "spectrum.svg", sp);
    }
  }
  return dir;
}

fs::path efficiency(Params& prm, const OutputOptions& o) {
  double tau_c = 10.0;
  std::vector<double> ratios = {0.001, 0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0};
  LifterParams base;
  prm.take("tau_c", tau_c);
  prm.take_list("ramp_ratios", ratios);
  prm.take("delta_omega", base.delta_omega);
  prm.take("omega_start", base.omega_start);
  prm.take("dx", base.dx);
  prm.finish();
  std::vector<double> T;
  for (double f : ratios) T.push_back(f * tau_c);

  const auto s = efficiency_sweep(T, tau_c, base, o.jobs);
  const fs::path dir = o.root / "efficiency" / prm.run_id();
  write_report(dir, s.to_json());
  Table t{{"ramp_time", "p_final", "envelope"}, {}};
  for (const auto& pt : s.points) t.rows.push_back({pt.ramp_time, pt.p_final, pt.envelope});
  write_table(dir, "efficiency", t, o.format);
  if (o.svg) {
    svg::Plot plot{"Conversion efficiency", "T / tau_c", "P_final", {}, std::pair{0.0, 1.05}};
    svg::Trace num{"lifter", {}, {}, {}, false}, env{"exp(-2T/tau_c)", {}, {}, {}, true};
    for (const auto& pt : s.points) {
      num.x.push_back(pt.ramp_time / tau_c);
      num.y.push_back(pt.p_final);
      env.x.push_back(pt.ramp_time / tau_c);
      env.y.push_back(pt.envelope);
    }
    plot.traces = {num, env};
    write_svg(dir, "efficiency.svg", plot);
  }
  return dir;
}

fs::path probe(Params& prm, const OutputOptions& o) {
  ProbeParams p;
  prm.take("omega_a", p.omega_a);
  prm.take("delta_omega", p.delta_omega);
  prm.take("gamma_a", p.gamma_a);
  prm.take("gamma_b", p.gamma_b);
  prm.take("inv_tau_a", p.inv_tau_a);
  prm.take("inv_tau_b", p.inv_tau_b);
  prm.take("ramp_time", p.ramp_time);
  prm.take("separation", p.separation);
  prm.take("dx", p.dx);
  prm.finish();

  const auto d = probe_discrimination(p);
  const fs::path dir = o.root / "probe" / prm.run_id();
  write_report(dir, d.to_json());
  write_table(dir, "spectrum_matched", spectrum_table(d.matched.output), o.format);
  write_table(dir, "spectrum_mismatched", spectrum_table(d.mismatched.output), o.format);
  if (o.svg) {
    svg::Plot plot{"Output downstream of the probe", "omega", "|S|^2", {}, std::nullopt};
    svg::Trace m{"probe shifted", d.matched.output.omega, {}, {}, false};
    svg::Trace u{"probe original", d.mismatched.output.omega, {}, {}, true};
    for (const auto& v : d.matched.output.values) m.y.push_back(std::norm(v));
    for (const auto& v : d.mismatched.output.values) u.y.push_back(std::norm(v));
    plot.traces = {m, u};
    write_svg(dir, "probe.svg", plot);
  }
  return dir;
}

fs::path storage(Params& prm, const OutputOptions& o) {
  StorageParams p;
  prm.take("v_loop", p.v_loop);
  prm.take("v_gate_loop", p.v_gate_loop);
  prm.take("v_gate_port", p.v_gate_port);
  prm.take("loop_length", p.loop_length);
  prm.take("sigma", p.sigma);
  prm.take("gate_detuning", p.gate_detuning);
  prm.take("t_switch", p.t_switch);
  prm.take("switch_time", p.switch_time);
  prm.take("settle", p.settle);
  prm.take("hold", p.hold);
  prm.take("release", p.release);
  prm.take("inv_tau_ab", p.inv_tau_ab);
  prm.take("dx", p.dx);
  prm.take("input_direction", p.input_direction);
  prm.take("prepared", p.prepared);
  prm.take("compensate", p.compensate);
  prm.finish();

  const auto r = cpt_storage(p);
  const fs::path dir = o.root / "storage" / prm.run_id();
  write_report(dir, r.to_json());
  io::write_records(dir, r.records, o.format);
  Table t{{"t", "stored"}, {}};
  for (std::size_t i = 0; i < r.trace_t.size(); ++i) t.rows.push_back({r.trace_t[i], r.trace_stored[i]});
  write_table(dir, "stored", t, o.format);
  if (o.svg) {
    svg::Plot plot{"Stored population", "t", "stored", {}, std::nullopt};
    plot.traces = {{"a + b + loop", r.trace_t, r.trace_stored, {}, false}};
    write_svg(dir, "storage.svg", plot);
  }
  return dir;
}

}  // namespace

fs::path run_demo(const std::string& name, const std::vector<std::string>& params, const OutputOptions& out) {
  Params prm(params);
  if (name == "transit") return transit(prm, out);
  if (name == "lifter") return lifter(prm, out);
  if (name == "efficiency") return efficiency(prm, out);
  if (name == "probe") return probe(prm, out);
  if (name == "storage") return storage(prm, out);
  throw ConfigError("unknown experiment '" + name + "' (transit, lifter, efficiency, probe, storage)");
}

}  // namespace wgqed::cli
