#include "wgqed/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "wgqed/experiments.hpp"

namespace wgqed::acceptance {

namespace {

using namespace experiments;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// (gamma, inv_tau) for gamma tau_c = 0.5, 1, 2
const double kRegimes[3][2] = {{0.05, 0.1}, {0.1, 0.1}, {0.1, 0.05}};

Outcome c1_transit_oracle(unsigned) {
  Outcome o{true, ""};
  for (const auto& rg : kRegimes) {
    TransitParams p;
    p.gamma = rg[0];
    p.inv_tau = rg[1];
    const auto r = transit_experiment(p);
    const bool ok = r.rms_gap < 0.02 && r.band_coverage > 0.99;
    o.pass = o.pass && ok;
    o.detail += fmt("Gt=%g rms=%.2e cov=%.2f; ", rg[0] / rg[1], r.rms_gap, r.band_coverage);
  }
  o.detail += "bound rms < 0.02";
  return o;
}

Outcome c2_extinction(unsigned) {
  TransitParams p;
  p.gamma = 0.1;
  p.inv_tau = 0.1;
  const auto r = transit_experiment(p);
  return {r.abs_t_at_resonance < 0.03, fmt("|t(w_c)| = %.2e, bound 0.03", r.abs_t_at_resonance)};
}

NetworkSpec single_cavity_run(double dx, double t_final, Integrator integ) {
  NetworkSpec s;
  s.waveguides.push_back({"wg", +1, t_final + 60.0, 0.0});
  CavitySpec c;
  c.id = "ring";
  s.cavities.push_back(c);
  s.couplings.push_back({"wg", "ring", 40.0, std::sqrt(2.0 * 0.05)});
  s.pulses.push_back({"wg", 15.0, 1.5, 0.0});
  s.sim.dx = dx;
  s.sim.t_final = t_final;
  s.sim.integrator = integ;
  return s;
}

double norm_drift(double dx, double t_final, Integrator integ) {
  const auto sys = build_system(single_cavity_run(dx, t_final, integ));
  const auto rec = run(sys, initial_state(sys));
  return std::abs(rec.meta.final_norm - 1.0);
}

Outcome c3_norm(unsigned) {
  const double dx = 0.05;
  const auto sys = build_system(single_cavity_run(dx, 1e5 * dx, Integrator::SplitStep));
  const auto rec = run(sys, initial_state(sys));
  const double split = std::abs(rec.meta.final_norm - 1.0);
  const double e1 = norm_drift(dx, 100.0, Integrator::EulerPaper);
  const double e2 = norm_drift(dx / 2, 100.0, Integrator::EulerPaper);
  const double ratio = e1 / e2;
  const bool ok = rec.meta.steps >= 100000 && split < 1e-6 && e1 > 0.0 && ratio > 1.6 && ratio < 2.4;
  return {ok, fmt("split-step %ld steps drift %.2e (< 1e-6); euler drift %.2e -> %.2e, ratio %.3f (first order ~2)",
                  rec.meta.steps, split, e1, e2, ratio)};
}

Outcome c4_free_decay(unsigned) {
  const double tau = 10.0;
  NetworkSpec s;
  s.waveguides.push_back({"wg", +1, 1.0, 0.0});
  CavitySpec c;
  c.id = "ring";
  c.omega_c0 = 1.0;
  c.tau_c = tau;
  c.initial_amplitude = 1.0;
  s.cavities.push_back(c);
  s.probes.push_back({"e", CavityProbe{"ring"}, 1});
  s.sim.dx = 0.05;
  s.sim.t_final = 3.0 * tau;
  const auto sys = build_system(s);
  const auto rec = run(sys, initial_state(sys));
  const auto& e = rec.probe("e");
  double worst = 0.0;
  for (std::size_t i = 0; i < e.t.size(); ++i) {
    if (e.t[i] > 3.0 * tau + 1e-9) break;
    const double exact = std::exp(-e.t[i] / tau);
    worst = std::max(worst, std::abs(std::abs(e.values[i]) - exact) / exact);
  }
  return {worst < 1e-6, fmt("max relative error %.2e over [0, 3 tau], bound 1e-6", worst)};
}

Outcome c5_tail(unsigned) {
  TransitParams p;
  p.gamma = 0.5;
  p.inv_tau = 1.0;
  p.sigma = 0.1;
  p.dx = 0.01;
  p.band_linewidths = 2.0;
  p.fit_tail = true;
  const auto r = transit_experiment(p);
  const double expect = p.gamma + p.inv_tau;
  const double rel = std::abs(*r.tail_rate / expect - 1.0);
  return {rel < 0.05, fmt("tail rate %.4f vs %.4f, rel err %.2e (< 5%%)", *r.tail_rate, expect, rel)};
}

Outcome c6_lifter(unsigned) {
  LifterParams ideal;
  const auto a = energy_lifter(ideal);
  const double scale = std::max(ideal.omega_start, ideal.omega_start + ideal.delta_omega);
  bool ok = a.max_tracking_error < 1e-6 * scale && a.adiabatic_residual < 1e-6;
  std::string d = fmt("ideal track %.2e res %.2e; ", a.max_tracking_error, a.adiabatic_residual);
  for (double sign : {+1.0, -1.0}) {
    LifterParams c;
    c.coupled = true;
    c.delta_omega = 0.5 * sign;
    const auto b = energy_lifter(c);
    ok = ok && std::abs(b.peak_offset_bins) <= 1.0 && b.weight_at_original < 0.01;
    d += fmt("dw=%+.1f peak off %.2f bins, weight@orig %.2e; ", c.delta_omega, b.peak_offset_bins, b.weight_at_original);
  }
  return {ok, d + "bounds 1e-6, 1 bin, 1%"};
}

Outcome c7_sweep(unsigned jobs) {
  const double tau = 10.0;
  std::vector<double> T;
  for (double f : {0.001, 0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0}) T.push_back(f * tau);
  const auto s = efficiency_sweep(T, tau, {}, jobs);
  const double near_one = std::abs(1.0 - s.points.front().p_final);
  const bool ok = s.monotone && near_one < 0.02 && s.max_envelope_gap < 0.1;
  return {ok, fmt("monotone=%s, 1-P(T/tau=0.001)=%.2e (< 0.02), envelope gap %.2e (< 10%%)",
                  s.monotone ? "yes" : "no", near_one, s.max_envelope_gap)};
}

Outcome c8_probe(unsigned) {
  const auto d = probe_discrimination({});
  return {d.ratio_db > 20.0, fmt("matched %.3e mismatched %.3e -> %.2f dB (> 20 dB)", d.matched.peak_probe,
                                 d.mismatched.peak_probe, d.ratio_db)};
}

Outcome c9_storage(unsigned) {
  const auto r = cpt_storage({});
  const auto& rel = r.phases[2];
  const double budget = rel.stored_begin - r.release_intrinsic;
  const double exit_gap = std::abs(r.release_d4 - budget) / budget;
  const bool ok = r.hold_retention_error < 1e-4 && r.hold_leakage < 1e-3 && std::abs(r.ledger_sum - 1.0) < 1e-3 &&
                  exit_gap < 0.02;
  return {ok, fmt("stored %.4f, hold drift %.2e (< 1e-4), hold leak %.2e (< 1e-3), ledger %.6f, d4 %.4f of %.4f "
                  "(gap %.2f%% < 2%%)",
                  rel.stored_begin, r.hold_retention_error, r.hold_leakage, r.ledger_sum, r.release_d4, budget,
                  100.0 * exit_gap)};
}

Outcome c10_quadrature(unsigned) {
  const double cases[][2] = {{1, 0}, {-1, 0}, {1, 1}, {-1, 1}, {2, 0.5}, {-2, 0.5}};
  double worst = 0.0;
  analytic::PvOptions opt;
  opt.cutoff = 1e3;
  opt.step = 1e-3;
  for (const auto& c : cases)
    worst = std::max(worst, std::abs(analytic::pv_kernel_integral(c[0], c[1], opt) - analytic::pv_kernel_residue(c[0], c[1])));
  return {worst < 1e-4, fmt("max |error| %.2e over 6 (x, Q) pairs, bound 1e-4", worst)};
}

struct Entry {
  int id;
  const char* name;
  double limit;
  Outcome (*fn)(unsigned);
};

const Entry kEntries[] = {
    {1, "analytic oracle match", 60, c1_transit_oracle},
    {2, "critical-coupling extinction", 60, c2_extinction},
    {3, "norm conservation", 120, c3_norm},
    {4, "free decay", 10, c4_free_decay},
    {5, "coupled decay tail", 60, c5_tail},
    {6, "adiabatic lifter", 120, c6_lifter},
    {7, "efficiency sweep", 180, c7_sweep},
    {8, "probe discrimination", 120, c8_probe},
    {9, "storage protocol", 180, c9_storage},
    {10, "appendix quadrature", 10, c10_quadrature},
};

}  // namespace

std::vector<CriterionResult> run_all(const std::vector<int>& only, unsigned jobs,
                                     const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& e : kEntries) {
    if (!only.empty() && std::find(only.begin(), only.end(), e.id) == only.end()) continue;
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    r.time_limit = e.limit;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto o = e.fn(jobs);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.time_limit) {
      r.pass = false;
      r.detail += fmt("; over time limit %.0f s", r.time_limit);
    }
    if (on_result) on_result(r);
    out.push_back(r);
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt("[%s] %d %s (%.2f s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds) + r.detail;
}

}  // namespace wgqed::acceptance
