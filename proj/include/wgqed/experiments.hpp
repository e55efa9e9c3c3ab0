#pragma once

// Scenario builders and reports: packet transit past one cavity, the
// adiabatic frequency lifter, the lifetime sweep, probe-cavity verification
// and the four-cavity storage loop.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wgqed/analytic.hpp"
#include "wgqed/config.hpp"
#include "wgqed/solver.hpp"
#include "wgqed/spectral.hpp"

namespace wgqed::experiments {

// ---------------------------------------------------------------------------
// transit

struct TransitParams {
  double gamma = 0.05;    // coupling decay rate |V|^2 / 2 v_g
  double inv_tau = 0.1;   // 1/tau_c
  double omega_c = 0.0;   // resonance (omega_0 = 0)
  double sigma = 1.5;
  double detuning = 0.0;  // packet carrier
  double dx = 0.05;
  Integrator integrator = Integrator::SplitStep;
  double band_linewidths = 5.0;  // compared band is omega_c +- this * (gamma + inv_tau)
  std::size_t band_points = 401;
  bool fit_tail = false;
  double snapshot_time = -1.0;  // < 0: when the packet centre reaches the coupler
};

struct TransitReport {
  TransitParams params;
  NetworkSpec spec;
  RecordSet records;
  Spectrum input;
  Spectrum output;
  TransmissionEstimate numeric;
  std::vector<cplx> analytic;  // Eq. for t on numeric.omega
  double rms_gap = 0.0;        // RMS of |t_num| - |t_exact| over the valid band
  double complex_rms_gap = 0.0;
  double band_coverage = 0.0;  // valid bins / requested bins
  double abs_t_at_resonance = 0.0;
  double min_abs_t = 0.0;
  double omega_at_min = 0.0;
  double input_energy = 0.0;   // v_g * int |phi_in|^2 dt
  double output_energy = 0.0;
  double intrinsic_loss = 0.0;
  double ledger_sum = 0.0;     // output + intrinsic + whatever remains in the cavity
  std::optional<double> tail_rate;

  json to_json() const;
};

NetworkSpec transit_network(const TransitParams& p);
TransitReport transit_experiment(const TransitParams& p);

/// Least-squares slope of -log|v| on [t_begin, t_end].
double fit_decay_rate(const ProbeSeries& s, double t_begin, double t_end);

// ---------------------------------------------------------------------------
// lifter

struct LifterParams {
  double omega_start = 1.0;
  double delta_omega = 0.2;
  double ramp_time = 5.0;
  double t_start = 0.0;      // ramp begins
  double tau_c = kInfinity;
  bool coupled = false;      // waveguide coupling on (photon released into it)
  double gamma = 0.01;       // coupling rate when coupled
  double t_after = 1.0;      // extra time after the ramp (idealized mode)
  double release_decades = 9.0;  // coupled mode runs until |e| falls by 10^-this
  double dx = 0.05;
  Integrator integrator = Integrator::SplitStep;
};

struct LifterReport {
  LifterParams params;
  FrequencyTrack track;
  std::vector<double> schedule;   // omega_c(t) on track.t
  double max_tracking_error = 0.0;  // |omega_inst - omega_c| away from ramp corners
  double p_initial = 1.0;
  double p_final = 0.0;           // |e|^2 at the end of the ramp
  double efficiency = 0.0;        // p_final / p_initial
  double adiabatic_residual = 0.0;
  // coupled mode only
  std::optional<Spectrum> released;
  double released_peak = 0.0;
  double peak_offset_bins = 0.0;   // (peak - omega_final) / bin width
  double weight_at_original = 0.0; // |S(omega_start)|^2 / peak |S|^2

  json to_json() const;
};

NetworkSpec lifter_network(const LifterParams& p);
LifterReport energy_lifter(const LifterParams& p);

// ---------------------------------------------------------------------------
// efficiency sweep

struct SweepPoint {
  double ramp_time = 0.0;
  double p_final = 0.0;
  double envelope = 0.0;  // exp(-2 T / tau_c)
};

struct EfficiencySweep {
  double tau_c = 0.0;
  std::vector<SweepPoint> points;
  bool monotone = false;
  double max_envelope_gap = 0.0;  // max |p/envelope - 1|

  json to_json() const;
};

/// One energy_lifter run per ramp time, spread across `jobs` threads (0 = all).
EfficiencySweep efficiency_sweep(const std::vector<double>& ramp_times, double tau_c, LifterParams base = {},
                                 unsigned jobs = 0);

// ---------------------------------------------------------------------------
// probe verification

enum class ProbeTuning { Original, Shifted };

struct ProbeParams {
  double omega_a = 1.0;
  double delta_omega = 0.8;   // 20 combined linewidths (FWHM) at the default rates
  double gamma_a = 0.01;
  double gamma_b = 0.01;
  double inv_tau_a = 0.0;
  double inv_tau_b = 0.0;
  double ramp_time = 0.5;
  double separation = 10.0;
  double run_time = 0.0;  // 0: long enough for the probe to peak
  double dx = 0.05;
  ProbeTuning tuning = ProbeTuning::Shifted;
};

struct ProbeReport {
  ProbeParams params;
  double peak_probe = 0.0;     // peak |e_b|^2
  double t_peak = 0.0;
  double baseline_peak = 0.0;  // no ramp, probe on the original resonance
  double ratio_to_baseline = 0.0;
  Spectrum output;             // downstream of the probe

  json to_json() const;
};

/// Throws ConfigError("probe cannot discriminate") when |delta_omega| is
/// below three combined linewidths, 2 (gamma_a + gamma_b + 1/tau_a + 1/tau_b).
ProbeReport probe_verification(const ProbeParams& p);

struct Discrimination {
  ProbeReport matched;
  ProbeReport mismatched;
  double ratio_db = 0.0;
  json to_json() const;
};
Discrimination probe_discrimination(ProbeParams p);

// ---------------------------------------------------------------------------
// storage

struct StorageParams {
  double v_loop = 1.0;           // a, b coupling to each loop waveguide
  double v_gate_loop = 0.0632;   // c, d coupling to each loop waveguide
  double v_gate_port = 0.447;    // c to d1, d to d4
  double loop_length = 2.0;      // a to b along d2 / d3; one carrier wavelength
  double sigma = 4.0;
  double gate_detuning = 40.0;
  double t_switch = 38.0;        // c starts detuning
  double switch_time = 1.0;
  double settle = 40.0;          // accept phase continues while the bright part drains
  double hold = 40.0;
  double release = 150.0;
  double inv_tau_ab = 0.0;
  double dx = 0.02;
  int input_direction = +1;      // d1
  bool prepared = false;         // start in the dark state, no packet
  bool compensate = true;        // cancel the grid's resonance pulling
};

struct PhaseLedger {
  std::string name;
  double t_begin = 0.0;
  double t_end = 0.0;
  double stored_begin = 0.0;
  double stored_end = 0.0;
  std::map<std::string, double> populations;  // cavities at phase end
  std::map<std::string, double> leakage;      // per waveguide, gained during the phase
  double intrinsic = 0.0;
};

struct StorageReport {
  StorageParams params;
  std::vector<PhaseLedger> phases;
  std::vector<double> trace_t;
  std::vector<double> trace_stored;
  double hold_retention_error = 0.0;  // |stored_end - stored_begin| over the hold
  double hold_leakage = 0.0;          // all waveguides during the hold
  double release_d4 = 0.0;
  double release_other = 0.0;
  double release_intrinsic = 0.0;
  double ledger_sum = 0.0;
  double hold_decay_rate = 0.0;       // fitted -d ln(stored)/dt over the hold
  std::optional<Spectrum> released;
  RecordSet records;

  json to_json() const;
};

NetworkSpec storage_network(const StorageParams& p);
StorageReport cpt_storage(const StorageParams& p);

}  // namespace wgqed::experiments
