#pragma once

// Time-domain evolution of single-photon amplitudes on a discretized network.
//
// Waveguide amplitudes live on cell-centered grids with dt = dx / v_g, so free
// advection is an exact one-cell shift per step. Each cavity together with the
// grid cells it couples to forms a small linear system that is integrated
// locally every step.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgqed/model.hpp"

namespace wgqed {

/// The solver detected a non-finite amplitude or a boundary violation.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Discretization produced an inconsistent grid (e.g. two couplings in one cell).
class BuildError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct GridWaveguide {
  std::string id;
  int direction = 1;
  double x_min = 0.0;
  std::size_t cells = 0;
};

struct CouplingSite {
  std::size_t waveguide = 0;
  std::size_t cell = 0;
  std::size_t cavity = 0;
  cplx V;
  double snap = 0.0;  // |x_requested - cell center|
};

struct CavitySite {
  std::string id;
  TuningSchedule schedule;
  double inv_tau = 0.0;
  cplx initial{};
  std::vector<std::size_t> couplings;  // indices into DiscreteSystem::couplings
  std::optional<double> round_trip;    // nominal 2 pi n R / c
};

struct ProbeSite {
  std::string id;
  bool is_cavity = false;
  std::size_t index = 0;  // waveguide or cavity index
  std::size_t cell = 0;
  int stride = 1;
};

struct DiscreteSystem {
  double dx = 0.0;
  double dt = 0.0;
  double v_g = 1.0;
  double omega_0 = 0.0;
  double t_final = 0.0;
  Integrator integrator = Integrator::SplitStep;
  BoundaryKind boundary = BoundaryKind::HardAssert;
  std::size_t ramp_cells = 0;
  std::vector<double> snapshot_times;

  std::vector<GridWaveguide> waveguides;
  std::vector<CavitySite> cavities;
  std::vector<CouplingSite> couplings;
  std::vector<ProbeSite> probes;
  std::vector<PulseSpec> pulses;

  std::size_t waveguide_index(const std::string& id) const;
  std::size_t cavity_index(const std::string& id) const;
  double cell_x(std::size_t waveguide, std::size_t cell) const;
  /// Cell containing x on the given waveguide (clamped).
  std::size_t cell_at(std::size_t waveguide, double x) const;
};

/// Requires validate_network(spec) to be empty; throws BuildError otherwise.
DiscreteSystem build_system(const NetworkSpec& spec);

/// Instantaneous amplitudes. Waveguide grids are ring buffers so the exact
/// one-cell shift is an index rotation; a global carrier factor holds the
/// omega_0 phase. Use the accessors, which return physical amplitudes.
class FieldState {
 public:
  FieldState() = default;
  static FieldState zeros(const DiscreteSystem& sys);

  double t = 0.0;
  long step = 0;

  std::size_t waveguide_count() const { return buffers_.size(); }
  std::size_t cells(std::size_t w) const { return buffers_[w].size(); }
  std::size_t cavity_count() const { return cavities_.size(); }

  cplx field(std::size_t w, std::size_t k) const { return carrier_ * raw(w, k); }
  void set_field(std::size_t w, std::size_t k, cplx v) { raw(w, k) = v / carrier_; }
  cplx cavity(std::size_t m) const { return carrier_ * cavities_[m]; }
  void set_cavity(std::size_t m, cplx v) { cavities_[m] = v / carrier_; }

  std::vector<cplx> waveguide_values(std::size_t w) const;
  /// Sum of |phi|^2 over cells (without the dx factor) for one waveguide.
  double waveguide_weight(std::size_t w) const;

  /// Multiplies every amplitude by c.
  void scale(cplx c);

 private:
  friend class Stepper;

  cplx& raw(std::size_t w, std::size_t k) { return buffers_[w][(origin_[w] + k) % buffers_[w].size()]; }
  const cplx& raw(std::size_t w, std::size_t k) const {
    return buffers_[w][(origin_[w] + k) % buffers_[w].size()];
  }

  std::vector<std::vector<cplx>> buffers_;
  std::vector<std::size_t> origin_;
  std::vector<cplx> cavities_;
  cplx carrier_{1.0, 0.0};
};

/// Normalized Gaussian packet exp(-(x-x0)^2/(4 sigma^2)) exp(iQx), Q =
/// direction * detuning / v_g, on the pulse's waveguide; everything else zero.
FieldState init_gaussian_packet(const DiscreteSystem& sys, const PulseSpec& pulse);

/// Superposes every configured pulse (each unit-normalized and weighted by its
/// amplitude) with the configured initial cavity amplitudes, then normalizes
/// the whole state to unit norm when it is non-zero.
FieldState initial_state(const DiscreteSystem& sys);

/// sum_w sum_k |phi_w[k]|^2 dx + sum_m |e_m|^2
double total_norm(const DiscreteSystem& sys, const FieldState& state);

/// Advances states one step at a time, caching local propagators.
class Stepper {
 public:
  explicit Stepper(const DiscreteSystem& sys);
  ~Stepper();
  Stepper(Stepper&&) noexcept;

  void advance(FieldState& state);

  /// Probability removed by absorbing ramps or carried off the grid ends.
  double absorbed() const;
  /// Same, per waveguide.
  const std::vector<double>& outflow() const { return outflow_; }
  /// Probability lost through 1/tau_c, integrated with the trapezoid rule.
  double intrinsic_loss() const;
  const std::vector<double>& intrinsic() const { return intrinsic_; }
  /// Largest |phi| seen within 5 cells of any grid end.
  double max_boundary_amplitude() const { return max_boundary_; }

 private:
  struct Cache;

  void shift(FieldState& state);
  void couple_split_step(FieldState& state, double t0);
  void couple_euler(FieldState& state, double t_old, cplx carrier_old);
  void apply_boundary(FieldState& state);

  const DiscreteSystem& sys_;
  std::vector<Cache> caches_;
  std::vector<double> outflow_;
  std::vector<double> intrinsic_;
  double max_boundary_ = 0.0;
  std::vector<double> ramp_factors_;
};

/// Single step of the system's integrator (convenience; builds a fresh Stepper).
void step(const DiscreteSystem& sys, FieldState& state);

struct ProbeSeries {
  std::string id;
  std::vector<double> t;
  std::vector<cplx> values;
};

struct Snapshot {
  double t = 0.0;
  std::string waveguide_id;
  std::vector<double> x;
  std::vector<cplx> phi;
};

struct RunMetadata {
  double final_norm = 0.0;
  double absorbed = 0.0;
  double intrinsic_loss = 0.0;
  std::vector<std::pair<std::string, double>> outflow;  // per waveguide
  double max_boundary_amplitude = 0.0;
  long steps = 0;
  double dt = 0.0;
  double dx = 0.0;
  std::string integrator;
  std::vector<std::pair<std::string, double>> snap_distances;
  std::vector<std::pair<std::string, double>> round_trip_times;
  std::vector<std::string> deviations;
};

struct RecordSet {
  std::vector<ProbeSeries> probes;
  std::vector<Snapshot> snapshots;
  RunMetadata meta;
  std::optional<FieldState> final_state;

  const ProbeSeries& probe(const std::string& id) const;
};

struct RunOptions {
  /// Called after every `observer_stride`-th step (and once for the initial state).
  std::function<void(const FieldState&, const Stepper&)> observer;
  int observer_stride = 1;
  bool keep_final_state = false;
};

/// Steps from `initial` until t >= t_final, recording probes and snapshots.
/// Under HardAssert boundaries throws NumericalFailure("packet reached
/// boundary") once |phi| >= 1e-8 within 5 cells of a grid end.
RecordSet run(const DiscreteSystem& sys, FieldState initial, const RunOptions& opts = {});

/// Rotation frequency of an undriven cavity in the discrete scheme with a
/// constant resonance omega_c. The split-step grid pulls it away from omega_c
/// by roughly (omega_c - omega_0) * Gamma * dx / 3.
double discrete_resonance(const DiscreteSystem& sys, std::size_t cavity, double omega_c);

/// omega_c whose discrete_resonance equals `target` (secant iteration).
double compensated_resonance(const DiscreteSystem& sys, std::size_t cavity, double target);

/// Deviations from the printed finite-difference scheme, reported in run metadata.
std::vector<std::string> scheme_deviations(Integrator integrator);

}  // namespace wgqed
