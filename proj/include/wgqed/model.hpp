#pragma once

// Declarative description of a waveguide/cavity network and its structural
// validation. Units are dimensionless with hbar = 1.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wgqed {

using cplx = std::complex<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised when a configuration cannot be parsed or fails validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhysicalParams {
  double v_g = 1.0;      // group velocity
  double omega_0 = 0.0;  // waveguide carrier frequency
  double c_light = 1.0;  // only used for nominal round-trip metadata

  bool operator==(const PhysicalParams&) const = default;
};

// ---------------------------------------------------------------------------
// Tuning schedules

struct ConstantTuning {
  double omega = 0.0;
  bool operator==(const ConstantTuning&) const = default;
};

struct LinearRamp {
  double t_start = 0.0;
  double t_end = 1.0;
  double omega_start = 0.0;
  double omega_end = 0.0;
  bool operator==(const LinearRamp&) const = default;
};

struct PiecewiseLinear {
  std::vector<std::pair<double, double>> knots;  // (t, omega)
  bool operator==(const PiecewiseLinear&) const = default;
};

/// Time-dependent resonance omega_c(t). Continuous, clamped outside the knot
/// range, and exact at every knot.
class TuningSchedule {
 public:
  using Variant = std::variant<ConstantTuning, LinearRamp, PiecewiseLinear>;

  TuningSchedule() = default;
  TuningSchedule(ConstantTuning c) : v_(c) {}
  TuningSchedule(LinearRamp r) : v_(r) {}
  TuningSchedule(PiecewiseLinear p) : v_(std::move(p)) {}

  double operator()(double t) const;

  bool is_constant() const;
  /// Time interval over which the schedule varies; nullopt when constant.
  std::optional<std::pair<double, double>> active_window() const;

  const Variant& variant() const { return v_; }
  bool operator==(const TuningSchedule&) const = default;

 private:
  Variant v_{ConstantTuning{}};
};

struct CavityGeometry {
  double n_eff = 1.0;
  double radius = 1.0;
  bool operator==(const CavityGeometry&) const = default;
};

struct CavitySpec {
  std::string id;
  double omega_c0 = 0.0;
  double tau_c = kInfinity;  // infinite = lossless
  std::optional<TuningSchedule> tuning;
  std::optional<CavityGeometry> geometry;
  cplx initial_amplitude{0.0, 0.0};

  double inverse_lifetime() const { return std::isinf(tau_c) ? 0.0 : 1.0 / tau_c; }
  double resonance(double t) const { return tuning ? (*tuning)(t) : omega_c0; }
  bool operator==(const CavitySpec&) const = default;
};

struct WaveguideSpec {
  std::string id;
  int direction = +1;
  double length = 1.0;
  double x_min = 0.0;

  double x_max() const { return x_min + length; }
  bool operator==(const WaveguideSpec&) const = default;
};

struct CouplingSpec {
  std::string waveguide_id;
  std::string cavity_id;
  double x = 0.0;
  cplx V{1.0, 0.0};
  bool operator==(const CouplingSpec&) const = default;
};

struct PulseSpec {
  std::string waveguide_id;
  double x0 = 0.0;
  double sigma = 1.0;
  double detuning = 0.0;  // omega_p - omega_0
  cplx amplitude{1.0, 0.0};
  bool operator==(const PulseSpec&) const = default;
};

struct WaveguidePoint {
  std::string waveguide_id;
  double x = 0.0;
  bool operator==(const WaveguidePoint&) const = default;
};

struct CavityProbe {
  std::string cavity_id;
  bool operator==(const CavityProbe&) const = default;
};

struct ProbeSpec {
  std::string id;
  std::variant<WaveguidePoint, CavityProbe> target;
  int stride = 1;
  bool operator==(const ProbeSpec&) const = default;
};

enum class Integrator { SplitStep, EulerPaper };

enum class BoundaryKind { HardAssert, AbsorbingRamp };

struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::HardAssert;
  double width = 0.0;  // ramp length, AbsorbingRamp only
  bool operator==(const BoundarySpec&) const = default;
};

struct SimulationConfig {
  double dx = 0.05;
  double t_final = 1.0;
  Integrator integrator = Integrator::SplitStep;
  BoundarySpec boundary;
  std::vector<double> snapshot_times;
  bool operator==(const SimulationConfig&) const = default;
};

struct NetworkSpec {
  PhysicalParams params;
  std::vector<WaveguideSpec> waveguides;
  std::vector<CavitySpec> cavities;
  std::vector<CouplingSpec> couplings;
  std::vector<PulseSpec> pulses;
  std::vector<ProbeSpec> probes;
  SimulationConfig sim;

  const WaveguideSpec* find_waveguide(const std::string& id) const;
  const CavitySpec* find_cavity(const std::string& id) const;
  bool operator==(const NetworkSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Grid helpers shared by validation and the solver.

/// Number of cells of width dx covering the waveguide.
std::size_t cell_count(const WaveguideSpec& wg, double dx);
/// Index of the cell containing x (clamped to the grid).
std::size_t cell_index(const WaveguideSpec& wg, double dx, double x);
double cell_center(const WaveguideSpec& wg, double dx, std::size_t k);

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const;
  std::string summary() const;
};

ValidationReport validate_network(const NetworkSpec& spec);

const char* to_string(Integrator i);
const char* to_string(BoundaryKind b);

}  // namespace wgqed
