#include "wgqed/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace wgqed {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kBoundaryTolerance = 1e-8;
constexpr std::size_t kBoundaryCells = 5;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteSystem

std::size_t DiscreteSystem::waveguide_index(const std::string& id) const {
  for (std::size_t i = 0; i < waveguides.size(); ++i)
    if (waveguides[i].id == id) return i;
  throw BuildError("unknown waveguide '" + id + "'");
}

std::size_t DiscreteSystem::cavity_index(const std::string& id) const {
  for (std::size_t i = 0; i < cavities.size(); ++i)
    if (cavities[i].id == id) return i;
  throw BuildError("unknown cavity '" + id + "'");
}

double DiscreteSystem::cell_x(std::size_t w, std::size_t k) const {
  return waveguides[w].x_min + (static_cast<double>(k) + 0.5) * dx;
}

std::size_t DiscreteSystem::cell_at(std::size_t w, double x) const {
  const auto& g = waveguides[w];
  const double f = std::floor((x - g.x_min) / dx);
  if (!(f > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(f), g.cells - 1);
}

DiscreteSystem build_system(const NetworkSpec& spec) {
  const auto report = validate_network(spec);
  if (!report.ok()) {
    for (const auto& v : report.violations) {
      if (v.code == "coupling_cell_collision") throw BuildError("two couplings snap to the same cell: " + v.message);
    }
    throw BuildError("invalid network:\n" + report.summary());
  }

  DiscreteSystem sys;
  sys.dx = spec.sim.dx;
  sys.v_g = spec.params.v_g;
  sys.dt = sys.dx / sys.v_g;
  sys.omega_0 = spec.params.omega_0;
  sys.t_final = spec.sim.t_final;
  sys.integrator = spec.sim.integrator;
  sys.boundary = spec.sim.boundary.kind;
  if (sys.boundary == BoundaryKind::AbsorbingRamp)
    sys.ramp_cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(spec.sim.boundary.width / sys.dx)));
  sys.snapshot_times = spec.sim.snapshot_times;
  std::sort(sys.snapshot_times.begin(), sys.snapshot_times.end());
  sys.pulses = spec.pulses;

  for (const auto& w : spec.waveguides)
    sys.waveguides.push_back({w.id, w.direction, w.x_min, cell_count(w, sys.dx)});

  for (const auto& c : spec.cavities) {
    CavitySite site;
    site.id = c.id;
    site.schedule = c.tuning ? *c.tuning : TuningSchedule(ConstantTuning{c.omega_c0});
    site.inv_tau = c.inverse_lifetime();
    site.initial = c.initial_amplitude;
    if (c.geometry)
      site.round_trip = 2.0 * std::numbers::pi * c.geometry->n_eff * c.geometry->radius / spec.params.c_light;
    sys.cavities.push_back(std::move(site));
  }

  for (const auto& c : spec.couplings) {
    CouplingSite site;
    site.waveguide = sys.waveguide_index(c.waveguide_id);
    site.cavity = sys.cavity_index(c.cavity_id);
    site.cell = sys.cell_at(site.waveguide, c.x);
    site.V = c.V;
    site.snap = std::abs(c.x - sys.cell_x(site.waveguide, site.cell));
    for (const auto& other : sys.couplings) {
      if (other.waveguide == site.waveguide && other.cell == site.cell)
        throw BuildError("couplings " + c.waveguide_id + "/" + sys.cavities[other.cavity].id + " and " +
                         c.waveguide_id + "/" + c.cavity_id + " snap to the same cell");
    }
    sys.cavities[site.cavity].couplings.push_back(sys.couplings.size());
    sys.couplings.push_back(site);
  }

  for (const auto& p : spec.probes) {
    ProbeSite site;
    site.id = p.id;
    site.stride = p.stride;
    if (const auto* wp = std::get_if<WaveguidePoint>(&p.target)) {
      site.index = sys.waveguide_index(wp->waveguide_id);
      site.cell = sys.cell_at(site.index, wp->x);
    } else {
      site.is_cavity = true;
      site.index = sys.cavity_index(std::get<CavityProbe>(p.target).cavity_id);
    }
    sys.probes.push_back(site);
  }
  return sys;
}

// ---------------------------------------------------------------------------
// FieldState

FieldState FieldState::zeros(const DiscreteSystem& sys) {
  FieldState s;
  for (const auto& w : sys.waveguides) s.buffers_.emplace_back(w.cells, cplx{});
  s.origin_.assign(sys.waveguides.size(), 0);
  s.cavities_.assign(sys.cavities.size(), cplx{});
  return s;
}

std::vector<cplx> FieldState::waveguide_values(std::size_t w) const {
  std::vector<cplx> out(cells(w));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = field(w, k);
  return out;
}

double FieldState::waveguide_weight(std::size_t w) const {
  double sum = 0.0;
  for (const auto& v : buffers_[w]) sum += std::norm(v);
  return sum * std::norm(carrier_);
}

void FieldState::scale(cplx c) { carrier_ *= c; }

FieldState init_gaussian_packet(const DiscreteSystem& sys, const PulseSpec& pulse) {
  FieldState s = FieldState::zeros(sys);
  const std::size_t w = sys.waveguide_index(pulse.waveguide_id);
  const auto& g = sys.waveguides[w];
  const double Q = g.direction * pulse.detuning / sys.v_g;
  const std::size_t lo = sys.cell_at(w, pulse.x0 - 5.0 * pulse.sigma);
  const std::size_t hi = sys.cell_at(w, pulse.x0 + 5.0 * pulse.sigma);
  if ((lo == 0 || hi + 1 == g.cells) && g.cells > 2)
    throw BuildError("packet support outside grid of waveguide '" + g.id + "'");

  double weight = 0.0;
  std::vector<cplx> values(g.cells);
  for (std::size_t k = 0; k < g.cells; ++k) {
    const double x = sys.cell_x(w, k);
    const double d = (x - pulse.x0) / pulse.sigma;
    const double envelope = std::exp(-0.25 * d * d);
    values[k] = envelope * std::exp(I * (Q * x));
    weight += envelope * envelope;
  }
  const double A = 1.0 / std::sqrt(weight * sys.dx);
  for (std::size_t k = 0; k < g.cells; ++k) s.set_field(w, k, A * values[k]);
  return s;
}

FieldState initial_state(const DiscreteSystem& sys) {
  FieldState s = FieldState::zeros(sys);
  for (const auto& p : sys.pulses) {
    const FieldState packet = init_gaussian_packet(sys, p);
    const std::size_t w = sys.waveguide_index(p.waveguide_id);
    for (std::size_t k = 0; k < s.cells(w); ++k) s.set_field(w, k, s.field(w, k) + p.amplitude * packet.field(w, k));
  }
  for (std::size_t m = 0; m < sys.cavities.size(); ++m) s.set_cavity(m, sys.cavities[m].initial);
  const double norm = total_norm(sys, s);
  if (norm > 0.0) s.scale(1.0 / std::sqrt(norm));
  return s;
}

double total_norm(const DiscreteSystem& sys, const FieldState& state) {
  double sum = 0.0;
  for (std::size_t w = 0; w < state.waveguide_count(); ++w) sum += state.waveguide_weight(w) * sys.dx;
  for (std::size_t m = 0; m < state.cavity_count(); ++m) sum += std::norm(state.cavity(m));
  return sum;
}

// ---------------------------------------------------------------------------
// Stepper

// Per-cavity local system: unknowns are sqrt(dx) * phi at each coupling cell
// followed by the cavity amplitude, in the frame rotating at omega_0.
struct Stepper::Cache {
  std::vector<std::size_t> sites;
  std::size_t dim = 0;
  Matrix coupling;  // Hermitian off-diagonal part of H
  Matrix propagator;
  cplx diag_a{std::nan(""), 0.0};
  cplx diag_b{std::nan(""), 0.0};
};

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;

Stepper::Stepper(const DiscreteSystem& sys)
    : sys_(sys), outflow_(sys.waveguides.size(), 0.0), intrinsic_(sys.cavities.size(), 0.0) {
  const double root_dx = std::sqrt(sys.dx);
  for (const auto& cav : sys.cavities) {
    Cache c;
    c.sites = cav.couplings;
    c.dim = c.sites.size() + 1;
    c.coupling = Matrix::Zero(static_cast<Eigen::Index>(c.dim), static_cast<Eigen::Index>(c.dim));
    const auto last = static_cast<Eigen::Index>(c.dim - 1);
    for (std::size_t j = 0; j < c.sites.size(); ++j) {
      const cplx V = sys.couplings[c.sites[j]].V;
      const auto row = static_cast<Eigen::Index>(j);
      c.coupling(row, last) = V / root_dx;
      c.coupling(last, row) = std::conj(V) / root_dx;
    }
    caches_.push_back(std::move(c));
  }
  if (sys.boundary == BoundaryKind::AbsorbingRamp) {
    // Per-step attenuation rising quadratically into the ramp; a sample that
    // crosses the full ramp is damped by roughly e^-40 in amplitude.
    const auto W = static_cast<double>(sys.ramp_cells);
    const double peak = 120.0 / W;
    for (std::size_t j = 0; j < sys.ramp_cells; ++j) {
      const double s = (static_cast<double>(j) + 1.0) / W;
      ramp_factors_.push_back(std::exp(-peak * s * s));
    }
  }
}

void Stepper::shift(FieldState& state) {
  for (std::size_t w = 0; w < state.buffers_.size(); ++w) {
    auto& buf = state.buffers_[w];
    const std::size_t n = buf.size();
    std::size_t& o = state.origin_[w];
    if (sys_.waveguides[w].direction > 0) {
      o = (o + n - 1) % n;
      // buf[o] held the last cell, which leaves through the downstream end.
      outflow_[w] += std::norm(buf[o]) * std::norm(state.carrier_) * sys_.dx;
      buf[o] = 0.0;
    } else {
      outflow_[w] += std::norm(buf[o]) * std::norm(state.carrier_) * sys_.dx;
      buf[o] = 0.0;
      o = (o + 1) % n;
    }
  }
}

void Stepper::couple_split_step(FieldState& state, double t0) {
  const double dt = sys_.dt;
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const double root_dx = std::sqrt(sys_.dx);

  for (std::size_t m = 0; m < caches_.size(); ++m) {
    auto& c = caches_[m];
    const auto& cav = sys_.cavities[m];
    const auto last = static_cast<Eigen::Index>(c.dim - 1);
    const cplx da{cav.schedule(t0 + c1 * dt) - sys_.omega_0, -cav.inv_tau};
    const cplx db{cav.schedule(t0 + c2 * dt) - sys_.omega_0, -cav.inv_tau};
    if (da != c.diag_a || db != c.diag_b) {
      // Fourth-order Magnus step with two Gauss points:
      //   Omega = dt/2 (A1 + A2) + sqrt(3)/12 dt^2 [A2, A1],  A = -i H.
      Matrix A1 = -I * c.coupling;
      Matrix A2 = A1;
      A1(last, last) = -I * da;
      A2(last, last) = -I * db;
      Matrix omega = 0.5 * dt * (A1 + A2);
      if (da != db) omega += (std::sqrt(3.0) / 12.0) * dt * dt * (A2 * A1 - A1 * A2);
      c.propagator = omega.exp();
      c.diag_a = da;
      c.diag_b = db;
    }

    Vector y(static_cast<Eigen::Index>(c.dim));
    for (std::size_t j = 0; j < c.sites.size(); ++j) {
      const auto& site = sys_.couplings[c.sites[j]];
      y(static_cast<Eigen::Index>(j)) = root_dx * state.raw(site.waveguide, site.cell);
    }
    y(last) = state.cavities_[m];
    const Vector out = c.propagator * y;
    // coupling exchange is unitary, so the cluster's norm drop is the 1/tau loss
    if (cav.inv_tau > 0.0) intrinsic_[m] += y.squaredNorm() - out.squaredNorm();
    for (std::size_t j = 0; j < c.sites.size(); ++j) {
      const auto& site = sys_.couplings[c.sites[j]];
      const cplx v = out(static_cast<Eigen::Index>(j)) / root_dx;
      if (!finite(v)) throw NumericalFailure("non-finite waveguide amplitude", state.step);
      state.raw(site.waveguide, site.cell) = v;
    }
    if (!finite(out(last))) throw NumericalFailure("non-finite cavity amplitude", state.step);
    state.cavities_[m] = out(last);
  }
}

void Stepper::couple_euler(FieldState& state, double t_old, cplx carrier_old) {
  // Explicit Euler on physical amplitudes. The advected field has already
  // been shifted (upwind at Courant 1) and carries the (1 - i w0 dt) factor
  // through the carrier. The cavity reads its coupling cell at the half step.
  const double dt = sys_.dt;
  const double dx = sys_.dx;
  const cplx carrier_new = state.carrier_;
  for (std::size_t m = 0; m < caches_.size(); ++m) {
    const auto& cav = sys_.cavities[m];
    const cplx e_old = carrier_old * state.cavities_[m];
    const cplx detune{cav.schedule(t_old), -cav.inv_tau};
    cplx e_new = e_old * (1.0 - I * detune * dt);
    for (std::size_t idx : caches_[m].sites) {
      const auto& site = sys_.couplings[idx];
      const cplx incoming = carrier_new * state.raw(site.waveguide, site.cell);
      const cplx outgoing = incoming - I * dt * site.V * e_old / dx;
      e_new -= I * dt * std::conj(site.V) * 0.5 * (incoming + outgoing);
      if (!finite(outgoing)) throw NumericalFailure("non-finite waveguide amplitude", state.step);
      state.raw(site.waveguide, site.cell) = outgoing / carrier_new;
    }
    if (!finite(e_new)) throw NumericalFailure("non-finite cavity amplitude", state.step);
    state.cavities_[m] = e_new / carrier_new;
  }
}

void Stepper::apply_boundary(FieldState& state) {
  const double weight = std::norm(state.carrier_) * sys_.dx;
  for (std::size_t w = 0; w < state.buffers_.size(); ++w) {
    const std::size_t n = state.cells(w);
    const std::size_t edge = std::min(kBoundaryCells, n);
    double worst = 0.0;
    for (std::size_t k = 0; k < edge; ++k) {
      worst = std::max(worst, std::abs(state.field(w, k)));
      worst = std::max(worst, std::abs(state.field(w, n - 1 - k)));
    }
    max_boundary_ = std::max(max_boundary_, worst);

    if (sys_.boundary == BoundaryKind::HardAssert) {
      if (worst >= kBoundaryTolerance) throw NumericalFailure("packet reached boundary", state.step);
      continue;
    }
    // Absorbing ramp over the last cells in the propagation direction.
    const bool right = sys_.waveguides[w].direction > 0;
    const std::size_t W = std::min(sys_.ramp_cells, n);
    for (std::size_t j = 0; j < W; ++j) {
      const std::size_t k = right ? n - W + j : W - 1 - j;
      cplx& v = state.raw(w, k);
      const double before = std::norm(v);
      v *= ramp_factors_[j];
      outflow_[w] += (before - std::norm(v)) * weight;
    }
  }
}

double Stepper::absorbed() const {
  double sum = 0.0;
  for (double v : outflow_) sum += v;
  return sum;
}

double Stepper::intrinsic_loss() const {
  double sum = 0.0;
  for (double v : intrinsic_) sum += v;
  return sum;
}

void Stepper::advance(FieldState& state) {
  const double t_old = state.t;
  const cplx carrier_old = state.carrier_;
  std::vector<double> before(state.cavities_.size());
  for (std::size_t m = 0; m < before.size(); ++m) before[m] = std::norm(state.cavity(m));
  shift(state);
  ++state.step;
  state.t = static_cast<double>(state.step) * sys_.dt;

  if (sys_.integrator == Integrator::SplitStep) {
    couple_split_step(state, t_old);
    // Carrier holds exp(-i w0 t); the local systems run in the rotating frame.
    state.carrier_ = carrier_old * std::exp(-I * (sys_.omega_0 * sys_.dt));
  } else {
    state.carrier_ = carrier_old * (1.0 - I * (sys_.omega_0 * sys_.dt));
    // The Euler cavity term uses omega_c itself, so undo the frame removal.
    couple_euler(state, t_old, carrier_old);
  }
  // the Euler scheme is not norm-exact, so its loss is a trapezoid estimate of 2/tau |e|^2 dt
  if (sys_.integrator == Integrator::EulerPaper)
    for (std::size_t m = 0; m < before.size(); ++m)
      intrinsic_[m] += sys_.cavities[m].inv_tau * (before[m] + std::norm(state.cavity(m))) * sys_.dt;
  apply_boundary(state);
}

void step(const DiscreteSystem& sys, FieldState& state) {
  Stepper s(sys);
  s.advance(state);
}

double discrete_resonance(const DiscreteSystem& sys, std::size_t cavity, double omega_c) {
  const auto& cav = sys.cavities.at(cavity);
  const auto n = static_cast<Eigen::Index>(cav.couplings.size() + 1);
  const double root_dx = std::sqrt(sys.dx);
  Matrix H = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    const cplx V = sys.couplings[cav.couplings[static_cast<std::size_t>(j)]].V;
    H(j, n - 1) = V / root_dx;
    H(n - 1, j) = std::conj(V) / root_dx;
  }
  H(n - 1, n - 1) = omega_c - sys.omega_0;
  const Matrix U = (-I * sys.dt * H).exp();
  return sys.omega_0 - std::arg(U(n - 1, n - 1)) / sys.dt;
}

double compensated_resonance(const DiscreteSystem& sys, std::size_t cavity, double target) {
  double x0 = target;
  double f0 = discrete_resonance(sys, cavity, x0) - target;
  double x1 = target - f0;
  for (int it = 0; it < 30; ++it) {
    const double f1 = discrete_resonance(sys, cavity, x1) - target;
    if (std::abs(f1) < 1e-14 * std::max(1.0, std::abs(target)) || f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
  }
  return x1;
}

// ---------------------------------------------------------------------------
// run

const ProbeSeries& RecordSet::probe(const std::string& id) const {
  for (const auto& p : probes)
    if (p.id == id) return p;
  throw std::out_of_range("no probe '" + id + "'");
}

std::vector<std::string> scheme_deviations(Integrator integrator) {
  std::vector<std::string> out = {
      "advection difference taken upwind along each waveguide direction (printed difference is downwind)",
      "cavity driven by conj(V) * phi, matching the continuous equations (printed discrete form uses V)",
      "couplings enter waveguide and cavity equations pairwise for every waveguide/cavity pair",
  };
  if (integrator == Integrator::EulerPaper) {
    out.push_back("cavity samples its coupling cell at the half step (mean of incoming and outgoing field)");
    out.push_back("omega_0 phase applied to the advected value");
  } else {
    out.push_back("local coupling systems integrated with a fourth-order Magnus exponential");
  }
  return out;
}

RecordSet run(const DiscreteSystem& sys, FieldState initial, const RunOptions& opts) {
  if (!(sys.t_final > 0.0)) throw ConfigError("t_final must be positive");
  RecordSet rec;
  for (const auto& p : sys.probes) rec.probes.push_back({p.id, {}, {}});

  Stepper stepper(sys);
  FieldState state = std::move(initial);
  const long total_steps = static_cast<long>(std::ceil(sys.t_final / sys.dt - 1e-9));
  std::size_t next_snapshot = 0;

  auto record = [&] {
    for (std::size_t i = 0; i < sys.probes.size(); ++i) {
      const auto& p = sys.probes[i];
      if (state.step % p.stride != 0) continue;
      rec.probes[i].t.push_back(state.t);
      rec.probes[i].values.push_back(p.is_cavity ? state.cavity(p.index) : state.field(p.index, p.cell));
    }
    while (next_snapshot < sys.snapshot_times.size() && state.t >= sys.snapshot_times[next_snapshot] - 0.5 * sys.dt) {
      for (std::size_t w = 0; w < sys.waveguides.size(); ++w) {
        Snapshot snap;
        snap.t = state.t;
        snap.waveguide_id = sys.waveguides[w].id;
        snap.phi = state.waveguide_values(w);
        for (std::size_t k = 0; k < snap.phi.size(); ++k) snap.x.push_back(sys.cell_x(w, k));
        rec.snapshots.push_back(std::move(snap));
      }
      ++next_snapshot;
    }
    if (opts.observer && state.step % std::max(1, opts.observer_stride) == 0) opts.observer(state, stepper);
  };

  record();
  while (state.step < total_steps) {
    stepper.advance(state);
    record();
  }

  auto& meta = rec.meta;
  meta.final_norm = total_norm(sys, state);
  meta.absorbed = stepper.absorbed();
  meta.intrinsic_loss = stepper.intrinsic_loss();
  for (std::size_t w = 0; w < sys.waveguides.size(); ++w)
    meta.outflow.emplace_back(sys.waveguides[w].id, stepper.outflow()[w]);
  meta.max_boundary_amplitude = stepper.max_boundary_amplitude();
  meta.steps = state.step;
  meta.dt = sys.dt;
  meta.dx = sys.dx;
  meta.integrator = to_string(sys.integrator);
  for (const auto& c : sys.couplings)
    meta.snap_distances.emplace_back(sys.waveguides[c.waveguide].id + "/" + sys.cavities[c.cavity].id, c.snap);
  for (const auto& c : sys.cavities)
    if (c.round_trip) meta.round_trip_times.emplace_back(c.id, *c.round_trip);
  meta.deviations = scheme_deviations(sys.integrator);
  if (opts.keep_final_state) rec.final_state = std::move(state);
  return rec;
}

}  // namespace wgqed
