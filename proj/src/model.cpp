#include "wgqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace wgqed {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double TuningSchedule::operator()(double t) const {
  return std::visit(
      overloaded{
          [](const ConstantTuning& c) { return c.omega; },
          [t](const LinearRamp& r) {
            if (t <= r.t_start) return r.omega_start;
            if (t >= r.t_end) return r.omega_end;
            const double s = (t - r.t_start) / (r.t_end - r.t_start);
            return r.omega_start + (r.omega_end - r.omega_start) * s;
          },
          [t](const PiecewiseLinear& p) {
            const auto& k = p.knots;
            if (k.empty()) return 0.0;
            if (t <= k.front().first) return k.front().second;
            if (t >= k.back().first) return k.back().second;
            // First knot strictly after t; t then lies in [it-1, it).
            auto it = std::upper_bound(k.begin(), k.end(), t,
                                       [](double v, const auto& knot) { return v < knot.first; });
            const auto& [t0, w0] = *(it - 1);
            const auto& [t1, w1] = *it;
            return w0 + (w1 - w0) * ((t - t0) / (t1 - t0));
          },
      },
      v_);
}

bool TuningSchedule::is_constant() const { return !active_window().has_value(); }

std::optional<std::pair<double, double>> TuningSchedule::active_window() const {
  return std::visit(
      overloaded{
          [](const ConstantTuning&) -> std::optional<std::pair<double, double>> { return std::nullopt; },
          [](const LinearRamp& r) -> std::optional<std::pair<double, double>> {
            if (r.omega_start == r.omega_end) return std::nullopt;
            return std::make_pair(r.t_start, r.t_end);
          },
          [](const PiecewiseLinear& p) -> std::optional<std::pair<double, double>> {
            if (p.knots.size() < 2) return std::nullopt;
            const bool flat = std::all_of(p.knots.begin(), p.knots.end(),
                                          [&](const auto& k) { return k.second == p.knots.front().second; });
            if (flat) return std::nullopt;
            return std::make_pair(p.knots.front().first, p.knots.back().first);
          },
      },
      v_);
}

const WaveguideSpec* NetworkSpec::find_waveguide(const std::string& id) const {
  auto it = std::find_if(waveguides.begin(), waveguides.end(), [&](const auto& w) { return w.id == id; });
  return it == waveguides.end() ? nullptr : &*it;
}

const CavitySpec* NetworkSpec::find_cavity(const std::string& id) const {
  auto it = std::find_if(cavities.begin(), cavities.end(), [&](const auto& c) { return c.id == id; });
  return it == cavities.end() ? nullptr : &*it;
}

std::size_t cell_count(const WaveguideSpec& wg, double dx) {
  const double n = std::round(wg.length / dx);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

std::size_t cell_index(const WaveguideSpec& wg, double dx, double x) {
  const std::size_t n = cell_count(wg, dx);
  const double f = std::floor((x - wg.x_min) / dx);
  if (!(f > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(f), n - 1);
}

double cell_center(const WaveguideSpec& wg, double dx, std::size_t k) {
  return wg.x_min + (static_cast<double>(k) + 0.5) * dx;
}

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(violations.begin(), violations.end(), [&](const auto& v) { return v.code == code; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.code << ": " << v.message << '\n';
  return os.str();
}

const char* to_string(Integrator i) {
  return i == Integrator::SplitStep ? "split_step" : "euler_paper";
}

const char* to_string(BoundaryKind b) {
  return b == BoundaryKind::HardAssert ? "hard_assert" : "absorbing_ramp";
}

namespace {

bool finite(double v) { return std::isfinite(v); }
bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

class Collector {
 public:
  void add(std::string code, std::string message) {
    report_.violations.push_back({std::move(code), std::move(message)});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

void check_schedule(Collector& out, const std::string& cavity, const TuningSchedule& s) {
  std::visit(overloaded{
                 [&](const ConstantTuning& c) {
                   if (!finite(c.omega)) out.add("non_finite", "cavity '" + cavity + "' tuning omega");
                 },
                 [&](const LinearRamp& r) {
                   if (!finite(r.t_start) || !finite(r.t_end) || !finite(r.omega_start) || !finite(r.omega_end))
                     out.add("non_finite", "cavity '" + cavity + "' linear ramp");
                   else if (!(r.t_end > r.t_start))
                     out.add("schedule_not_increasing", "cavity '" + cavity + "' ramp needs t_end > t_start");
                 },
                 [&](const PiecewiseLinear& p) {
                   if (p.knots.empty()) out.add("schedule_empty", "cavity '" + cavity + "' has no knots");
                   for (std::size_t i = 0; i < p.knots.size(); ++i) {
                     if (!finite(p.knots[i].first) || !finite(p.knots[i].second)) {
                       out.add("non_finite", "cavity '" + cavity + "' knot " + std::to_string(i));
                     } else if (i > 0 && !(p.knots[i].first > p.knots[i - 1].first)) {
                       out.add("schedule_not_increasing",
                               "cavity '" + cavity + "' knot times must be strictly increasing");
                     }
                   }
                 },
             },
             s.variant());
}

bool inside(const WaveguideSpec& w, double x) { return x >= w.x_min && x <= w.x_max(); }

}  // namespace

ValidationReport validate_network(const NetworkSpec& spec) {
  Collector out;
  const auto& p = spec.params;
  if (!finite(p.v_g) || !(p.v_g > 0.0)) out.add("nonpositive_vg", "group velocity must be positive");
  if (!finite(p.omega_0) || p.omega_0 < 0.0) out.add("negative_omega0", "omega_0 must be finite and >= 0");
  if (!finite(p.c_light) || !(p.c_light > 0.0)) out.add("nonpositive_c", "c_light must be positive");

  const auto& sim = spec.sim;
  const bool dx_ok = finite(sim.dx) && sim.dx > 0.0;
  if (!dx_ok) out.add("nonpositive_dx", "dx must be positive");
  if (!finite(sim.t_final) || !(sim.t_final > 0.0)) out.add("nonpositive_t_final", "t_final must be positive");
  if (sim.boundary.kind == BoundaryKind::AbsorbingRamp &&
      (!finite(sim.boundary.width) || !(sim.boundary.width > 0.0)))
    out.add("bad_boundary_width", "absorbing ramp width must be positive");
  for (double t : sim.snapshot_times)
    if (!finite(t) || t < 0.0) out.add("bad_snapshot_time", "snapshot times must be finite and >= 0");

  if (spec.waveguides.empty()) out.add("no_waveguide", "at least one waveguide is required");

  std::set<std::string> ids;
  auto claim = [&](const std::string& kind, const std::string& id) {
    if (id.empty()) out.add("empty_id", kind + " with empty id");
    else if (!ids.insert(id).second) out.add("duplicate_id", "id '" + id + "' is used more than once");
  };

  for (const auto& w : spec.waveguides) {
    claim("waveguide", w.id);
    if (w.direction != 1 && w.direction != -1)
      out.add("bad_direction", "waveguide '" + w.id + "' direction must be +1 or -1");
    if (!finite(w.length) || !(w.length > 0.0))
      out.add("nonpositive_length", "waveguide '" + w.id + "' length must be positive");
    if (!finite(w.x_min)) out.add("non_finite", "waveguide '" + w.id + "' x_min");
    if (dx_ok && finite(w.length) && w.length > 0.0 && w.length / sim.dx > 5e8)
      out.add("grid_too_large", "waveguide '" + w.id + "' needs more than 5e8 cells");
  }
  for (const auto& c : spec.cavities) {
    claim("cavity", c.id);
    if (std::isnan(c.tau_c) || !(c.tau_c > 0.0))
      out.add("nonpositive_tau", "cavity '" + c.id + "' tau_c must be > 0 or infinite");
    if (!finite(c.omega_c0)) out.add("non_finite", "cavity '" + c.id + "' omega_c0");
    if (!finite(c.initial_amplitude)) out.add("non_finite", "cavity '" + c.id + "' initial amplitude");
    if (c.tuning) check_schedule(out, c.id, *c.tuning);
    if (c.geometry && (!finite(c.geometry->n_eff) || !(c.geometry->n_eff > 0.0) ||
                       !finite(c.geometry->radius) || !(c.geometry->radius > 0.0)))
      out.add("bad_geometry", "cavity '" + c.id + "' geometry must be positive");
  }
  for (const auto& pr : spec.probes) claim("probe", pr.id);

  auto wg_ok = [&](const WaveguideSpec& w) {
    return finite(w.length) && w.length > 0.0 && finite(w.x_min) && (w.direction == 1 || w.direction == -1);
  };

  // (waveguide id, cell) -> coupling index, for collision detection.
  std::map<std::pair<std::string, std::size_t>, std::size_t> occupied;
  for (std::size_t i = 0; i < spec.couplings.size(); ++i) {
    const auto& c = spec.couplings[i];
    const std::string name = "coupling #" + std::to_string(i) + " (" + c.waveguide_id + "/" + c.cavity_id + ")";
    const auto* w = spec.find_waveguide(c.waveguide_id);
    if (!w) out.add("unresolved_waveguide", name + ": unresolved waveguide reference '" + c.waveguide_id + "'");
    if (!spec.find_cavity(c.cavity_id))
      out.add("unresolved_cavity", name + ": unresolved cavity reference '" + c.cavity_id + "'");
    if (!finite(c.V) || !(std::abs(c.V) > 0.0)) out.add("zero_coupling", name + ": |V| must be positive");
    if (!finite(c.x)) {
      out.add("non_finite", name + ": position");
    } else if (w && wg_ok(*w)) {
      if (!inside(*w, c.x)) {
        out.add("coupling_outside", name + ": position outside its waveguide");
      } else if (dx_ok) {
        const auto key = std::make_pair(w->id, cell_index(*w, sim.dx, c.x));
        auto [it, fresh] = occupied.emplace(key, i);
        if (!fresh)
          out.add("coupling_cell_collision", name + " shares a grid cell with coupling #" + std::to_string(it->second));
      }
    }
  }

  for (std::size_t i = 0; i < spec.pulses.size(); ++i) {
    const auto& pu = spec.pulses[i];
    const std::string name = "pulse #" + std::to_string(i);
    const auto* w = spec.find_waveguide(pu.waveguide_id);
    if (!w) out.add("unresolved_waveguide", name + ": unresolved waveguide reference '" + pu.waveguide_id + "'");
    if (!finite(pu.sigma) || !(pu.sigma > 0.0)) out.add("nonpositive_sigma", name + ": sigma must be positive");
    if (!finite(pu.x0) || !finite(pu.detuning) || !finite(pu.amplitude)) out.add("non_finite", name + ": parameters");
    if (!w || !wg_ok(*w) || !finite(pu.sigma) || !(pu.sigma > 0.0) || !finite(pu.x0)) continue;
    const double lo = pu.x0 - 5.0 * pu.sigma;
    const double hi = pu.x0 + 5.0 * pu.sigma;
    if (lo < w->x_min || hi > w->x_max()) out.add("packet_support_outside", name + ": packet support outside waveguide");
    if (!dx_ok) continue;
    for (const auto& c : spec.couplings) {
      if (c.waveguide_id != w->id || !finite(c.x) || !inside(*w, c.x)) continue;
      const std::size_t k = cell_index(*w, sim.dx, c.x);
      const double left = w->x_min + static_cast<double>(k) * sim.dx;
      if (left + sim.dx > lo && left < hi) {
        out.add("packet_overlaps_coupling", name + ": packet support overlaps a coupling cell at t = 0");
        break;
      }
    }
  }

  for (const auto& pr : spec.probes) {
    if (pr.stride < 1) out.add("bad_stride", "probe '" + pr.id + "': stride must be >= 1");
    if (const auto* wp = std::get_if<WaveguidePoint>(&pr.target)) {
      const auto* w = spec.find_waveguide(wp->waveguide_id);
      if (!w)
        out.add("unresolved_waveguide", "probe '" + pr.id + "': unresolved waveguide reference '" + wp->waveguide_id + "'");
      else if (!finite(wp->x) || (wg_ok(*w) && !inside(*w, wp->x)))
        out.add("probe_outside", "probe '" + pr.id + "': position outside its waveguide");
    } else {
      const auto& cp = std::get<CavityProbe>(pr.target);
      if (!spec.find_cavity(cp.cavity_id))
        out.add("unresolved_cavity", "probe '" + pr.id + "': unresolved cavity reference '" + cp.cavity_id + "'");
    }
  }

  return out.take();
}

}  // namespace wgqed
