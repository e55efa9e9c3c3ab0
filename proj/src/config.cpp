#include "wgqed/config.hpp"

#include <algorithm>
#include <fstream>

namespace wgqed {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where + ": missing '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) fail(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::string text(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) fail(where + ": '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

cplx complex_value(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_object() && v.contains("re") && v.contains("im"))
    return {number(v, "re", where), number(v, "im", where)};
  fail(where + ": expected a number or [re, im]");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

const json& array_at(const json& doc, const char* key) {
  static const json empty = json::array();
  if (!doc.contains(key)) return empty;
  const auto& v = doc.at(key);
  if (!v.is_array()) fail(std::string("'") + key + "' must be an array");
  return v;
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where + ": expected an object");
}

}  // namespace

TuningSchedule schedule_from_json(const json& j) {
  require_object(j, "tuning");
  const std::string type = text(j, "type", "tuning");
  if (type == "constant") return ConstantTuning{number(j, "omega", "tuning")};
  if (type == "linear_ramp")
    return LinearRamp{number(j, "t_start", "tuning"), number(j, "t_end", "tuning"),
                      number(j, "omega_start", "tuning"), number(j, "omega_end", "tuning")};
  if (type == "piecewise_linear") {
    PiecewiseLinear p;
    if (!j.contains("knots") || !j.at("knots").is_array()) fail("tuning: 'knots' must be an array");
    for (const auto& k : j.at("knots")) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
        fail("tuning: each knot must be [t, omega]");
      p.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
    }
    return p;
  }
  fail("tuning: unknown schedule type '" + type + "'");
}

json schedule_to_json(const TuningSchedule& s) {
  return std::visit(overloaded{
                        [](const ConstantTuning& c) { return json{{"type", "constant"}, {"omega", c.omega}}; },
                        [](const LinearRamp& r) {
                          return json{{"type", "linear_ramp"},
                                      {"t_start", r.t_start},
                                      {"t_end", r.t_end},
                                      {"omega_start", r.omega_start},
                                      {"omega_end", r.omega_end}};
                        },
                        [](const PiecewiseLinear& p) {
                          json knots = json::array();
                          for (const auto& [t, w] : p.knots) knots.push_back({t, w});
                          return json{{"type", "piecewise_linear"}, {"knots", knots}};
                        },
                    },
                    s.variant());
}

NetworkSpec network_from_json(const json& doc) {
  require_object(doc, "config");
  static const char* known[] = {"params", "waveguides", "cavities", "couplings", "pulses", "probes", "sim"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      fail("unknown top-level key '" + key + "'");
  }

  NetworkSpec spec;
  if (doc.contains("params")) {
    const auto& p = doc.at("params");
    require_object(p, "params");
    spec.params.v_g = number_or(p, "v_g", 1.0, "params");
    spec.params.omega_0 = number_or(p, "omega_0", 0.0, "params");
    spec.params.c_light = number_or(p, "c_light", 1.0, "params");
  }

  for (const auto& w : array_at(doc, "waveguides")) {
    require_object(w, "waveguide");
    WaveguideSpec ws;
    ws.id = text(w, "id", "waveguide");
    const std::string where = "waveguide '" + ws.id + "'";
    ws.direction = w.contains("direction") ? static_cast<int>(number(w, "direction", where)) : 1;
    ws.length = number(w, "length", where);
    ws.x_min = number_or(w, "x_min", 0.0, where);
    spec.waveguides.push_back(std::move(ws));
  }

  for (const auto& c : array_at(doc, "cavities")) {
    require_object(c, "cavity");
    CavitySpec cs;
    cs.id = text(c, "id", "cavity");
    const std::string where = "cavity '" + cs.id + "'";
    cs.omega_c0 = number_or(c, "omega_c0", 0.0, where);
    if (c.contains("tau_c") && !c.at("tau_c").is_null()) {
      const auto& t = c.at("tau_c");
      if (t.is_string() && (t == "inf" || t == "infinity")) cs.tau_c = kInfinity;
      else cs.tau_c = number(c, "tau_c", where);
    }
    if (c.contains("tuning") && !c.at("tuning").is_null()) cs.tuning = schedule_from_json(c.at("tuning"));
    if (c.contains("geometry") && !c.at("geometry").is_null()) {
      const auto& g = c.at("geometry");
      require_object(g, where + " geometry");
      cs.geometry = CavityGeometry{number(g, "n", where), number(g, "R", where)};
    }
    if (c.contains("initial_amplitude")) cs.initial_amplitude = complex_value(c.at("initial_amplitude"), where);
    spec.cavities.push_back(std::move(cs));
  }

  for (const auto& c : array_at(doc, "couplings")) {
    require_object(c, "coupling");
    CouplingSpec cs;
    cs.waveguide_id = text(c, "waveguide", "coupling");
    cs.cavity_id = text(c, "cavity", "coupling");
    cs.x = number(c, "x", "coupling");
    if (!c.contains("V")) fail("coupling: missing 'V'");
    cs.V = complex_value(c.at("V"), "coupling V");
    spec.couplings.push_back(std::move(cs));
  }

  for (const auto& p : array_at(doc, "pulses")) {
    require_object(p, "pulse");
    PulseSpec ps;
    ps.waveguide_id = text(p, "waveguide", "pulse");
    ps.x0 = number(p, "x0", "pulse");
    ps.sigma = number(p, "sigma", "pulse");
    ps.detuning = number_or(p, "detuning", 0.0, "pulse");
    if (p.contains("amplitude")) ps.amplitude = complex_value(p.at("amplitude"), "pulse amplitude");
    spec.pulses.push_back(std::move(ps));
  }

  for (const auto& p : array_at(doc, "probes")) {
    require_object(p, "probe");
    ProbeSpec ps;
    ps.id = text(p, "id", "probe");
    const std::string where = "probe '" + ps.id + "'";
    const std::string type = text(p, "type", where);
    if (type == "waveguide") ps.target = WaveguidePoint{text(p, "waveguide", where), number(p, "x", where)};
    else if (type == "cavity") ps.target = CavityProbe{text(p, "cavity", where)};
    else fail(where + ": unknown probe type '" + type + "'");
    ps.stride = p.contains("stride") ? static_cast<int>(number(p, "stride", where)) : 1;
    spec.probes.push_back(std::move(ps));
  }

  if (doc.contains("sim")) {
    const auto& s = doc.at("sim");
    require_object(s, "sim");
    auto& sim = spec.sim;
    sim.dx = number(s, "dx", "sim");
    sim.t_final = number(s, "t_final", "sim");
    if (s.contains("integrator")) {
      const std::string i = text(s, "integrator", "sim");
      if (i == "split_step") sim.integrator = Integrator::SplitStep;
      else if (i == "euler_paper") sim.integrator = Integrator::EulerPaper;
      else fail("sim: unknown integrator '" + i + "'");
    }
    if (s.contains("boundary")) {
      const auto& b = s.at("boundary");
      require_object(b, "sim.boundary");
      const std::string type = text(b, "type", "sim.boundary");
      if (type == "hard_assert") sim.boundary = {BoundaryKind::HardAssert, 0.0};
      else if (type == "absorbing_ramp") sim.boundary = {BoundaryKind::AbsorbingRamp, number(b, "width", "sim.boundary")};
      else fail("sim.boundary: unknown type '" + type + "'");
    }
    if (s.contains("snapshot_times")) {
      if (!s.at("snapshot_times").is_array()) fail("sim: 'snapshot_times' must be an array");
      for (const auto& t : s.at("snapshot_times")) {
        if (!t.is_number()) fail("sim: snapshot times must be numbers");
        sim.snapshot_times.push_back(t.get<double>());
      }
    }
  } else {
    fail("missing 'sim' section");
  }
  return spec;
}

json network_to_json(const NetworkSpec& spec) {
  json doc;
  doc["params"] = {{"v_g", spec.params.v_g}, {"omega_0", spec.params.omega_0}, {"c_light", spec.params.c_light}};

  doc["waveguides"] = json::array();
  for (const auto& w : spec.waveguides)
    doc["waveguides"].push_back({{"id", w.id}, {"direction", w.direction}, {"length", w.length}, {"x_min", w.x_min}});

  doc["cavities"] = json::array();
  for (const auto& c : spec.cavities) {
    json j{{"id", c.id}, {"omega_c0", c.omega_c0}};
    j["tau_c"] = std::isinf(c.tau_c) ? json(nullptr) : json(c.tau_c);
    if (c.tuning) j["tuning"] = schedule_to_json(*c.tuning);
    if (c.geometry) j["geometry"] = {{"n", c.geometry->n_eff}, {"R", c.geometry->radius}};
    if (c.initial_amplitude != cplx{}) j["initial_amplitude"] = complex_json(c.initial_amplitude);
    doc["cavities"].push_back(std::move(j));
  }

  doc["couplings"] = json::array();
  for (const auto& c : spec.couplings)
    doc["couplings"].push_back({{"waveguide", c.waveguide_id}, {"cavity", c.cavity_id}, {"x", c.x}, {"V", complex_json(c.V)}});

  doc["pulses"] = json::array();
  for (const auto& p : spec.pulses)
    doc["pulses"].push_back({{"waveguide", p.waveguide_id},
                             {"x0", p.x0},
                             {"sigma", p.sigma},
                             {"detuning", p.detuning},
                             {"amplitude", complex_json(p.amplitude)}});

  doc["probes"] = json::array();
  for (const auto& p : spec.probes) {
    json j{{"id", p.id}, {"stride", p.stride}};
    if (const auto* wp = std::get_if<WaveguidePoint>(&p.target)) {
      j["type"] = "waveguide";
      j["waveguide"] = wp->waveguide_id;
      j["x"] = wp->x;
    } else {
      j["type"] = "cavity";
      j["cavity"] = std::get<CavityProbe>(p.target).cavity_id;
    }
    doc["probes"].push_back(std::move(j));
  }

  const auto& sim = spec.sim;
  json boundary{{"type", to_string(sim.boundary.kind)}};
  if (sim.boundary.kind == BoundaryKind::AbsorbingRamp) boundary["width"] = sim.boundary.width;
  doc["sim"] = {{"dx", sim.dx},
                {"t_final", sim.t_final},
                {"integrator", to_string(sim.integrator)},
                {"boundary", boundary},
                {"snapshot_times", sim.snapshot_times}};
  return doc;
}

NetworkSpec load_network(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw ConfigError("config not found: " + path.string());
  std::ifstream in(path);
  if (!in) throw ConfigError("config not found: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return network_from_json(doc);
}

}  // namespace wgqed
