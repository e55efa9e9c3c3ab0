// wgqed: command-line front end.
//   run <config>         simulate a network file
//   demo <experiment>    canned experiments, tuned with --param k=v
//   analytic spectrum    closed-form transmission curve
//   sweep <config>       vary one JSON field across --values
//   selftest             acceptance suite
// Exit codes: 0 ok, 1 config error, 2 numerical failure, 3 selftest failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "demos.hpp"
#include "wgqed/acceptance.hpp"
#include "wgqed/analytic.hpp"
#include "wgqed/config.hpp"
#include "wgqed/solver.hpp"
#include "wgqed/spectral.hpp"
#include "wgqed/svg.hpp"

namespace fs = std::filesystem;
using namespace wgqed;

namespace {

struct ExitError {
  int code;
  std::string kind;
  std::string message;
};

void write_run(const fs::path& dir, const NetworkSpec& spec, const RecordSet& rec, const cli::OutputOptions& o) {
  json report = {{"experiment", "run"}, {"config", network_to_json(spec)}, {"metadata", io::metadata_json(rec.meta)}};
  io::write_atomic(dir / "report.json", report.dump(2) + "\n");
  io::write_records(dir, rec, o.format);
  if (o.svg && !rec.probes.empty()) {
    svg::Plot plot{"Probe amplitudes", "t", "|amplitude|", {}, std::nullopt};
    for (const auto& p : rec.probes) {
      svg::Trace t{p.id, p.t, {}, {}, false};
      for (const auto& v : p.values) t.y.push_back(std::abs(v));
      plot.traces.push_back(std::move(t));
    }
    io::write_atomic(dir / "probes.svg", svg::emit_svg(plot));
  }
}

RecordSet simulate(const NetworkSpec& spec) {
  const auto sys = build_system(spec);
  return run(sys, initial_state(sys));
}

int cmd_run(const std::string& config, const cli::OutputOptions& o) {
  const auto spec = load_network(config);
  const auto rec = simulate(spec);
  const fs::path dir = o.root / "run" / fs::path(config).stem();
  write_run(dir, spec, rec, o);
  std::printf("%s\n", dir.string().c_str());
  return 0;
}

int cmd_demo(const std::string& name, const std::vector<std::string>& params, const cli::OutputOptions& o) {
  const auto dir = cli::run_demo(name, params, o);
  std::printf("%s\n", dir.string().c_str());
  return 0;
}

int cmd_spectrum(const std::vector<std::string>& params, const cli::OutputOptions& o, bool out_given) {
  cli::Params prm(params);
  double omega_c = 0.0, tau_c = kInfinity, gamma = 0.05, lo = NAN, hi = NAN;
  int points = 401;
  prm.take("omega_c", omega_c);
  prm.take("tau_c", tau_c);
  prm.take("gamma", gamma);
  prm.take("lo", lo);
  prm.take("hi", hi);
  prm.take("points", points);
  prm.finish();
  const double lw = gamma + (std::isinf(tau_c) ? 0.0 : 1.0 / tau_c);
  if (std::isnan(lo)) lo = omega_c - 5.0 * lw;
  if (std::isnan(hi)) hi = omega_c + 5.0 * lw;
  if (points < 2) throw ConfigError("points must be at least 2");
  const auto curve = analytic::transmission_curve(lo, hi, static_cast<std::size_t>(points), omega_c, tau_c, gamma);

  cli::Table t{{"omega", "re_t", "im_t", "abs2_t"}, {}};
  for (std::size_t i = 0; i < curve.frequencies.size(); ++i)
    t.rows.push_back({curve.frequencies[i], curve.values[i].real(), curve.values[i].imag(), std::norm(curve.values[i])});
  if (!out_given) {
    std::fputs(cli::table_text(t, o.format).c_str(), stdout);
    return 0;
  }
  const fs::path dir = o.root / "analytic" / prm.run_id();
  cli::write_table(dir, "transmission", t, o.format);
  if (o.svg) {
    svg::Plot plot{"Transmission (closed form)", "omega", "|t|^2", {}, std::pair{0.0, 1.05}};
    svg::Trace tr{"analytic", curve.frequencies, {}, {}, false};
    for (const auto& v : curve.values) tr.y.push_back(std::norm(v));
    plot.traces = {tr};
    io::write_atomic(dir / "transmission.svg", svg::emit_svg(plot));
  }
  std::printf("%s\n", dir.string().c_str());
  return 0;
}

json read_json_file(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ConfigError("config not found: " + path);
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
}

int cmd_sweep(const std::string& config, const std::string& pointer, const std::vector<std::string>& values,
              const cli::OutputOptions& o) {
  const json doc = read_json_file(config);
  json::json_pointer ptr;
  try {
    ptr = json::json_pointer(pointer);
  } catch (const json::exception&) {
    throw ConfigError("sweep: bad JSON pointer '" + pointer + "'");
  }
  if (!doc.contains(ptr)) throw ConfigError("sweep: config has no field " + pointer);
  if (values.empty()) throw ConfigError("sweep: no values");

  // validate every variant up front so a bad value fails before any run
  std::vector<NetworkSpec> specs;
  for (const auto& v : values) {
    json d = doc;
    try {
      d[ptr] = json::parse(v);
    } catch (const json::parse_error&) {
      d[ptr] = v;
    }
    specs.push_back(network_from_json(d));
  }

  const std::string stem = fs::path(config).stem().string();
  const fs::path root = o.root / "sweep" / stem;
  std::vector<RunMetadata> metas(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        const auto rec = simulate(specs[i]);
        write_run(root / std::to_string(i), specs[i], rec, o);
        metas[i] = rec.meta;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned jobs = o.jobs ? o.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(specs.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  json runs = json::array();
  for (std::size_t i = 0; i < specs.size(); ++i)
    runs.push_back({{"index", i}, {"value", values[i]}, {"dir", std::to_string(i)}, {"metadata", io::metadata_json(metas[i])}});
  io::write_atomic(root / "report.json",
                   json{{"experiment", "sweep"}, {"config", config}, {"param", pointer}, {"runs", runs}}.dump(2) + "\n");
  std::printf("%s\n", root.string().c_str());
  return 0;
}

int cmd_selftest(const std::vector<int>& only, const cli::OutputOptions& o) {
  int failed = 0;
  acceptance::run_all(only, o.jobs, [&](const acceptance::CriterionResult& r) {
    std::printf("%s\n", acceptance::format_line(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  });
  std::printf("%s\n", failed ? (std::to_string(failed) + " criteria failed").c_str() : "all criteria passed");
  return failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-photon transport in waveguide/ring-resonator networks"};
  app.require_subcommand(1);
  cli::OutputOptions o;
  std::string out_dir = "out", format = "csv";
  app.add_option("--out", out_dir, "output directory (created if absent)");
  app.add_option("--format", format, "record format")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_flag("--svg", o.svg, "also write SVG plots");
  app.add_option("--jobs", o.jobs, "worker threads for sweeps (0 = hardware threads)");

  std::string config, experiment, pointer;
  std::vector<std::string> params, values_list, spectrum_params;
  std::vector<int> only;

  auto* run_cmd = app.add_subcommand("run", "simulate a network config");
  run_cmd->add_option("config", config, "network JSON")->required();
  auto* demo_cmd = app.add_subcommand("demo", "run a canned experiment");
  demo_cmd->add_option("experiment", experiment, "transit | lifter | efficiency | probe | storage")->required();
  demo_cmd->add_option("--param", params, "key=value override")->take_all();
  auto* analytic_cmd = app.add_subcommand("analytic", "closed-form results");
  analytic_cmd->require_subcommand(1);
  auto* spectrum_cmd = analytic_cmd->add_subcommand("spectrum", "transmission curve");
  spectrum_cmd->add_option("params", spectrum_params, "omega_c= tau_c= gamma= lo= hi= points=");
  auto* sweep_cmd = app.add_subcommand("sweep", "vary one config field");
  sweep_cmd->add_option("config", config, "network JSON")->required();
  sweep_cmd->add_option("--param", pointer, "JSON pointer, e.g. /cavities/0/tau_c")->required();
  sweep_cmd->add_option("--values", values_list, "comma-separated values")->delimiter(',')->required();
  auto* self_cmd = app.add_subcommand("selftest", "run the acceptance criteria");
  self_cmd->add_option("--only", only, "criterion numbers")->delimiter(',');
  for (auto* sub : {run_cmd, demo_cmd, analytic_cmd, spectrum_cmd, sweep_cmd, self_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  o.root = out_dir;
  o.format = format == "jsonl" ? io::Format::Jsonl : io::Format::Csv;
  const bool out_given = app.count("--out") > 0;

  ExitError err{0, "", ""};
  try {
    if (*run_cmd) return cmd_run(config, o);
    if (*demo_cmd) return cmd_demo(experiment, params, o);
    if (*spectrum_cmd) return cmd_spectrum(spectrum_params, o, out_given);
    if (*sweep_cmd) return cmd_sweep(config, pointer, values_list, o);
    if (*self_cmd) return cmd_selftest(only, o);
  } catch (const NumericalFailure& e) {
    err = {2, "numerical_failure", e.what()};
  } catch (const ConfigError& e) {
    err = {1, "config_error", e.what()};
  } catch (const analytic::DomainError& e) {
    err = {1, "config_error", e.what()};
  } catch (const SpectralError& e) {
    err = {2, "numerical_failure", e.what()};
  } catch (const std::exception& e) {
    err = {1, "error", e.what()};
  }
  if (o.format == io::Format::Jsonl)
    std::cerr << json{{"error", err.kind}, {"message", err.message}, {"exit_code", err.code}}.dump() << "\n";
  else
    std::cerr << "error: " << err.message << "\n";
  return err.code;
}
