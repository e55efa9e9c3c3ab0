#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "wgqed/io.hpp"
#include "wgqed/svg.hpp"

using namespace wgqed;
namespace fs = std::filesystem;

namespace {
RecordSet small_run() {
  auto s = fixtures::single_ring();
  s.sim.t_final = 1.0;
  s.sim.snapshot_times = {0.5};
  const auto sys = build_system(s);
  return run(sys, initial_state(sys));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("shortest round-trip number format") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(io::format_double(-2.0) == "-2");
  CHECK(io::format_double(INFINITY) == "inf");
  for (double v : {1e-300, 3.14159, 123456789.125, -7.5e-12}) CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("record tables") {
  const auto rec = small_run();
  const auto csv = io::probes_csv(rec);
  CHECK(csv.rfind("t,probe_id,re,im\n", 0) == 0);
  CHECK(csv.find(",cavity,") != std::string::npos);
  const auto snaps = io::snapshots_csv(rec);
  CHECK(snaps.rfind("t,waveguide_id,x,re,im\n", 0) == 0);
  const auto jl = io::probes_jsonl(rec);
  const auto first = json::parse(jl.substr(0, jl.find('\n')));
  CHECK(first["probe_id"] == "in");
  CHECK(first.contains("re"));
  const auto meta = io::metadata_json(rec.meta);
  for (const char* k : {"final_norm", "absorbed", "snap_distances", "integrator", "deviations"}) CHECK(meta.contains(k));
}

TEST_CASE("write_records is atomic and repeatable") {
  const fs::path dir = fs::temp_directory_path() / "wgqed_io_test";
  fs::remove_all(dir);
  const auto rec = small_run();
  io::write_records(dir / "a", rec, io::Format::Csv);
  io::write_records(dir / "b", rec, io::Format::Csv);
  for (const char* f : {"probes.csv", "snapshots.csv", "metadata.json"}) CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  for (const auto& e : fs::directory_iterator(dir / "a")) CHECK(e.path().string().find(".tmp") == std::string::npos);
  io::write_records(dir / "c", rec, io::Format::Jsonl);
  CHECK(fs::exists(dir / "c" / "probes.jsonl"));
  fs::remove_all(dir);
}

TEST_CASE("transmission csv columns") {
  const auto curve = analytic::transmission_curve(-1, 1, 3, 0, 2.0, 0.5);
  const auto csv = io::transmission_csv(curve);
  CHECK(csv.rfind("omega,re_t,im_t,abs2_t\n", 0) == 0);
  CHECK(csv.find("\n0,0,0,0\n") != std::string::npos);
}

TEST_CASE("svg output") {
  svg::Plot p{"T", "omega", "|t|^2", {}, std::nullopt};
  for (const char* label : {"under", "critical", "over"}) {
    svg::Trace t{label, {0, 1, 2}, {1, 0.5, 1}, {}, false};
    p.traces.push_back(t);
  }
  const auto a = svg::emit_svg(p);
  CHECK(a == svg::emit_svg(p));
  for (const char* label : {"under", "critical", "over"}) CHECK(a.find(std::string(">") + label + "<") != std::string::npos);
  CHECK(a.find("<svg") == 0);

  // masked middle point breaks the line into two moves
  svg::Plot g{"gap", "t", "w", {{"w", {0, 1, 2, 3}, {1, 2, 3, 4}, {true, true, false, true}, false}}, std::nullopt};
  const auto gs = svg::emit_svg(g);
  const auto path = gs.substr(gs.find("<path d=\""));
  CHECK(std::count(path.begin(), path.begin() + path.find("\"", 9), 'M') == 2);

  svg::Plot empty{"e", "x", "y", {}, std::nullopt};
  CHECK_THROWS_WITH_AS(svg::emit_svg(empty), doctest::Contains("nothing to plot"), svg::PlotError);
}
