#include "wgqed/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace wgqed::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string probes_csv(const RecordSet& rec) {
  std::string out = "t,probe_id,re,im\n";
  for (const auto& p : rec.probes)
    for (std::size_t i = 0; i < p.t.size(); ++i)
      out += format_double(p.t[i]) + "," + p.id + "," + format_double(p.values[i].real()) + "," +
             format_double(p.values[i].imag()) + "\n";
  return out;
}

std::string snapshots_csv(const RecordSet& rec) {
  std::string out = "t,waveguide_id,x,re,im\n";
  for (const auto& s : rec.snapshots) {
    const std::string t = format_double(s.t);
    for (std::size_t k = 0; k < s.x.size(); ++k)
      out += t + "," + s.waveguide_id + "," + format_double(s.x[k]) + "," + format_double(s.phi[k].real()) + "," +
             format_double(s.phi[k].imag()) + "\n";
  }
  return out;
}

// jsonl rows are assembled by hand so the number format matches the CSV
std::string probes_jsonl(const RecordSet& rec) {
  std::string out;
  for (const auto& p : rec.probes) {
    const std::string id = json(p.id).dump();
    for (std::size_t i = 0; i < p.t.size(); ++i)
      out += "{\"t\":" + format_double(p.t[i]) + ",\"probe_id\":" + id + ",\"re\":" +
             format_double(p.values[i].real()) + ",\"im\":" + format_double(p.values[i].imag()) + "}\n";
  }
  return out;
}

std::string snapshots_jsonl(const RecordSet& rec) {
  std::string out;
  for (const auto& s : rec.snapshots) {
    const std::string head = "{\"t\":" + format_double(s.t) + ",\"waveguide_id\":" + json(s.waveguide_id).dump();
    for (std::size_t k = 0; k < s.x.size(); ++k)
      out += head + ",\"x\":" + format_double(s.x[k]) + ",\"re\":" + format_double(s.phi[k].real()) +
             ",\"im\":" + format_double(s.phi[k].imag()) + "}\n";
  }
  return out;
}

namespace {
std::string t_rows(const std::vector<double>& omega, const std::vector<cplx>& t) {
  std::string out = "omega,re_t,im_t,abs2_t\n";
  for (std::size_t i = 0; i < omega.size(); ++i)
    out += format_double(omega[i]) + "," + format_double(t[i].real()) + "," + format_double(t[i].imag()) + "," +
           format_double(std::norm(t[i])) + "\n";
  return out;
}
}  // namespace

std::string transmission_csv(const analytic::TransmissionCurve& curve) { return t_rows(curve.frequencies, curve.values); }

std::string transmission_csv(const TransmissionEstimate& est) { return t_rows(est.omega, est.t); }

std::string spectrum_csv(const Spectrum& s) {
  std::string out = "omega,re,im,power\n";
  for (std::size_t i = 0; i < s.omega.size(); ++i)
    out += format_double(s.omega[i]) + "," + format_double(s.values[i].real()) + "," +
           format_double(s.values[i].imag()) + "," + format_double(std::norm(s.values[i])) + "\n";
  return out;
}

json metadata_json(const RunMetadata& meta) {
  json snaps = json::object();
  for (const auto& [k, v] : meta.snap_distances) snaps[k] = v;
  json outflow = json::object();
  for (const auto& [k, v] : meta.outflow) outflow[k] = v;
  json trips = json::object();
  for (const auto& [k, v] : meta.round_trip_times) trips[k] = v;
  return {{"final_norm", meta.final_norm},
          {"absorbed", meta.absorbed},
          {"intrinsic_loss", meta.intrinsic_loss},
          {"outflow", outflow},
          {"max_boundary_amplitude", meta.max_boundary_amplitude},
          {"steps", meta.steps},
          {"dt", meta.dt},
          {"dx", meta.dx},
          {"integrator", meta.integrator},
          {"snap_distances", snaps},
          {"round_trip_times", trips},
          {"deviations", meta.deviations}};
}

void write_records(const std::filesystem::path& dir, const RecordSet& rec, Format format) {
  if (format == Format::Csv) {
    write_atomic(dir / "probes.csv", probes_csv(rec));
    write_atomic(dir / "snapshots.csv", snapshots_csv(rec));
  } else {
    write_atomic(dir / "probes.jsonl", probes_jsonl(rec));
    write_atomic(dir / "snapshots.jsonl", snapshots_jsonl(rec));
  }
  write_atomic(dir / "metadata.json", metadata_json(rec.meta).dump(2) + "\n");
}

}  // namespace wgqed::io
