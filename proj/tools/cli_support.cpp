#include "cli_support.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace wgqed::cli {

Params::Params(const std::vector<std::string>& pairs) {
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("parameter '" + p + "' is not key=value");
    const std::string k = p.substr(0, eq);
    if (all_.count(k)) throw ConfigError("parameter '" + k + "' given twice");
    all_[k] = p.substr(eq + 1);
  }
  left_ = all_;
}

double parse_number(const std::string& key, const std::string& text) {
  if (text == "inf") return kInfinity;
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError("parameter '" + key + "': not a number: " + text);
  return v;
}

void Params::take(const std::string& key, double& v) {
  auto it = left_.find(key);
  if (it == left_.end()) return;
  v = parse_number(key, it->second);
  left_.erase(it);
}

void Params::take(const std::string& key, int& v) {
  double d = v;
  take(key, d);
  if (d != static_cast<int>(d)) throw ConfigError("parameter '" + key + "' must be an integer");
  v = static_cast<int>(d);
}

void Params::take(const std::string& key, bool& v) {
  auto it = left_.find(key);
  if (it == left_.end()) return;
  if (it->second == "true" || it->second == "1") v = true;
  else if (it->second == "false" || it->second == "0") v = false;
  else throw ConfigError("parameter '" + key + "' must be true or false");
  left_.erase(it);
}

void Params::take(const std::string& key, std::string& v) {
  auto it = left_.find(key);
  if (it == left_.end()) return;
  v = it->second;
  left_.erase(it);
}

void Params::take(const std::string& key, Integrator& v) {
  std::string s;
  take(key, s);
  if (s.empty()) return;
  if (s == "split_step") v = Integrator::SplitStep;
  else if (s == "euler_paper") v = Integrator::EulerPaper;
  else throw ConfigError("parameter '" + key + "': unknown integrator '" + s + "'");
}

void Params::take_list(const std::string& key, std::vector<double>& v) {
  std::string s;
  take(key, s);
  if (s.empty()) return;
  v.clear();
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) v.push_back(parse_number(key, item));
}

void Params::finish() const {
  if (!left_.empty()) throw ConfigError("unknown parameter: " + left_.begin()->first);
}

std::string Params::run_id() const {
  if (all_.empty()) return "default";
  std::string id;
  for (const auto& [k, v] : all_) {
    if (!id.empty()) id += "_";
    id += k + "-" + v;
  }
  for (char& c : id)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return id;
}

std::string table_text(const Table& t, io::Format f) {
  std::string out;
  if (f == io::Format::Csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + io::format_double(row[i]);
      out += "\n";
    }
  } else {
    for (const auto& row : t.rows) {
      out += "{";
      for (std::size_t i = 0; i < row.size(); ++i)
        out += (i ? ",\"" : "\"") + t.columns[i] + "\":" + (std::isfinite(row[i]) ? io::format_double(row[i]) : "null");
      out += "}\n";
    }
  }
  return out;
}

void write_table(const std::filesystem::path& dir, const std::string& stem, const Table& t, io::Format f) {
  io::write_atomic(dir / (stem + (f == io::Format::Csv ? ".csv" : ".jsonl")), table_text(t, f));
}

}  // namespace wgqed::cli
