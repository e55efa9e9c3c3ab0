#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wgqed/io.hpp"
#include "wgqed/model.hpp"

namespace wgqed::cli {

/// key=value pairs from --param; each lookup consumes its key so leftovers
/// can be rejected.
class Params {
 public:
  explicit Params(const std::vector<std::string>& pairs);

  void take(const std::string& key, double& v);
  void take(const std::string& key, int& v);
  void take(const std::string& key, bool& v);
  void take(const std::string& key, std::string& v);
  void take(const std::string& key, Integrator& v);
  void take_list(const std::string& key, std::vector<double>& v);
  /// Throws ConfigError naming the first unconsumed key.
  void finish() const;
  /// Deterministic directory name built from the original pairs.
  std::string run_id() const;

 private:
  std::map<std::string, std::string> left_;
  std::map<std::string, std::string> all_;
};

double parse_number(const std::string& key, const std::string& text);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Writes <dir>/<stem>.csv or <stem>.jsonl.
void write_table(const std::filesystem::path& dir, const std::string& stem, const Table& t, io::Format f);
std::string table_text(const Table& t, io::Format f);

}  // namespace wgqed::cli
