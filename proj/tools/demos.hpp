#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wgqed/io.hpp"

namespace wgqed::cli {

struct OutputOptions {
  std::filesystem::path root = "out";
  io::Format format = io::Format::Csv;
  bool svg = false;
  unsigned jobs = 0;
};

/// Runs a named experiment (transit, lifter, efficiency, probe, storage) and
/// writes <root>/<name>/<run-id>/. Returns the run directory.
std::filesystem::path run_demo(const std::string& name, const std::vector<std::string>& params,
                               const OutputOptions& out);

}  // namespace wgqed::cli
