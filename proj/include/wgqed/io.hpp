#pragma once

// Artifact writers. Numbers use the shortest round-trip decimal form so
// identical runs give byte-identical files.

#include <filesystem>
#include <string>

#include "wgqed/analytic.hpp"
#include "wgqed/config.hpp"
#include "wgqed/solver.hpp"
#include "wgqed/spectral.hpp"

namespace wgqed::io {

std::string format_double(double v);

/// Writes to a temporary sibling then renames over `path`. Creates parent dirs.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

std::string probes_csv(const RecordSet& rec);
std::string snapshots_csv(const RecordSet& rec);
std::string probes_jsonl(const RecordSet& rec);
std::string snapshots_jsonl(const RecordSet& rec);
std::string transmission_csv(const analytic::TransmissionCurve& curve);
std::string transmission_csv(const TransmissionEstimate& est);
std::string spectrum_csv(const Spectrum& s);

json metadata_json(const RunMetadata& meta);

enum class Format { Csv, Jsonl };

/// probes.{csv,jsonl}, snapshots.{csv,jsonl} and metadata.json under `dir`.
void write_records(const std::filesystem::path& dir, const RecordSet& rec, Format format);

}  // namespace wgqed::io
