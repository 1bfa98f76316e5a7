// output.hpp: CSV/JSON rendering and atomic file writes for experiment runs

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "experiments.hpp"

namespace opexp::cli {

// Thrown when output cannot be written; maps to exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunManifest {
    ExperimentSpec spec;
    std::string tool_version;
    double wall_seconds = 0.0;
    std::map<std::string, double> tolerance_report;
};

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// Deterministic part of the manifest (no wall time, no thread count).
nlohmann::ordered_json manifest_core(const RunManifest& m);
// Full manifest including wall time and threads.
nlohmann::ordered_json manifest_full(const RunManifest& m);

std::string render_csv(const Table& table);
std::string render_json(const Table& table, const RunManifest& m);

// Resolves --out against OPEXP_OUT_DIR; an empty path picks a default name.
std::filesystem::path resolve_output_path(const std::filesystem::path& requested,
                                          const std::string& stem, Format format);

// Writes to a temporary sibling then renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::filesystem::path sidecar_manifest_path(const std::filesystem::path& data_path);

} // namespace opexp::cli
