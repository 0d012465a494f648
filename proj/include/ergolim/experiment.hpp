#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergolim/gallery.hpp"
#include "ergolim/types.hpp"

namespace ergolim {

using Json = nlohmann::ordered_json;

/**
 * A single experiment: one operator (gallery or inline matrix), a list of
 * analyses to run, and output settings. Parsed from a JSON config file; the
 * CLI can override tolerance, iteration budget, output path/format and seed.
 */
struct ExperimentConfig {
  std::optional<GallerySpec> gallery;
  bool gallery_seed_explicit = false;
  std::optional<Mat> inline_matrix;
  bool inline_markov = false;

  std::vector<std::string> analyses;  // subset of the names in kAnalysisOrder
  double tolerance = 1e-12;
  // Cesaro means decay like 1/n, so they get their own reachable target.
  double cesaro_tolerance = 1e-2;
  int max_iterations = 10000;
  std::string output_path;  // empty = no file output
  enum class Format { csv, json } format = Format::json;
  std::optional<std::uint64_t> seed;

  static const std::vector<std::string>& known_analyses();
};

/// Throws InvalidInput on malformed configs (unknown analysis, bad operator,
/// nonpositive tolerance, ...).
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

/**
 * The full machine-readable result: config echo, per-analysis sections, a
 * verdict per requested analysis, schema/tool version and timestamp
 * (SOURCE_DATE_EPOCH is honored so identical config + seed reproduce
 * byte-identical output).
 */
struct RunArtifact {
  Json document;
  bool all_passed = false;
  int exit_code = 2;  // 0 = pass, 2 = mathematical failure
};

RunArtifact run(const ExperimentConfig& config);

/// Writes the artifact per the configured format; returns the paths written.
std::vector<std::string> emit(const RunArtifact& artifact, const ExperimentConfig& config);

/// Deterministic serialization: stable key order, doubles with 17 significant
/// digits so every value round-trips.
std::string dump_deterministic(const Json& j, int indent = 2);
std::string format_double(double v);

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ergolim
