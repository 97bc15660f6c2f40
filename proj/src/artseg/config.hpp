#pragma once

#include "artseg/label_io.hpp"
#include "artseg/smoothing.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace artseg {

/// Pipeline settings. The file format is one `key = value` per line; `#`
/// starts a comment; unknown keys and out-of-range values are rejected.
struct PipelineConfig {
  Connectivity connectivity = Connectivity::Eight;
  TieOrder tieOrder = default_tie_order();
  double splitFactor = 2.5;
  int splitRounds = 3;
  double splitValleyRatio = 0.2;
  std::optional<double> gapTol;     // pixels; derived from line height when absent
  double gapTolFactor = 0.33;       // x median text-line height
  std::optional<double> offsetTol;  // pixels; derived from separator thickness when absent
  double offsetTolFactor = 0.5;     // x median separator thickness
  int maxSeparatorThickness = 16;
  int lengthEpsilon = 2;
  double iouThreshold = 0.8;
  int workers = 0;  // 0: one per hardware thread
  LabelMapFormat labelFormat = LabelMapFormat::Pgm;
  std::string out = "out";

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Sets one key from its textual value (same rules as the file format).
void set_config_value(PipelineConfig& config, const std::string& key, const std::string& value);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const PipelineConfig& config);

/// Default configuration with a comment per key.
std::string config_template();

}  // namespace artseg
