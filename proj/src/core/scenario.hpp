#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/stepper.hpp"

namespace peri {

struct ScenarioResult {
  Trajectory trajectory;
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
  bool partial = false;  // the run stopped early; files hold the snapshots taken so far
};

/// Output directory for a config: output.directory if set, otherwise
/// $PERIRICHARDS_OUTPUT_DIR (or ./out) joined with the label.
std::filesystem::path output_directory(const SimConfig& config);

/// Runs the config and writes profiles.csv, profiles.svg and summary.json as
/// enabled in config.output. Throws IoError when a file cannot be written.
ScenarioResult run_scenario(const SimConfig& config);

/// Writers, exposed for tests.
std::string trajectory_csv(const Trajectory& trajectory);
std::string trajectory_svg(const Trajectory& trajectory, const std::string& title);
std::string trajectory_summary(const SimConfig& config, const Trajectory& trajectory);

std::string version_string();

}  // namespace peri
