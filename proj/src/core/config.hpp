#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/chebyshev.hpp"
#include "core/kernel.hpp"
#include "core/nonlocal_operator.hpp"
#include "core/soil.hpp"
#include "core/stepper.hpp"

namespace peri {

enum class InitialKind { Affine, Cubic, Tabulated };
enum class CoordinateFrame { Physical, Reference };

/// Initial moisture profile.
///   affine:    surface + (bottom - surface) z / Z        (physical depth)
///   cubic:     c0 + c1 x + c2 x^2 + c3 x^3, x physical depth or reference coordinate
///   tabulated: piecewise-linear through (depths, values), physical depth
struct InitialCondition {
  InitialKind kind = InitialKind::Affine;
  CoordinateFrame frame = CoordinateFrame::Physical;
  double surface = 0.0;
  double bottom = 0.0;
  std::array<double, 4> coeffs{};
  std::vector<double> depths;
  std::vector<double> values;

  double evaluate(double z_phys, double z_ref, double domain_depth) const;

  bool operator==(const InitialCondition&) const = default;
};

struct OutputSpec {
  std::string directory;  // empty: $PERIRICHARDS_OUTPUT_DIR or ./out, plus the label
  bool csv = true;
  bool svg = true;
  bool summary = true;

  bool operator==(const OutputSpec&) const = default;
};

struct SimConfig {
  std::string label = "run";
  std::size_t clamp_limit = 0;  // stop as unstable once the cumulative clamp count exceeds this; 0 = never
  SoilParams soil;
  KernelFamily kernel = KernelFamily::Distributed;
  double delta = 0.15;
  double depth = 0.0;  // Z, cm
  Orientation orientation = Orientation::SurfaceAtPlusOne;
  double duration = 0.0;  // T, s
  double dt = 0.0;        // s
  int snapshots = 11;
  int n_modes = 0;
  std::optional<double> dx;  // cm; sets n_modes = round(Z / dx) when n_modes is absent
  InitialCondition initial;
  BoundaryConditions boundary;
  double sink = 0.0;  // 1/s
  OutputSpec output;
  RhsOptions testing;

  /// round(T / dt).
  std::size_t step_count() const;
  SpectralGrid make_grid() const;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

/// Parses the sectioned key = value format. Unknown sections or keys,
/// duplicates and malformed values raise ConfigError with line and column.
SimConfig parse_config(std::string_view text);

/// Reads and parses a file; IoError when it cannot be read.
SimConfig load_config(const std::filesystem::path& path);

/// A preset name or, failing that, a path to a config file.
SimConfig load_config_or_preset(std::string_view name_or_path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SimConfig& config);

/// Sets one `section.key` to a textual value, with the same validation as
/// the parser.
void set_config_value(SimConfig& config, std::string_view dotted_key, std::string_view value);

/// Canonical textual value of one `section.key`; nullopt when the key is at
/// its unset default or does not apply (initial.coeffs for an affine profile).
std::optional<std::string> get_config_value(const SimConfig& config, std::string_view dotted_key);

std::vector<std::string> preset_names();
SimConfig preset(std::string_view name);

/// 64-bit FNV-1a of the canonical text.
std::uint64_t config_hash(const SimConfig& config);

std::string format_double(double value);

}  // namespace peri
