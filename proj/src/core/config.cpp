#include "core/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "core/errors.hpp"

namespace peri {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(value)) {
    throw std::invalid_argument("expected a finite number, got '" + std::string(s) + "'");
  }
  return value;
}

int parse_int(std::string_view s) {
  s = trim(s);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return value;
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_double(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_list(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

using Setter = std::function<void(SimConfig&, std::string_view)>;
using Getter = std::function<std::optional<std::string>(const SimConfig&)>;

struct Field {
  std::string_view section;
  std::string_view key;
  Setter set;
  Getter get;
};

Field number(std::string_view section, std::string_view key, double SimConfig::*member) {
  return {section, key, [member](SimConfig& c, std::string_view v) { c.*member = parse_double(v); },
          [member](const SimConfig& c) { return std::optional(format_double(c.*member)); }};
}

Field soil_number(std::string_view key, double SoilParams::*member) {
  return {"soil", key, [member](SimConfig& c, std::string_view v) { c.soil.*member = parse_double(v); },
          [member](const SimConfig& c) { return std::optional(format_double(c.soil.*member)); }};
}

Field boundary_number(std::string_view key, double BoundaryConditions::*member) {
  return {"boundary", key, [member](SimConfig& c, std::string_view v) { c.boundary.*member = parse_double(v); },
          [member](const SimConfig& c) { return std::optional(format_double(c.boundary.*member)); }};
}

Field output_flag(std::string_view key, bool OutputSpec::*member) {
  return {"output", key, [member](SimConfig& c, std::string_view v) { c.output.*member = parse_bool(v); },
          [member](const SimConfig& c) { return std::optional(format_bool(c.output.*member)); }};
}

std::string_view to_string(Orientation o) {
  return o == Orientation::SurfaceAtPlusOne ? "surface_at_plus_one" : "surface_at_minus_one";
}

std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Affine: return "affine";
    case InitialKind::Cubic: return "cubic";
    case InitialKind::Tabulated: return "tabulated";
  }
  return "affine";
}

// Table order is the canonical serialization order.
const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"run", "label",
                 [](SimConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v.empty() || v.find_first_of("/\\") != std::string_view::npos) {
                     throw std::invalid_argument("label must be non-empty and contain no path separators");
                   }
                   c.label = std::string(v);
                 },
                 [](const SimConfig& c) { return std::optional(c.label); }});
    f.push_back({"run", "clamp_limit",
                 [](SimConfig& c, std::string_view v) {
                   const int n = parse_int(v);
                   if (n < 0) throw std::invalid_argument("clamp_limit must be >= 0");
                   c.clamp_limit = static_cast<std::size_t>(n);
                 },
                 [](const SimConfig& c) {
                   return c.clamp_limit == 0 ? std::nullopt : std::optional(std::to_string(c.clamp_limit));
                 }});
    f.push_back(soil_number("theta_r", &SoilParams::theta_r));
    f.push_back(soil_number("theta_s", &SoilParams::theta_s));
    f.push_back(soil_number("alpha", &SoilParams::alpha));
    f.push_back(soil_number("n", &SoilParams::n_vg));
    f.push_back(soil_number("k_sat", &SoilParams::k_sat));
    f.push_back(soil_number("pore_connectivity", &SoilParams::pore_connectivity));
    f.push_back({"kernel", "family",
                 [](SimConfig& c, std::string_view v) { c.kernel = parse_kernel_family(trim(v)); },
                 [](const SimConfig& c) { return std::optional(std::string(to_string(c.kernel))); }});
    f.push_back(number("kernel", "delta", &SimConfig::delta));
    f.push_back(number("domain", "depth", &SimConfig::depth));
    f.push_back({"domain", "orientation",
                 [](SimConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "surface_at_plus_one") c.orientation = Orientation::SurfaceAtPlusOne;
                   else if (v == "surface_at_minus_one") c.orientation = Orientation::SurfaceAtMinusOne;
                   else throw std::invalid_argument("orientation must be surface_at_plus_one or surface_at_minus_one");
                 },
                 [](const SimConfig& c) { return std::optional(std::string(to_string(c.orientation))); }});
    f.push_back(number("time", "duration", &SimConfig::duration));
    f.push_back(number("time", "dt", &SimConfig::dt));
    f.push_back({"time", "snapshots", [](SimConfig& c, std::string_view v) { c.snapshots = parse_int(v); },
                 [](const SimConfig& c) { return std::optional(std::to_string(c.snapshots)); }});
    f.push_back({"grid", "n_modes", [](SimConfig& c, std::string_view v) { c.n_modes = parse_int(v); },
                 [](const SimConfig& c) { return std::optional(std::to_string(c.n_modes)); }});
    f.push_back({"grid", "dx", [](SimConfig& c, std::string_view v) { c.dx = parse_double(v); },
                 [](const SimConfig& c) {
                   return c.dx ? std::optional(format_double(*c.dx)) : std::nullopt;
                 }});
    f.push_back({"initial", "kind",
                 [](SimConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "affine") c.initial.kind = InitialKind::Affine;
                   else if (v == "cubic") c.initial.kind = InitialKind::Cubic;
                   else if (v == "tabulated") c.initial.kind = InitialKind::Tabulated;
                   else throw std::invalid_argument("initial kind must be affine, cubic or tabulated");
                 },
                 [](const SimConfig& c) { return std::optional(std::string(to_string(c.initial.kind))); }});
    f.push_back({"initial", "frame",
                 [](SimConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "physical") c.initial.frame = CoordinateFrame::Physical;
                   else if (v == "reference") c.initial.frame = CoordinateFrame::Reference;
                   else throw std::invalid_argument("frame must be physical or reference");
                 },
                 [](const SimConfig& c) -> std::optional<std::string> {
                   if (c.initial.kind != InitialKind::Cubic) return std::nullopt;
                   return c.initial.frame == CoordinateFrame::Physical ? "physical" : "reference";
                 }});
    f.push_back({"initial", "surface", [](SimConfig& c, std::string_view v) { c.initial.surface = parse_double(v); },
                 [](const SimConfig& c) -> std::optional<std::string> {
                   if (c.initial.kind != InitialKind::Affine) return std::nullopt;
                   return format_double(c.initial.surface);
                 }});
    f.push_back({"initial", "bottom", [](SimConfig& c, std::string_view v) { c.initial.bottom = parse_double(v); },
                 [](const SimConfig& c) -> std::optional<std::string> {
                   if (c.initial.kind != InitialKind::Affine) return std::nullopt;
                   return format_double(c.initial.bottom);
                 }});
    f.push_back({"initial", "coeffs",
                 [](SimConfig& c, std::string_view v) {
                   const auto list = parse_list(v);
                   if (list.size() != 4) throw std::invalid_argument("coeffs takes exactly 4 numbers c0, c1, c2, c3");
                   std::copy(list.begin(), list.end(), c.initial.coeffs.begin());
                 },
                 [](const SimConfig& c) -> std::optional<std::string> {
                   if (c.initial.kind != InitialKind::Cubic) return std::nullopt;
                   return format_list(c.initial.coeffs);
                 }});
    f.push_back({"initial", "depths", [](SimConfig& c, std::string_view v) { c.initial.depths = parse_list(v); },
                 [](const SimConfig& c) -> std::optional<std::string> {
                   if (c.initial.kind != InitialKind::Tabulated) return std::nullopt;
                   return format_list(c.initial.depths);
                 }});
    f.push_back({"initial", "values", [](SimConfig& c, std::string_view v) { c.initial.values = parse_list(v); },
                 [](const SimConfig& c) -> std::optional<std::string> {
                   if (c.initial.kind != InitialKind::Tabulated) return std::nullopt;
                   return format_list(c.initial.values);
                 }});
    f.push_back(boundary_number("top_start", &BoundaryConditions::top_start));
    f.push_back(boundary_number("top_end", &BoundaryConditions::top_end));
    f.push_back(boundary_number("bottom_start", &BoundaryConditions::bottom_start));
    f.push_back(boundary_number("bottom_end", &BoundaryConditions::bottom_end));
    f.push_back(number("sink", "value", &SimConfig::sink));
    f.push_back({"output", "directory", [](SimConfig& c, std::string_view v) { c.output.directory = trim(v); },
                 [](const SimConfig& c) {
                   return c.output.directory.empty() ? std::nullopt : std::optional(c.output.directory);
                 }});
    f.push_back(output_flag("csv", &OutputSpec::csv));
    f.push_back(output_flag("svg", &OutputSpec::svg));
    f.push_back(output_flag("summary", &OutputSpec::summary));
    f.push_back({"testing", "gravity", [](SimConfig& c, std::string_view v) { c.testing.gravity = parse_bool(v); },
                 [](const SimConfig& c) {
                   return c.testing.gravity ? std::nullopt : std::optional(format_bool(c.testing.gravity));
                 }});
    f.push_back({"testing", "zero_conductivity",
                 [](SimConfig& c, std::string_view v) { c.testing.zero_conductivity = parse_bool(v); },
                 [](const SimConfig& c) {
                   return c.testing.zero_conductivity ? std::optional(format_bool(true)) : std::nullopt;
                 }});
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view section, std::string_view key) {
  for (const Field& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

bool known_section(std::string_view section) {
  return std::any_of(fields().begin(), fields().end(), [&](const Field& f) { return f.section == section; });
}

void check_initial_keys(const SimConfig& c, const std::set<std::string>& seen) {
  auto has = [&](const char* key) { return seen.count(std::string("initial.") + key) > 0; };
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (has(k)) {
        throw ConfigError("initial." + std::string(k) + " is not used by initial kind " +
                          std::string(to_string(c.initial.kind)));
      }
    }
  };
  auto need = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (!has(k)) {
        throw ConfigError("missing initial." + std::string(k) + " for initial kind " +
                          std::string(to_string(c.initial.kind)));
      }
    }
  };
  switch (c.initial.kind) {
    case InitialKind::Affine:
      need({"surface", "bottom"});
      forbid({"frame", "coeffs", "depths", "values"});
      break;
    case InitialKind::Cubic:
      need({"coeffs"});
      forbid({"surface", "bottom", "depths", "values"});
      break;
    case InitialKind::Tabulated:
      need({"depths", "values"});
      forbid({"frame", "surface", "bottom", "coeffs"});
      break;
  }
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double InitialCondition::evaluate(double z_phys, double z_ref, double domain_depth) const {
  switch (kind) {
    case InitialKind::Affine: {
      const double s = z_phys / domain_depth;
      return surface * (1.0 - s) + bottom * s;
    }
    case InitialKind::Cubic: {
      const double x = frame == CoordinateFrame::Physical ? z_phys : z_ref;
      return coeffs[0] + x * (coeffs[1] + x * (coeffs[2] + x * coeffs[3]));
    }
    case InitialKind::Tabulated: {
      if (z_phys <= depths.front()) return values.front();
      if (z_phys >= depths.back()) return values.back();
      const auto it = std::upper_bound(depths.begin(), depths.end(), z_phys);
      const std::size_t i = static_cast<std::size_t>(it - depths.begin());
      const double s = (z_phys - depths[i - 1]) / (depths[i] - depths[i - 1]);
      return values[i - 1] * (1.0 - s) + values[i] * s;
    }
  }
  return 0.0;
}

std::size_t SimConfig::step_count() const {
  if (!(dt > 0.0)) return 0;
  return static_cast<std::size_t>(std::llround(duration / dt));
}

SpectralGrid SimConfig::make_grid() const { return SpectralGrid(n_modes, 0.0, depth, orientation); }

void SimConfig::validate() const {
  try {
    soil.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(delta > 0.0 && delta < 1.0, "kernel.delta must lie in (0, 1)");
  require(depth > 0.0, "domain.depth must be > 0");
  require(duration >= 0.0, "time.duration must be >= 0");
  require(dt > 0.0, "time.dt must be > 0");
  require(snapshots >= 1, "time.snapshots must be >= 1");
  require(duration == 0.0 || snapshots >= 2, "time.snapshots must be >= 2 for a run of positive duration");
  require(n_modes >= 2 && n_modes <= 2048, "grid.n_modes must lie in [2, 2048]");
  require(!dx || *dx > 0.0, "grid.dx must be > 0");
  if (initial.kind == InitialKind::Tabulated) {
    require(initial.depths.size() >= 2 && initial.depths.size() == initial.values.size(),
            "initial.depths and initial.values must have the same length >= 2");
    require(std::adjacent_find(initial.depths.begin(), initial.depths.end(), std::greater_equal<>()) ==
                initial.depths.end(),
            "initial.depths must be strictly increasing");
  }
  try {
    BoundaryConditions bc = boundary;
    bc.duration = duration;
    bc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

SimConfig parse_config(std::string_view text) {
  SimConfig config;
  std::set<std::string> seen;
  std::string section;
  std::size_t line_no = 0;
  std::size_t grid_line = 0;

  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    const std::string_view raw = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const std::size_t indent = raw.find_first_not_of(" \t") + 1;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no, indent);
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!known_section(name)) throw ConfigError("unknown section [" + std::string(name) + "]", line_no, indent + 1);
      section = std::string(name);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no, indent);
    if (section.empty()) throw ConfigError("key outside of any section", line_no, indent);
    const std::string_view key = trim(line.substr(0, eq));
    const Field* field = find_field(section, key);
    if (field == nullptr) {
      throw ConfigError("unknown key '" + std::string(key) + "' in section [" + section + "]", line_no, indent);
    }
    const std::string dotted = section + "." + std::string(key);
    if (!seen.insert(dotted).second) throw ConfigError("duplicate key '" + dotted + "'", line_no, indent);
    if (section == "grid") grid_line = line_no;

    const std::string_view value = line.substr(eq + 1);
    const std::size_t value_col = indent + eq + 1 + (value.size() - trim(value).size() > 0 ? value.find_first_not_of(" \t") : 0);
    try {
      field->set(config, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(dotted + ": " + e.what(), line_no, value_col);
    }
  }

  for (const char* key : {"soil.theta_r", "soil.theta_s", "soil.alpha", "soil.n", "soil.k_sat", "domain.depth",
                          "time.duration", "time.dt", "initial.kind", "boundary.top_start", "boundary.bottom_start"}) {
    if (!seen.count(key)) throw ConfigError(std::string("missing required key ") + key);
  }
  if (!seen.count("boundary.top_end")) config.boundary.top_end = config.boundary.top_start;
  if (!seen.count("boundary.bottom_end")) config.boundary.bottom_end = config.boundary.bottom_start;
  check_initial_keys(config, seen);

  if (!seen.count("grid.n_modes")) {
    if (!config.dx) throw ConfigError("one of grid.n_modes or grid.dx is required");
    if (!(*config.dx > 0.0)) throw ConfigError("grid.dx must be > 0", grid_line, 1);
    config.n_modes = static_cast<int>(std::lround(config.depth / *config.dx));
  }
  config.boundary.duration = config.duration;
  config.validate();
  return config;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading config file " + path.string());
  return parse_config(buf.str());
}

SimConfig load_config_or_preset(std::string_view name_or_path) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return preset(name_or_path);
  return load_config(std::filesystem::path(std::string(name_or_path)));
}

std::string serialize_config(const SimConfig& config) {
  std::string out = "# peririchards configuration\n";
  std::string_view current;
  for (const Field& f : fields()) {
    const auto value = f.get(config);
    if (!value) continue;
    if (f.section != current) {
      out += "\n[" + std::string(f.section) + "]\n";
      current = f.section;
    }
    out += std::string(f.key) + " = " + *value + "\n";
  }
  return out;
}

void set_config_value(SimConfig& config, std::string_view dotted_key, std::string_view value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string_view::npos) throw ConfigError("expected section.key, got '" + std::string(dotted_key) + "'");
  const Field* field = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  if (field == nullptr) throw ConfigError("unknown key '" + std::string(dotted_key) + "'");
  try {
    field->set(config, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(dotted_key) + ": " + e.what());
  }
  if (dotted_key == "grid.dx") config.n_modes = static_cast<int>(std::lround(config.depth / *config.dx));
  if (dotted_key == "time.duration") config.boundary.duration = config.duration;
}

std::optional<std::string> get_config_value(const SimConfig& config, std::string_view dotted_key) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string_view::npos) throw ConfigError("expected section.key, got '" + std::string(dotted_key) + "'");
  const Field* field = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  if (field == nullptr) throw ConfigError("unknown key '" + std::string(dotted_key) + "'");
  return field->get(config);
}

std::vector<std::string> preset_names() { return {"example-4.1", "example-4.2", "example-4.3"}; }

SimConfig preset(std::string_view name) {
  SimConfig c;
  c.label = std::string(name);
  c.kernel = KernelFamily::Distributed;
  c.delta = 0.15;
  c.snapshots = 11;
  c.dx = 0.3;
  if (name == "example-4.1") {
    c.soil = {0.075, 0.287, 0.036, 1.56, 0.94e-3};
    c.depth = 30.0;
    c.duration = 60.0;
    c.dt = 0.06;
    c.n_modes = 100;
    c.initial.kind = InitialKind::Affine;
    c.initial.surface = 0.181;
    c.initial.bottom = 0.2234;
    c.boundary = {0.2234, 0.181, 0.1368, 0.1174, c.duration};
    c.sink = -700.0;
  } else if (name == "example-4.2") {
    c.soil = {0.1060, 0.4686, 0.0104, 1.3954, 1.5162e-4};
    c.depth = 70.0;
    c.duration = 2400.0;
    c.dt = 2.4;
    c.n_modes = 233;
    c.initial.kind = InitialKind::Cubic;
    c.initial.frame = CoordinateFrame::Reference;
    c.initial.coeffs = {0.25, 0.0, 0.0, -0.05};
    c.boundary = {0.2, 0.2, 0.3, 0.3, c.duration};
    c.sink = 0.0;
  } else if (name == "example-4.3") {
    c.soil = {0.0286, 0.3658, 0.0280, 2.2390, 0.0063};
    c.depth = 70.0;
    c.duration = 600.0;
    c.dt = 0.06;
    c.n_modes = 233;
    c.initial.kind = InitialKind::Cubic;
    c.initial.frame = CoordinateFrame::Reference;
    c.initial.coeffs = {0.25, 0.0, 0.0, 0.05};
    c.boundary = {0.3, 0.29, 0.2, 0.2, c.duration};
    c.sink = -100.0;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

std::uint64_t config_hash(const SimConfig& config) { return fnv1a(serialize_config(config)); }

}  // namespace peri
