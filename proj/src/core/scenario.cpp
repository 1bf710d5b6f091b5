#include "core/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"

namespace peri {
namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error writing " + path.string());
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round tick spacing covering [lo, hi] with about `target` intervals.
double tick_step(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string version_string() { return PERIRICHARDS_VERSION; }

std::filesystem::path output_directory(const SimConfig& config) {
  if (!config.output.directory.empty()) return config.output.directory;
  const char* root = std::getenv("PERIRICHARDS_OUTPUT_DIR");
  const std::filesystem::path base = (root != nullptr && *root != '\0') ? root : "out";
  return base / config.label;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "t_s,z_cm,theta\n";
  for (const SimState& s : trajectory.snapshots) {
    for (std::size_t i = 0; i < trajectory.depths.size(); ++i) {
      out += g17(s.t) + ',' + g17(trajectory.depths[i]) + ',' + g17(s.theta.values[i]) + '\n';
    }
  }
  return out;
}

std::string trajectory_svg(const Trajectory& trajectory, const std::string& title) {
  constexpr double width = 640, height = 480;
  constexpr double left = 70, right = 150, top = 50, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double z_lo = 0.0, z_hi = 1.0;
  if (!trajectory.depths.empty()) {
    const auto [a, b] = std::minmax_element(trajectory.depths.begin(), trajectory.depths.end());
    z_lo = *a;
    z_hi = *b;
  }
  double th_lo = 1.0, th_hi = 0.0;
  for (const SimState& s : trajectory.snapshots) {
    for (double v : s.theta.values) {
      th_lo = std::min(th_lo, v);
      th_hi = std::max(th_hi, v);
    }
  }
  if (!(th_hi > th_lo)) {
    th_lo -= 0.01;
    th_hi += 0.01;
  }
  const double th_step = tick_step(th_lo, th_hi, 5);
  th_lo = std::floor(th_lo / th_step) * th_step;
  th_hi = std::ceil(th_hi / th_step) * th_step;
  const double z_step = tick_step(z_lo, z_hi, 6);

  auto px = [&](double th) { return left + (th - th_lo) / (th_hi - th_lo) * plot_w; };
  auto py = [&](double z) { return top + (z - z_lo) / (z_hi - z_lo) * plot_h; };  // depth grows downward

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\" width=\"640\" height=\"480\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(left + plot_w / 2, 1) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         xml_escape(title) + "</text>\n";
  svg += "<rect x=\"" + fixed(left, 1) + "\" y=\"" + fixed(top, 1) + "\" width=\"" + fixed(plot_w, 1) +
         "\" height=\"" + fixed(plot_h, 1) + "\" fill=\"none\" stroke=\"black\"/>\n";

  const int th_digits = th_step >= 0.1 ? 1 : th_step >= 0.01 ? 2 : th_step >= 0.001 ? 3 : 4;
  for (double th = th_lo; th <= th_hi + 0.5 * th_step; th += th_step) {
    const double x = px(th);
    svg += "<line x1=\"" + fixed(x, 2) + "\" y1=\"" + fixed(top + plot_h, 2) + "\" x2=\"" + fixed(x, 2) +
           "\" y2=\"" + fixed(top + plot_h + 5, 2) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(x, 2) + "\" y=\"" + fixed(top + plot_h + 18, 2) + "\" text-anchor=\"middle\">" +
           fixed(th, th_digits) + "</text>\n";
  }
  for (double z = std::ceil(z_lo / z_step) * z_step; z <= z_hi + 1e-9 * z_step; z += z_step) {
    const double y = py(z);
    svg += "<line x1=\"" + fixed(left - 5, 2) + "\" y1=\"" + fixed(y, 2) + "\" x2=\"" + fixed(left, 2) +
           "\" y2=\"" + fixed(y, 2) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(left - 8, 2) + "\" y=\"" + fixed(y + 4, 2) + "\" text-anchor=\"end\">" +
           fixed(z, z_step >= 1 ? 0 : 1) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(left + plot_w / 2, 1) + "\" y=\"" + fixed(height - 10, 1) +
         "\" text-anchor=\"middle\">theta (-)</text>\n";
  svg += "<text x=\"18\" y=\"" + fixed(top + plot_h / 2, 1) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fixed(top + plot_h / 2, 1) + ")\">depth z (cm)</text>\n";

  const std::size_t count = trajectory.snapshots.size();
  for (std::size_t k = 0; k < count; ++k) {
    const SimState& s = trajectory.snapshots[k];
    const double f = count > 1 ? static_cast<double>(k) / static_cast<double>(count - 1) : 0.0;
    const int red = static_cast<int>(std::lround(30 + 200 * f));
    const int blue = static_cast<int>(std::lround(220 - 190 * f));
    char color[16];
    std::snprintf(color, sizeof(color), "#%02x40%02x", red, blue);

    std::vector<std::size_t> order(trajectory.depths.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return trajectory.depths[a] < trajectory.depths[b]; });
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i : order) svg += fixed(px(s.theta.values[i]), 2) + ',' + fixed(py(trajectory.depths[i]), 2) + ' ';
    svg.back() = '"';
    svg += "/>\n";

    const double ly = top + 10 + 16 * static_cast<double>(k);
    svg += "<line x1=\"" + fixed(left + plot_w + 12, 1) + "\" y1=\"" + fixed(ly, 1) + "\" x2=\"" +
           fixed(left + plot_w + 32, 1) + "\" y2=\"" + fixed(ly, 1) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fixed(left + plot_w + 38, 1) + "\" y=\"" + fixed(ly + 4, 1) + "\">t = " + g17(s.t) +
           " s</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string trajectory_summary(const SimConfig& config, const Trajectory& trajectory) {
  nlohmann::ordered_json j;
  j["version"] = version_string();
  j["label"] = config.label;
  j["config"] = serialize_config(config);
  j["config_hash"] = config_hash(config);
  j["n_modes"] = config.n_modes;
  j["steps_planned"] = trajectory.steps_planned;
  j["steps_completed"] = trajectory.steps_completed;
  j["completed"] = trajectory.completed();
  j["partial"] = !trajectory.completed();
  const Diagnostics& d = trajectory.final_state.diagnostics;
  j["final_time_s"] = trajectory.final_state.t;
  j["min_theta"] = d.min_theta;
  j["max_theta"] = d.max_theta;
  j["clamp_count"] = d.clamp_count;
  j["rhs_norm"] = d.rhs_norm;
  if (trajectory.failure) {
    j["failure"] = {{"node", trajectory.failure->node},
                    {"t_s", trajectory.failure->t},
                    {"rhs_norm", trajectory.failure->rhs_norm},
                    {"message", trajectory.failure->message}};
  }
  nlohmann::ordered_json snaps = nlohmann::ordered_json::array();
  for (const SimState& s : trajectory.snapshots) {
    snaps.push_back({{"t_s", s.t},
                     {"step", s.step_index},
                     {"min_theta", s.diagnostics.min_theta},
                     {"max_theta", s.diagnostics.max_theta},
                     {"clamp_count", s.diagnostics.clamp_count}});
  }
  j["snapshots"] = snaps;
  return j.dump(2) + "\n";
}

ScenarioResult run_scenario(const SimConfig& config) {
  ScenarioResult result;
  result.directory = output_directory(config);
  std::error_code ec;
  std::filesystem::create_directories(result.directory, ec);
  if (ec) throw IoError("cannot create output directory " + result.directory.string() + ": " + ec.message());

  result.trajectory = run(config);
  result.partial = !result.trajectory.completed();

  if (config.output.csv) {
    result.files.push_back(result.directory / "profiles.csv");
    write_file(result.files.back(), trajectory_csv(result.trajectory));
  }
  if (config.output.svg) {
    std::string title = config.label + " (" + std::string(to_string(config.kernel)) + ", delta " +
                        format_double(config.delta) + ")";
    if (result.partial) title += " [partial]";
    result.files.push_back(result.directory / "profiles.svg");
    write_file(result.files.back(), trajectory_svg(result.trajectory, title));
  }
  if (config.output.summary) {
    result.files.push_back(result.directory / "summary.json");
    write_file(result.files.back(), trajectory_summary(config, result.trajectory));
  }
  return result;
}

}  // namespace peri
