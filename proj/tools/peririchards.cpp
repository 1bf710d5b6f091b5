// Command-line front end. Talks to the simulator only through the C API.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "peririchards/peririchards.h"

namespace {

struct ConfigDeleter {
  void operator()(prc_config* c) const { prc_config_free(c); }
};
using ConfigPtr = std::unique_ptr<prc_config, ConfigDeleter>;

void print_line(const char* line, void*) { std::cout << line << '\n'; }

int report(prc_status status) {
  if (status != PRC_OK) std::cerr << "error: " << prc_last_error() << '\n';
  return static_cast<int>(status);
}

// Loads name_or_path and applies --set overrides in order.
prc_status load(const std::string& source, const std::vector<std::string>& overrides, ConfigPtr& out) {
  prc_config* raw = nullptr;
  prc_status s = prc_config_load(source.c_str(), &raw);
  if (s != PRC_OK) return s;
  out.reset(raw);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects section.key=value, got '" << kv << "'\n";
      return PRC_ERR_CONFIG;
    }
    s = prc_config_set(out.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (s != PRC_OK) return s;
  }
  return prc_config_validate(out.get());
}

std::string get(const prc_config* c, const char* key) {
  size_t needed = 0;
  prc_config_get(c, key, nullptr, 0, &needed);
  std::string buf(needed, '\0');
  if (prc_config_get(c, key, buf.data(), buf.size(), &needed) != PRC_OK) return {};
  buf.resize(needed - 1);
  return buf;
}

std::string serialize(const prc_config* c) {
  size_t needed = 0;
  prc_config_serialize(c, nullptr, 0, &needed);
  std::string buf(needed, '\0');
  prc_config_serialize(c, buf.data(), buf.size(), &needed);
  buf.resize(needed - 1);
  return buf;
}

// Exit-code severity for combining sweep members: any instability or I/O
// problem outranks success.
int worse(int a, int b) { return a == 0 ? b : (b == 0 ? a : std::min(a, b)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal Richards equation simulator (Chebyshev collocation, explicit Euler)"};
  app.set_version_flag("--version", std::string(prc_version()));
  app.require_subcommand(1);

  std::string source;
  std::vector<std::string> overrides;
  int snapshots = 0;
  std::string output_dir;

  auto* run = app.add_subcommand("run", "Run a config file or preset and write CSV, SVG and summary.json");
  run->add_option("config", source, "Config file or preset name")->required();
  run->add_option("--snapshots", snapshots, "Number of snapshots (overrides time.snapshots)")->check(CLI::PositiveNumber);
  run->add_option("--set", overrides, "Override a value, section.key=value (repeatable)");
  run->add_option("--output-dir", output_dir, "Output directory (default $PERIRICHARDS_OUTPUT_DIR/<label> or out/<label>)");

  int max_degree = 256;
  bool inject_fault = false;
  auto* vt = app.add_subcommand("verify-transforms", "Check transform, product and projection-decay properties");
  vt->add_option("--max-degree", max_degree, "Largest N checked")->check(CLI::Range(2, 4096));
  vt->add_flag("--inject-fault", inject_fault, "Corrupt one coefficient to exercise the failure path (testing)");

  std::vector<int> n_list{32, 64, 128};
  auto* vo = app.add_subcommand("verify-operator", "Spectral-vs-oracle table and self-convergence over N");
  vo->add_option("config", source, "Config file or preset name")->required();
  vo->add_option("--n-list", n_list, "Ascending list of N")->delimiter(',');
  vo->add_option("--set", overrides, "Override a value, section.key=value (repeatable)");

  std::string vary;
  std::vector<std::string> values;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sweep = app.add_subcommand("sweep", "Run variants of one config concurrently");
  sweep->add_option("config", source, "Config file or preset name")->required();
  sweep->add_option("--vary", vary, "Parameter to vary")->required()->check(CLI::IsMember({"delta", "kernel"}));
  sweep->add_option("--values", values, "Values, comma separated")->required()->delimiter(',');
  sweep->add_option("--set", overrides, "Override a value, section.key=value (repeatable)");
  sweep->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* presets = app.add_subcommand("presets", "Built-in scenarios");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "List preset names");
  std::string preset_name;
  auto* show = presets->add_subcommand("show", "Print a preset as config text");
  show->add_option("name", preset_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return PRC_ERR_CONFIG;
  }

  if (*run) {
    if (snapshots > 0) overrides.push_back("time.snapshots=" + std::to_string(snapshots));
    if (!output_dir.empty()) overrides.push_back("output.directory=" + output_dir);
    ConfigPtr config;
    if (prc_status s = load(source, overrides, config); s != PRC_OK) return report(s);
    prc_run_result result{};
    return report(prc_run_scenario(config.get(), &result, print_line, nullptr));
  }

  if (*vt) return report(prc_verify_transforms(max_degree, inject_fault ? 1 : 0, print_line, nullptr));

  if (*vo) {
    ConfigPtr config;
    if (prc_status s = load(source, overrides, config); s != PRC_OK) return report(s);
    return report(prc_verify_operator(config.get(), n_list.data(), n_list.size(), print_line, nullptr));
  }

  if (*sweep) {
    ConfigPtr base;
    if (prc_status s = load(source, overrides, base); s != PRC_OK) return report(s);
    const std::string label = get(base.get(), "run.label");
    const std::string root = get(base.get(), "output.directory");
    const char* key = vary == "delta" ? "kernel.delta" : "kernel.family";

    std::vector<ConfigPtr> members;
    for (const std::string& v : values) {
      prc_config* raw = nullptr;
      if (prc_status s = prc_config_clone(base.get(), &raw); s != PRC_OK) return report(s);
      members.emplace_back(raw);
      const std::string member_label = label + "-" + vary + "-" + v;
      if (prc_status s = prc_config_set(raw, key, v.c_str()); s != PRC_OK) return report(s);
      if (prc_status s = prc_config_set(raw, "run.label", member_label.c_str()); s != PRC_OK) return report(s);
      if (!root.empty()) {
        const std::string dir = root + "/" + member_label;
        if (prc_status s = prc_config_set(raw, "output.directory", dir.c_str()); s != PRC_OK) return report(s);
      }
      if (prc_status s = prc_config_validate(raw); s != PRC_OK) return report(s);
    }

    std::mutex out_mutex;
    std::vector<int> codes(members.size(), 0);
    std::vector<std::string> logs(members.size());
    std::size_t next = 0;
    auto worker = [&] {
      while (true) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(out_mutex);
          if (next >= members.size()) return;
          i = next++;
        }
        std::string log;
        auto collect = [](const char* line, void* user) { *static_cast<std::string*>(user) += std::string(line) + '\n'; };
        const prc_status s = prc_run_scenario(members[i].get(), nullptr, collect, &log);
        if (s != PRC_OK) log += "error: " + std::string(prc_last_error()) + '\n';
        std::lock_guard<std::mutex> lock(out_mutex);
        codes[i] = static_cast<int>(s);
        logs[i] = std::move(log);
      }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<int>(jobs, static_cast<int>(members.size()));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int code = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      std::cout << logs[i];
      code = worse(code, codes[i]);
    }
    return code;
  }

  if (*presets) {
    if (*show) {
      ConfigPtr config;
      prc_config* raw = nullptr;
      if (prc_status s = prc_config_from_preset(preset_name.c_str(), &raw); s != PRC_OK) return report(s);
      config.reset(raw);
      std::cout << serialize(config.get());
      return 0;
    }
    for (size_t i = 0; i < prc_preset_count(); ++i) std::cout << prc_preset_name(i) << '\n';
    return 0;
  }
  return 0;
}
