#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "peririchards/peririchards.h"

extern "C" int capi_smoke_from_c(void);

namespace {

using ConfigPtr = std::unique_ptr<prc_config, decltype(&prc_config_free)>;
using SimPtr = std::unique_ptr<prc_simulation, decltype(&prc_simulation_free)>;

ConfigPtr from_preset(const char* name) {
  prc_config* c = nullptr;
  REQUIRE(prc_config_from_preset(name, &c) == PRC_OK);
  return ConfigPtr(c, prc_config_free);
}

std::string serialize(const prc_config* c) {
  size_t needed = 0;
  REQUIRE(prc_config_serialize(c, nullptr, 0, &needed) == PRC_ERR_BUFFER_TOO_SMALL);
  std::string text(needed, '\0');
  REQUIRE(prc_config_serialize(c, text.data(), text.size(), &needed) == PRC_OK);
  text.resize(needed - 1);
  return text;
}

std::string get(const prc_config* c, const char* key) {
  char buf[256];
  size_t needed = 0;
  REQUIRE(prc_config_get(c, key, buf, sizeof buf, &needed) == PRC_OK);
  return buf;
}

void collect(const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); }

}  // namespace

TEST_CASE("plain C client") { CHECK(capi_smoke_from_c() == 0); }

TEST_CASE("version and presets") {
  CHECK(std::string(prc_version()).find('.') != std::string::npos);
  REQUIRE(prc_preset_count() == 3);
  CHECK(std::string(prc_preset_name(0)) == "example-4.1");
  CHECK(std::string(prc_preset_name(2)) == "example-4.3");
  CHECK(prc_preset_name(3) == nullptr);
  prc_config* c = nullptr;
  CHECK(prc_config_from_preset("example-7", &c) == PRC_ERR_CONFIG);
  CHECK(c == nullptr);
  CHECK(std::string(prc_last_error()).find("example-7") != std::string::npos);
}

TEST_CASE("config text round trip, set and get") {
  ConfigPtr a = from_preset("example-4.1");
  const std::string text = serialize(a.get());
  prc_config* raw = nullptr;
  REQUIRE(prc_config_parse(text.c_str(), &raw) == PRC_OK);
  ConfigPtr b(raw, prc_config_free);
  CHECK(serialize(b.get()) == text);

  uint64_t ha = 0, hb = 0;
  CHECK(prc_config_hash(a.get(), &ha) == PRC_OK);
  CHECK(prc_config_hash(b.get(), &hb) == PRC_OK);
  CHECK(ha == hb);

  CHECK(prc_config_set(b.get(), "kernel.delta", "0.2") == PRC_OK);
  CHECK(get(b.get(), "kernel.delta") == "0.2");
  CHECK(prc_config_hash(b.get(), &hb) == PRC_OK);
  CHECK(ha != hb);
  CHECK(get(b.get(), "initial.coeffs") == "");

  // A rejected value leaves the config untouched.
  CHECK(prc_config_set(b.get(), "kernel.delta", "two") == PRC_ERR_CONFIG);
  CHECK(get(b.get(), "kernel.delta") == "0.2");
  CHECK(prc_config_set(b.get(), "kernel.delta", "1.5") == PRC_OK);
  CHECK(prc_config_validate(b.get()) == PRC_ERR_CONFIG);
  CHECK(std::string(prc_last_error()).find("delta") != std::string::npos);

  prc_config* copy = nullptr;
  REQUIRE(prc_config_clone(a.get(), &copy) == PRC_OK);
  ConfigPtr cp(copy, prc_config_free);
  CHECK(serialize(cp.get()) == text);
}

TEST_CASE("buffers and argument errors") {
  ConfigPtr c = from_preset("example-4.2");
  char small[4];
  size_t needed = 0;
  CHECK(prc_config_get(c.get(), "run.label", small, sizeof small, &needed) == PRC_ERR_BUFFER_TOO_SMALL);
  CHECK(needed == std::string("example-4.2").size() + 1);
  CHECK(prc_config_serialize(nullptr, nullptr, 0, &needed) == PRC_ERR_INVALID_ARGUMENT);
  CHECK(prc_config_parse(nullptr, nullptr) == PRC_ERR_INVALID_ARGUMENT);
  CHECK(prc_simulation_step(nullptr, 1) == PRC_ERR_INVALID_ARGUMENT);
  prc_config* raw = nullptr;
  CHECK(prc_config_parse("[soil]\nalpha = x\n", &raw) == PRC_ERR_CONFIG);
  CHECK(std::string(prc_last_error()).find("line 2") != std::string::npos);
  CHECK(prc_config_load("/nonexistent/file.cfg", &raw) == PRC_ERR_IO);
  prc_config_free(nullptr);
  prc_simulation_free(nullptr);
}

TEST_CASE("stepping a simulation") {
  ConfigPtr c = from_preset("example-4.2");
  REQUIRE(prc_config_set(c.get(), "grid.n_modes", "40") == PRC_OK);
  prc_simulation* raw = nullptr;
  REQUIRE(prc_simulation_create(c.get(), &raw) == PRC_OK);
  SimPtr sim(raw, prc_simulation_free);

  prc_diagnostics d{};
  REQUIRE(prc_simulation_diagnostics(sim.get(), &d) == PRC_OK);
  CHECK(d.t == 0.0);
  CHECK(d.n_nodes == 41);
  REQUIRE(prc_simulation_step(sim.get(), 10) == PRC_OK);
  REQUIRE(prc_simulation_diagnostics(sim.get(), &d) == PRC_OK);
  CHECK(d.step_index == 10);
  CHECK(d.t == doctest::Approx(24.0));

  std::vector<double> theta(d.n_nodes), depths(d.n_nodes);
  CHECK(prc_simulation_theta(sim.get(), theta.data(), 3) == PRC_ERR_BUFFER_TOO_SMALL);
  REQUIRE(prc_simulation_theta(sim.get(), theta.data(), theta.size()) == PRC_OK);
  REQUIRE(prc_simulation_depths(sim.get(), depths.data(), depths.size()) == PRC_OK);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    CHECK(std::isfinite(theta[i]));
    if (depths[i] == 0.0) CHECK(theta[i] == 0.2);
    if (depths[i] == 70.0) CHECK(theta[i] == 0.3);
  }
}

TEST_CASE("clamp limit turns into an instability status") {
  ConfigPtr c = from_preset("example-4.1");
  REQUIRE(prc_config_set(c.get(), "kernel.family", "uniform") == PRC_OK);
  REQUIRE(prc_config_set(c.get(), "run.clamp_limit", "1000") == PRC_OK);
  prc_simulation* raw = nullptr;
  REQUIRE(prc_simulation_create(c.get(), &raw) == PRC_OK);
  SimPtr sim(raw, prc_simulation_free);
  CHECK(prc_simulation_step(sim.get(), 1000) == PRC_ERR_INSTABILITY);
  CHECK(std::string(prc_last_error()).find("clamp") != std::string::npos);
  prc_diagnostics d{};
  REQUIRE(prc_simulation_diagnostics(sim.get(), &d) == PRC_OK);
  CHECK(d.step_index < 1000);
  CHECK(d.clamp_count <= 1000);
}

TEST_CASE("scenario run writes outputs") {
  ConfigPtr c = from_preset("example-4.2");
  REQUIRE(prc_config_set(c.get(), "time.duration", "240") == PRC_OK);
  REQUIRE(prc_config_set(c.get(), "run.label", "capi-run") == PRC_OK);
  prc_run_result r{};
  std::vector<std::string> lines;
  REQUIRE(prc_run_scenario(c.get(), &r, collect, &lines) == PRC_OK);
  CHECK(r.completed == 1);
  CHECK(r.steps_planned == 100);
  CHECK(r.steps_completed == 100);
  CHECK(r.snapshots == 11);
  CHECK(r.final_time == doctest::Approx(240.0));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].rfind("capi-run: 100/100 steps", 0) == 0);
  const char* root = std::getenv("PERIRICHARDS_OUTPUT_DIR");
  const std::filesystem::path dir = std::filesystem::path(root ? root : "out") / "capi-run";
  CHECK(std::filesystem::exists(dir / "profiles.csv"));
  CHECK(std::filesystem::exists(dir / "profiles.svg"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
}

TEST_CASE("verification through callbacks") {
  std::vector<std::string> lines;
  CHECK(prc_verify_transforms(32, 0, collect, &lines) == PRC_OK);
  CHECK(lines.back() == "transforms: all checks passed");
  lines.clear();
  CHECK(prc_verify_transforms(32, 1, collect, &lines) == PRC_ERR_VERIFICATION);
  CHECK(lines.back() == "transforms: FAILED");
  CHECK(prc_verify_transforms(1, 0, nullptr, nullptr) == PRC_ERR_CONFIG);

  prc_config* raw = nullptr;
  REQUIRE(prc_config_parse("[soil]\ntheta_r = 0.075\ntheta_s = 0.287\nalpha = 0.036\nn = 1.56\nk_sat = 0.00094\n"
                           "[domain]\ndepth = 30\n[time]\nduration = 10\ndt = 0.5\n[grid]\nn_modes = 8\n"
                           "[initial]\nkind = affine\nsurface = 0.2\nbottom = 0.15\n"
                           "[boundary]\ntop_start = 0.2\nbottom_start = 0.15\n"
                           "[sink]\nvalue = -1e-4\n[testing]\nzero_conductivity = true\n",
                           &raw) == PRC_OK);
  ConfigPtr c(raw, prc_config_free);
  const int n_list[] = {8, 16};
  lines.clear();
  CHECK(prc_verify_operator(c.get(), n_list, 2, collect, &lines) == PRC_OK);
  CHECK(lines.back() == "operator: all checks passed");
  const int bad[] = {16, 8};
  CHECK(prc_verify_operator(c.get(), bad, 2, nullptr, nullptr) == PRC_ERR_CONFIG);
  CHECK(prc_verify_operator(c.get(), nullptr, 2, nullptr, nullptr) == PRC_ERR_INVALID_ARGUMENT);
}
