#include "peririchards/peririchards.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/scenario.hpp"
#include "core/stepper.hpp"
#include "core/verify.hpp"

struct prc_config {
  peri::SimConfig config;
};

struct prc_simulation {
  peri::SimConfig config;
  peri::SpectralGrid grid;
  peri::RhsWorkspace workspace;
  peri::BoundaryConditions bc;
  peri::SimState state;
  std::vector<double> depths;

  explicit prc_simulation(const peri::SimConfig& c)
      : config(c),
        grid(c.make_grid()),
        workspace(grid, c.kernel, c.delta, c.sink, c.testing),
        bc(c.boundary),
        depths(grid.physical_nodes()) {
    bc.duration = c.duration;
    state = peri::init_state(
        [this](double zp, double zr) { return config.initial.evaluate(zp, zr, config.depth); }, grid, bc);
  }
};

namespace {

thread_local std::string last_error;

prc_status fail(prc_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
prc_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const peri::ConfigError& e) {
    return fail(PRC_ERR_CONFIG, e.what());
  } catch (const peri::IoError& e) {
    return fail(PRC_ERR_IO, e.what());
  } catch (const peri::StepFailure& e) {
    return fail(PRC_ERR_INSTABILITY, e.what());
  } catch (const peri::VerificationFailure& e) {
    return fail(PRC_ERR_VERIFICATION, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PRC_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PRC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PRC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PRC_ERR_INTERNAL, "unknown error");
  }
}

prc_status copy_out(const std::string& text, char* buffer, size_t capacity, size_t* needed) {
  if (needed != nullptr) *needed = text.size() + 1;
  if (capacity < text.size() + 1) {
    return fail(PRC_ERR_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(text.size() + 1) + " bytes");
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return PRC_OK;
}

prc_status new_config(peri::SimConfig c, prc_config** out) {
  *out = new prc_config{std::move(c)};
  return PRC_OK;
}

void emit(prc_line_callback cb, void* user, const std::string& line) {
  if (cb != nullptr) cb(line.c_str(), user);
}

#define PRC_REQUIRE(cond)                                                    \
  do {                                                                       \
    if (!(cond)) return fail(PRC_ERR_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* prc_version(void) {
  static const std::string v = peri::version_string();
  return v.c_str();
}

const char* prc_last_error(void) { return last_error.c_str(); }

size_t prc_preset_count(void) { return peri::preset_names().size(); }

const char* prc_preset_name(size_t index) {
  static const std::vector<std::string> names = peri::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

prc_status prc_config_from_preset(const char* name, prc_config** out) {
  PRC_REQUIRE(name != nullptr && out != nullptr);
  return guarded([&] { return new_config(peri::preset(name), out); });
}

prc_status prc_config_load(const char* name_or_path, prc_config** out) {
  PRC_REQUIRE(name_or_path != nullptr && out != nullptr);
  return guarded([&] { return new_config(peri::load_config_or_preset(name_or_path), out); });
}

prc_status prc_config_parse(const char* text, prc_config** out) {
  PRC_REQUIRE(text != nullptr && out != nullptr);
  return guarded([&] { return new_config(peri::parse_config(text), out); });
}

prc_status prc_config_clone(const prc_config* config, prc_config** out) {
  PRC_REQUIRE(config != nullptr && out != nullptr);
  return guarded([&] { return new_config(config->config, out); });
}

void prc_config_free(prc_config* config) { delete config; }

prc_status prc_config_serialize(const prc_config* config, char* buffer, size_t capacity, size_t* needed) {
  PRC_REQUIRE(config != nullptr && (buffer != nullptr || capacity == 0));
  return guarded([&] { return copy_out(peri::serialize_config(config->config), buffer, capacity, needed); });
}

prc_status prc_config_set(prc_config* config, const char* key, const char* value) {
  PRC_REQUIRE(config != nullptr && key != nullptr && value != nullptr);
  return guarded([&] {
    peri::SimConfig updated = config->config;
    peri::set_config_value(updated, key, value);
    config->config = std::move(updated);
    return PRC_OK;
  });
}

prc_status prc_config_get(const prc_config* config, const char* key, char* buffer, size_t capacity,
                          size_t* needed) {
  PRC_REQUIRE(config != nullptr && key != nullptr && (buffer != nullptr || capacity == 0));
  return guarded([&] {
    const std::optional<std::string> v = peri::get_config_value(config->config, key);
    return copy_out(v.value_or(""), buffer, capacity, needed);
  });
}

prc_status prc_config_validate(const prc_config* config) {
  PRC_REQUIRE(config != nullptr);
  return guarded([&] {
    config->config.validate();
    return PRC_OK;
  });
}

prc_status prc_config_hash(const prc_config* config, uint64_t* out) {
  PRC_REQUIRE(config != nullptr && out != nullptr);
  return guarded([&] {
    *out = peri::config_hash(config->config);
    return PRC_OK;
  });
}

prc_status prc_simulation_create(const prc_config* config, prc_simulation** out) {
  PRC_REQUIRE(config != nullptr && out != nullptr);
  return guarded([&] {
    config->config.validate();
    *out = new prc_simulation(config->config);
    return PRC_OK;
  });
}

void prc_simulation_free(prc_simulation* sim) { delete sim; }

prc_status prc_simulation_step(prc_simulation* sim, size_t n_steps) {
  PRC_REQUIRE(sim != nullptr);
  return guarded([&] {
    for (size_t i = 0; i < n_steps; ++i) {
      peri::SimState next = peri::step(sim->state, sim->config.dt, sim->workspace, sim->config.soil, sim->bc);
      const size_t limit = sim->config.clamp_limit;
      if (limit > 0 && next.diagnostics.clamp_count > limit) {
        return fail(PRC_ERR_INSTABILITY, "clamp count " + std::to_string(next.diagnostics.clamp_count) +
                                             " exceeds limit " + std::to_string(limit) + " at t = " +
                                             std::to_string(next.t) + " s");
      }
      sim->state = std::move(next);
    }
    return PRC_OK;
  });
}

prc_status prc_simulation_diagnostics(const prc_simulation* sim, prc_diagnostics* out) {
  PRC_REQUIRE(sim != nullptr && out != nullptr);
  const peri::SimState& s = sim->state;
  *out = prc_diagnostics{s.t,
                         s.step_index,
                         s.theta.size(),
                         s.diagnostics.min_theta,
                         s.diagnostics.max_theta,
                         s.diagnostics.clamp_count,
                         s.diagnostics.rhs_norm};
  return PRC_OK;
}

prc_status prc_simulation_theta(const prc_simulation* sim, double* out, size_t capacity) {
  PRC_REQUIRE(sim != nullptr && out != nullptr);
  const auto& v = sim->state.theta.values;
  if (capacity < v.size()) return fail(PRC_ERR_BUFFER_TOO_SMALL, "need " + std::to_string(v.size()) + " values");
  std::copy(v.begin(), v.end(), out);
  return PRC_OK;
}

prc_status prc_simulation_depths(const prc_simulation* sim, double* out, size_t capacity) {
  PRC_REQUIRE(sim != nullptr && out != nullptr);
  const auto& v = sim->depths;
  if (capacity < v.size()) return fail(PRC_ERR_BUFFER_TOO_SMALL, "need " + std::to_string(v.size()) + " values");
  std::copy(v.begin(), v.end(), out);
  return PRC_OK;
}

prc_status prc_run_scenario(const prc_config* config, prc_run_result* result, prc_line_callback callback,
                            void* user) {
  PRC_REQUIRE(config != nullptr);
  return guarded([&] {
    const peri::ScenarioResult r = peri::run_scenario(config->config);
    const peri::Trajectory& t = r.trajectory;
    const peri::Diagnostics& d = t.final_state.diagnostics;
    if (result != nullptr) {
      *result = prc_run_result{t.steps_planned, t.steps_completed, t.snapshots.size(), d.clamp_count,
                               t.final_state.t, d.min_theta,       d.max_theta,        t.completed() ? 1 : 0};
    }
    emit(callback, user,
         config->config.label + ": " + std::to_string(t.steps_completed) + "/" + std::to_string(t.steps_planned) +
             " steps, t = " + peri::format_double(t.final_state.t) + " s, theta in [" +
             peri::format_double(d.min_theta) + ", " + peri::format_double(d.max_theta) +
             "], clamps " + std::to_string(d.clamp_count));
    for (const auto& f : r.files) emit(callback, user, "wrote " + f.string() + (r.partial ? " (partial)" : ""));
    if (!t.completed()) return fail(PRC_ERR_INSTABILITY, t.failure->message);
    return PRC_OK;
  });
}

prc_status prc_verify_transforms(int max_degree, int inject_fault, prc_line_callback callback, void* user) {
  return guarded([&] {
    const peri::TransformReport report = peri::verify_transforms(max_degree, inject_fault != 0);
    for (const std::string& line : report.lines()) emit(callback, user, line);
    return report.passed() ? PRC_OK : fail(PRC_ERR_VERIFICATION, "transform verification failed");
  });
}

prc_status prc_verify_operator(const prc_config* config, const int* n_list, size_t n_count,
                               prc_line_callback callback, void* user) {
  PRC_REQUIRE(config != nullptr && (n_list != nullptr || n_count == 0));
  return guarded([&] {
    const peri::OperatorReport report =
        peri::verify_operator(config->config, std::vector<int>(n_list, n_list + n_count));
    for (const std::string& line : report.lines()) emit(callback, user, line);
    return report.passed() ? PRC_OK : fail(PRC_ERR_VERIFICATION, "operator verification failed");
  });
}

}  // extern "C"
