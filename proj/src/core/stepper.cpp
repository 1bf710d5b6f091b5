#include "core/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/config.hpp"
#include "core/errors.hpp"

namespace peri {
namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void update_range(Diagnostics& d, const NodalField& theta) {
  const auto [lo, hi] = std::minmax_element(theta.values.begin(), theta.values.end());
  d.min_theta = *lo;
  d.max_theta = *hi;
}

}  // namespace

void BoundaryConditions::validate() const {
  for (double v : {top_start, top_end, bottom_start, bottom_end}) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("boundary values must lie in [0, 1]");
  }
}

SimState init_state(const std::function<double(double, double)>& initial, const SpectralGrid& g,
                    const BoundaryConditions& bc) {
  const std::vector<double> depth = g.physical_nodes();
  SimState s;
  s.theta.values.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s.theta.values[i] = initial(depth[i], g.nodes()[i]);
  s.theta.values[g.surface_node()] = bc.top(0.0);
  s.theta.values[g.bottom_node()] = bc.bottom(0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = s.theta.values[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("initial moisture " + std::to_string(v) + " at depth " +
                                  std::to_string(depth[i]) + " cm lies outside [0, 1]");
    }
  }
  update_range(s.diagnostics, s.theta);
  return s;
}

SimState step(const SimState& state, double dt, RhsWorkspace& workspace, const SoilParams& soil,
              const BoundaryConditions& bc) {
  const SpectralGrid& g = workspace.base_grid();
  const double t_next = static_cast<double>(state.step_index + 1) * dt;

  NodalField rhs;
  try {
    rhs = rhs_spectral(state.theta, workspace, soil);
  } catch (const StepFailure& e) {
    throw StepFailure(e.node(), t_next, e.rhs_norm(), e.detail());
  }

  SimState next;
  next.t = t_next;
  next.step_index = state.step_index + 1;
  next.diagnostics.clamp_count = state.diagnostics.clamp_count;
  next.diagnostics.rhs_norm = max_abs(rhs.values);
  next.theta.values.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) next.theta.values[i] = state.theta.values[i] + dt * rhs.values[i];

  const std::size_t top = g.surface_node();
  const std::size_t bottom = g.bottom_node();
  next.theta.values[top] = bc.top(t_next);
  next.theta.values[bottom] = bc.bottom(t_next);

  const double lo = soil.theta_r - kRangeTolerance;
  const double hi = soil.theta_s + kRangeTolerance;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double& v = next.theta.values[i];
    if (!std::isfinite(v)) throw StepFailure(i, t_next, next.diagnostics.rhs_norm, "non-finite moisture");
    if (i == top || i == bottom) continue;
    if (v < lo) {
      v = soil.theta_r;
      ++next.diagnostics.clamp_count;
    } else if (v > hi) {
      v = soil.theta_s;
      ++next.diagnostics.clamp_count;
    }
  }
  update_range(next.diagnostics, next.theta);
  return next;
}

std::vector<std::size_t> snapshot_schedule(std::size_t steps, int count) {
  if (count < 1) throw std::invalid_argument("snapshot count must be >= 1");
  if (count == 1 || steps == 0) return {steps};
  std::vector<std::size_t> out;
  for (int i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * static_cast<double>(steps) / static_cast<double>(count - 1)));
    if (out.empty() || out.back() != idx) out.push_back(idx);
  }
  return out;
}

Trajectory run(const SimConfig& config) {
  config.validate();
  const SpectralGrid g = config.make_grid();
  RhsWorkspace workspace(g, config.kernel, config.delta, config.sink, config.testing);
  BoundaryConditions bc = config.boundary;
  bc.duration = config.duration;

  Trajectory out;
  out.depths = g.physical_nodes();
  out.steps_planned = config.step_count();
  const double depth = config.depth;
  SimState state = init_state(
      [&](double z_phys, double z_ref) { return config.initial.evaluate(z_phys, z_ref, depth); }, g, bc);

  const std::vector<std::size_t> schedule = snapshot_schedule(out.steps_planned, config.snapshots);
  auto next_snapshot = schedule.begin();
  auto take = [&] {
    while (next_snapshot != schedule.end() && *next_snapshot == state.step_index) {
      out.snapshots.push_back(state);
      ++next_snapshot;
    }
  };
  take();
  try {
    while (state.step_index < out.steps_planned) {
      state = step(state, config.dt, workspace, config.soil, bc);
      take();
      if (config.clamp_limit > 0 && state.diagnostics.clamp_count > config.clamp_limit) {
        const auto& v = state.theta.values;
        throw StepFailure(0, state.t, state.diagnostics.rhs_norm,
                          "clamp count " + std::to_string(state.diagnostics.clamp_count) + " exceeds limit " +
                              std::to_string(config.clamp_limit) + " (theta range " +
                              std::to_string(*std::min_element(v.begin(), v.end())) + " .. " +
                              std::to_string(*std::max_element(v.begin(), v.end())) + ")");
      }
    }
  } catch (const StepFailure& e) {
    out.failure = StepFailureInfo{e.node(), e.time(), e.rhs_norm(), e.what()};
  }
  out.steps_completed = state.step_index;
  out.final_state = std::move(state);
  return out;
}

}  // namespace peri
