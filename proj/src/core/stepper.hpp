#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/chebyshev.hpp"
#include "core/nonlocal_operator.hpp"
#include "core/soil.hpp"

namespace peri {

struct SimConfig;

/// Band around [theta_r, theta_S] tolerated before a node is clamped.
inline constexpr double kRangeTolerance = 1e-6;

/// Dirichlet data, each side affine in time:
///   theta(t) = start (1 - t/T) + end t/T.
struct BoundaryConditions {
  double top_start = 0.0;
  double top_end = 0.0;
  double bottom_start = 0.0;
  double bottom_end = 0.0;
  double duration = 0.0;

  double top(double t) const noexcept { return affine(top_start, top_end, t); }
  double bottom(double t) const noexcept { return affine(bottom_start, bottom_end, t); }

  /// Throws std::invalid_argument if a value leaves [0, 1].
  void validate() const;

  bool operator==(const BoundaryConditions&) const = default;

 private:
  double affine(double start, double end, double t) const noexcept {
    if (start == end || duration <= 0.0) return start;
    const double s = t / duration;
    return start * (1.0 - s) + end * s;
  }
};

struct Diagnostics {
  double min_theta = 0.0;
  double max_theta = 0.0;
  std::size_t clamp_count = 0;  // cumulative
  double rhs_norm = 0.0;        // max |d theta / dt| of the last step
};

struct SimState {
  double t = 0.0;
  NodalField theta;
  std::size_t step_index = 0;
  Diagnostics diagnostics;
};

/// theta0(z_phys, z_ref) sampled at the nodes, boundary nodes replaced by the
/// boundary data at t = 0. Throws std::invalid_argument for values outside [0, 1].
SimState init_state(const std::function<double(double, double)>& initial, const SpectralGrid& g,
                    const BoundaryConditions& bc);

/// One explicit Euler step: theta += dt rhs, boundary overwrite at t + dt,
/// then interior nodes outside [theta_r - tol, theta_S + tol] are clamped and
/// counted. Throws StepFailure on a non-finite value.
SimState step(const SimState& state, double dt, RhsWorkspace& workspace, const SoilParams& soil,
              const BoundaryConditions& bc);

struct StepFailureInfo {
  std::size_t node = 0;
  double t = 0.0;
  double rhs_norm = 0.0;
  std::string message;
};

struct Trajectory {
  std::vector<double> depths;  // physical node coordinates, cm
  std::vector<SimState> snapshots;
  std::size_t steps_completed = 0;
  std::size_t steps_planned = 0;
  SimState final_state;
  std::optional<StepFailureInfo> failure;

  bool completed() const noexcept { return !failure.has_value(); }
};

/// Step indices at which snapshots are taken: `count` points spread evenly
/// over [0, steps], always including 0 and steps.
std::vector<std::size_t> snapshot_schedule(std::size_t steps, int count);

/// Runs a configuration to its final time. A step failure stops the run and
/// is recorded in the trajectory together with the snapshots taken so far.
Trajectory run(const SimConfig& config);

}  // namespace peri
