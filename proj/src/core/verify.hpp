#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"

namespace peri {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TransformReport {
  std::vector<CheckResult> checks;
  std::vector<int> decay_n;
  std::vector<double> decay_errors;  // exp(z) projection errors at decay_n

  bool passed() const;
  std::vector<std::string> lines() const;
};

/// Round trip, linearity, product formula and projection decay for all
/// N = 4, 8, ... <= max_degree (just N = max_degree when it is below 4).
/// inject_fault perturbs one forward-transform coefficient so that the
/// harness can be shown to fail.
TransformReport verify_transforms(int max_degree = 256, bool inject_fault = false);

struct DiscrepancyRow {
  int n_modes = 0;
  double max_abs = 0.0;   // max |spectral - oracle| at the nodes, t = 0
  double oracle_max = 0.0;
};

struct DistanceRow {
  int n_coarse = 0;
  int n_fine = 0;
  double distance = 0.0;
  double order = 0.0;  // relative to the previous row; NaN for the first
};

struct OperatorReport {
  std::vector<DiscrepancyRow> discrepancy;
  std::vector<DistanceRow> distances;
  std::vector<std::size_t> clamp_counts;  // per N
  double beta_closed = 0.0;
  double beta_quadrature = 0.0;
  std::vector<CheckResult> checks;

  bool passed() const;
  std::vector<std::string> lines() const;
};

/// Spectral-vs-oracle table at t = 0, self-convergence of final-time
/// solutions across n_list (ascending), and the beta cross-check.
OperatorReport verify_operator(const SimConfig& config, const std::vector<int>& n_list);

/// ||a - b|| in the weighted norm of `common`, both fields interpolated there.
double trajectory_distance(const SpectralGrid& ga, const NodalField& a, const SpectralGrid& gb, const NodalField& b,
                           const SpectralGrid& common);

}  // namespace peri
