#pragma once

#include <vector>

#include "core/chebyshev.hpp"
#include "core/kernel.hpp"
#include "core/soil.hpp"

namespace peri {

/// Switches for degenerate verification problems. Production runs use the
/// defaults.
struct RhsOptions {
  bool gravity = true;             // H = h_m + z; false drops the elevation term
  bool zero_conductivity = false;  // K == 0 everywhere

  bool operator==(const RhsOptions&) const = default;
};

/// State for evaluating the spectral right-hand side. The field theta lives on
/// the base grid (degree N); all products and convolutions are carried out on
/// the 2N grid, whose even-indexed nodes coincide with the base nodes.
///
/// Not thread-safe: scratch buffers are reused between calls.
class RhsWorkspace {
 public:
  RhsWorkspace(const SpectralGrid& base, KernelFamily family, double delta, double sink,
               RhsOptions options = {});

  const SpectralGrid& base_grid() const noexcept { return base_; }
  const SpectralGrid& grid() const noexcept { return fine_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  const ChebSeries& kernel_coeffs() const noexcept { return kernel_coeffs_; }
  double beta() const noexcept { return kernel_.beta.value(); }
  const NodalField& sink() const noexcept { return sink_; }
  const RhsOptions& options() const noexcept { return options_; }

  /// Replace the sink with a profile sampled on the 2N grid.
  void set_sink(NodalField sink_on_fine_grid);

 private:
  friend NodalField rhs_spectral(const NodalField& theta, RhsWorkspace& w, const SoilParams& soil);

  SpectralGrid base_;
  SpectralGrid fine_;
  std::vector<double> base_depths_;
  std::vector<double> fine_depths_;
  KernelSpec kernel_;
  ChebSeries kernel_coeffs_;
  NodalField sink_;
  RhsOptions options_;

  NodalField k_base_, h_base_, k_fine_, h_fine_, rhs_fine_;
};

/// d theta / dt at the base nodes:
///   (L/2) [ (phibar*Lambda) + K (phibar*H) - H (phibar*K) - beta Lambda ] + S
/// with Lambda = K H from the series product, every convolution evaluated as
/// F^-1(F(phibar) F(.)), and L the map scale. Throws StepFailure (time NaN)
/// naming the first node where a non-finite value appears.
NodalField rhs_spectral(const NodalField& theta, RhsWorkspace& w, const SoilParams& soil);

/// Unweighted integral of (rhs - sink) over the physical domain, by
/// Clenshaw-Curtis quadrature on the nodes of g.
double mass_balance(const NodalField& rhs, const NodalField& sink, const SpectralGrid& g);

/// Unweighted integral of rhs over the physical domain.
double total_mass_change(const NodalField& rhs, const SpectralGrid& g);

}  // namespace peri
