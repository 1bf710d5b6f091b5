#pragma once

#include "core/chebyshev.hpp"
#include "core/kernel.hpp"
#include "core/nonlocal_operator.hpp"
#include "core/soil.hpp"

namespace peri {

/// Direct evaluation of the nonlocal operator
///
///   L * integral_{-1}^{1} phibar(z' - z) (K(z) + K(z')) / 2 (H(z') - H(z)) dz'
///
/// with K and H interpolated from their nodal values on the theta grid. The
/// z' integral uses 8-point Gauss-Legendre on a uniform mesh of cells, with
/// every cell additionally cut where phibar(z' - z) has a kink. Shares no
/// code with the transform path.
class QuadratureOracle {
 public:
  /// mesh_cells <= 0 selects 10 (2N + 1) cells.
  QuadratureOracle(const NodalField& theta, const SpectralGrid& g, const KernelSpec& spec, const SoilParams& soil,
                   RhsOptions options = {}, int mesh_cells = 0);

  /// Interaction term (sink excluded) at reference coordinate z.
  double interaction_at(double z) const;

  /// Interaction term at every node of `at` (same physical interval as the
  /// theta grid, any resolution).
  NodalField interaction(const SpectralGrid& at) const;

  /// L * integral over [-1, 1] of the interaction term, and of its absolute
  /// value, by composite Gauss-Legendre in z (cells cut where the integration
  /// limits cross a kernel kink). Pairwise exchange makes the first vanish.
  struct Balance {
    double integral = 0.0;
    double magnitude = 0.0;
  };
  Balance balance(int outer_cells = 64) const;

  int mesh_cells() const noexcept { return mesh_cells_; }

 private:
  KernelSpec spec_;
  double map_scale_;
  int mesh_cells_;
  LobattoInterpolant k_;
  LobattoInterpolant h_;
};

/// Interaction term plus sink at the nodes of g.
NodalField rhs_quadrature_oracle(const NodalField& theta, const SpectralGrid& g, const KernelSpec& spec,
                                 const SoilParams& soil, const NodalField& sink, RhsOptions options = {},
                                 int mesh_cells = 0);

}  // namespace peri
