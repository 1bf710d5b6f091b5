#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/chebyshev.hpp"

namespace peri {

enum class KernelFamily { Uniform, Linear, Distributed };

std::string_view to_string(KernelFamily family) noexcept;
/// Throws std::invalid_argument on an unknown name.
KernelFamily parse_kernel_family(std::string_view name);

/// Influence function phi. Accepts |z| <= 2 so that differences of two points
/// of [-1, 1] can be passed; each family's branch formula is applied as is.
double evaluate_phi(KernelFamily family, double delta, double z);

/// phi(z) / |z|. The uniform and linear families are singular at 0 and are
/// regularized as phi(z) / max(|z|, z_floor); z_floor is ignored for the
/// distributed family, which vanishes near 0.
double evaluate_phibar(KernelFamily family, double delta, double z, double z_floor = 0.0);

struct BetaValue {
  double closed_form;  // integral of phibar over [-1, 1] in closed form
  double quadrature;   // the same integral by adaptive Gauss-Kronrod
  bool regularized;    // true for the uniform and linear families

  double value() const noexcept { return closed_form; }
};

/// beta = integral of phibar over [-1, 1]. For the uniform and linear
/// families z_floor must be > 0.
BetaValue compute_beta(KernelFamily family, double delta, double z_floor = 0.0);
double beta_closed_form(KernelFamily family, double delta, double z_floor = 0.0);
double beta_quadrature(KernelFamily family, double delta, double z_floor = 0.0);

/// Influence function bound to a grid: phibar sampled at the nodes, the
/// regularization floor taken from that grid, and beta.
struct KernelSpec {
  KernelFamily family = KernelFamily::Distributed;
  double delta = 0.15;
  double z_floor = 0.0;
  BetaValue beta{};
  NodalField nodal_values;

  static KernelSpec build(KernelFamily family, double delta, const SpectralGrid& g);

  double phibar(double z) const { return evaluate_phibar(family, delta, z, z_floor); }
  /// Points where phibar(z' - z) is not smooth as a function of z'.
  std::vector<double> breakpoints() const;
};

NodalField sample_kernel(const KernelSpec& spec, const SpectralGrid& g);

}  // namespace peri
