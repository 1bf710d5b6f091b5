#include "core/kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace peri {
namespace {

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("kernel: delta must lie in (0, 1), got " + std::to_string(delta));
  }
}

void require_floor(KernelFamily family, double z_floor) {
  if (family != KernelFamily::Distributed && !(z_floor > 0.0)) {
    throw std::invalid_argument("kernel: " + std::string(to_string(family)) +
                                " family diverges at 0 and needs a positive z_floor");
  }
}

}  // namespace

std::string_view to_string(KernelFamily family) noexcept {
  switch (family) {
    case KernelFamily::Uniform: return "uniform";
    case KernelFamily::Linear: return "linear";
    case KernelFamily::Distributed: return "distributed";
  }
  return "distributed";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "uniform") return KernelFamily::Uniform;
  if (name == "linear") return KernelFamily::Linear;
  if (name == "distributed") return KernelFamily::Distributed;
  throw std::invalid_argument("unknown kernel family '" + std::string(name) +
                              "' (expected uniform, linear or distributed)");
}

double evaluate_phi(KernelFamily family, double delta, double z) {
  require_delta(delta);
  const double a = std::abs(z);
  switch (family) {
    case KernelFamily::Uniform: return a <= delta ? 2.0 / delta : 0.0;
    case KernelFamily::Linear: return a <= delta ? 1.0 - a / delta : 0.0;
    case KernelFamily::Distributed: return a >= 1.0 - delta ? (a - 1.0 + delta) / delta : 0.0;
  }
  return 0.0;
}

double evaluate_phibar(KernelFamily family, double delta, double z, double z_floor) {
  const double phi = evaluate_phi(family, delta, z);
  if (phi == 0.0) return 0.0;
  const double a = std::abs(z);
  if (family == KernelFamily::Distributed) return phi / a;
  require_floor(family, z_floor);
  return phi / std::max(a, z_floor);
}

double beta_closed_form(KernelFamily family, double delta, double z_floor) {
  require_delta(delta);
  require_floor(family, z_floor);
  switch (family) {
    case KernelFamily::Distributed:
      return 2.0 * (1.0 + (1.0 - delta) / delta * std::log1p(-delta));
    case KernelFamily::Uniform:
      if (z_floor >= delta) return 4.0 / z_floor;
      return 4.0 / delta * (1.0 + std::log(delta / z_floor));
    case KernelFamily::Linear:
      if (z_floor >= delta) return delta / z_floor;
      return 2.0 * ((1.0 - z_floor / (2.0 * delta)) + std::log(delta / z_floor) - (delta - z_floor) / delta);
  }
  return 0.0;
}

double beta_quadrature(KernelFamily family, double delta, double z_floor) {
  require_delta(delta);
  require_floor(family, z_floor);
  KernelSpec probe;
  probe.family = family;
  probe.delta = delta;
  probe.z_floor = z_floor;
  std::vector<double> cuts = probe.breakpoints();
  cuts.push_back(-1.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto f = [&](double z) { return evaluate_phibar(family, delta, z, z_floor); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::max(cuts[i], -1.0);
    const double b = std::min(cuts[i + 1], 1.0);
    if (b <= a) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-15);
  }
  return total;
}

BetaValue compute_beta(KernelFamily family, double delta, double z_floor) {
  return {beta_closed_form(family, delta, z_floor), beta_quadrature(family, delta, z_floor),
          family != KernelFamily::Distributed};
}

KernelSpec KernelSpec::build(KernelFamily family, double delta, const SpectralGrid& g) {
  require_delta(delta);
  KernelSpec spec;
  spec.family = family;
  spec.delta = delta;
  spec.z_floor = family == KernelFamily::Distributed ? 0.0 : g.smallest_positive_node();
  spec.beta = compute_beta(family, delta, spec.z_floor);
  spec.nodal_values = sample_kernel(spec, g);
  return spec;
}

std::vector<double> KernelSpec::breakpoints() const {
  if (family == KernelFamily::Distributed) return {-(1.0 - delta), 0.0, 1.0 - delta};
  return {-delta, -z_floor, 0.0, z_floor, delta};
}

NodalField sample_kernel(const KernelSpec& spec, const SpectralGrid& g) {
  require_delta(spec.delta);
  NodalField out(std::vector<double>(g.size()));
  for (std::size_t h = 0; h < g.size(); ++h) out.values[h] = spec.phibar(g.nodes()[h]);
  return out;
}

}  // namespace peri
