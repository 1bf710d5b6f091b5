#include "core/quadrature_oracle.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace peri {
namespace {

std::vector<double> nodal_conductivity(const NodalField& theta, const SoilParams& soil, const RhsOptions& opts) {
  std::vector<double> k(theta.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = opts.zero_conductivity ? 0.0 : conductivity(theta.values[i], soil);
  return k;
}

std::vector<double> nodal_potential(const NodalField& theta, const SpectralGrid& g, const SoilParams& soil,
                                    const RhsOptions& opts) {
  const std::vector<double> depth = g.physical_nodes();
  std::vector<double> h(theta.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = matric_head(theta.values[i], soil) + (opts.gravity ? depth[i] : 0.0);
  }
  return h;
}

}  // namespace

QuadratureOracle::QuadratureOracle(const NodalField& theta, const SpectralGrid& g, const KernelSpec& spec,
                                   const SoilParams& soil, RhsOptions options, int mesh_cells)
    : spec_(spec),
      map_scale_(g.map_scale()),
      mesh_cells_(mesh_cells > 0 ? mesh_cells : 10 * (2 * g.n_modes() + 1)),
      k_(g, nodal_conductivity(theta, soil, options)),
      h_(g, nodal_potential(theta, g, soil, options)) {
  if (theta.size() != g.size()) throw std::invalid_argument("QuadratureOracle: theta does not match grid");
}

double QuadratureOracle::interaction_at(double z) const {
  const double k_here = k_(z);
  const double h_here = h_(z);
  auto integrand = [&](double zp) {
    const double phibar = spec_.phibar(zp - z);
    if (phibar == 0.0) return 0.0;
    return phibar * 0.5 * (k_here + k_(zp)) * (h_(zp) - h_here);
  };

  std::vector<double> cuts;
  cuts.reserve(mesh_cells_ + 8);
  for (int i = 0; i <= mesh_cells_; ++i) cuts.push_back(-1.0 + 2.0 * i / mesh_cells_);
  for (double b : spec_.breakpoints()) {
    const double c = z + b;
    if (c > -1.0 && c < 1.0) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += boost::math::quadrature::gauss<double, 8>::integrate(integrand, cuts[i], cuts[i + 1]);
  }
  return map_scale_ * total;
}

QuadratureOracle::Balance QuadratureOracle::balance(int outer_cells) const {
  if (outer_cells < 1) throw std::invalid_argument("QuadratureOracle::balance: outer_cells must be >= 1");
  std::vector<double> cuts;
  for (int i = 0; i <= outer_cells; ++i) cuts.push_back(-1.0 + 2.0 * i / outer_cells);
  for (double b : spec_.breakpoints()) {
    for (double c : {-1.0 - b, 1.0 - b}) {
      if (c > -1.0 && c < 1.0) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  using rule = boost::math::quadrature::gauss<double, 8>;
  Balance out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b <= a) continue;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    // The 8-point rule stores the non-negative abscissae of a symmetric rule.
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (double sign : {-1.0, 1.0}) {
        if (x[k] == 0.0 && sign < 0) continue;
        const double v = interaction_at(mid + sign * half * x[k]);
        out.integral += half * w[k] * v;
        out.magnitude += half * w[k] * std::abs(v);
      }
    }
  }
  // interaction_at already carries one factor L; the outer integral adds the other.
  out.integral *= map_scale_;
  out.magnitude *= map_scale_;
  return out;
}

NodalField QuadratureOracle::interaction(const SpectralGrid& at) const {
  NodalField out(std::vector<double>(at.size()));
  for (std::size_t i = 0; i < at.size(); ++i) out.values[i] = interaction_at(at.nodes()[i]);
  return out;
}

NodalField rhs_quadrature_oracle(const NodalField& theta, const SpectralGrid& g, const KernelSpec& spec,
                                 const SoilParams& soil, const NodalField& sink, RhsOptions options, int mesh_cells) {
  if (sink.size() != g.size()) throw std::invalid_argument("rhs_quadrature_oracle: sink does not match grid");
  const QuadratureOracle oracle(theta, g, spec, soil, options, mesh_cells);
  NodalField out = oracle.interaction(g);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += sink.values[i];
  return out;
}

}  // namespace peri
