#include "core/nonlocal_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"

namespace peri {
namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_finite(const std::vector<double>& v, std::size_t stride, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw StepFailure(i / stride, std::numeric_limits<double>::quiet_NaN(), max_abs(v),
                        std::string("non-finite ") + what);
    }
  }
}

}  // namespace

RhsWorkspace::RhsWorkspace(const SpectralGrid& base, KernelFamily family, double delta, double sink,
                           RhsOptions options)
    : base_(base),
      fine_(2 * base.n_modes(), base.phys_lo(), base.phys_hi(), base.orientation()),
      base_depths_(base_.physical_nodes()),
      fine_depths_(fine_.physical_nodes()),
      kernel_(KernelSpec::build(family, delta, fine_)),
      kernel_coeffs_(forward_transform(kernel_.nodal_values, fine_)),
      sink_(std::vector<double>(fine_.size(), sink)),
      options_(options),
      k_base_(std::vector<double>(base_.size())),
      h_base_(std::vector<double>(base_.size())),
      k_fine_(std::vector<double>(fine_.size())),
      h_fine_(std::vector<double>(fine_.size())),
      rhs_fine_(std::vector<double>(fine_.size())) {
  if (!std::isfinite(sink)) throw std::invalid_argument("RhsWorkspace: sink must be finite");
}

void RhsWorkspace::set_sink(NodalField sink_on_fine_grid) {
  if (sink_on_fine_grid.size() != fine_.size() || !sink_on_fine_grid.all_finite()) {
    throw std::invalid_argument("RhsWorkspace: sink must be finite and sampled on the 2N grid");
  }
  sink_ = std::move(sink_on_fine_grid);
}

NodalField rhs_spectral(const NodalField& theta, RhsWorkspace& w, const SoilParams& soil) {
  const SpectralGrid& base = w.base_;
  const SpectralGrid& fine = w.fine_;
  if (theta.size() != base.size()) {
    throw std::invalid_argument("rhs_spectral: theta has " + std::to_string(theta.size()) + " nodes, grid has " +
                                std::to_string(base.size()));
  }
  check_finite(theta.values, 1, "theta");

  const bool gravity = w.options_.gravity;
  const bool dry = w.options_.zero_conductivity;
  auto fill = [&](const std::vector<double>& th, const std::vector<double>& depth, NodalField& k, NodalField& h) {
    for (std::size_t i = 0; i < th.size(); ++i) {
      k.values[i] = dry ? 0.0 : conductivity(th[i], soil);
      h.values[i] = matric_head(th[i], soil) + (gravity ? depth[i] : 0.0);
    }
  };

  // K and H at the base nodes give the degree-N series entering the product.
  fill(theta.values, w.base_depths_, w.k_base_, w.h_base_);
  const ChebSeries k_coeffs = forward_transform(w.k_base_, base);
  const ChebSeries h_coeffs = forward_transform(w.h_base_, base);
  const ChebSeries lambda_coeffs = series_product(h_coeffs, k_coeffs);

  // theta lifted onto the 2N grid for the pointwise factors.
  const NodalField theta_fine = inverse_transform(pad_to(forward_transform(theta, base), fine.n_modes()), fine);
  fill(theta_fine.values, w.fine_depths_, w.k_fine_, w.h_fine_);

  const int degree = fine.n_modes();
  const NodalField lambda = inverse_transform(lambda_coeffs, fine);
  const NodalField conv_lambda = convolve(w.kernel_coeffs_, lambda_coeffs, fine);
  const NodalField conv_h = convolve(w.kernel_coeffs_, pad_to(h_coeffs, degree), fine);
  const NodalField conv_k = convolve(w.kernel_coeffs_, pad_to(k_coeffs, degree), fine);

  const double half_scale = 0.5 * fine.map_scale();
  const double beta = w.beta();
  auto& out = w.rhs_fine_.values;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = half_scale * (conv_lambda.values[i] + w.k_fine_.values[i] * conv_h.values[i] -
                           w.h_fine_.values[i] * conv_k.values[i] - beta * lambda.values[i]) +
             w.sink_.values[i];
  }

  // Restriction: base node h is fine node 2h, so evaluating the degree-2N
  // interpolant at the base nodes is a stride-2 gather.
  NodalField rhs(std::vector<double>(base.size()));
  for (std::size_t h = 0; h < base.size(); ++h) rhs.values[h] = out[2 * h];
  check_finite(rhs.values, 1, "right-hand side");
  return rhs;
}

double mass_balance(const NodalField& rhs, const NodalField& sink, const SpectralGrid& g) {
  if (rhs.size() != g.size() || sink.size() != g.size()) {
    throw std::invalid_argument("mass_balance: field lengths must match the grid");
  }
  const std::vector<double> w = clenshaw_curtis_weights(g);
  double sum = 0.0;
  for (std::size_t h = 0; h < g.size(); ++h) sum += w[h] * (rhs.values[h] - sink.values[h]);
  return g.map_scale() * sum;
}

double total_mass_change(const NodalField& rhs, const SpectralGrid& g) {
  return mass_balance(rhs, NodalField(std::vector<double>(g.size(), 0.0)), g);
}

}  // namespace peri
