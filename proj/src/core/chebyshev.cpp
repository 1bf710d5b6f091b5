#include "core/chebyshev.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace peri {
namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe, execution with the new-array interface is.
// Plans are created once per length and live for the whole process.
class DctPlans {
 public:
  static DctPlans& instance() {
    static DctPlans plans;
    return plans;
  }

  fftw_plan redft00(int length) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(length);
    if (it != plans_.end()) return it->second.get();
    std::vector<double> in(length), out(length);
    fftw_plan p = fftw_plan_r2r_1d(length, in.data(), out.data(), FFTW_REDFT00,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (p == nullptr) throw std::runtime_error("fftw: could not plan DCT-I of length " + std::to_string(length));
    plans_.emplace(length, PlanPtr(p, fftw_destroy_plan));
    return p;
  }

 private:
  using PlanPtr = std::unique_ptr<std::remove_pointer_t<fftw_plan>, decltype(&fftw_destroy_plan)>;
  std::mutex mutex_;
  std::map<int, PlanPtr> plans_;
};

// Y_k = X_0 + (-1)^k X_N + 2 sum_{j=1}^{N-1} X_j cos(pi j k / N)
std::vector<double> dct1(std::span<const double> x) {
  std::vector<double> in(x.begin(), x.end());
  std::vector<double> out(x.size());
  fftw_execute_r2r(DctPlans::instance().redft00(static_cast<int>(x.size())), in.data(), out.data());
  return out;
}

void require_matching(std::size_t length, const SpectralGrid& g, const char* what) {
  if (length != g.size()) {
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(length) +
                                " does not match grid with " + std::to_string(g.size()) + " nodes");
  }
}

// Coefficients of a series of any degree folded onto degree N, exploiting
// T_k(z_h) = T_{k'}(z_h) at Lobatto nodes with k' = k mod 2N reflected into 0..N.
std::vector<double> fold_onto(const ChebSeries& c, int n) {
  std::vector<double> folded(n + 1, 0.0);
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    int r = static_cast<int>(k % static_cast<std::size_t>(2 * n));
    if (r > n) r = 2 * n - r;
    folded[r] += c.coeffs[k];
  }
  return folded;
}

}  // namespace

SpectralGrid::SpectralGrid(int n_modes, double phys_lo, double phys_hi, Orientation orientation)
    : n_modes_(n_modes), phys_lo_(phys_lo), phys_hi_(phys_hi), orientation_(orientation) {
  if (n_modes < 2) throw std::invalid_argument("make_grid: n_modes must be >= 2");
  if (!(phys_lo < phys_hi) || !std::isfinite(phys_lo) || !std::isfinite(phys_hi)) {
    throw std::invalid_argument("make_grid: degenerate physical interval");
  }
  map_scale_ = 0.5 * (phys_hi - phys_lo);
  map_offset_ = 0.5 * (phys_hi + phys_lo);
  map_sign_ = orientation == Orientation::SurfaceAtPlusOne ? -1.0 : 1.0;

  const int n = n_modes;
  nodes_.resize(n + 1);
  weights_.assign(n + 1, kPi / n);
  gammas_.assign(n + 1, kPi / 2);
  // sin(pi (N - 2h) / 2N) == cos(h pi / N), written this way so the grid is
  // exactly antisymmetric and the centre node is exactly zero.
  for (int h = 0; h <= n; ++h) nodes_[h] = std::sin(kPi * (n - 2 * h) / (2.0 * n));
  weights_.front() = weights_.back() = kPi / (2.0 * n);
  gammas_.front() = gammas_.back() = kPi;
}

double SpectralGrid::to_physical(double z_ref) const noexcept {
  return map_offset_ + map_sign_ * map_scale_ * z_ref;
}

double SpectralGrid::to_reference(double z_phys) const noexcept {
  return (z_phys - map_offset_) / (map_sign_ * map_scale_);
}

std::vector<double> SpectralGrid::physical_nodes() const {
  std::vector<double> out(nodes_.size());
  std::transform(nodes_.begin(), nodes_.end(), out.begin(), [this](double z) { return to_physical(z); });
  // Endpoints exactly on the interval ends.
  out[surface_node()] = phys_lo_;
  out[bottom_node()] = phys_hi_;
  return out;
}

std::size_t SpectralGrid::surface_node() const noexcept {
  return orientation_ == Orientation::SurfaceAtPlusOne ? 0 : nodes_.size() - 1;
}

std::size_t SpectralGrid::bottom_node() const noexcept {
  return orientation_ == Orientation::SurfaceAtPlusOne ? nodes_.size() - 1 : 0;
}

double SpectralGrid::smallest_positive_node() const noexcept {
  double best = 1.0;
  for (double z : nodes_) {
    if (z > 0.0) best = std::min(best, z);
  }
  return best;
}

bool ChebSeries::all_finite() const noexcept {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return std::isfinite(c); });
}

bool NodalField::all_finite() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

SpectralGrid make_grid(int n_modes, double phys_lo, double phys_hi, Orientation orientation) {
  return SpectralGrid(n_modes, phys_lo, phys_hi, orientation);
}

ChebSeries forward_transform(const NodalField& u, const SpectralGrid& g) {
  require_matching(u.size(), g, "forward_transform");
  const int n = g.n_modes();
  // sum_h u_h T_k(z_h) w_h = (pi / 2N) Y_k, then divide by gamma_k.
  std::vector<double> c = dct1(u.values);
  for (int k = 0; k <= n; ++k) c[k] /= (k == 0 || k == n) ? 2.0 * n : static_cast<double>(n);
  return ChebSeries(std::move(c));
}

ChebSeries forward_transform_direct(const NodalField& u, const SpectralGrid& g) {
  require_matching(u.size(), g, "forward_transform_direct");
  const int n = g.n_modes();
  const auto w = g.weights();
  const auto gamma = g.gammas();
  std::vector<double> c(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double sum = 0.0;
    for (int h = 0; h <= n; ++h) sum += u.values[h] * std::cos(k * h * kPi / n) * w[h];
    c[k] = sum / gamma[k];
  }
  return ChebSeries(std::move(c));
}

NodalField inverse_transform(const ChebSeries& c, const SpectralGrid& g) {
  const int n = g.n_modes();
  std::vector<double> d = c.degree() <= n ? pad_to(c, n).coeffs : fold_onto(c, n);
  for (int k = 1; k < n; ++k) d[k] *= 0.5;
  return NodalField(dct1(d));
}

NodalField inverse_transform_direct(const ChebSeries& c, const SpectralGrid& g) {
  const int n = g.n_modes();
  std::vector<double> u(n + 1, 0.0);
  for (int h = 0; h <= n; ++h) {
    double sum = 0.0;
    for (std::size_t k = 0; k < c.coeffs.size(); ++k) sum += c.coeffs[k] * std::cos(static_cast<double>(k * h) * kPi / n);
    u[h] = sum;
  }
  return NodalField(std::move(u));
}

double evaluate(const ChebSeries& c, double z) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = c.degree(); k >= 1; --k) {
    const double b0 = 2.0 * z * b1 - b2 + c.coeffs[k];
    b2 = b1;
    b1 = b0;
  }
  return c.coeffs.empty() ? 0.0 : c.coeffs[0] + z * b1 - b2;
}

ChebSeries series_product(const ChebSeries& a, const ChebSeries& b) {
  if (a.degree() != b.degree()) {
    throw std::invalid_argument("series_product: degree mismatch (" + std::to_string(a.degree()) + " vs " +
                                std::to_string(b.degree()) + ")");
  }
  if (a.degree() < 0) throw std::invalid_argument("series_product: empty series");
  const int n = a.degree();
  const auto& h = a.coeffs;
  const auto& k = b.coeffs;
  std::vector<double> out(2 * n + 1, 0.0);

  double s0 = 2.0 * h[0] * k[0];
  for (int l = 1; l <= n; ++l) s0 += h[l] * k[l];
  out[0] = 0.5 * s0;

  for (int j = 1; j <= n; ++j) {
    double s = 0.0;
    for (int l = 0; l <= j; ++l) s += h[j - l] * k[l];
    for (int l = 0; l <= n - j; ++l) s += h[j + l] * k[l];
    for (int l = j; l <= n; ++l) s += h[l - j] * k[l];
    out[j] = 0.5 * s;
  }

  for (int j = n + 1; j <= 2 * n; ++j) {
    double s = 0.0;
    for (int l = j - n; l <= n; ++l) s += h[j - l] * k[l];
    out[j] = 0.5 * s;
  }
  return ChebSeries(std::move(out));
}

ChebSeries pad_to(const ChebSeries& c, int degree) {
  if (degree < c.degree()) {
    throw std::invalid_argument("pad_to: target degree " + std::to_string(degree) + " below series degree " +
                                std::to_string(c.degree()));
  }
  std::vector<double> out(degree + 1, 0.0);
  std::copy(c.coeffs.begin(), c.coeffs.end(), out.begin());
  return ChebSeries(std::move(out));
}

NodalField convolve(const ChebSeries& kernel_coeffs, const ChebSeries& field_coeffs, const SpectralGrid& g) {
  if (kernel_coeffs.degree() != g.n_modes() || field_coeffs.degree() != g.n_modes()) {
    throw std::invalid_argument("convolve: series degrees (" + std::to_string(kernel_coeffs.degree()) + ", " +
                                std::to_string(field_coeffs.degree()) + ") must equal grid degree " +
                                std::to_string(g.n_modes()));
  }
  ChebSeries product(kernel_coeffs.coeffs);
  for (std::size_t k = 0; k < product.coeffs.size(); ++k) product.coeffs[k] *= field_coeffs.coeffs[k];
  return inverse_transform(product, g);
}

double weighted_norm(const NodalField& u, const SpectralGrid& g) {
  require_matching(u.size(), g, "weighted_norm");
  const auto w = g.weights();
  double sum = 0.0;
  for (std::size_t h = 0; h < u.size(); ++h) sum += w[h] * u.values[h] * u.values[h];
  return std::sqrt(sum);
}

double projection_error(const std::function<double(double)>& u, const SpectralGrid& g) {
  NodalField samples(std::vector<double>(g.size()));
  for (std::size_t h = 0; h < g.size(); ++h) samples.values[h] = u(g.nodes()[h]);
  const ChebSeries coeffs = forward_transform(samples, g);

  const SpectralGrid dense(16 * g.n_modes(), -1.0, 1.0);
  const NodalField approx = inverse_transform(pad_to(coeffs, dense.n_modes()), dense);
  const auto w = dense.weights();
  double sum = 0.0;
  for (std::size_t h = 0; h < dense.size(); ++h) {
    const double e = u(dense.nodes()[h]) - approx.values[h];
    sum += w[h] * e * e;
  }
  return std::sqrt(sum);
}

std::vector<double> clenshaw_curtis_weights(const SpectralGrid& g) {
  const int n = g.n_modes();
  std::vector<double> w(n + 1, 0.0);
  const bool even = n % 2 == 0;
  const double end_weight = even ? 1.0 / (n * n - 1.0) : 1.0 / (static_cast<double>(n) * n);
  w.front() = w.back() = end_weight;
  for (int j = 1; j < n; ++j) {
    const double theta = j * kPi / n;
    double v = 1.0;
    if (even) {
      for (int k = 1; k < n / 2; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      v -= std::cos(n * theta) / (n * n - 1.0);
    } else {
      for (int k = 1; k <= (n - 1) / 2; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    }
    w[j] = 2.0 * v / n;
  }
  return w;
}

LobattoInterpolant::LobattoInterpolant(const SpectralGrid& g, std::span<const double> values)
    : nodes_(g.nodes().begin(), g.nodes().end()), values_(values.begin(), values.end()), bary_(g.size()) {
  require_matching(values.size(), g, "LobattoInterpolant");
  for (std::size_t j = 0; j < bary_.size(); ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    bary_[j] = (j == 0 || j + 1 == bary_.size()) ? 0.5 * sign : sign;
  }
}

double LobattoInterpolant::operator()(double z) const {
  double numer = 0.0, denom = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double diff = z - nodes_[j];
    if (diff == 0.0) return values_[j];
    const double term = bary_[j] / diff;
    numer += term * values_[j];
    denom += term;
  }
  return numer / denom;
}

}  // namespace peri
