#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace peri {

/// Which end of the reference interval [-1, 1] sits at the soil surface
/// (physical depth phys_lo).
enum class Orientation { SurfaceAtPlusOne, SurfaceAtMinusOne };

/// Chebyshev-Gauss-Lobatto grid z_h = cos(h pi / N), h = 0..N, together with
/// the discrete transform constants and the affine map onto [phys_lo, phys_hi].
class SpectralGrid {
 public:
  SpectralGrid(int n_modes, double phys_lo, double phys_hi,
               Orientation orientation = Orientation::SurfaceAtPlusOne);

  int n_modes() const noexcept { return n_modes_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> gammas() const noexcept { return gammas_; }

  double phys_lo() const noexcept { return phys_lo_; }
  double phys_hi() const noexcept { return phys_hi_; }
  Orientation orientation() const noexcept { return orientation_; }

  /// cm per unit of reference coordinate; the Jacobian of the affine map.
  double map_scale() const noexcept { return map_scale_; }
  double map_offset() const noexcept { return map_offset_; }

  double to_physical(double z_ref) const noexcept;
  double to_reference(double z_phys) const noexcept;
  std::vector<double> physical_nodes() const;

  /// Index of the node at the soil surface (phys_lo) and at the bottom.
  std::size_t surface_node() const noexcept;
  std::size_t bottom_node() const noexcept;

  /// Smallest strictly positive |z_h|.
  double smallest_positive_node() const noexcept;

 private:
  int n_modes_;
  double phys_lo_;
  double phys_hi_;
  Orientation orientation_;
  double map_scale_;
  double map_offset_;
  double map_sign_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> gammas_;
};

/// Chebyshev coefficients u~_k, k = 0..degree.
struct ChebSeries {
  std::vector<double> coeffs;

  ChebSeries() = default;
  explicit ChebSeries(std::vector<double> c) : coeffs(std::move(c)) {}

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  bool all_finite() const noexcept;
};

/// Values u(z_h) on the nodes of a SpectralGrid.
struct NodalField {
  std::vector<double> values;

  NodalField() = default;
  explicit NodalField(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const noexcept { return values.size(); }
  bool all_finite() const noexcept;
};

SpectralGrid make_grid(int n_modes, double phys_lo, double phys_hi,
                       Orientation orientation = Orientation::SurfaceAtPlusOne);

/// Discrete Chebyshev transform, computed with a type-I DCT.
ChebSeries forward_transform(const NodalField& u, const SpectralGrid& g);

/// O(N^2) evaluation of the transform sum; kept as the reference for testing.
ChebSeries forward_transform_direct(const NodalField& u, const SpectralGrid& g);

/// u(z_h) = sum_k c_k T_k(z_h). Series of degree above N are evaluated
/// exactly at the nodes rather than truncated.
NodalField inverse_transform(const ChebSeries& c, const SpectralGrid& g);
NodalField inverse_transform_direct(const ChebSeries& c, const SpectralGrid& g);

/// Clenshaw evaluation of the series at a reference coordinate.
double evaluate(const ChebSeries& c, double z);

/// Product of two equal-degree series, degree 2N, by the three-branch
/// coefficient formula.
ChebSeries series_product(const ChebSeries& a, const ChebSeries& b);

ChebSeries pad_to(const ChebSeries& c, int degree);

/// F^-1(F(kernel) F(field)) at the nodes of g: the coefficient-wise product
/// followed by the inverse transform. Both series must have degree N of g.
NodalField convolve(const ChebSeries& kernel_coeffs, const ChebSeries& field_coeffs,
                    const SpectralGrid& g);

/// sqrt(sum_h w_h u_h^2), the discrete Chebyshev-weighted L2 norm.
double weighted_norm(const NodalField& u, const SpectralGrid& g);

/// ||u - u^N|| in the Chebyshev-weighted L2 norm, where u^N interpolates u at
/// the nodes of g. The norm is evaluated on a Gauss-Lobatto grid 16x denser.
double projection_error(const std::function<double(double)>& u, const SpectralGrid& g);

/// Clenshaw-Curtis weights on the nodes of g for the unweighted integral over
/// [-1, 1].
std::vector<double> clenshaw_curtis_weights(const SpectralGrid& g);

/// Barycentric Lagrange interpolation through the Gauss-Lobatto nodes of a grid.
class LobattoInterpolant {
 public:
  LobattoInterpolant(const SpectralGrid& g, std::span<const double> values);
  double operator()(double z) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> bary_;
};

}  // namespace peri
