#pragma once

namespace peri {

/// Lower bound on effective saturation; keeps the matric head finite at the
/// residual content.
inline constexpr double kSaturationFloor = 1e-10;

/// Van Genuchten-Mualem parameters for one homogeneous soil.
struct SoilParams {
  double theta_r = 0.0;  // residual volumetric content
  double theta_s = 0.0;  // saturated volumetric content
  double alpha = 0.0;    // 1/cm
  double n_vg = 0.0;     // > 1
  double k_sat = 0.0;    // cm/s
  double pore_connectivity = 0.5;

  double m_vg() const noexcept { return 1.0 - 1.0 / n_vg; }

  /// Throws std::invalid_argument naming the first violated bound.
  void validate() const;

  bool operator==(const SoilParams&) const = default;
};

struct EffectiveSaturation {
  double value;
  bool clamped;
};

EffectiveSaturation effective_saturation(double theta, const SoilParams& p);

/// h_m <= 0 in cm; zero at saturation.
double matric_head(double theta, const SoilParams& p);

/// Mualem conductivity in cm/s, 0 <= K <= K_S.
double conductivity(double theta, const SoilParams& p);

/// H = h_m + z.
double hydraulic_potential(double theta, double z_phys, const SoilParams& p);

/// Retention curve theta(h); inverse of matric_head above the floor.
double retention_theta(double head, const SoilParams& p);

}  // namespace peri
