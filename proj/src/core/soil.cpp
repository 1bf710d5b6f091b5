#include "core/soil.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace peri {

void SoilParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("soil: ") + what);
  };
  require(std::isfinite(theta_r) && theta_r >= 0.0, "theta_r must be >= 0");
  require(std::isfinite(theta_s) && theta_s <= 1.0, "theta_s must be <= 1");
  require(theta_r < theta_s, "theta_r must be below theta_s");
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
  require(std::isfinite(n_vg) && n_vg > 1.0, "n must be > 1");
  require(std::isfinite(k_sat) && k_sat > 0.0, "k_sat must be > 0");
  require(std::isfinite(pore_connectivity), "pore_connectivity must be finite");
}

EffectiveSaturation effective_saturation(double theta, const SoilParams& p) {
  const double raw = (theta - p.theta_r) / (p.theta_s - p.theta_r);
  if (!(raw >= kSaturationFloor)) return {kSaturationFloor, true};  // also catches NaN
  if (raw > 1.0) return {1.0, true};
  return {raw, false};
}

double matric_head(double theta, const SoilParams& p) {
  const double se = effective_saturation(theta, p).value;
  if (se >= 1.0) return 0.0;
  const double m = p.m_vg();
  return -std::pow(std::pow(se, -1.0 / m) - 1.0, 1.0 / p.n_vg) / p.alpha;
}

double conductivity(double theta, const SoilParams& p) {
  const double se = effective_saturation(theta, p).value;
  if (se >= 1.0) return p.k_sat;
  const double m = p.m_vg();
  const double bracket = 1.0 - std::pow(1.0 - std::pow(se, 1.0 / m), m);
  return std::clamp(p.k_sat * std::pow(se, p.pore_connectivity) * bracket * bracket, 0.0, p.k_sat);
}

double hydraulic_potential(double theta, double z_phys, const SoilParams& p) {
  return matric_head(theta, p) + z_phys;
}

double retention_theta(double head, const SoilParams& p) {
  if (head >= 0.0) return p.theta_s;
  const double se = std::pow(1.0 + std::pow(p.alpha * -head, p.n_vg), -p.m_vg());
  return p.theta_r + (p.theta_s - p.theta_r) * se;
}

}  // namespace peri
