#include "pedflow/fundamental_diagram.hpp"

#include <cmath>
#include <stdexcept>

#include "pedflow/diagnostics.hpp"
#include "pedflow/network.hpp"

namespace pedflow {

void validate(const FDParams& p) {
  if (!(p.free_flow_speed > 0.0)) throw ValidationError("free-flow speed must be positive");
  if (!(p.wave_speed > 0.0)) throw ValidationError("wave speed must be positive");
  if (!(p.jam_density > 0.0)) throw ValidationError("jam density must be positive");
  if (p.variant == SpeedVariant::power && !(p.gamma >= 0.0)) {
    throw ValidationError("power-variant gamma must be nonnegative");
  }
}

FDParams fd_params(const Link& link, SpeedVariant variant, double gamma) {
  return {link.free_flow_speed, link.wave_speed, link.jam_density, variant, gamma};
}

double density_ratio(const FDState& s) {
  const double total = s.density + s.opposite_density;
  if (total <= 0.0) return 1.0;
  return s.density / total;
}

double effective_jam_density(const FDParams& p, double rho) { return rho * p.jam_density; }

double effective_speed(const FDParams& p, double rho) {
  if (p.variant == SpeedVariant::logistic) {
    return p.free_flow_speed / std::exp(1.0 - rho);
  }
  if (rho == 0.0 && p.gamma == 0.0) {
    warn("power-variant speed evaluated at rho = 0 with gamma = 0; using 0^0 = 1");
    return p.free_flow_speed;
  }
  return std::pow(rho, p.gamma) * p.free_flow_speed;
}

double critical_density(const FDParams& p, double rho) {
  if (rho <= 0.0) return 0.0;
  const double v = effective_speed(p, rho);
  return effective_jam_density(p, rho) * p.wave_speed / (v + p.wave_speed);
}

double flow(const FDParams& p, const FDState& s) {
  const double rho = density_ratio(s);
  const double kj = effective_jam_density(p, rho);
  if (s.density > kj * (1.0 + 1e-12) + 1e-15) {
    throw std::domain_error("density exceeds the effective jam density");
  }
  if (s.density <= critical_density(p, rho)) {
    return effective_speed(p, rho) * s.density;
  }
  return std::max(0.0, p.wave_speed * (kj - s.density));
}

double flow_or_zero(const FDParams& p, const FDState& s) {
  const double rho = density_ratio(s);
  const double kj = effective_jam_density(p, rho);
  if (s.density >= kj) return 0.0;
  if (s.density <= critical_density(p, rho)) return effective_speed(p, rho) * s.density;
  return p.wave_speed * (kj - s.density);
}

double capacity_per_width(const FDParams& p) {
  return p.free_flow_speed * critical_density(p, 1.0);
}

}  // namespace pedflow
