#pragma once

// Three-dimensional triangular fundamental diagram for bidirectional pedestrian streams.
//
// Counterflow enters through the density ratio rho = k / (k + k_opp) of the reference
// direction. It shrinks the jam density available to the reference direction and
// slows its free-flow speed, while the backward wave speed stays fixed. At rho = 1 the
// surface reduces to the ordinary triangular diagram (v_f, omega, k_j).

namespace pedflow {

struct Link;

enum class SpeedVariant { logistic, power };

struct FDParams {
  double free_flow_speed = 1.34;  // m/s
  double wave_speed = 0.5;        // m/s
  double jam_density = 5.4;       // ped/m^2
  SpeedVariant variant = SpeedVariant::logistic;
  double gamma = 1.0;  // exponent of the power variant, unused by logistic
};

// Throws ValidationError on nonpositive speeds/densities or negative gamma.
void validate(const FDParams& params);

FDParams fd_params(const Link& link, SpeedVariant variant = SpeedVariant::logistic,
                   double gamma = 1.0);

struct FDState {
  double density = 0.0;           // reference direction, ped/m^2
  double opposite_density = 0.0;  // ped/m^2
};

// 1 for an empty segment: no counterflow, no friction.
double density_ratio(const FDState& state);
double effective_jam_density(const FDParams& params, double rho);
// Logistic v_f / e^(1 - rho) or power rho^gamma * v_f; both equal v_f at rho = 1.
double effective_speed(const FDParams& params, double rho);
double critical_density(const FDParams& params, double rho);

// Flow per unit width (ped/m/s). Throws std::domain_error if the reference density exceeds
// the effective jam density.
double flow(const FDParams& params, const FDState& state);
// Same surface, but states beyond the effective jam density yield 0 instead of throwing.
double flow_or_zero(const FDParams& params, const FDState& state);

// Apex flow per unit width of the unidirectional diagram.
double capacity_per_width(const FDParams& params);

}  // namespace pedflow
