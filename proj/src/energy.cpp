#include "uavnet/energy.hpp"

#include <cmath>

#include "uavnet/quadrature.hpp"

namespace uavnet {

RotorPower blade_and_induced_power(const RotorcraftParams& p) {
  RotorPower power;
  power.profile = p.profile_drag_coeff / 8.0 * p.air_density * p.rotor_solidity *
                  p.disc_area * std::pow(p.blade_angular_speed, 3) *
                  std::pow(p.rotor_radius, 3);
  power.induced = (1.0 + p.induced_power_factor) * std::pow(p.weight, 1.5) /
                  std::sqrt(2.0 * p.air_density * p.disc_area);
  return power;
}

double propulsion_power(const RotorcraftParams& p, double speed) {
  if (speed < 0) throw std::invalid_argument("propulsion_power: speed >= 0");
  const RotorPower rp = blade_and_induced_power(p);
  const double v2 = speed * speed;
  const double tip2 = p.tip_speed * p.tip_speed;
  const double v0_2 = p.induced_velocity * p.induced_velocity;
  const double blade = rp.profile * (1.0 + 3.0 * v2 / tip2);
  const double induced =
      rp.induced * std::sqrt(std::sqrt(1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)) -
                             v2 / (2.0 * v0_2));
  const double parasite = 0.5 * p.fuselage_drag_ratio * p.air_density *
                          p.rotor_solidity * p.disc_area * v2 * speed;
  return blade + induced + parasite;
}

double acceleration_surcharge(const RotorcraftParams& p,
                              const TrafficTimingConfig& timing,
                              const KinematicsConfig& kin) {
  const double travel = timing.travel_time;
  if (travel <= 0.0) return 0.0;
  const double cruise = kin.cruise_speed;
  const double ramp_time = kin.accel_time() + kin.decel_time();

  auto ramp_energy = [&](double peak, double rate_up, double rate_down) {
    // integral of P(v(t)) over one speed-up plus one slow-down ramp
    auto [x, w] = gauss_legendre(24);
    double energy = 0.0;
    const double t_up = peak / rate_up;
    const double t_down = peak / rate_down;
    for (int i = 0; i < 24; ++i) {
      const double tu = 0.5 * t_up * (1.0 + x[i]);
      energy += 0.5 * t_up * w[i] * propulsion_power(p, rate_up * tu);
      const double td = 0.5 * t_down * (1.0 + x[i]);
      energy += 0.5 * t_down * w[i] * propulsion_power(p, peak - rate_down * td);
    }
    return energy;
  };

  double profile_energy = 0.0;
  if (travel > ramp_time) {
    // trapezoid: ramp to cruise, hold, ramp down
    profile_energy = ramp_energy(cruise, kin.accel, kin.decel) +
                     propulsion_power(p, cruise) * (travel - ramp_time);
  } else {
    // triangular profile that fits the available time
    const double peak = travel / (1.0 / kin.accel + 1.0 / kin.decel);
    profile_energy = ramp_energy(peak, kin.accel, kin.decel);
  }
  return profile_energy - propulsion_power(p, cruise) * travel;
}

double slot_energy(Scheme scheme, const RotorcraftParams& p,
                   const TrafficTimingConfig& timing,
                   const KinematicsConfig& kin, bool accel_surcharge) {
  const double hover_and_comm = hover_power(p) + p.comm_power;
  if (scheme == Scheme::Suc) return hover_and_comm * timing.slot_duration;
  double energy = propulsion_power(p, kin.cruise_speed) * timing.travel_time +
                  hover_and_comm * timing.tx_duration;
  if (accel_surcharge) energy += acceleration_surcharge(p, timing, kin);
  return energy;
}

double energy_efficiency(Scheme scheme, EnergyViewpoint viewpoint,
                         double capacity_bps,
                         const TrafficTimingConfig& timing,
                         const RotorcraftParams& p,
                         const KinematicsConfig& kin, double tx_power,
                         bool accel_surcharge) {
  if (capacity_bps < 0)
    throw std::invalid_argument("energy_efficiency: capacity must be >= 0");
  if (viewpoint == EnergyViewpoint::Uav) {
    const double energy = slot_energy(scheme, p, timing, kin, accel_surcharge);
    return capacity_bps * timing.slot_duration / energy;
  }
  if (scheme == Scheme::Urdc)
    return capacity_bps * timing.slot_duration / (tx_power * timing.tx_duration);
  return capacity_bps / tx_power;
}

}  // namespace uavnet
