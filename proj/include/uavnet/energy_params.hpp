#pragma once

namespace uavnet {

/// Rotary-wing airframe constants plus the fixed communication power draw.
struct RotorcraftParams {
  double weight = 100.0;             // N
  double air_density = 1.225;        // kg/m^3
  double rotor_radius = 0.5;         // m
  double disc_area = 0.79;           // m^2
  double tip_speed = 200.0;          // m/s
  double induced_velocity = 7.2;     // m/s, mean induced velocity in hover
  double fuselage_drag_ratio = 0.3;
  double rotor_solidity = 0.05;
  double profile_drag_coeff = 0.012;
  double blade_angular_speed = 400.0;  // rad/s
  double induced_power_factor = 0.1;   // correction on induced power
  double comm_power = 0.05;            // W
};

}  // namespace uavnet
