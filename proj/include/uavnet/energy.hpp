#pragma once

#include "uavnet/config.hpp"
#include "uavnet/energy_params.hpp"
#include "uavnet/geometry.hpp"

namespace uavnet {

struct RotorPower {
  double profile = 0.0;  // W, blade profile power in hover
  double induced = 0.0;  // W, induced power in hover
};

RotorPower blade_and_induced_power(const RotorcraftParams& p);

/// Forward-flight propulsion power at speed v (v = 0 gives hover power).
double propulsion_power(const RotorcraftParams& p, double speed);

inline double hover_power(const RotorcraftParams& p) {
  const RotorPower rp = blade_and_induced_power(p);
  return rp.profile + rp.induced;
}

/// Extra energy of one average travel segment when the speed profile ramps
/// through accel/cruise/decel instead of sitting at cruise speed the whole
/// time: integral of P(v(t)) dt minus P(cruise) * travel_time.
double acceleration_surcharge(const RotorcraftParams& p,
                              const TrafficTimingConfig& timing,
                              const KinematicsConfig& kin);

/// UAV-side energy spent per slot. Device-centric: travel at cruise power for
/// the travel segment, then hover + communicate for the transmission sub-slot
/// (plus the optional ramp surcharge). UAV-centric: hover + communicate for
/// the whole slot.
double slot_energy(Scheme scheme, const RotorcraftParams& p,
                   const TrafficTimingConfig& timing,
                   const KinematicsConfig& kin,
                   bool accel_surcharge = false);

enum class EnergyViewpoint { Uav, Device };

/// bits per joule given the scheme's outage capacity in bits/s.
double energy_efficiency(Scheme scheme, EnergyViewpoint viewpoint,
                         double capacity_bps,
                         const TrafficTimingConfig& timing,
                         const RotorcraftParams& p,
                         const KinematicsConfig& kin, double tx_power,
                         bool accel_surcharge = false);

}  // namespace uavnet
