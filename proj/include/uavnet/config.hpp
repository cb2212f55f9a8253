#pragma once

#include <map>
#include <string>

#include "uavnet/channel.hpp"
#include "uavnet/energy_params.hpp"
#include "uavnet/geometry.hpp"

namespace uavnet {

enum class Scheme { Urdc, Suc };

const char* scheme_name(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

struct GeometryConfig {
  double cell_radius = 651.5;            // m, hexagon circumradius
  double uav_altitude = 30.0;            // m
  double device_intensity = 90.693e-6;   // devices per m^2
  double serving_offset_sd = 20.0;       // m, SD of the hover offset
  double sim_area = 20000e6;             // m^2, modeled network area
};

struct ChannelConfig {
  double alpha_los = 2.5;
  double alpha_nlos = 4.0;
  int m_los = 3;
  int m_nlos = 1;
  double noise_power = 1e-12;  // W
  double tx_power = 1e-3;      // W
};

struct AntennaConfig {
  double device_main = 3.1622776601683795;  // linear (5 dBi)
  double device_side = 1.0;                 // linear (0 dBi)
  double uav_main = 3.1622776601683795;     // linear (5 dBi)
  double uav_side = 1.0;                    // linear (0 dBi)
  double device_beamwidth = 40.0 * M_PI / 180.0;  // rad
  double uav_beamwidth = 40.0 * M_PI / 180.0;     // rad

  double serving_gain() const { return device_main * uav_main; }
  GainMixture interferer_mixture() const;
};

struct TrafficTimingConfig {
  double packet_bits = 1e6;
  double arrival_prob = 0.005;   // per slot
  double bandwidth = 125e3;      // Hz
  double rate_penalty = 0.8;     // practical-to-Shannon rate factor in (0,1]
  double slot_duration = 12.8729;   // s
  double tx_duration = 6.4365;      // s, transmission sub-slot (device-centric)
  double travel_time = 6.4365;      // s, mean travel segment duration

  double duty_factor() const { return tx_duration / slot_duration; }
};

struct ScenarioConfig {
  Environment environment = Environment::Suburban;
  GeometryConfig geometry;
  ChannelConfig channel;
  AntennaConfig antenna;
  TrafficTimingConfig traffic;
  KinematicsConfig kinematics;
  RotorcraftParams rotorcraft;

  EnvironmentProfile profile() const { return environment_profile(environment); }
  LosModel los_model() const { return {profile(), geometry.uav_altitude}; }

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// All reference parameters baked in; every scenario file starts from this.
ScenarioConfig default_scenario();

struct DerivedQuantities {
  double interferer_intensity_dc = 0.0;  // per m^2, duty-thinned
  double interferer_intensity_uc = 0.0;  // per m^2, one per cell
  double sinr_threshold_dc = 0.0;        // linear
  double sinr_threshold_uc = 0.0;        // linear
  double mean_devices_per_cell = 0.0;
  int queue_devices = 0;                 // round(mean), used by the queue model
};

/// Pure function of the validated scenario; identical inputs give
/// bit-identical outputs.
DerivedQuantities derive(const ScenarioConfig& scenario);

/// Key=value scenario file: '#' comments, unknown keys are hard errors,
/// missing keys keep the defaults. Units at this boundary only (dBm, dBi,
/// degrees, km^2); everything stored in SI.
ScenarioConfig load_scenario(const std::string& path);

/// Apply one "key=value" override in the same schema as the scenario file.
void apply_override(ScenarioConfig& scenario, const std::string& key,
                    const std::string& value);

/// Fully resolved configuration in file-schema keys, for run manifests.
std::map<std::string, std::string> scenario_key_values(const ScenarioConfig& s);

}  // namespace uavnet
