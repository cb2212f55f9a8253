#include "uavnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "uavnet/errors.hpp"

namespace uavnet {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

}  // namespace

const char* scheme_name(Scheme scheme) {
  return scheme == Scheme::Urdc ? "urdc" : "suc";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "urdc") return Scheme::Urdc;
  if (name == "suc") return Scheme::Suc;
  throw ConfigError("unknown scheme '" + name + "' (expected urdc or suc)");
}

EnvironmentProfile environment_profile(Environment env) {
  switch (env) {
    case Environment::Suburban:
      return {4.88, 0.429, env};
    case Environment::Urban:
      return {9.612, 0.158, env};
    case Environment::DenseUrban:
      return {12.081, 0.114, env};
    case Environment::HighRiseUrban:
      return {27.23, 0.078, env};
  }
  throw ConfigError("unknown environment enumerator");
}

const char* environment_name(Environment env) {
  switch (env) {
    case Environment::Suburban:
      return "suburban";
    case Environment::Urban:
      return "urban";
    case Environment::DenseUrban:
      return "dense-urban";
    case Environment::HighRiseUrban:
      return "high-rise-urban";
  }
  return "?";
}

Environment environment_from_string(const std::string& name) {
  if (name == "suburban") return Environment::Suburban;
  if (name == "urban") return Environment::Urban;
  if (name == "dense-urban") return Environment::DenseUrban;
  if (name == "high-rise-urban" || name == "high-rise")
    return Environment::HighRiseUrban;
  throw ConfigError("unknown environment '" + name +
                    "' (expected suburban, urban, dense-urban, high-rise-urban)");
}

GainMixture AntennaConfig::interferer_mixture() const {
  const double cd = device_beamwidth / (2.0 * M_PI);
  const double cu = uav_beamwidth / (2.0 * M_PI);
  GainMixture mix;
  mix.gain = {device_main * uav_main, device_main * uav_side,
              device_side * uav_main, device_side * uav_side};
  mix.prob = {cd * cu, cd * (1.0 - cu), (1.0 - cd) * cu,
              (1.0 - cd) * (1.0 - cu)};
  return mix;
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid scenario: " + what);
  };
  const EnvironmentProfile prof = profile();
  require(prof.a > 0 && prof.b > 0, "environment parameters must be positive");

  require(geometry.cell_radius > 0, "cell_radius_m must be > 0");
  require(geometry.uav_altitude > 0, "uav_altitude_m must be > 0");
  require(geometry.device_intensity > 0, "device_intensity_per_km2 must be > 0");
  require(geometry.serving_offset_sd >= 0, "serving_offset_sd_m must be >= 0");
  require(geometry.sim_area > 0, "sim_area_km2 must be > 0");

  require(channel.alpha_los < channel.alpha_nlos,
          "path_loss_exp_los must be below path_loss_exp_nlos");
  require(channel.m_los > channel.m_nlos && channel.m_nlos >= 1,
          "nakagami shapes must be integers with m_los > m_nlos >= 1");
  require(channel.noise_power >= 0, "noise power must be >= 0");
  require(channel.tx_power > 0, "tx power must be > 0");

  require(antenna.device_main >= antenna.device_side && antenna.device_side > 0,
          "device gains must satisfy main >= side > 0");
  require(antenna.uav_main >= antenna.uav_side && antenna.uav_side > 0,
          "uav gains must satisfy main >= side > 0");
  const double cd = antenna.device_beamwidth / (2.0 * M_PI);
  const double cu = antenna.uav_beamwidth / (2.0 * M_PI);
  require(cd > 0 && cd <= 1, "device beamwidth must lie in (0, 360] degrees");
  require(cu > 0 && cu <= 1, "uav beamwidth must lie in (0, 360] degrees");

  require(traffic.packet_bits > 0, "packet_bits must be > 0");
  require(traffic.arrival_prob > 0 && traffic.arrival_prob < 1,
          "arrival_prob must lie in (0, 1)");
  require(traffic.bandwidth > 0, "bandwidth_hz must be > 0");
  require(traffic.rate_penalty > 0 && traffic.rate_penalty <= 1,
          "rate_penalty must lie in (0, 1]");
  require(traffic.slot_duration > 0, "slot_duration_s must be > 0");
  // Equality makes the two schemes coincide (zero travel time) and is kept
  // usable; only tx durations beyond the slot are rejected.
  require(traffic.tx_duration > 0 &&
              traffic.tx_duration <= traffic.slot_duration,
          "tx_duration_s must lie in (0, slot_duration_s]");
  require(traffic.travel_time >= 0, "travel_time_s must be >= 0");

  require(kinematics.cruise_speed > 0 && kinematics.accel > 0 &&
              kinematics.decel > 0,
          "kinematics must be strictly positive");

  require(rotorcraft.weight > 0 && rotorcraft.air_density > 0 &&
              rotorcraft.rotor_radius > 0 && rotorcraft.disc_area > 0 &&
              rotorcraft.tip_speed > 0 && rotorcraft.induced_velocity > 0 &&
              rotorcraft.fuselage_drag_ratio > 0 &&
              rotorcraft.rotor_solidity > 0 &&
              rotorcraft.profile_drag_coeff > 0 &&
              rotorcraft.blade_angular_speed > 0 &&
              rotorcraft.induced_power_factor >= 0 && rotorcraft.comm_power > 0,
          "rotorcraft parameters must be positive");
}

ScenarioConfig default_scenario() { return {}; }

DerivedQuantities derive(const ScenarioConfig& scenario) {
  scenario.validate();
  const auto& g = scenario.geometry;
  const auto& t = scenario.traffic;

  DerivedQuantities d;
  const double cell_area = 1.5 * std::sqrt(3.0) * g.cell_radius * g.cell_radius;
  d.interferer_intensity_uc = 1.0 / cell_area;
  d.interferer_intensity_dc = t.duty_factor() * d.interferer_intensity_uc;
  const double bits_per_symbol_uc =
      t.packet_bits / (t.slot_duration * t.rate_penalty * t.bandwidth);
  const double bits_per_symbol_dc =
      t.packet_bits / (t.tx_duration * t.rate_penalty * t.bandwidth);
  d.sinr_threshold_uc = std::exp2(bits_per_symbol_uc) - 1.0;
  d.sinr_threshold_dc = std::exp2(bits_per_symbol_dc) - 1.0;
  d.mean_devices_per_cell = g.device_intensity * cell_area;
  d.queue_devices = static_cast<int>(std::lround(d.mean_devices_per_cell));
  return d;
}

// ---------------------------------------------------------------------------
// Scenario file schema
// ---------------------------------------------------------------------------

namespace {

struct Key {
  std::function<void(ScenarioConfig&, double)> set;
  std::function<double(const ScenarioConfig&)> get;
};

// All numeric keys; environment is handled separately (string valued).
const std::map<std::string, Key>& numeric_keys() {
  static const std::map<std::string, Key> keys = {
      {"cell_radius_m",
       {[](ScenarioConfig& s, double v) { s.geometry.cell_radius = v; },
        [](const ScenarioConfig& s) { return s.geometry.cell_radius; }}},
      {"uav_altitude_m",
       {[](ScenarioConfig& s, double v) { s.geometry.uav_altitude = v; },
        [](const ScenarioConfig& s) { return s.geometry.uav_altitude; }}},
      {"device_intensity_per_km2",
       {[](ScenarioConfig& s, double v) { s.geometry.device_intensity = v * 1e-6; },
        [](const ScenarioConfig& s) { return s.geometry.device_intensity * 1e6; }}},
      {"serving_offset_sd_m",
       {[](ScenarioConfig& s, double v) { s.geometry.serving_offset_sd = v; },
        [](const ScenarioConfig& s) { return s.geometry.serving_offset_sd; }}},
      {"sim_area_km2",
       {[](ScenarioConfig& s, double v) { s.geometry.sim_area = v * 1e6; },
        [](const ScenarioConfig& s) { return s.geometry.sim_area * 1e-6; }}},
      {"path_loss_exp_los",
       {[](ScenarioConfig& s, double v) { s.channel.alpha_los = v; },
        [](const ScenarioConfig& s) { return s.channel.alpha_los; }}},
      {"path_loss_exp_nlos",
       {[](ScenarioConfig& s, double v) { s.channel.alpha_nlos = v; },
        [](const ScenarioConfig& s) { return s.channel.alpha_nlos; }}},
      {"nakagami_m_los",
       {[](ScenarioConfig& s, double v) {
          if (v != std::floor(v))
            throw ConfigError("nakagami_m_los must be a positive integer");
          s.channel.m_los = static_cast<int>(v);
        },
        [](const ScenarioConfig& s) { return double(s.channel.m_los); }}},
      {"nakagami_m_nlos",
       {[](ScenarioConfig& s, double v) {
          if (v != std::floor(v))
            throw ConfigError("nakagami_m_nlos must be a positive integer");
          s.channel.m_nlos = static_cast<int>(v);
        },
        [](const ScenarioConfig& s) { return double(s.channel.m_nlos); }}},
      {"noise_dbm",
       {[](ScenarioConfig& s, double v) { s.channel.noise_power = dbm_to_watt(v); },
        [](const ScenarioConfig& s) { return watt_to_dbm(s.channel.noise_power); }}},
      {"tx_power_dbm",
       {[](ScenarioConfig& s, double v) { s.channel.tx_power = dbm_to_watt(v); },
        [](const ScenarioConfig& s) { return watt_to_dbm(s.channel.tx_power); }}},
      {"gain_device_main_dbi",
       {[](ScenarioConfig& s, double v) { s.antenna.device_main = db_to_linear(v); },
        [](const ScenarioConfig& s) { return linear_to_db(s.antenna.device_main); }}},
      {"gain_device_side_dbi",
       {[](ScenarioConfig& s, double v) { s.antenna.device_side = db_to_linear(v); },
        [](const ScenarioConfig& s) { return linear_to_db(s.antenna.device_side); }}},
      {"gain_uav_main_dbi",
       {[](ScenarioConfig& s, double v) { s.antenna.uav_main = db_to_linear(v); },
        [](const ScenarioConfig& s) { return linear_to_db(s.antenna.uav_main); }}},
      {"gain_uav_side_dbi",
       {[](ScenarioConfig& s, double v) { s.antenna.uav_side = db_to_linear(v); },
        [](const ScenarioConfig& s) { return linear_to_db(s.antenna.uav_side); }}},
      {"beamwidth_device_deg",
       {[](ScenarioConfig& s, double v) { s.antenna.device_beamwidth = v * M_PI / 180.0; },
        [](const ScenarioConfig& s) { return s.antenna.device_beamwidth * 180.0 / M_PI; }}},
      {"beamwidth_uav_deg",
       {[](ScenarioConfig& s, double v) { s.antenna.uav_beamwidth = v * M_PI / 180.0; },
        [](const ScenarioConfig& s) { return s.antenna.uav_beamwidth * 180.0 / M_PI; }}},
      {"packet_bits",
       {[](ScenarioConfig& s, double v) { s.traffic.packet_bits = v; },
        [](const ScenarioConfig& s) { return s.traffic.packet_bits; }}},
      {"arrival_prob",
       {[](ScenarioConfig& s, double v) { s.traffic.arrival_prob = v; },
        [](const ScenarioConfig& s) { return s.traffic.arrival_prob; }}},
      {"bandwidth_hz",
       {[](ScenarioConfig& s, double v) { s.traffic.bandwidth = v; },
        [](const ScenarioConfig& s) { return s.traffic.bandwidth; }}},
      {"rate_penalty",
       {[](ScenarioConfig& s, double v) { s.traffic.rate_penalty = v; },
        [](const ScenarioConfig& s) { return s.traffic.rate_penalty; }}},
      {"slot_duration_s",
       {[](ScenarioConfig& s, double v) { s.traffic.slot_duration = v; },
        [](const ScenarioConfig& s) { return s.traffic.slot_duration; }}},
      {"tx_duration_s",
       {[](ScenarioConfig& s, double v) { s.traffic.tx_duration = v; },
        [](const ScenarioConfig& s) { return s.traffic.tx_duration; }}},
      {"travel_time_s",
       {[](ScenarioConfig& s, double v) { s.traffic.travel_time = v; },
        [](const ScenarioConfig& s) { return s.traffic.travel_time; }}},
      {"cruise_speed_mps",
       {[](ScenarioConfig& s, double v) { s.kinematics.cruise_speed = v; },
        [](const ScenarioConfig& s) { return s.kinematics.cruise_speed; }}},
      {"accel_mps2",
       {[](ScenarioConfig& s, double v) { s.kinematics.accel = v; },
        [](const ScenarioConfig& s) { return s.kinematics.accel; }}},
      {"decel_mps2",
       {[](ScenarioConfig& s, double v) { s.kinematics.decel = v; },
        [](const ScenarioConfig& s) { return s.kinematics.decel; }}},
      {"uav_weight_n",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.weight = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.weight; }}},
      {"air_density_kg_m3",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.air_density = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.air_density; }}},
      {"rotor_radius_m",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.rotor_radius = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.rotor_radius; }}},
      {"rotor_disc_area_m2",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.disc_area = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.disc_area; }}},
      {"tip_speed_mps",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.tip_speed = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.tip_speed; }}},
      {"induced_velocity_mps",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.induced_velocity = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.induced_velocity; }}},
      {"fuselage_drag_ratio",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.fuselage_drag_ratio = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.fuselage_drag_ratio; }}},
      {"rotor_solidity",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.rotor_solidity = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.rotor_solidity; }}},
      {"profile_drag_coeff",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.profile_drag_coeff = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.profile_drag_coeff; }}},
      {"blade_angular_speed_rad_s",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.blade_angular_speed = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.blade_angular_speed; }}},
      {"induced_power_factor",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.induced_power_factor = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.induced_power_factor; }}},
      {"comm_power_w",
       {[](ScenarioConfig& s, double v) { s.rotorcraft.comm_power = v; },
        [](const ScenarioConfig& s) { return s.rotorcraft.comm_power; }}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse number '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("key '" + key + "': trailing junk in '" + value + "'");
  return parsed;
}

}  // namespace

void apply_override(ScenarioConfig& scenario, const std::string& key,
                    const std::string& value) {
  if (key == "environment") {
    scenario.environment = environment_from_string(value);
    return;
  }
  const auto& keys = numeric_keys();
  const auto it = keys.find(key);
  if (it == keys.end()) throw ConfigError("unknown scenario key '" + key + "'");
  it->second.set(scenario, parse_number(key, value));
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  ScenarioConfig scenario = default_scenario();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_override(scenario, key, value);
    } catch (const ConfigError& err) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " +
                        err.what());
    }
  }
  scenario.validate();
  return scenario;
}

std::map<std::string, std::string> scenario_key_values(const ScenarioConfig& s) {
  std::map<std::string, std::string> out;
  out["environment"] = environment_name(s.environment);
  for (const auto& [key, accessor] : numeric_keys()) {
    std::ostringstream oss;
    oss.precision(17);
    oss << accessor.get(s);
    out[key] = oss.str();
  }
  return out;
}

}  // namespace uavnet
