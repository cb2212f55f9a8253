#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavnet/analysis.hpp"
#include "uavnet/config.hpp"
#include "uavnet/energy.hpp"
#include "uavnet/errors.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/io.hpp"
#include "uavnet/queueing.hpp"
#include "uavnet/simulation.hpp"
#include "uavnet/validation.hpp"
#include "uavnet/version.hpp"

namespace {

using namespace uavnet;
namespace fs = std::filesystem;

struct Grid {
  double start = 0.0, stop = 0.0, step = 1.0;

  std::vector<double> values() const {
    std::vector<double> out;
    for (double v = start; v <= stop + 1e-9 * std::max(1.0, std::fabs(step));
         v += step)
      out.push_back(v);
    return out;
  }
};

Grid parse_grid(const std::string& text) {
  Grid grid;
  const auto first = text.find(':');
  if (first == std::string::npos) {
    grid.start = grid.stop = std::stod(text);
    grid.step = 1.0;
    return grid;
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos)
    throw ConfigError("grid '" + text + "' must be start:stop:step");
  grid.start = std::stod(text.substr(0, first));
  grid.stop = std::stod(text.substr(first + 1, second - first - 1));
  grid.step = std::stod(text.substr(second + 1));
  if (grid.step <= 0) throw ConfigError("grid step must be > 0");
  if (grid.stop < grid.start) throw ConfigError("grid stop < start");
  return grid;
}

/// Everything a run needs; serialized into the manifest for replay.
struct RunSpec {
  std::string kind;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out = "out.csv";
  std::uint64_t seed = 12345;
  long trials = 20000;
  std::string scheme = "urdc";
  std::string theta_db = "20";
  std::string packets;
  std::string x_grid = "0.02:0.98:0.02";
  std::string sweep = "bandwidth";
  std::string sweep_grid = "1e5:1e6:1e5";
  std::string protection = "half";
  int rings = 15;
  int positions = 600;
  double mean_devices = 0.0;  // 0 = derive from scenario
  bool ramp_surcharge = false;
};

ScenarioConfig resolve_scenario(const RunSpec& spec) {
  ScenarioConfig scenario = default_scenario();
  if (!spec.config_path.empty()) {
    fs::path path = spec.config_path;
    if (!fs::exists(path)) {
      if (const char* dir = std::getenv("UAVNET_SCENARIO_DIR"))
        path = fs::path(dir) / spec.config_path;
    }
    scenario = load_scenario(path.string());
  }
  for (const std::string& entry : spec.overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override '" + entry + "' must be key=value");
    apply_override(scenario, entry.substr(0, eq), entry.substr(eq + 1));
  }
  scenario.validate();
  return scenario;
}

ProtectionRegion resolve_protection(const RunSpec& spec) {
  if (spec.protection == "half") return ProtectionRegion::HalfCellRadius;
  if (spec.protection == "full") return ProtectionRegion::FullCellRadius;
  throw ConfigError("--protection must be half or full");
}

std::string manifest_path(const std::string& csv_path) {
  fs::path p(csv_path);
  p.replace_extension(".manifest.json");
  return p.string();
}

void write_manifest(const RunSpec& spec, const ScenarioConfig& scenario,
                    double wall_seconds,
                    const std::map<std::string, std::string>& grid,
                    const std::map<std::string, std::string>& extras) {
  RunManifest manifest;
  manifest.schema_version = kManifestSchemaVersion;
  manifest.tool_version = kVersion;
  manifest.kind = spec.kind;
  manifest.seed = spec.seed;
  manifest.trials = spec.trials;
  manifest.scenario = scenario_key_values(scenario);
  manifest.overrides = spec.overrides;
  manifest.grid = grid;
  manifest.extras = extras;
  manifest.output_csv = fs::path(spec.out).filename().string();
  manifest.wall_time_s = wall_seconds;
  manifest.write(manifest_path(spec.out));
}

double db_to_linear(double value_db) { return std::pow(10.0, value_db / 10.0); }

// ---------------------------------------------------------------------------
// Experiment kinds
// ---------------------------------------------------------------------------

void run_success_sweep(const RunSpec& spec, bool capacity) {
  const ScenarioConfig scenario = resolve_scenario(spec);
  const Scheme scheme = scheme_from_string(spec.scheme);
  const ProtectionRegion protection = resolve_protection(spec);
  const auto thresholds = parse_grid(spec.theta_db).values();

  CsvTable table(capacity
                     ? std::vector<std::string>{"scheme", "env", "h_m",
                                                "theta_db", "capacity_bps",
                                                "capacity_bps_per_hz"}
                     : std::vector<std::string>{"scheme", "env", "h_m",
                                                "theta_db", "value",
                                                "est_error", "spread_sd"});
  for (const double theta_db : thresholds) {
    const double theta = db_to_linear(theta_db);
    if (capacity) {
      const double cap = outage_capacity(scenario, scheme, theta, {}, protection);
      table.add_row({scheme_name(scheme), environment_name(scenario.environment),
                     CsvTable::number(scenario.geometry.uav_altitude),
                     CsvTable::number(theta_db), CsvTable::number(cap),
                     CsvTable::number(cap / scenario.traffic.bandwidth)});
    } else if (scheme == Scheme::Urdc) {
      const double value =
          success_probability_urdc(scenario, theta, {}, protection);
      table.add_row({scheme_name(scheme), environment_name(scenario.environment),
                     CsvTable::number(scenario.geometry.uav_altitude),
                     CsvTable::number(theta_db), CsvTable::number(value),
                     CsvTable::number(0.0), CsvTable::number(0.0)});
    } else {
      const CellStats stats = success_probability_suc_cell_stats(
          scenario, theta, {}, spec.positions);
      table.add_row({scheme_name(scheme), environment_name(scenario.environment),
                     CsvTable::number(scenario.geometry.uav_altitude),
                     CsvTable::number(theta_db), CsvTable::number(stats.mean),
                     CsvTable::number(0.0), CsvTable::number(stats.sd)});
    }
  }
  table.write(spec.out);
}

void run_meta(const RunSpec& spec) {
  const ScenarioConfig scenario = resolve_scenario(spec);
  MetaOptions options;
  options.scheme = scheme_from_string(spec.scheme);
  options.protection = resolve_protection(spec);
  const double theta_db = parse_grid(spec.theta_db).start;
  const double theta = db_to_linear(theta_db);

  CsvTable table({"scheme", "env", "h_m", "theta_db", "quantity", "arg",
                  "value", "aux"});
  auto row = [&](const std::string& quantity, double arg, double value,
                 double aux) {
    table.add_row({scheme_name(options.scheme),
                   environment_name(scenario.environment),
                   CsvTable::number(scenario.geometry.uav_altitude),
                   CsvTable::number(theta_db), quantity, CsvTable::number(arg),
                   CsvTable::number(value), CsvTable::number(aux)});
  };
  for (int order = 0; order <= 2; ++order)
    row("moment", order, meta_moment(scenario, theta, order, {}, options), 0.0);
  for (const double x : parse_grid(spec.x_grid).values()) {
    const auto result = meta_distribution(scenario, theta, x, {}, options);
    row("ccdf", x, result.value, result.raw);
  }
  table.write(spec.out);
}

void run_delay_table(const RunSpec& spec) {
  const ScenarioConfig scenario = resolve_scenario(spec);
  const Scheme scheme = scheme_from_string(spec.scheme);
  const ProtectionRegion protection = resolve_protection(spec);
  const DerivedQuantities derived = derive(scenario);
  const auto packet_sizes = parse_grid(spec.packets).values();

  CsvTable table({"scheme", "env", "h_m", "packet_bits", "success_prob",
                  "stable", "queue_len", "delay_slots", "delay_seconds"});
  for (const double bits : packet_sizes) {
    ScenarioConfig point = scenario;
    point.traffic.packet_bits = bits;
    const DerivedQuantities d = derive(point);
    double success;
    if (scheme == Scheme::Urdc) {
      success = success_probability_urdc(point, d.sinr_threshold_dc, {},
                                         protection);
    } else {
      success = success_probability_suc_cell_stats(point, d.sinr_threshold_uc,
                                                   {}, spec.positions)
                    .mean;
    }
    const QueueSolution solution =
        solve_queue(d.queue_devices, success, point.traffic.arrival_prob);
    table.add_row(
        {scheme_name(scheme), environment_name(point.environment),
         CsvTable::number(point.geometry.uav_altitude), CsvTable::number(bits),
         CsvTable::number(success), solution.stable ? "1" : "0",
         CsvTable::number(solution.metrics.mean_queue_len),
         CsvTable::number(solution.metrics.mean_delay_slots),
         CsvTable::number(solution.metrics.mean_delay_slots *
                          point.traffic.slot_duration)});
  }
  table.write(spec.out);
}

void run_energy_sweep(const RunSpec& spec) {
  const ScenarioConfig base = resolve_scenario(spec);
  const Scheme scheme = scheme_from_string(spec.scheme);
  const ProtectionRegion protection = resolve_protection(spec);
  const double theta = db_to_linear(parse_grid(spec.theta_db).start);

  CsvTable table({"scheme", "sweep", "value", "propulsion_w", "slot_energy_j",
                  "ee_uav_bits_per_j", "ee_device_bits_per_j"});
  for (const double value : parse_grid(spec.sweep_grid).values()) {
    ScenarioConfig point = base;
    if (spec.sweep == "speed")
      point.kinematics.cruise_speed = value;
    else if (spec.sweep == "bandwidth")
      point.traffic.bandwidth = value;
    else if (spec.sweep == "power")
      point.channel.tx_power = 1e-3 * std::pow(10.0, value / 10.0);  // dBm
    else
      throw ConfigError("--sweep must be speed, bandwidth or power");
    const double capacity = outage_capacity(point, scheme, theta, {}, protection);
    const double propulsion =
        propulsion_power(point.rotorcraft, point.kinematics.cruise_speed);
    const double energy = slot_energy(scheme, point.rotorcraft, point.traffic,
                                      point.kinematics, spec.ramp_surcharge);
    const double ee_uav = energy_efficiency(
        scheme, EnergyViewpoint::Uav, capacity, point.traffic, point.rotorcraft,
        point.kinematics, point.channel.tx_power, spec.ramp_surcharge);
    const double ee_dev = energy_efficiency(
        scheme, EnergyViewpoint::Device, capacity, point.traffic,
        point.rotorcraft, point.kinematics, point.channel.tx_power,
        spec.ramp_surcharge);
    table.add_row({scheme_name(scheme), spec.sweep, CsvTable::number(value),
                   CsvTable::number(propulsion), CsvTable::number(energy),
                   CsvTable::number(ee_uav), CsvTable::number(ee_dev)});
  }
  table.write(spec.out);
}

void run_trajectory(const RunSpec& spec) {
  const ScenarioConfig scenario = resolve_scenario(spec);
  const DerivedQuantities derived = derive(scenario);
  const double mean_devices = spec.mean_devices > 0
                                  ? spec.mean_devices
                                  : derived.mean_devices_per_cell;
  const auto radii = parse_grid(spec.sweep_grid).values();

  CsvTable table({"radius_m", "mean_devices", "analytic_exact",
                  "analytic_jensen", "simulated_mean", "trials"});
  for (const double radius : radii) {
    Rng rng(spec.seed, static_cast<std::uint64_t>(radius * 1000), 7);
    double mean_sum = 0.0;
    for (long run = 0; run < spec.trials; ++run) {
      const auto hops = simulate_greedy_trajectory(rng, mean_devices, radius);
      if (hops.empty()) continue;
      double total = 0.0;
      for (double hop : hops) total += hop;
      mean_sum += total / hops.size();
    }
    const int rounded = static_cast<int>(std::lround(mean_devices));
    table.add_row({CsvTable::number(radius), CsvTable::number(mean_devices),
                   CsvTable::number(avg_segment_exact(rounded, radius)),
                   CsvTable::number(avg_segment_jensen(rounded, radius)),
                   CsvTable::number(mean_sum / spec.trials),
                   std::to_string(spec.trials)});
  }
  table.write(spec.out);
}

void run_simulate(const RunSpec& spec) {
  const ScenarioConfig scenario = resolve_scenario(spec);
  const Scheme scheme = scheme_from_string(spec.scheme);
  SimOptions options;
  options.rings = spec.rings;
  options.trials = static_cast<int>(spec.trials);
  options.seed = spec.seed;

  CsvTable table({"scheme", "env", "h_m", "theta_db", "value", "est_error",
                  "spread_sd", "trials", "ci_halfwidth", "seed"});
  for (const double theta_db : parse_grid(spec.theta_db).values()) {
    const SuccessEstimate est =
        simulate_success(scenario, scheme, db_to_linear(theta_db), options);
    table.add_row({scheme_name(scheme), environment_name(scenario.environment),
                   CsvTable::number(scenario.geometry.uav_altitude),
                   CsvTable::number(theta_db), CsvTable::number(est.estimate),
                   CsvTable::number(est.ci_halfwidth), CsvTable::number(0.0),
                   std::to_string(est.trials),
                   CsvTable::number(est.ci_halfwidth),
                   std::to_string(est.seed)});
  }
  table.write(spec.out);
}

int run_validate(const RunSpec& spec, bool fast, int only) {
  AcceptanceOptions options;
  options.seed = spec.seed;
  options.fast = fast;
  options.only = only;
  const auto checks = run_acceptance(options);

  CsvTable table({"criterion", "name", "value", "expected", "tolerance",
                  "passed", "note"});
  int failures = 0;
  for (const auto& check : checks) {
    std::cout << format_check(check) << "\n";
    if (!check.passed) ++failures;
    table.add_row({std::to_string(check.criterion), check.name,
                   CsvTable::number(check.value),
                   CsvTable::number(check.expected),
                   CsvTable::number(check.tolerance), check.passed ? "1" : "0",
                   check.note});
  }
  table.write(spec.out);
  std::cout << (failures == 0 ? "all checks passed"
                              : std::to_string(failures) + " check(s) failed")
            << " (" << checks.size() << " total)\n";
  return failures == 0 ? 0 : 1;
}

int dispatch(const RunSpec& spec, bool fast, int only) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig scenario = resolve_scenario(spec);
  int status = 0;
  if (spec.kind == "success-sweep")
    run_success_sweep(spec, false);
  else if (spec.kind == "capacity-sweep")
    run_success_sweep(spec, true);
  else if (spec.kind == "meta")
    run_meta(spec);
  else if (spec.kind == "delay-table")
    run_delay_table(spec);
  else if (spec.kind == "energy-sweep")
    run_energy_sweep(spec);
  else if (spec.kind == "trajectory")
    run_trajectory(spec);
  else if (spec.kind == "simulate")
    run_simulate(spec);
  else if (spec.kind == "validate")
    status = run_validate(spec, fast, only);
  else
    throw ConfigError("unknown experiment kind '" + spec.kind + "'");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::map<std::string, std::string> grid;
  grid["theta_db"] = spec.theta_db;
  if (!spec.packets.empty()) grid["packet_bits"] = spec.packets;
  if (spec.kind == "energy-sweep" || spec.kind == "trajectory")
    grid["sweep"] = spec.sweep_grid;
  if (spec.kind == "meta") grid["reliability"] = spec.x_grid;
  std::map<std::string, std::string> extras;
  extras["scheme"] = spec.scheme;
  extras["protection"] = spec.protection;
  extras["rings"] = std::to_string(spec.rings);
  extras["positions"] = std::to_string(spec.positions);
  if (spec.kind == "energy-sweep") {
    extras["sweep_kind"] = spec.sweep;
    extras["ramp_surcharge"] = spec.ramp_surcharge ? "1" : "0";
  }
  write_manifest(spec, scenario, wall, grid, extras);
  return status;
}

RunSpec spec_from_manifest(const std::string& path) {
  const RunManifest manifest = RunManifest::read(path);
  if (manifest.schema_version != kManifestSchemaVersion)
    throw ConfigError("manifest schema version mismatch");
  RunSpec spec;
  spec.kind = manifest.kind;
  spec.seed = manifest.seed;
  spec.trials = manifest.trials;
  spec.overrides = manifest.overrides;
  if (auto it = manifest.grid.find("theta_db"); it != manifest.grid.end())
    spec.theta_db = it->second;
  if (auto it = manifest.grid.find("packet_bits"); it != manifest.grid.end())
    spec.packets = it->second;
  if (auto it = manifest.grid.find("sweep"); it != manifest.grid.end())
    spec.sweep_grid = it->second;
  if (auto it = manifest.grid.find("reliability"); it != manifest.grid.end())
    spec.x_grid = it->second;
  if (auto it = manifest.extras.find("scheme"); it != manifest.extras.end())
    spec.scheme = it->second;
  if (auto it = manifest.extras.find("protection"); it != manifest.extras.end())
    spec.protection = it->second;
  if (auto it = manifest.extras.find("rings"); it != manifest.extras.end())
    spec.rings = std::stoi(it->second);
  if (auto it = manifest.extras.find("positions"); it != manifest.extras.end())
    spec.positions = std::stoi(it->second);
  if (auto it = manifest.extras.find("sweep_kind"); it != manifest.extras.end())
    spec.sweep = it->second;
  if (auto it = manifest.extras.find("ramp_surcharge"); it != manifest.extras.end())
    spec.ramp_surcharge = it->second == "1";
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uplink aggregation analysis toolkit"};
  app.set_version_flag("--version", uavnet::kVersion);
  app.require_subcommand(0, 1);

  RunSpec spec;
  bool fast = false;
  int only = 0;
  std::string env_flag;
  std::string from_manifest;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", spec.config_path,
                    "scenario file (searched in $UAVNET_SCENARIO_DIR)");
    sub->add_option("--override", spec.overrides,
                    "key=value scenario override (repeatable)");
    sub->add_option("--env", env_flag,
                    "environment shorthand for --override environment=...");
    sub->add_option("--out", spec.out, "output CSV path");
    sub->add_option("--seed", spec.seed, "random seed");
    sub->add_option("--trials", spec.trials, "Monte Carlo trials");
    sub->add_option("--scheme", spec.scheme, "urdc or suc");
    sub->add_option("--theta-db", spec.theta_db, "SINR grid start:stop:step");
    sub->add_option("--protection", spec.protection,
                    "interference-free zone: half (published) or full "
                    "(curve-calibrated)");
  };

  auto* success = app.add_subcommand("success-sweep",
                                     "analytic success probability sweep");
  add_common(success);
  success->add_option("--positions", spec.positions,
                      "cell positions for uav-centric stats");

  auto* capacity =
      app.add_subcommand("capacity-sweep", "analytic outage capacity sweep");
  add_common(capacity);

  auto* meta = app.add_subcommand("meta", "moments and reliability ccdf");
  add_common(meta);
  meta->add_option("--x-grid", spec.x_grid, "reliability grid start:stop:step");

  auto* delay = app.add_subcommand("delay-table", "queueing delay vs packet size");
  add_common(delay);
  delay->add_option("--packets", spec.packets, "packet bits grid start:stop:step")
      ->required();

  auto* energy = app.add_subcommand("energy-sweep", "power / energy efficiency");
  add_common(energy);
  energy->add_option("--sweep", spec.sweep, "speed, bandwidth or power");
  energy->add_option("--grid", spec.sweep_grid, "sweep grid start:stop:step");
  energy->add_flag("--ramp-surcharge", spec.ramp_surcharge,
                   "add the speed-ramp energy to travel segments");

  auto* trajectory =
      app.add_subcommand("trajectory", "segment-length statistics");
  add_common(trajectory);
  trajectory->add_option("--grid", spec.sweep_grid, "cell radius grid");
  trajectory->add_option("--mean-devices", spec.mean_devices,
                         "device count mean (default: from scenario)");

  auto* simulate =
      app.add_subcommand("simulate", "exact-network Monte Carlo sweep");
  add_common(simulate);
  simulate->add_option("--rings", spec.rings, "lattice rings around the origin");

  auto* validate = app.add_subcommand("validate", "run the reference checks");
  add_common(validate);
  validate->add_flag("--fast", fast, "reduced Monte Carlo budgets");
  validate->add_option("--only", only, "restrict to one criterion (1..8)");

  auto* diff = app.add_subcommand("diff", "compare two run manifests");
  std::string manifest_a, manifest_b;
  double rel_tol = 0.0, abs_tol = 0.0;
  diff->add_option("a", manifest_a, "first manifest")->required();
  diff->add_option("b", manifest_b, "second manifest")->required();
  diff->add_option("--rel-tol", rel_tol, "relative tolerance");
  diff->add_option("--abs-tol", abs_tol, "absolute tolerance");

  auto* replay =
      app.add_subcommand("replay", "re-run an experiment from its manifest");
  replay->add_option("--from-manifest", from_manifest, "manifest path")
      ->required();
  replay->add_option("--out", spec.out, "output CSV path");
  replay->add_flag("--fast", fast, "reduced budgets for validate replays");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "{\"error\":\"" << e.what() << "\",\"code\":2}" << std::endl;
    return 2;
  }

  try {
    if (diff->parsed()) {
      const DiffReport report = diff_runs(manifest_a, manifest_b, rel_tol, abs_tol);
      for (const auto& col : report.columns)
        if (col.max_abs > 0.0)
          std::cout << col.column << ": max_abs=" << col.max_abs
                    << " max_rel=" << col.max_rel << "\n";
      std::cout << report.message << "\n";
      if (!report.comparable) return 2;
      return report.within_tol ? 0 : 1;
    }
    if (replay->parsed()) {
      RunSpec replayed = spec_from_manifest(from_manifest);
      replayed.out = spec.out;
      return dispatch(replayed, fast, 0);
    }
    if (app.get_subcommands().empty()) {
      std::cout << app.help();
      return 0;
    }
    spec.kind = app.get_subcommands().front()->get_name();
    if (!env_flag.empty()) spec.overrides.push_back("environment=" + env_flag);
    return dispatch(spec, fast, only);
  } catch (const ConfigError& err) {
    std::cerr << "{\"error\":\"" << err.what() << "\",\"code\":2}" << std::endl;
    return 2;
  } catch (const NumericalError& err) {
    std::cerr << "{\"error\":\"" << err.what() << "\",\"code\":3}" << std::endl;
    return 3;
  } catch (const IoError& err) {
    std::cerr << "{\"error\":\"" << err.what() << "\",\"code\":4}" << std::endl;
    return 4;
  } catch (const std::invalid_argument& err) {
    std::cerr << "{\"error\":\"" << err.what() << "\",\"code\":2}" << std::endl;
    return 2;
  }
}
