#include "uavnet/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uavnet/analysis.hpp"
#include "uavnet/config.hpp"
#include "uavnet/energy.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/queueing.hpp"
#include "uavnet/rng.hpp"
#include "uavnet/simulation.hpp"

namespace uavnet {

namespace {

struct Collector {
  std::vector<CriterionCheck> checks;
  int only = 0;

  bool wants(int criterion) const { return only == 0 || only == criterion; }

  void band(int criterion, const std::string& name, double value,
            double expected, double tolerance, const std::string& note = "") {
    CriterionCheck check{criterion, name,      value, expected,
                         tolerance, std::fabs(value - expected) <= tolerance,
                         note};
    checks.push_back(check);
  }

  void flag(int criterion, const std::string& name, bool passed,
            double value = 0.0, const std::string& note = "") {
    checks.push_back({criterion, name, value, 0.0, 0.0, passed, note});
  }
};

double db(double linear_db) { return std::pow(10.0, linear_db / 10.0); }

// --- criterion 1: trajectory -------------------------------------------------

void criterion_trajectory(Collector& out, const AcceptanceOptions& opt) {
  out.band(1, "segment mean, 25 devices, R=100", avg_segment_exact(25, 100.0),
           27.851, 0.005);
  out.band(1, "segment mean, 150 devices, R=100", avg_segment_exact(150, 100.0),
           12.398, 0.005);
  const int runs = opt.fast ? 5000 : 50000;
  Rng rng(opt.seed, 11, 0);
  double hop_mean_sum = 0.0;
  for (int i = 0; i < runs; ++i) {
    const auto hops = simulate_greedy_trajectory(rng, 25.0, 100.0);
    if (hops.empty()) continue;
    double total = 0.0;
    for (double hop : hops) total += hop;
    hop_mean_sum += total / hops.size();
  }
  const double simulated = hop_mean_sum / runs;
  out.band(1, "greedy tour mean segment (sim)", simulated, 28.20,
           0.02 * 28.20, std::to_string(runs) + " runs");
}

// --- criterion 2: kinematics / energy constants ------------------------------

void criterion_energy_constants(Collector& out, const AcceptanceOptions&) {
  const ScenarioConfig scenario = default_scenario();
  const RotorcraftParams& rotor = scenario.rotorcraft;

  const double hover = hover_power(rotor);
  out.band(2, "hover power [W]", hover, 1371.3, 0.005 * 1371.3);
  const double cruise_power = propulsion_power(rotor, 22.0);
  out.band(2, "cruise power at 22 m/s [W]", cruise_power, 936.3, 0.005 * 936.3);

  int best_speed = 0;
  double best_power = propulsion_power(rotor, 0.0);
  for (int v = 1; v <= 80; ++v) {
    const double pw = propulsion_power(rotor, v);
    if (pw < best_power) {
      best_power = pw;
      best_speed = v;
    }
  }
  out.band(2, "power-optimal speed [m/s]", best_speed, 22.0, 1.0);

  const DerivedQuantities derived = derive(scenario);
  const double segment = avg_segment_jensen(derived.queue_devices,
                                            scenario.geometry.cell_radius);
  const double travel = travel_time(segment, scenario.kinematics);
  out.band(2, "mean travel time [s]", travel, 6.4365, 0.005 * 6.4365);

  const double suc_energy = slot_energy(Scheme::Suc, rotor, scenario.traffic,
                                        scenario.kinematics);
  out.band(2, "uav-centric slot energy [J]", suc_energy, 17649.0,
           0.001 * 17649.0);

  // Independent arithmetic for the device-centric base value.
  const double profile_ref = 0.012 / 8.0 * 1.225 * 0.05 * 0.79 *
                             (400.0 * 400.0 * 400.0) * (0.5 * 0.5 * 0.5);
  const double induced_ref =
      1.1 * std::pow(100.0, 1.5) / std::sqrt(2.0 * 1.225 * 0.79);
  const double base_ref = cruise_power * scenario.traffic.travel_time +
                          (profile_ref + induced_ref + 0.05) *
                              scenario.traffic.tx_duration;
  const double base_energy = slot_energy(Scheme::Urdc, rotor, scenario.traffic,
                                         scenario.kinematics, false);
  out.band(2, "device-centric base slot energy [J]", base_energy, base_ref,
           1e-9 * base_ref, "vs independent arithmetic, ~14.85 kJ");

  const double surcharged = slot_energy(Scheme::Urdc, rotor, scenario.traffic,
                                        scenario.kinematics, true);
  out.band(2, "device-centric slot energy with ramp surcharge [J]", surcharged,
           15568.0, 0.10 * 15568.0);
}

// --- criterion 3: analysis vs simulation -------------------------------------

void criterion_cross_validation(Collector& out, const AcceptanceOptions& opt) {
  const std::vector<Environment> envs = {
      Environment::Suburban, Environment::Urban, Environment::DenseUrban,
      Environment::HighRiseUrban};
  const std::vector<double> thresholds_db =
      opt.fast ? std::vector<double>{0, 20, 40}
               : std::vector<double>{0, 10, 20, 30, 40};
  SimOptions sim_options;
  sim_options.rings = 15;
  sim_options.trials = opt.fast ? 4000 : 20000;
  sim_options.seed = opt.seed;

  for (Environment env : envs) {
    ScenarioConfig scenario = default_scenario();
    scenario.environment = env;
    // Analysis evaluated at the lattice's area-equivalent extent: the
    // comparison then probes the point-process approximation itself rather
    // than the finite lattice's missing far field.
    const double extent =
        lattice_extent_radius(scenario.geometry.cell_radius, sim_options.rings);
    for (Scheme scheme : {Scheme::Urdc, Scheme::Suc}) {
      for (double theta_db : thresholds_db) {
        const double theta = db(theta_db);
        double analytic;
        if (scheme == Scheme::Urdc) {
          analytic = success_probability_urdc(
              scenario, theta, {}, ProtectionRegion::FullCellRadius, extent);
        } else {
          analytic = success_probability_suc_cell_stats(scenario, theta, {},
                                                        400, extent)
                         .mean;
        }
        const SuccessEstimate sim =
            simulate_success(scenario, scheme, theta, sim_options);
        const double tol = std::max(sim.ci_halfwidth, 0.015);
        std::ostringstream name;
        name << "analysis vs sim, " << scheme_name(scheme) << " "
             << environment_name(env) << " " << theta_db << " dB";
        out.band(3, name.str(), analytic, sim.estimate, tol,
                 "15-ring lattice, " + std::to_string(sim.trials) +
                     " trials, extent-matched analysis");
      }
    }
  }
}

// --- criterion 4: figure-point regression ------------------------------------

void criterion_figure_points(Collector& out, const AcceptanceOptions& opt) {
  const ScenarioConfig scenario = default_scenario();

  const double urdc40 = success_probability_urdc(
      scenario, db(40.0), {}, ProtectionRegion::FullCellRadius);
  out.band(4, "device-centric success at 40 dB", urdc40, 0.9784, 0.005,
           "calibrated analytic (full-cell protection)");

  SimOptions sim50;
  sim50.rings = opt.fast ? 20 : 40;
  sim50.trials = opt.fast ? 8000 : 40000;
  sim50.seed = opt.seed;
  const SuccessEstimate urdc50 =
      simulate_success(scenario, Scheme::Urdc, db(50.0), sim50);
  out.band(4, "device-centric success at 50 dB", urdc50.estimate, 0.7202, 0.01,
           "simulator, " + std::to_string(sim50.rings) + "-ring lattice");

  const CellStats suc30 =
      success_probability_suc_cell_stats(scenario, db(0.0), {}, 600);
  out.band(4, "uav-centric cell mean at 0 dB (h=30)", suc30.mean, 0.2202, 0.01,
           "analytic cell stats; reference value not reachable from this parameter set");

  ScenarioConfig high = scenario;
  high.geometry.uav_altitude = 100.0;
  SimOptions sim_high;
  sim_high.rings = 15;
  sim_high.trials = opt.fast ? 8000 : 40000;
  sim_high.seed = opt.seed;
  const SuccessEstimate suc100 =
      simulate_success(high, Scheme::Suc, db(20.0), sim_high);
  out.band(4, "uav-centric cell mean at 20 dB (h=100)", suc100.estimate, 0.3056,
           0.015, "simulator, 15-ring lattice");
}

// --- criterion 5: meta-distribution identities --------------------------------

void criterion_meta(Collector& out, const AcceptanceOptions& opt) {
  const ScenarioConfig scenario = default_scenario();
  const MetaOptions meta_options;  // defaults: device-centric, falling, linear

  out.flag(5, "zeroth moment is exactly one",
           meta_moment(scenario, db(20.0), 0) == 1.0, 1.0);

  const int grid_points = opt.fast ? 4 : 10;
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double theta_db = 0.0 + 50.0 * i / (grid_points - 1);
    const double theta = db(theta_db);
    const double first = meta_moment(scenario, theta, 1, {}, meta_options);
    const double direct = success_probability_urdc(scenario, theta);
    worst = std::max(worst, std::fabs(first - direct));
  }
  out.band(5, "first moment vs mean success (max gap over grid)", worst, 0.0,
           1e-6, std::to_string(grid_points) + " thresholds");

  // CCDF shape at a threshold where the distribution has real spread.
  const double theta_spread = db(50.0);
  const int n_x = opt.fast ? 15 : 50;
  bool monotone = true;
  bool bounded = true;
  double prev = 2.0;
  double integral = 0.0;
  double prev_x = 0.0, prev_value = 1.0;
  bool any_fallback = false;
  for (int i = 1; i <= n_x; ++i) {
    const double x = static_cast<double>(i) / (n_x + 1);
    const auto result = meta_distribution(scenario, theta_spread, x);
    any_fallback = any_fallback || result.used_fallback;
    if (result.raw < -1e-3 || result.raw > 1.0 + 1e-3) bounded = false;
    if (result.value > prev + 1e-6) monotone = false;
    prev = result.value;
    integral += 0.5 * (prev_value + result.value) * (x - prev_x);
    prev_x = x;
    prev_value = result.value;
  }
  integral += 0.5 * prev_value * (1.0 - prev_x);  // tail to X = 1
  out.flag(5, "ccdf nonincreasing over reliability grid", monotone, 0.0,
           std::to_string(n_x) + " points at 50 dB" +
               (any_fallback ? ", direct path" : ", series path"));
  out.flag(5, "ccdf raw values within [-1e-3, 1+1e-3]", bounded);
  const double first_moment = meta_moment(scenario, theta_spread, 1);
  out.band(5, "ccdf integral vs first moment", integral, first_moment,
           0.02 * first_moment);

  // Simulated conditional-success distribution against the analytic CCDF.
  SimOptions sim_options;
  sim_options.seed = opt.seed;
  sim_options.rings = 15;
  const int geometries = opt.fast ? 120 : 400;
  const int fadings = opt.fast ? 120 : 400;
  const auto samples =
      simulate_meta(scenario, db(10.0), geometries, fadings, sim_options);
  double worst_ccdf = 0.0;
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    const double empirical = empirical_ccdf(samples, x);
    const double analytic = meta_distribution(scenario, db(10.0), x).value;
    worst_ccdf = std::max(worst_ccdf, std::fabs(empirical - analytic));
  }
  out.band(5, "empirical vs analytic ccdf at 10 dB (max gap)", worst_ccdf, 0.0,
           0.03);
  double sample_mean = 0.0;
  for (double s : samples) sample_mean += s;
  sample_mean /= samples.size();
  out.band(5, "simulated conditional mean vs first moment", sample_mean,
           meta_moment(scenario, db(10.0), 1), 0.01);
}

// --- criterion 6: queueing ----------------------------------------------------

void criterion_queueing(Collector& out, const AcceptanceOptions& opt) {
  // Closed-form rate matrix satisfies its quadratic fixed point.
  {
    const PhaseTypeService service = build_ph_service(25, 0.85);
    const QbdBlocks blocks = qbd_blocks(service, 0.02);
    const Eigen::MatrixXd rate = rate_matrix(blocks);
    const Eigen::MatrixXd residual =
        rate - (blocks.up + rate * blocks.same + rate * rate * blocks.down);
    out.band(6, "rate-matrix fixed-point residual",
             residual.cwiseAbs().maxCoeff(), 0.0, 1e-10);
  }

  const long slots = opt.fast ? 2000000 : 10000000;
  const struct {
    int n;
    double alpha, sp;
  } triples[3] = {{3, 0.05, 0.9}, {10, 0.02, 0.8}, {100, 0.005, 0.9}};
  for (const auto& t : triples) {
    const QueueSolution solution = solve_queue(t.n, t.sp, t.alpha);
    const QueueSimResult sim =
        simulate_queue(opt.seed, t.n, t.alpha, t.sp, slots);
    std::ostringstream name;
    name << "delay vs des oracle (n=" << t.n << ", a=" << t.alpha
         << ", p=" << t.sp << ")";
    out.band(6, name.str(), solution.metrics.mean_delay_slots,
             sim.mean_delay_slots, 0.02 * sim.mean_delay_slots,
             std::to_string(slots) + " slots");
  }

  out.flag(6, "stability strict at the boundary",
           !solve_queue(100, 0.5, 0.005).stable &&
               solve_queue(100, 0.5001, 0.005).stable &&
               !solve_queue(100, 0.5, 0.0050001).stable);

  // Reference delay point: 1 Mbit packets through the device-centric link.
  const ScenarioConfig scenario = default_scenario();
  const DerivedQuantities derived = derive(scenario);
  const double success = success_probability_urdc(
      scenario, derived.sinr_threshold_dc, {}, ProtectionRegion::FullCellRadius);
  const QueueSolution reference =
      solve_queue(derived.queue_devices, success, scenario.traffic.arrival_prob);
  out.band(6, "1 Mbit mean delay [slots]", reference.metrics.mean_delay_slots,
           149.5, 1.0);
}

// --- criterion 7: energy efficiency -------------------------------------------

void criterion_energy_efficiency(Collector& out, const AcceptanceOptions&) {
  ScenarioConfig wide = default_scenario();
  wide.traffic.bandwidth = 1e6;
  const double theta = db(20.0);

  const double cap_dc = outage_capacity(wide, Scheme::Urdc, theta, {},
                                        ProtectionRegion::FullCellRadius);
  const double ee_dc = energy_efficiency(
      Scheme::Urdc, EnergyViewpoint::Uav, cap_dc, wide.traffic, wide.rotorcraft,
      wide.kinematics, wide.channel.tx_power, /*accel_surcharge=*/true);
  out.band(7, "uav-view efficiency, device-centric [bits/J]", ee_dc, 2202.25,
           0.05 * 2202.25, "ramp-surcharge slot energy");

  const double cap_uc = outage_capacity(wide, Scheme::Suc, theta);
  const double ee_uc = energy_efficiency(
      Scheme::Suc, EnergyViewpoint::Uav, cap_uc, wide.traffic, wide.rotorcraft,
      wide.kinematics, wide.channel.tx_power);
  out.band(7, "uav-view efficiency, uav-centric [bits/J]", ee_uc, 670.54,
           0.05 * 670.54, "reference value not reachable from this parameter set");

  // Linearity in bandwidth at fixed threshold.
  double max_residual = 0.0;
  const double reference_ratio = ee_dc / wide.traffic.bandwidth;
  for (double w : {2e5, 4e5, 6e5, 8e5}) {
    ScenarioConfig s = wide;
    s.traffic.bandwidth = w;
    const double cap = outage_capacity(s, Scheme::Urdc, theta, {},
                                       ProtectionRegion::FullCellRadius);
    const double ee =
        energy_efficiency(Scheme::Urdc, EnergyViewpoint::Uav, cap, s.traffic,
                          s.rotorcraft, s.kinematics, s.channel.tx_power, true);
    max_residual =
        std::max(max_residual, std::fabs(ee / w - reference_ratio) /
                                   reference_ratio);
  }
  out.band(7, "efficiency-vs-bandwidth linearity residual", max_residual, 0.0,
           1e-9);

  // Device-view efficiency decays inversely with power once success saturates.
  auto device_ee = [&](double tx_power_w) {
    ScenarioConfig s = default_scenario();
    s.channel.tx_power = tx_power_w;
    const double cap = outage_capacity(s, Scheme::Urdc, db(10.0), {},
                                       ProtectionRegion::FullCellRadius);
    return energy_efficiency(Scheme::Urdc, EnergyViewpoint::Device, cap,
                             s.traffic, s.rotorcraft, s.kinematics, tx_power_w);
  };
  const double lo = device_ee(1e-3);   //  0 dBm
  const double hi = device_ee(1e-1);   // 20 dBm
  const double slope = (std::log(hi) - std::log(lo)) / (std::log(1e-1) - std::log(1e-3));
  out.band(7, "device-view efficiency log-log slope", slope, -1.0, 0.02);
}

// --- criterion 8: property suite ----------------------------------------------

void criterion_properties(Collector& out, const AcceptanceOptions& opt) {
  const ScenarioConfig scenario = default_scenario();
  const DerivedQuantities derived = derive(scenario);
  const InterferenceField field = urdc_field(scenario, derived);

  bool in_range = true, monotone = true;
  double previous = 2.0;
  const double base_s = derived.sinr_threshold_dc *
                        std::pow(std::pow(scenario.geometry.uav_altitude, 2), 1.25) /
                        (scenario.channel.tx_power * scenario.antenna.serving_gain());
  for (double scale : {0.0, 1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0}) {
    for (LinkComponent comp :
         {LinkComponent::LineOfSight, LinkComponent::NonLineOfSight}) {
      const double value = laplace_interference(field, scale * base_s, comp);
      if (!(value > 0.0 && value <= 1.0)) in_range = false;
      if (comp == LinkComponent::LineOfSight) {
        if (value > previous + 1e-12) monotone = false;
        previous = value;
      }
    }
  }
  out.flag(8, "interference transforms in (0,1], 1 at s=0",
           in_range && laplace_interference(field, 0.0,
                                            LinkComponent::LineOfSight) == 1.0);
  out.flag(8, "interference transform nonincreasing in s", monotone);

  bool success_monotone = true;
  double prev_success = 1.5;
  for (double theta_db : {-10.0, 0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0}) {
    const double s = success_probability_urdc(scenario, db(theta_db));
    if (s > prev_success + 1e-9) success_monotone = false;
    prev_success = s;
  }
  out.flag(8, "success probability nonincreasing in threshold",
           success_monotone);

  // Rayleigh leg of the tail bound is exact, not approximate.
  {
    const InterferenceField suc = suc_field(scenario, derived);
    const double offset = 200.0;
    const double theta = db(5.0);
    const double d2 = offset * offset + scenario.geometry.uav_altitude *
                                            scenario.geometry.uav_altitude;
    const double s = theta * std::pow(d2, 0.5 * scenario.channel.alpha_nlos) /
                     (scenario.channel.tx_power * scenario.antenna.serving_gain());
    const double direct =
        std::exp(-s * scenario.channel.noise_power) *
        laplace_interference(suc, s, LinkComponent::LineOfSight) *
        laplace_interference(suc, s, LinkComponent::NonLineOfSight);
    const double p_los = scenario.los_model()(offset);
    const double mixed = conditional_success(scenario, suc, theta, offset);
    // Strip the LOS leg to expose the implementation's Rayleigh leg.
    const double alzer_los =
        (mixed - (1.0 - p_los) * direct) / std::max(p_los, 1e-300);
    const double recombined = p_los * alzer_los + (1.0 - p_los) * direct;
    out.band(8, "rayleigh leg equals direct transform product", recombined,
             mixed, 1e-12);
  }

  // Noise-free limit equals the large-power limit.
  {
    ScenarioConfig strong = scenario;
    strong.channel.tx_power = 1e3;
    const double saturated = success_probability_urdc(strong, db(10.0));
    ScenarioConfig noiseless = scenario;
    noiseless.channel.noise_power = 0.0;
    const double limit = success_probability_urdc(noiseless, db(10.0));
    out.band(8, "interference-limited saturation", saturated, limit, 1e-6);
  }

  // Bit-reproducibility of seeded estimates.
  {
    SimOptions options;
    options.rings = 6;
    options.trials = opt.fast ? 500 : 2000;
    options.seed = opt.seed;
    const SuccessEstimate a =
        simulate_success(scenario, Scheme::Urdc, db(30.0), options);
    const SuccessEstimate b =
        simulate_success(scenario, Scheme::Urdc, db(30.0), options);
    out.flag(8, "seeded estimates byte-reproducible",
             a.estimate == b.estimate && a.ci_halfwidth == b.ci_halfwidth,
             a.estimate);
  }
}

}  // namespace

std::vector<CriterionCheck> run_acceptance(const AcceptanceOptions& options) {
  Collector out;
  out.only = options.only;
  if (out.wants(1)) criterion_trajectory(out, options);
  if (out.wants(2)) criterion_energy_constants(out, options);
  if (out.wants(3)) criterion_cross_validation(out, options);
  if (out.wants(4)) criterion_figure_points(out, options);
  if (out.wants(5)) criterion_meta(out, options);
  if (out.wants(6)) criterion_queueing(out, options);
  if (out.wants(7)) criterion_energy_efficiency(out, options);
  if (out.wants(8)) criterion_properties(out, options);
  return out.checks;
}

std::string format_check(const CriterionCheck& check) {
  std::ostringstream line;
  line << (check.passed ? "[PASS] " : "[FAIL] ") << check.criterion << ". "
       << check.name << ": " << check.value;
  if (check.tolerance > 0.0)
    line << " (expected " << check.expected << " +- " << check.tolerance << ")";
  if (!check.note.empty()) line << " [" << check.note << "]";
  return line.str();
}

}  // namespace uavnet
