#include "uavnet/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <thread>

#include "uavnet/channel.hpp"
#include "uavnet/geometry.hpp"

namespace uavnet {

namespace {

constexpr std::uint64_t kServingStream = 1000000007ULL;

struct NetworkContext {
  std::vector<Eigen::Vector2d> centers;
  HexCell cell;
  LosModel los;
  GainMixture mixture;
  double duty = 1.0;
  double serving_gain = 1.0;
  double altitude = 30.0;
  double tx_power = 1e-3;
  double noise = 1e-12;
  int m_los = 3;
  int m_nlos = 1;
  double alpha_los = 2.5;
  double alpha_nlos = 4.0;
};

NetworkContext make_context(const ScenarioConfig& scenario, int rings) {
  NetworkContext ctx;
  ctx.centers = hex_lattice(scenario.geometry.cell_radius, rings);
  ctx.cell = HexCell{Eigen::Vector2d::Zero(), scenario.geometry.cell_radius};
  ctx.los = scenario.los_model();
  ctx.mixture = scenario.antenna.interferer_mixture();
  ctx.duty = scenario.traffic.duty_factor();
  ctx.serving_gain = scenario.antenna.serving_gain();
  ctx.altitude = scenario.geometry.uav_altitude;
  ctx.tx_power = scenario.channel.tx_power;
  ctx.noise = scenario.channel.noise_power;
  ctx.m_los = scenario.channel.m_los;
  ctx.m_nlos = scenario.channel.m_nlos;
  ctx.alpha_los = scenario.channel.alpha_los;
  ctx.alpha_nlos = scenario.channel.alpha_nlos;
  return ctx;
}

double interference_of_trial(const NetworkContext& ctx, Rng& trial_base,
                             bool duty_thinned) {
  double total = 0.0;
  for (std::size_t c = 0; c < ctx.centers.size(); ++c) {
    Rng cell_rng = trial_base.substream(2, c);
    if (duty_thinned && !cell_rng.bernoulli(ctx.duty)) continue;
    const Eigen::Vector2d pos =
        uniform_point(cell_rng,
                      HexCell{ctx.centers[c], ctx.cell.radius});
    const double dist = pos.norm();
    const bool los = cell_rng.bernoulli(ctx.los(dist));
    const int shape = los ? ctx.m_los : ctx.m_nlos;
    const double alpha = los ? ctx.alpha_los : ctx.alpha_nlos;
    const double gain = sample_interferer_gain(cell_rng, ctx.mixture);
    total += ctx.tx_power * sample_nakagami_power(cell_rng, shape) * gain *
             path_gain(dist, ctx.altitude, alpha);
  }
  return total;
}

}  // namespace

SuccessEstimate simulate_success(const ScenarioConfig& scenario, Scheme scheme,
                                 double theta, const SimOptions& options) {
  if (options.trials < 1)
    throw std::invalid_argument("simulate_success: trials must be >= 1");
  scenario.validate();
  const NetworkContext ctx = make_context(scenario, options.rings);
  const double offset_sd = scenario.geometry.serving_offset_sd;

  auto run_block = [&](int begin, int end) {
    long successes = 0;
    for (int trial = begin; trial < end; ++trial) {
      Rng trial_base(options.seed, static_cast<std::uint64_t>(trial), 0);
      Rng serving = trial_base.substream(1, kServingStream);
      double distance;
      if (scheme == Scheme::Urdc) {
        distance = std::fabs(serving.normal(0.0, offset_sd));
      } else {
        distance = uniform_point(serving, ctx.cell).norm();
      }
      const bool los = serving.bernoulli(ctx.los(distance));
      const int shape = los ? ctx.m_los : ctx.m_nlos;
      const double alpha = los ? ctx.alpha_los : ctx.alpha_nlos;
      const double signal = ctx.tx_power *
                            sample_nakagami_power(serving, shape) *
                            ctx.serving_gain *
                            path_gain(distance, ctx.altitude, alpha);
      const double interference =
          interference_of_trial(ctx, trial_base, scheme == Scheme::Urdc);
      if (signal / (interference + ctx.noise) >= theta) ++successes;
    }
    return successes;
  };

  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, 64);
  long successes = 0;
  if (threads == 1 || options.trials < 4 * threads) {
    successes = run_block(0, options.trials);
  } else {
    std::vector<long> partial(threads, 0);
    std::vector<std::thread> pool;
    const int chunk = (options.trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const int begin = w * chunk;
      const int end = std::min(options.trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(
          [&, w, begin, end] { partial[w] = run_block(begin, end); });
    }
    for (auto& t : pool) t.join();
    for (long s : partial) successes += s;
  }

  SuccessEstimate est;
  est.trials = options.trials;
  est.seed = options.seed;
  est.estimate = static_cast<double>(successes) / options.trials;
  est.ci_halfwidth =
      1.96 * std::sqrt(std::max(est.estimate * (1.0 - est.estimate), 0.0) /
                       options.trials);
  return est;
}

std::vector<double> simulate_meta(const ScenarioConfig& scenario, double theta,
                                  int n_geometries, int n_fadings,
                                  const SimOptions& options) {
  if (n_geometries < 100 || n_fadings < 100)
    throw std::invalid_argument("simulate_meta: need >= 100 samples per layer");
  scenario.validate();
  const NetworkContext ctx = make_context(scenario, options.rings);
  const double offset_sd = scenario.geometry.serving_offset_sd;

  std::vector<double> conditionals(n_geometries);
  for (int g = 0; g < n_geometries; ++g) {
    Rng geom_rng(options.seed, static_cast<std::uint64_t>(g), 77);
    // Frozen geometry: serving offset + LOS state, interferer positions +
    // LOS states.
    const double distance = std::fabs(geom_rng.normal(0.0, offset_sd));
    const bool serving_los = geom_rng.bernoulli(ctx.los(distance));
    struct Interferer {
      double dist;
      bool los;
    };
    std::vector<Interferer> interferers(ctx.centers.size());
    for (std::size_t c = 0; c < ctx.centers.size(); ++c) {
      const Eigen::Vector2d pos =
          uniform_point(geom_rng, HexCell{ctx.centers[c], ctx.cell.radius});
      interferers[c].dist = pos.norm();
      interferers[c].los = geom_rng.bernoulli(ctx.los(interferers[c].dist));
    }
    const int shape = serving_los ? ctx.m_los : ctx.m_nlos;
    const double alpha = serving_los ? ctx.alpha_los : ctx.alpha_nlos;
    const double mean_signal =
        ctx.tx_power * ctx.serving_gain * path_gain(distance, ctx.altitude, alpha);

    Rng fade_rng = geom_rng.substream(3, 0);
    int wins = 0;
    for (int f = 0; f < n_fadings; ++f) {
      const double signal = mean_signal * sample_nakagami_power(fade_rng, shape);
      double interference = 0.0;
      for (const auto& it : interferers) {
        if (!fade_rng.bernoulli(ctx.duty)) continue;
        const int ishape = it.los ? ctx.m_los : ctx.m_nlos;
        const double ialpha = it.los ? ctx.alpha_los : ctx.alpha_nlos;
        interference += ctx.tx_power *
                        sample_nakagami_power(fade_rng, ishape) *
                        sample_interferer_gain(fade_rng, ctx.mixture) *
                        path_gain(it.dist, ctx.altitude, ialpha);
      }
      if (signal / (interference + ctx.noise) >= theta) ++wins;
    }
    conditionals[g] = static_cast<double>(wins) / n_fadings;
  }
  std::sort(conditionals.begin(), conditionals.end());
  return conditionals;
}

double empirical_ccdf(const std::vector<double>& sorted_samples, double level) {
  const auto it = std::upper_bound(sorted_samples.begin(), sorted_samples.end(),
                                   level);
  return static_cast<double>(sorted_samples.end() - it) / sorted_samples.size();
}

QueueSimResult simulate_queue(std::uint64_t seed, int n_devices,
                              double arrival_prob, double success_prob,
                              long slots) {
  if (n_devices < 1 || slots < 1)
    throw std::invalid_argument("simulate_queue: bad arguments");
  Rng rng(seed, 4242, 0);
  std::deque<long> arrival_slot;  // one entry per queued packet
  int phase = 1;                  // slots elapsed in the current polling cycle
  double queue_sum = 0.0;
  double sojourn_sum = 0.0;
  long departed = 0;

  for (long slot = 0; slot < slots; ++slot) {
    bool departure = false;
    if (!arrival_slot.empty()) {
      // The head packet attempts once per cycle, on the cycle's last slot.
      if (phase == n_devices) {
        departure = rng.bernoulli(success_prob);
        phase = 1;  // next attempt a full cycle later, success or not
      } else {
        ++phase;
      }
    }
    const bool arrival = rng.bernoulli(arrival_prob);
    if (departure) {
      sojourn_sum += static_cast<double>(slot + 1 - arrival_slot.front());
      ++departed;
      arrival_slot.pop_front();
      if (arrival_slot.empty()) phase = 1;
    }
    if (arrival) {
      if (arrival_slot.empty()) phase = 1;  // service starts fresh
      arrival_slot.push_back(slot + 1);
    }
    queue_sum += static_cast<double>(arrival_slot.size());
  }

  QueueSimResult result;
  result.mean_queue_len = queue_sum / static_cast<double>(slots);
  result.mean_delay_slots =
      departed > 0 ? sojourn_sum / static_cast<double>(departed) : 0.0;
  result.packets = departed;
  return result;
}

}  // namespace uavnet
