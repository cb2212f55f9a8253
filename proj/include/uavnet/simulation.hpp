#pragma once

#include <cstdint>
#include <vector>

#include "uavnet/analysis.hpp"
#include "uavnet/config.hpp"

namespace uavnet {

/// Exact-network Monte Carlo settings. The lattice covers `rings` rings of
/// cells around the reference cell; every trial and every cell draw from
/// independent substreams of the seed, so estimates are bit-reproducible and
/// independent of evaluation order or lattice growth.
struct SimOptions {
  int rings = 15;
  int trials = 20000;
  std::uint64_t seed = 12345;
  int threads = 0;  // 0 = hardware concurrency
};

struct SuccessEstimate {
  double estimate = 0.0;
  double ci_halfwidth = 0.0;  // 95% normal interval
  int trials = 0;
  std::uint64_t seed = 0;
};

/// Area-equivalent disk radius of a lattice with `rings` rings around the
/// origin cell; the matching extent for comparing analysis against the
/// finite simulated network.
inline double lattice_extent_radius(double cell_radius, int rings) {
  const double cells = 3.0 * rings * (rings + 1) + 1;
  const double cell_area = 1.5 * std::sqrt(3.0) * cell_radius * cell_radius;
  return std::sqrt(cells * cell_area / M_PI);
}

/// SINR-threshold success estimate over the exact hexagonal network (one
/// candidate interferer per cell; device-centric interferers active with the
/// duty-factor probability).
SuccessEstimate simulate_success(const ScenarioConfig& scenario, Scheme scheme,
                                 double theta, const SimOptions& options);

/// Per-geometry conditional success estimates: geometry (serving offset, LOS
/// states, interferer positions) is frozen per outer sample and fading /
/// antenna orientation / activity are redrawn per inner sample. Returns the
/// sorted conditional success estimates across geometries.
std::vector<double> simulate_meta(const ScenarioConfig& scenario, double theta,
                                  int n_geometries, int n_fadings,
                                  const SimOptions& options);

/// Fraction of samples strictly above the reliability level.
double empirical_ccdf(const std::vector<double>& sorted_samples, double level);

struct QueueSimResult {
  double mean_queue_len = 0.0;
  double mean_delay_slots = 0.0;
  long packets = 0;
};

/// Slot-by-slot FIFO queue: Bernoulli arrivals, one transmission attempt per
/// n-slot polling cycle succeeding with the given probability. Independent
/// oracle for the matrix-analytic solution.
QueueSimResult simulate_queue(std::uint64_t seed, int n_devices,
                              double arrival_prob, double success_prob,
                              long slots);

}  // namespace uavnet
