#include "uavnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavnet/errors.hpp"

namespace uavnet {

std::vector<Eigen::Vector2d> hex_lattice(double radius, int rings,
                                         bool include_origin) {
  std::vector<Eigen::Vector2d> centers;
  if (include_origin) centers.emplace_back(0.0, 0.0);
  // Axial coordinates; flat-top neighbors sit at center distance sqrt(3) R.
  for (int q = -rings; q <= rings; ++q) {
    for (int r = -rings; r <= rings; ++r) {
      const int s = -q - r;
      const int ring = std::max({std::abs(q), std::abs(r), std::abs(s)});
      if (ring < 1 || ring > rings) continue;
      centers.emplace_back(1.5 * radius * q,
                           std::sqrt(3.0) * radius * (r + 0.5 * q));
    }
  }
  return centers;
}

double region_area(const Region& region) {
  struct Visitor {
    double operator()(const RectRegion& r) const {
      return (r.x1 - r.x0) * (r.y1 - r.y0);
    }
    double operator()(const DiskRegion& d) const {
      return M_PI * d.radius * d.radius;
    }
    double operator()(const AnnulusRegion& a) const {
      return M_PI * (a.outer * a.outer - a.inner * a.inner);
    }
    double operator()(const HexCell& h) const { return h.area(); }
  };
  return std::visit(Visitor{}, region);
}

Eigen::Vector2d uniform_point(Rng& rng, const Region& region) {
  struct Visitor {
    Rng& rng;
    Eigen::Vector2d operator()(const RectRegion& r) const {
      return {rng.uniform(r.x0, r.x1), rng.uniform(r.y0, r.y1)};
    }
    Eigen::Vector2d operator()(const DiskRegion& d) const {
      const double radius = d.radius * std::sqrt(rng.uniform());
      const double angle = rng.uniform(0.0, 2.0 * M_PI);
      return d.center + radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
    }
    Eigen::Vector2d operator()(const AnnulusRegion& a) const {
      const double r2 =
          a.inner * a.inner + rng.uniform() * (a.outer * a.outer - a.inner * a.inner);
      const double radius = std::sqrt(r2);
      const double angle = rng.uniform(0.0, 2.0 * M_PI);
      return a.center + radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
    }
    Eigen::Vector2d operator()(const HexCell& h) const {
      // Rejection from the bounding box; acceptance 3/4.
      const double apothem = 0.5 * std::sqrt(3.0) * h.radius;
      while (true) {
        const Eigen::Vector2d p(rng.uniform(-h.radius, h.radius),
                                rng.uniform(-apothem, apothem));
        if (HexCell{Eigen::Vector2d::Zero(), h.radius}.contains(p))
          return h.center + p;
      }
    }
  };
  return std::visit(Visitor{rng}, region);
}

std::vector<Eigen::Vector2d> sample_ppp(Rng& rng, double intensity,
                                        const Region& region) {
  if (intensity < 0)
    throw std::invalid_argument("sample_ppp: negative intensity");
  const int count = rng.poisson(intensity * region_area(region));
  std::vector<Eigen::Vector2d> points;
  points.reserve(count);
  for (int i = 0; i < count; ++i) points.push_back(uniform_point(rng, region));
  return points;
}

double avg_segment_exact(int device_count, double radius) {
  if (device_count < 1)
    throw std::invalid_argument("avg_segment_exact: device_count must be >= 1");
  const double cell_area_term = 3.0 * std::sqrt(3.0) * radius * radius / 8.0;
  double sum = 0.0;
  for (int remaining = 1; remaining <= device_count; ++remaining)
    sum += std::sqrt(cell_area_term / remaining);
  return sum / device_count;
}

double avg_segment_jensen(int mean_devices, double radius) {
  if (mean_devices < 1)
    throw std::invalid_argument("avg_segment_jensen: mean_devices must be >= 1");
  return avg_segment_exact(mean_devices, radius);
}

std::vector<double> simulate_greedy_trajectory(Rng& rng, double mean_devices,
                                               double radius) {
  if (mean_devices <= 0)
    throw std::invalid_argument("simulate_greedy_trajectory: mean must be > 0");
  const HexCell cell{Eigen::Vector2d::Zero(), radius};
  const int count = rng.poisson(mean_devices);
  std::vector<Eigen::Vector2d> devices;
  devices.reserve(count);
  for (int i = 0; i < count; ++i) devices.push_back(uniform_point(rng, cell));

  std::vector<double> hops;
  hops.reserve(count);
  Eigen::Vector2d position = uniform_point(rng, cell);
  std::vector<bool> visited(count, false);
  for (int step = 0; step < count; ++step) {
    int nearest = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
      if (visited[i]) continue;
      const double d = (devices[i] - position).norm();
      if (d < best) {  // strict: ties resolve to the lowest index
        best = d;
        nearest = i;
      }
    }
    visited[nearest] = true;
    hops.push_back(best);
    position = devices[nearest];
  }
  return hops;
}

double travel_time(double distance, const KinematicsConfig& kin,
                   TravelTimeModel model) {
  if (distance < 0)
    throw std::invalid_argument("travel_time: distance must be >= 0");
  if (distance == 0.0) return 0.0;
  const double ramp_dist = kin.accel_dist() + kin.decel_dist();
  if (distance > ramp_dist) {
    return kin.accel_time() + kin.decel_time() +
           (distance - ramp_dist) / kin.cruise_speed;
  }
  switch (model) {
    case TravelTimeModel::Reference:
      return std::sqrt(distance / (kin.accel + kin.decel));
    case TravelTimeModel::Kinematic:
      return std::sqrt(2.0 * distance * (kin.accel + kin.decel) /
                       (kin.accel * kin.decel));
  }
  return 0.0;
}

}  // namespace uavnet
