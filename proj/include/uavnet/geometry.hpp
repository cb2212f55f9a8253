#pragma once

#include <Eigen/Core>
#include <variant>
#include <vector>

#include "uavnet/rng.hpp"

namespace uavnet {

/// Flat-top regular hexagon: horizontal edges at |y| = sqrt(3)/2 * radius,
/// vertices on the x axis at +-radius. The reference cell is centered at the
/// origin; orientation matters only to the simulator.
struct HexCell {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;

  double area() const { return 1.5 * std::sqrt(3.0) * radius * radius; }

  bool contains(const Eigen::Vector2d& point) const {
    const double x = std::fabs(point.x() - center.x());
    const double y = std::fabs(point.y() - center.y());
    const double apothem = 0.5 * std::sqrt(3.0) * radius;
    return y <= apothem + 1e-12 && y <= std::sqrt(3.0) * (radius - x) + 1e-12;
  }
};

/// Cell centers of a hexagonal tessellation covering `rings` rings around the
/// origin cell (origin excluded when include_origin is false).
std::vector<Eigen::Vector2d> hex_lattice(double radius, int rings,
                                         bool include_origin = false);

struct RectRegion {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
};
struct DiskRegion {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
};
struct AnnulusRegion {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double inner = 0.0;
  double outer = 1.0;
};
using Region = std::variant<RectRegion, DiskRegion, AnnulusRegion, HexCell>;

double region_area(const Region& region);

/// One point uniform in the region.
Eigen::Vector2d uniform_point(Rng& rng, const Region& region);

/// Poisson point process sample: Poisson(intensity * area) points, uniform.
std::vector<Eigen::Vector2d> sample_ppp(Rng& rng, double intensity,
                                        const Region& region);

/// Mean trajectory segment length for a cell with exactly `device_count`
/// devices: each remaining-device stage is modeled as the contact distance of
/// a thinned point process over the cell area.
double avg_segment_exact(int device_count, double radius);

/// Same sum evaluated at the mean device count; a lower bound on the Poisson
/// expectation of avg_segment_exact by convexity.
double avg_segment_jensen(int mean_devices, double radius);

/// Greedy nearest-neighbor tour over Poisson(mean_devices) uniform points in
/// the hexagon, starting from a uniform random point; returns every hop
/// length. Ties break to the lowest device index.
std::vector<double> simulate_greedy_trajectory(Rng& rng, double mean_devices,
                                               double radius);

struct KinematicsConfig {
  double cruise_speed = 22.0;  // m/s
  double accel = 11.0;         // m/s^2
  double decel = 11.0;         // m/s^2

  double accel_time() const { return cruise_speed / accel; }
  double decel_time() const { return cruise_speed / decel; }
  double accel_dist() const { return 0.5 * accel * accel_time() * accel_time(); }
  double decel_dist() const { return 0.5 * decel * decel_time() * decel_time(); }
};

/// Which short-segment branch to use below the speed-up + slow-down distance.
///
/// Reference: sqrt(d / (a_u + a_d)) as published. Dimensionally this is not a
/// time and it is discontinuous against the cruise branch at the knot; it is
/// kept verbatim because the reference parameter set never exercises it.
/// Kinematic: the triangular-profile time sqrt(2 d (a_u+a_d) / (a_u a_d)),
/// continuous at the knot.
enum class TravelTimeModel { Reference, Kinematic };

double travel_time(double distance, const KinematicsConfig& kin,
                   TravelTimeModel model = TravelTimeModel::Reference);

}  // namespace uavnet
