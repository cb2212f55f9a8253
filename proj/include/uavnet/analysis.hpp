#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "uavnet/config.hpp"
#include "uavnet/quadrature.hpp"

namespace uavnet {

enum class LinkComponent { LineOfSight, NonLineOfSight };

/// Size of the interference-free zone around the receiving UAV assumed by the
/// point-process approximation. HalfCellRadius is the published approximation
/// for the device-centric scheme; FullCellRadius reproduces the reference
/// numeric curves (see README, "calibrated protection region").
enum class ProtectionRegion { HalfCellRadius, FullCellRadius };

/// Point-process model of the interfering uplinks feeding the transforms.
struct InterferenceField {
  double intensity = 0.0;         // interferers per m^2
  double exclusion_radius = 0.0;  // m, interference-free zone
  double extent_radius = std::numeric_limits<double>::infinity();  // m
  GainMixture mixture;
  LosModel los;
  ChannelConfig channel;
};

InterferenceField urdc_field(
    const ScenarioConfig& scenario, const DerivedQuantities& derived,
    ProtectionRegion protection = ProtectionRegion::HalfCellRadius,
    double extent_radius = std::numeric_limits<double>::infinity());

InterferenceField suc_field(
    const ScenarioConfig& scenario, const DerivedQuantities& derived,
    double extent_radius = std::numeric_limits<double>::infinity());

/// E[exp(-s I)] for the LOS or NLOS part of the aggregate interference.
/// Always in (0, 1]; exactly 1 at s = 0 or zero intensity.
double laplace_interference(const InterferenceField& field, double s,
                            LinkComponent component,
                            const QuadratureSpec& quad = {});

/// Success probability of one uplink at deterministic horizontal offset,
/// mixing the LOS/NLOS serving legs by the LOS probability at that offset.
double conditional_success(const ScenarioConfig& scenario,
                           const InterferenceField& field, double theta,
                           double offset, const QuadratureSpec& quad = {});

/// Device-centric success probability: conditional success averaged over the
/// Gaussian hover offset. A finite extent radius models a network that ends
/// at that distance (for matching a finite simulated lattice); the default
/// integrates to infinity.
double success_probability_urdc(
    const ScenarioConfig& scenario, double theta,
    const QuadratureSpec& quad = {},
    ProtectionRegion protection = ProtectionRegion::HalfCellRadius,
    double extent_radius = std::numeric_limits<double>::infinity());

/// UAV-centric success probability at a fixed device distance.
double success_probability_suc(
    const ScenarioConfig& scenario, double theta, double device_distance,
    const QuadratureSpec& quad = {},
    double extent_radius = std::numeric_limits<double>::infinity());

struct CellStats {
  double mean = 0.0;
  double sd = 0.0;
  int positions = 0;
};

/// Mean and population SD of the UAV-centric success probability over a
/// deterministic low-discrepancy set of device positions in the cell.
CellStats success_probability_suc_cell_stats(
    const ScenarioConfig& scenario, double theta,
    const QuadratureSpec& quad = {}, int n_positions = 600,
    double extent_radius = std::numeric_limits<double>::infinity());

/// Success probability x duty factor x rate, in bits/s. The UAV-centric
/// value uses the cell-mean success probability.
double outage_capacity(
    const ScenarioConfig& scenario, Scheme scheme, double theta,
    const QuadratureSpec& quad = {},
    ProtectionRegion protection = ProtectionRegion::HalfCellRadius);

// ---------------------------------------------------------------------------
// Meta distribution of the conditional success probability.
// ---------------------------------------------------------------------------

/// Binomial-series form for non-integer orders.
/// FallingFactorial matches the generalized binomial theorem (terminates at
/// integer order and satisfies the first-moment identity); RisingFactorial is
/// provided for comparison only.
enum class MetaSeriesForm { FallingFactorial, RisingFactorial };

/// How the LOS/NLOS geometry weights enter the moment integrand. Linear
/// weights (p, 1-p) keep M_0 = 1 and M_1 equal to the mean success
/// probability; PoweredAsPrinted raises the weights to the moment order.
enum class MetaMixture { Linear, PoweredAsPrinted };

struct MetaOptions {
  Scheme scheme = Scheme::Urdc;
  MetaSeriesForm series = MetaSeriesForm::FallingFactorial;
  MetaMixture mixture = MetaMixture::Linear;
  ProtectionRegion protection = ProtectionRegion::HalfCellRadius;
  int z_max = 200;
  int suc_positions = 400;  // geometry nodes when scheme == Suc
};

/// b-th moment of the conditional success probability, b >= 0 integer.
double meta_moment(const ScenarioConfig& scenario, double theta, int order,
                   const QuadratureSpec& quad = {},
                   const MetaOptions& options = {});

struct ImaginaryMoment {
  std::complex<double> value;
  double tail_estimate = 0.0;  // magnitude of the first neglected series term
  bool used_fallback = false;  // true when the direct path was used
  int terms = 0;
};

/// Imaginary moment M_{jt}; series evaluation with automatic fallback to the
/// direct evaluation of E[S^jt] over the geometry nodes when the series
/// fails to converge within z_max or loses precision to cancellation.
ImaginaryMoment meta_moment_imaginary(const ScenarioConfig& scenario,
                                      double theta, double t,
                                      const QuadratureSpec& quad = {},
                                      const MetaOptions& options = {});

struct MetaDistributionResult {
  double value = 0.0;  // clamped to [0, 1]
  double raw = 0.0;    // before clamping
  bool used_fallback = false;
};

/// CCDF of the conditional success probability at reliability X in (0, 1),
/// by numerical inversion of the imaginary moments.
MetaDistributionResult meta_distribution(const ScenarioConfig& scenario,
                                         double theta, double reliability,
                                         const QuadratureSpec& quad = {},
                                         const MetaOptions& options = {});

// Real-order moment through the same series machinery; exposed for the
// series-form consistency checks.
double meta_moment_real_series(const ScenarioConfig& scenario, double theta,
                               double order, const QuadratureSpec& quad = {},
                               const MetaOptions& options = {});

}  // namespace uavnet
