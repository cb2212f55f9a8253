#include "uavnet/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace uavnet {

namespace {

struct ServingLeg {
  int m = 1;
  double alpha = 4.0;
  double tail_coeff = 1.0;  // m (m!)^(-1/m), the Gamma-tail bound constant
};

ServingLeg serving_leg(const ChannelConfig& channel, LinkComponent component) {
  ServingLeg leg;
  leg.m = component == LinkComponent::LineOfSight ? channel.m_los
                                                  : channel.m_nlos;
  leg.alpha = component == LinkComponent::LineOfSight ? channel.alpha_los
                                                      : channel.alpha_nlos;
  leg.tail_coeff = leg.m * std::pow(std::tgamma(leg.m + 1.0), -1.0 / leg.m);
  return leg;
}

// Offset nodes and weights for the Gaussian hover-offset average; weights
// already include the doubled symmetric density.
struct OffsetNodes {
  std::vector<double> offset;
  std::vector<double> weight;
};

OffsetNodes gaussian_offset_nodes(double sd) {
  OffsetNodes nodes;
  if (sd == 0.0) {
    nodes.offset = {0.0};
    nodes.weight = {1.0};
    return nodes;
  }
  const std::vector<double> edges = {0.0, 2.0 * sd, 5.0 * sd, 8.0 * sd};
  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const int points = seg == 0 ? 32 : (seg == 1 ? 24 : 16);
    auto [x, w] = gauss_legendre(points);
    const double a = edges[seg];
    const double b = edges[seg + 1];
    for (int i = 0; i < points; ++i) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
      const double pdf =
          std::exp(-r * r / (2.0 * sd * sd)) / std::sqrt(2.0 * M_PI * sd * sd);
      nodes.offset.push_back(r);
      nodes.weight.push_back((b - a) * w[i] * pdf);  // 0.5 * 2 cancels
    }
  }
  return nodes;
}

double halton(int index, int base) {
  double fraction = 1.0, result = 0.0;
  while (index > 0) {
    fraction /= base;
    result += fraction * (index % base);
    index /= base;
  }
  return result;
}

// Deterministic low-discrepancy device positions in the cell, as radii.
std::vector<double> hexagon_position_radii(double radius, int count) {
  std::vector<double> radii;
  radii.reserve(count);
  const double apothem = 0.5 * std::sqrt(3.0) * radius;
  const HexCell cell{Eigen::Vector2d::Zero(), radius};
  int index = 1;
  while (static_cast<int>(radii.size()) < count) {
    const Eigen::Vector2d p((2.0 * halton(index, 2) - 1.0) * radius,
                            (2.0 * halton(index, 3) - 1.0) * apothem);
    ++index;
    if (cell.contains(p)) radii.push_back(p.norm());
  }
  return radii;
}

}  // namespace

InterferenceField urdc_field(const ScenarioConfig& scenario,
                             const DerivedQuantities& derived,
                             ProtectionRegion protection,
                             double extent_radius) {
  InterferenceField field;
  field.intensity = derived.interferer_intensity_dc;
  field.exclusion_radius = protection == ProtectionRegion::HalfCellRadius
                               ? 0.5 * scenario.geometry.cell_radius
                               : scenario.geometry.cell_radius;
  field.extent_radius = extent_radius;
  field.mixture = scenario.antenna.interferer_mixture();
  field.los = scenario.los_model();
  field.channel = scenario.channel;
  return field;
}

InterferenceField suc_field(const ScenarioConfig& scenario,
                            const DerivedQuantities& derived,
                            double extent_radius) {
  InterferenceField field;
  field.intensity = derived.interferer_intensity_uc;
  field.exclusion_radius = scenario.geometry.cell_radius;
  field.extent_radius = extent_radius;
  field.mixture = scenario.antenna.interferer_mixture();
  field.los = scenario.los_model();
  field.channel = scenario.channel;
  return field;
}

double laplace_interference(const InterferenceField& field, double s,
                            LinkComponent component,
                            const QuadratureSpec& quad) {
  if (s < 0) throw std::invalid_argument("laplace_interference: s must be >= 0");
  if (s == 0.0 || field.intensity == 0.0) return 1.0;

  const int m = component == LinkComponent::LineOfSight ? field.channel.m_los
                                                        : field.channel.m_nlos;
  const double alpha = component == LinkComponent::LineOfSight
                           ? field.channel.alpha_los
                           : field.channel.alpha_nlos;
  const double altitude = field.los.altitude;
  const double power = field.channel.tx_power;
  const bool los_part = component == LinkComponent::LineOfSight;

  auto integrand = [&](double r) {
    const double weight = los_part ? field.los(r) : 1.0 - field.los(r);
    const double pg = std::pow(r * r + altitude * altitude, -0.5 * alpha);
    double mixture_sum = 0.0;
    for (int e = 0; e < 4; ++e) {
      const double x = s * power * field.mixture.gain[e] * pg / m;
      mixture_sum += field.mixture.prob[e] * (-std::expm1(-m * std::log1p(x)));
    }
    return weight * mixture_sum * r;
  };

  IntegralResult result;
  if (std::isinf(field.extent_radius)) {
    result = integrate_semi_infinite(integrand, field.exclusion_radius, quad);
  } else if (field.extent_radius <= field.exclusion_radius) {
    return 1.0;
  } else {
    result = integrate_adaptive(integrand, field.exclusion_radius,
                                field.extent_radius, quad);
  }
  if (!result.converged)
    throw NumericalError(
        "interference transform did not converge (error estimate " +
        std::to_string(result.error_estimate) + ")");
  return std::exp(-2.0 * M_PI * field.intensity * result.value);
}

namespace {

// Success of one serving leg conditioned on its LOS state: alternating
// Gamma-tail sum with every term damped by the noise exponential and both
// interference transforms.
double leg_success(const ScenarioConfig& scenario,
                   const InterferenceField& field, double theta, double offset,
                   LinkComponent component, const QuadratureSpec& quad) {
  const ServingLeg leg = serving_leg(scenario.channel, component);
  const double altitude = scenario.geometry.uav_altitude;
  const double dist_sq = offset * offset + altitude * altitude;
  const double base = theta * std::pow(dist_sq, 0.5 * leg.alpha) /
                      (scenario.channel.tx_power * scenario.antenna.serving_gain());
  double sum = 0.0;
  double binom = 1.0;
  for (int n = 1; n <= leg.m; ++n) {
    binom = binom * (leg.m - n + 1) / n;
    const double s = leg.tail_coeff * n * base;
    const double term =
        binom * std::exp(-s * scenario.channel.noise_power) *
        laplace_interference(field, s, LinkComponent::LineOfSight, quad) *
        laplace_interference(field, s, LinkComponent::NonLineOfSight, quad);
    sum += (n % 2 == 1 ? term : -term);
  }
  return sum;
}

}  // namespace

double conditional_success(const ScenarioConfig& scenario,
                           const InterferenceField& field, double theta,
                           double offset, const QuadratureSpec& quad) {
  const double p_los = field.los(offset);
  const double value =
      p_los * leg_success(scenario, field, theta, offset,
                          LinkComponent::LineOfSight, quad) +
      (1.0 - p_los) * leg_success(scenario, field, theta, offset,
                                  LinkComponent::NonLineOfSight, quad);
  return std::clamp(value, 0.0, 1.0);
}

double success_probability_urdc(const ScenarioConfig& scenario, double theta,
                                const QuadratureSpec& quad,
                                ProtectionRegion protection,
                                double extent_radius) {
  if (theta <= 0)
    throw std::invalid_argument("success_probability_urdc: theta must be > 0");
  const DerivedQuantities derived = derive(scenario);
  const InterferenceField field =
      urdc_field(scenario, derived, protection, extent_radius);
  const OffsetNodes nodes =
      gaussian_offset_nodes(scenario.geometry.serving_offset_sd);
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.offset.size(); ++i)
    total += nodes.weight[i] *
             conditional_success(scenario, field, theta, nodes.offset[i], quad);
  return std::clamp(total, 0.0, 1.0);
}

double success_probability_suc(const ScenarioConfig& scenario, double theta,
                               double device_distance,
                               const QuadratureSpec& quad,
                               double extent_radius) {
  if (theta <= 0)
    throw std::invalid_argument("success_probability_suc: theta must be > 0");
  if (device_distance < 0)
    throw std::invalid_argument("success_probability_suc: distance must be >= 0");
  const DerivedQuantities derived = derive(scenario);
  const InterferenceField field = suc_field(scenario, derived, extent_radius);
  return conditional_success(scenario, field, theta, device_distance, quad);
}

CellStats success_probability_suc_cell_stats(const ScenarioConfig& scenario,
                                             double theta,
                                             const QuadratureSpec& quad,
                                             int n_positions,
                                             double extent_radius) {
  if (n_positions < 100)
    throw std::invalid_argument("cell stats need at least 100 positions");
  const DerivedQuantities derived = derive(scenario);
  const InterferenceField field = suc_field(scenario, derived, extent_radius);
  const std::vector<double> radii =
      hexagon_position_radii(scenario.geometry.cell_radius, n_positions);
  double mean = 0.0, mean_sq = 0.0;
  for (const double r : radii) {
    const double s = conditional_success(scenario, field, theta, r, quad);
    mean += s;
    mean_sq += s * s;
  }
  mean /= n_positions;
  mean_sq /= n_positions;
  return {mean, std::sqrt(std::max(0.0, mean_sq - mean * mean)), n_positions};
}

double outage_capacity(const ScenarioConfig& scenario, Scheme scheme,
                       double theta, const QuadratureSpec& quad,
                       ProtectionRegion protection) {
  if (theta <= 0)
    throw std::invalid_argument("outage_capacity: theta must be > 0");
  const auto& t = scenario.traffic;
  const double rate = t.rate_penalty * t.bandwidth * std::log2(1.0 + theta);
  if (scheme == Scheme::Urdc) {
    const double success =
        success_probability_urdc(scenario, theta, quad, protection);
    return success * t.duty_factor() * rate;
  }
  const CellStats stats =
      success_probability_suc_cell_stats(scenario, theta, quad);
  return stats.mean * rate;
}

// ---------------------------------------------------------------------------
// Meta distribution machinery
// ---------------------------------------------------------------------------

namespace {

// Geometry nodes plus lazily grown tables of the per-node noise-and-
// interference factors entering the moment series. The factor for order index
// n is exp(-c n sigma^2) L_L(c n) L_N(c n), shared by every series order.
class MetaTable {
 public:
  MetaTable(const ScenarioConfig& scenario, double theta,
            const QuadratureSpec& quad, const MetaOptions& options)
      : scenario_(scenario), theta_(theta), quad_(quad) {
    const DerivedQuantities derived = derive(scenario);
    field_ = options.scheme == Scheme::Urdc
                 ? urdc_field(scenario, derived, options.protection)
                 : suc_field(scenario, derived);
    if (options.scheme == Scheme::Urdc) {
      const OffsetNodes nodes =
          gaussian_offset_nodes(scenario.geometry.serving_offset_sd);
      offsets_ = nodes.offset;
      weights_ = nodes.weight;
    } else {
      offsets_ = hexagon_position_radii(scenario.geometry.cell_radius,
                                        options.suc_positions);
      weights_.assign(offsets_.size(), 1.0 / offsets_.size());
    }
    los_prob_.reserve(offsets_.size());
    for (const double r : offsets_) los_prob_.push_back(field_.los(r));
    legs_[0] = serving_leg(scenario.channel, LinkComponent::LineOfSight);
    legs_[1] = serving_leg(scenario.channel, LinkComponent::NonLineOfSight);
    for (int k = 0; k < 2; ++k) {
      factors_[k].assign(offsets_.size(), std::vector<double>{1.0});
      z_cache_[k].assign(offsets_.size(), {});
    }
  }

  std::size_t nodes() const { return offsets_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  double los_prob(std::size_t i) const { return los_prob_[i]; }
  int leg_shape(int k) const { return legs_[k].m; }

  /// Per-node conditional success (for the direct moment path).
  double node_success(std::size_t i) {
    if (success_.empty()) {
      success_.reserve(nodes());
      for (std::size_t node = 0; node < nodes(); ++node)
        success_.push_back(conditional_success(scenario_, field_, theta_,
                                               offsets_[node], quad_));
    }
    return success_[i];
  }

  /// Alternating binomial sum of order `z` for leg `k` at node `i`, plus the
  /// floating-point noise floor of the cancellation (largest summand times
  /// machine epsilon). Sums are t-independent and cached per (leg, node, z).
  double z_sum(int k, int z, std::size_t i, double& noise) {
    auto& cache = z_cache_[k][i];
    while (static_cast<int>(cache.size()) <= z) {
      const int zz = static_cast<int>(cache.size());
      const int order = legs_[k].m * zz;
      extend(k, i, order);
      const auto& table = factors_[k][i];
      double sum = 0.0, binom = 1.0, max_term = 0.0;
      for (int n = 0; n <= order; ++n) {
        if (n > 0) binom = binom * (order - n + 1) / n;
        const double term = binom * table[n];
        max_term = std::max(max_term, std::fabs(term));
        sum += (n % 2 == 0 ? term : -term);
      }
      cache.push_back({sum, max_term * 4.4e-16});
    }
    noise += cache[z].noise;
    return cache[z].value;
  }

 private:
  void extend(int k, std::size_t i, int order) {
    auto& table = factors_[k][i];
    const ServingLeg& leg = legs_[k];
    const double altitude = scenario_.geometry.uav_altitude;
    const double dist_sq = offsets_[i] * offsets_[i] + altitude * altitude;
    const double base =
        theta_ * std::pow(dist_sq, 0.5 * leg.alpha) /
        (scenario_.channel.tx_power * scenario_.antenna.serving_gain());
    while (static_cast<int>(table.size()) <= order) {
      const int n = static_cast<int>(table.size());
      const double s = leg.tail_coeff * n * base;
      table.push_back(
          std::exp(-s * scenario_.channel.noise_power) *
          laplace_interference(field_, s, LinkComponent::LineOfSight, quad_) *
          laplace_interference(field_, s, LinkComponent::NonLineOfSight, quad_));
    }
  }

  ScenarioConfig scenario_;
  double theta_;
  QuadratureSpec quad_;
  InterferenceField field_;
  ServingLeg legs_[2];
  std::vector<double> offsets_, weights_, los_prob_;
  std::vector<double> success_;
  // factors_[leg][node][n]
  std::vector<std::vector<double>> factors_[2];
  struct CachedSum {
    double value = 0.0;
    double noise = 0.0;
  };
  std::vector<std::vector<CachedSum>> z_cache_[2];
};

// Geometry-weighted integral of the order-z sums; `los_weight` supplies the
// per-node LOS/NLOS weights (linear or powered, real or complex; magnitude
// never above one, so the node noise bounds transfer directly).
template <class Weight>
auto z_integral(MetaTable& table, int z, double& noise,
                const Weight& los_weight)
    -> decltype(los_weight(0.0, true)) {
  using Value = decltype(los_weight(0.0, true));
  Value total{};
  for (std::size_t i = 0; i < table.nodes(); ++i) {
    const double p = table.los_prob(i);
    double node_noise = 0.0;
    const double z_los = table.z_sum(0, z, i, node_noise);
    const double z_nlos = table.z_sum(1, z, i, node_noise);
    total += table.weight(i) *
             (z_los * los_weight(p, true) + z_nlos * los_weight(p, false));
    noise += table.weight(i) * node_noise;
  }
  return total;
}

}  // namespace

double meta_moment(const ScenarioConfig& scenario, double theta, int order,
                   const QuadratureSpec& quad, const MetaOptions& options) {
  if (order < 0) throw std::invalid_argument("meta_moment: order must be >= 0");
  if (order == 0) return 1.0;
  MetaTable table(scenario, theta, quad, options);
  auto weight = [&](double p, bool los) {
    const double w = los ? p : 1.0 - p;
    return options.mixture == MetaMixture::Linear ? w : std::pow(w, order);
  };
  double total = 0.0, binom = 1.0, noise = 0.0;
  for (int z = 0; z <= order; ++z) {
    if (z > 0) binom = binom * (order - z + 1) / z;
    double term_noise = 0.0;
    const double iz = z_integral(table, z, term_noise, weight);
    total += (z % 2 == 0 ? 1.0 : -1.0) * binom * iz;
    noise += std::fabs(binom) * term_noise;
  }
  if (noise > 1e-9)
    throw NumericalError("meta_moment: alternating sums lost precision");
  return std::clamp(total, 0.0, 1.0);
}

namespace {

// Shared series evaluator over a complex or real order. Returns false when
// the series fails (cap or cancellation).
template <class Order, class Value>
bool meta_series(MetaTable& table, Order order, const MetaOptions& options,
                 Value& result, double& tail, int& terms) {
  auto weight = [&](double p, bool los) -> Value {
    const double w = los ? p : 1.0 - p;
    if (options.mixture == MetaMixture::Linear) return Value(w);
    // w > 0 is guaranteed: the sigmoid never reaches 0 or 1 exactly.
    return std::exp(order * std::log(w));
  };
  Value total{};
  Value coeff(1.0);
  double noise = 0.0;
  int small_streak = 0;
  for (int z = 0; z <= options.z_max; ++z) {
    if (z > 0) {
      const Value factor = options.series == MetaSeriesForm::FallingFactorial
                               ? (order - Value(z - 1))
                               : (order + Value(z - 1));
      coeff = coeff * factor / Value(z);
    }
    double term_noise = 0.0;
    const Value iz = z_integral(table, z, term_noise, weight);
    noise += std::abs(coeff) * term_noise;
    if (noise > 1e-9) return false;
    const Value term = (z % 2 == 0 ? 1.0 : -1.0) * coeff * iz;
    total += term;
    terms = z + 1;
    tail = std::abs(term);
    if (z > 0 && std::abs(term) < 1e-9 * std::max(std::abs(total), 1e-12)) {
      if (++small_streak >= 2) {
        result = total;
        return true;
      }
    } else {
      small_streak = 0;
    }
    // Falling-factorial series terminates exactly at integer real orders.
    if constexpr (std::is_same_v<Order, double>) {
      if (options.series == MetaSeriesForm::FallingFactorial &&
          order >= 0 && order == std::floor(order) && z >= order) {
        result = total;
        return true;
      }
    }
  }
  result = total;
  return false;
}

}  // namespace

double meta_moment_real_series(const ScenarioConfig& scenario, double theta,
                               double order, const QuadratureSpec& quad,
                               const MetaOptions& options) {
  MetaTable table(scenario, theta, quad, options);
  double result = 0.0, tail = 0.0;
  int terms = 0;
  if (!meta_series(table, order, options, result, tail, terms))
    throw NumericalError("meta_moment_real_series: series did not converge");
  return result;
}

ImaginaryMoment meta_moment_imaginary(const ScenarioConfig& scenario,
                                      double theta, double t,
                                      const QuadratureSpec& quad,
                                      const MetaOptions& options) {
  if (t < 0) throw std::invalid_argument("meta_moment_imaginary: t must be >= 0");
  MetaTable table(scenario, theta, quad, options);
  ImaginaryMoment out;
  if (t == 0.0) {
    out.value = 1.0;
    return out;
  }
  const std::complex<double> order(0.0, t);
  if (meta_series(table, order, options, out.value, out.tail_estimate,
                  out.terms)) {
    return out;
  }
  // Direct path: E[S^jt] over the geometry nodes.
  out.used_fallback = true;
  std::complex<double> total;
  for (std::size_t i = 0; i < table.nodes(); ++i) {
    const double s = std::max(table.node_success(i), 1e-300);
    total += table.weight(i) * std::exp(order * std::log(s));
  }
  out.value = total;
  out.tail_estimate = 0.0;
  return out;
}

MetaDistributionResult meta_distribution(const ScenarioConfig& scenario,
                                         double theta, double reliability,
                                         const QuadratureSpec& quad,
                                         const MetaOptions& options) {
  if (reliability <= 0.0 || reliability >= 1.0)
    throw std::invalid_argument("meta_distribution: reliability must be in (0,1)");

  MetaTable table(scenario, theta, quad, options);
  MetaDistributionResult out;

  // Decide the moment path once so the integrand is smooth in t: probe the
  // series at a large t and fall back to the direct evaluation everywhere if
  // it struggles. A series failure deeper into the integration discards the
  // partial result and restarts on the direct path.
  bool direct = false;
  {
    double tail = 0.0;
    int terms = 0;
    std::complex<double> probe;
    if (!meta_series(table, std::complex<double>(0.0, 20.0), options, probe,
                     tail, terms))
      direct = true;
  }
  bool series_failed = false;
  auto moment = [&](double t) -> std::complex<double> {
    const std::complex<double> order(0.0, t);
    if (!direct) {
      double tail = 0.0;
      int terms = 0;
      std::complex<double> value;
      if (meta_series(table, order, options, value, tail, terms)) return value;
      series_failed = true;
    }
    std::complex<double> total;
    for (std::size_t i = 0; i < table.nodes(); ++i) {
      const double s = std::max(table.node_success(i), 1e-300);
      total += table.weight(i) * std::exp(order * std::log(s));
    }
    return total;
  };

  const double log_x = std::log(reliability);
  auto integrand = [&](double t) {
    const std::complex<double> phase(0.0, -t * log_x);
    return std::imag(std::exp(phase) * moment(t)) / t;
  };

  // Dominant oscillation rate: phase drift of e^{-jt ln X} M_jt near t = 0.
  const double probe_t = 1e-3;
  const double mean_log = std::imag(moment(probe_t)) / probe_t;
  const double delta = mean_log - log_x;
  const double spread = std::sqrt(
      2.0 * std::max(0.0, -std::log(std::max(std::abs(moment(1.0)), 1e-12))));
  const double freq = std::fabs(delta) + spread;
  const double panel =
      std::clamp(2.0 * M_PI / (8.0 * std::max(freq, 1e-6)), 1e-3, 4.0);

  double integral = 0.0;
  double tail_correction = 0.0;
  if (!direct) {
    const double t_cap = 1e5;
    int decayed_panels = 0;
    double t_lo = 0.0;
    while (t_lo < t_cap && !series_failed) {
      const double t_hi = std::min(t_lo + panel, t_cap);
      integral += integrate_adaptive(integrand, t_lo, t_hi, quad).value;
      t_lo = t_hi;
      const std::complex<double> m_edge = moment(t_lo);
      const double magnitude = std::abs(m_edge);
      decayed_panels = magnitude < 1e-6 ? decayed_panels + 1 : 0;
      if (decayed_panels >= 5) break;  // moments decorrelated; tail negligible
      const double phase_arg = std::fabs(delta) * t_lo;
      if (phase_arg >= 30.0) {
        // Complete the sinc-like tail analytically, modeling the moment
        // beyond t_lo as a constant-magnitude linear-phase wave. Only
        // near-degenerate distributions reach this point (spread-out moments
        // trip the decay rule first), and there the model is exact.
        const double phi = std::arg(
            std::exp(std::complex<double>(0.0, -t_lo * log_x)) * m_edge);
        const double x0 = phase_arg;
        const auto [si_tail, ci] = sine_cosine_integral_tail(x0);
        const double sign = delta >= 0.0 ? 1.0 : -1.0;
        const double psi = sign * phi - x0;
        tail_correction =
            sign * magnitude * (std::cos(psi) * si_tail - std::sin(psi) * ci);
        break;
      }
    }
    if (series_failed) direct = true;
  }
  if (direct) {
    // The node-discretized moment never decays (finite atom mixture), but its
    // Gil-Pelaez tail is a sum of shifted sine integrals, exact per node.
    integral = 0.0;
    tail_correction = 0.0;
    const double t_stop = 200.0;
    double t_lo = 0.0;
    while (t_lo < t_stop) {
      const double t_hi = std::min(t_lo + panel, t_stop);
      integral += integrate_adaptive(integrand, t_lo, t_hi, quad).value;
      t_lo = t_hi;
    }
    for (std::size_t i = 0; i < table.nodes(); ++i) {
      const double node_delta =
          std::log(std::max(table.node_success(i), 1e-300)) - log_x;
      if (node_delta == 0.0) continue;
      const double sign = node_delta > 0.0 ? 1.0 : -1.0;
      tail_correction +=
          table.weight(i) * sign *
          (M_PI_2 - sine_integral(std::fabs(node_delta) * t_stop));
    }
  }
  out.used_fallback = direct;

  out.raw = 0.5 + (integral + tail_correction) / M_PI;
  out.value = std::clamp(out.raw, 0.0, 1.0);
  return out;
}

}  // namespace uavnet
