#pragma once

#include <array>
#include <cmath>
#include <string>

#include "uavnet/rng.hpp"

namespace uavnet {

enum class Environment { Suburban, Urban, DenseUrban, HighRiseUrban };

/// Sigmoid ground-to-air line-of-sight model parameters for one environment
/// class. The offset parameter appears twice in the model: as the logistic
/// scale and subtracted from the elevation angle inside the exponent.
struct EnvironmentProfile {
  double a = 0.0;  // sigmoid offset, also reused inside the exponent
  double b = 0.0;  // sigmoid slope per degree
  Environment name = Environment::Suburban;
};

EnvironmentProfile environment_profile(Environment env);
const char* environment_name(Environment env);
Environment environment_from_string(const std::string& name);

/// LOS probability of a ground-to-air link at horizontal distance r and
/// altitude h. The elevation angle enters in degrees; r may be signed.
struct LosModel {
  EnvironmentProfile profile;
  double altitude = 30.0;

  double operator()(double r) const {
    const double angle_deg =
        (r == 0.0) ? 90.0
                   : (180.0 / M_PI) * std::atan(std::fabs(altitude / r));
    return 1.0 / (1.0 + profile.a *
                            std::exp(-profile.b * (angle_deg - profile.a)));
  }

  /// r -> infinity limit: 1 / (1 + a e^{ab}).
  double far_limit() const {
    return 1.0 / (1.0 + profile.a * std::exp(profile.a * profile.b));
  }
};

/// (r^2 + h^2)^(-alpha/2)
inline double path_gain(double r, double h, double alpha) {
  return std::pow(r * r + h * h, -0.5 * alpha);
}

/// Four-point composite antenna gain of an interfering link: device lobe x
/// UAV lobe, each main or side with probability set by the beamwidth fraction.
struct GainMixture {
  std::array<double, 4> gain{};
  std::array<double, 4> prob{};

  double mean_gain() const {
    double m = 0.0;
    for (int i = 0; i < 4; ++i) m += gain[i] * prob[i];
    return m;
  }
};

/// Unit-mean power fading draw, Gamma(shape m, scale 1/m); m = 1 is Rayleigh.
inline double sample_nakagami_power(Rng& rng, int shape) {
  return rng.gamma_unit_mean(shape);
}

inline double sample_interferer_gain(Rng& rng, const GainMixture& mix) {
  return mix.gain[rng.categorical(mix.prob)];
}

}  // namespace uavnet
