#include <doctest.h>

#include <cmath>

#include "uavnet/channel.hpp"
#include "uavnet/config.hpp"
#include "uavnet/rng.hpp"

using namespace uavnet;

TEST_SUITE_BEGIN("channel");

TEST_CASE("line-of-sight probability limits and symmetry") {
  const LosModel los{environment_profile(Environment::Suburban), 30.0};
  // overhead link: the suburban exponent is ~ -36.5, probability ~ 1 - 7e-16
  CHECK(los(0.0) >= 1.0 - 1e-8);
  // grazing limit
  CHECK(los(1e12) == doctest::Approx(los.far_limit()).epsilon(1e-9));
  const double expected_far =
      1.0 / (1.0 + 4.88 * std::exp(4.88 * 0.429));
  CHECK(los.far_limit() == doctest::Approx(expected_far));
  CHECK(los(250.0) == los(-250.0));
  // strictly between the limits at finite distance
  CHECK(los(250.0) < 1.0);
  CHECK(los(250.0) > los.far_limit());
}

TEST_CASE("line-of-sight probability is nonincreasing in distance") {
  for (Environment env : {Environment::Suburban, Environment::HighRiseUrban}) {
    const LosModel los{environment_profile(env), 30.0};
    double prev = 1.1;
    for (double r = 0.0; r < 3000.0; r += 50.0) {
      const double p = los(r);
      CHECK(p <= prev + 1e-15);
      prev = p;
    }
  }
}

TEST_CASE("environment ordering at the cell edge") {
  const double r = 651.5, h = 30.0;
  const double suburban = LosModel{environment_profile(Environment::Suburban), h}(r);
  const double urban = LosModel{environment_profile(Environment::Urban), h}(r);
  const double dense = LosModel{environment_profile(Environment::DenseUrban), h}(r);
  const double highrise =
      LosModel{environment_profile(Environment::HighRiseUrban), h}(r);
  CHECK(suburban >= urban);
  CHECK(urban >= dense);
  CHECK(dense >= highrise);
}

TEST_CASE("path gain") {
  CHECK(path_gain(0.0, 1.0, 2.0) == doctest::Approx(1.0));
  CHECK(path_gain(30.0, 30.0, 2.5) == doctest::Approx(std::pow(1800.0, -1.25)));
  double prev = path_gain(0.0, 30.0, 3.0);
  for (double r = 10.0; r < 500.0; r += 10.0) {
    CHECK(path_gain(r, 30.0, 3.0) < prev);
    prev = path_gain(r, 30.0, 3.0);
  }
}

TEST_CASE("fading gains are unit mean with the right spread") {
  Rng rng(41);
  const int draws = 1000000;
  double mean1 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double g = sample_nakagami_power(rng, 1);
    CHECK(g >= 0.0);
    mean1 += g;
  }
  mean1 /= draws;
  CHECK(mean1 == doctest::Approx(1.0).epsilon(0.005));

  double mean3 = 0.0, sq3 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double g = sample_nakagami_power(rng, 3);
    mean3 += g;
    sq3 += g * g;
  }
  mean3 /= draws;
  sq3 /= draws;
  CHECK(mean3 == doctest::Approx(1.0).epsilon(0.005));
  CHECK(sq3 - mean3 * mean3 == doctest::Approx(1.0 / 3.0).epsilon(0.03));
}

TEST_CASE("interferer gain mixture draws") {
  AntennaConfig antenna;  // defaults: 5/0 dBi, 40 degrees
  const GainMixture mix = antenna.interferer_mixture();

  Rng rng(43);
  const int draws = 1000000;
  int main_main = 0;
  for (int i = 0; i < draws; ++i)
    if (sample_interferer_gain(rng, mix) == doctest::Approx(10.0).epsilon(1e-12))
      ++main_main;
  const double p = 1.0 / 81.0;
  const double sigma = std::sqrt(p * (1.0 - p) / draws);
  CHECK(std::fabs(double(main_main) / draws - p) <= 3.0 * sigma);

  // fully aligned beams collapse the mixture
  antenna.device_beamwidth = 2.0 * M_PI;
  antenna.uav_beamwidth = 2.0 * M_PI;
  const GainMixture aligned = antenna.interferer_mixture();
  for (int i = 0; i < 100; ++i)
    CHECK(sample_interferer_gain(rng, aligned) == doctest::Approx(10.0));

  // omnidirectional devices leave only the receiver lobes
  AntennaConfig omni;
  omni.device_main = 1.0;
  omni.device_side = 1.0;
  const GainMixture two_point = omni.interferer_mixture();
  for (int i = 0; i < 200; ++i) {
    const double g = sample_interferer_gain(rng, two_point);
    const bool is_main = std::fabs(g - omni.uav_main) < 1e-12;
    const bool is_side = std::fabs(g - 1.0) < 1e-12;
    CHECK((is_main || is_side));
  }
}

TEST_SUITE_END();
