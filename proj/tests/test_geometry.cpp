#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "uavnet/geometry.hpp"
#include "uavnet/rng.hpp"

using namespace uavnet;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("hexagon geometry") {
  const HexCell cell{Eigen::Vector2d::Zero(), 100.0};
  CHECK(cell.area() == doctest::Approx(1.5 * std::sqrt(3.0) * 1e4));
  CHECK(cell.contains({0.0, 0.0}));
  CHECK(cell.contains({99.9, 0.0}));
  CHECK(cell.contains({0.0, 86.5}));
  CHECK_FALSE(cell.contains({0.0, 87.0}));       // above the flat top
  CHECK_FALSE(cell.contains({90.0, 30.0}));      // outside the slanted edge
  CHECK(cell.contains({49.0, 86.0}));            // near the top-right vertex side

  Rng rng(7);
  for (int i = 0; i < 2000; ++i)
    CHECK(cell.contains(uniform_point(rng, cell)));
}

TEST_CASE("hex lattice ring structure") {
  const auto one_ring = hex_lattice(100.0, 1);
  CHECK(one_ring.size() == 6);
  for (const auto& c : one_ring)
    CHECK(c.norm() == doctest::Approx(std::sqrt(3.0) * 100.0));
  CHECK(hex_lattice(100.0, 15).size() == 720);
  CHECK(hex_lattice(100.0, 15, true).size() == 721);
}

TEST_CASE("segment-length sums") {
  // single device: one term, sqrt(3 sqrt(3) R^2 / 8)
  CHECK(avg_segment_exact(1, 100.0) ==
        doctest::Approx(std::sqrt(3.0 * std::sqrt(3.0) * 1e4 / 8.0)));
  CHECK(avg_segment_exact(1, 100.0) == doctest::Approx(80.594).epsilon(2e-4));
  CHECK(avg_segment_exact(25, 100.0) == doctest::Approx(27.851).epsilon(2e-4));
  CHECK(avg_segment_exact(150, 100.0) == doctest::Approx(12.398).epsilon(2e-4));
  CHECK(avg_segment_exact(25, 200.0) == doctest::Approx(55.701).epsilon(2e-4));
  CHECK(avg_segment_jensen(1, 100.0) == avg_segment_exact(1, 100.0));
  CHECK_THROWS_AS(avg_segment_exact(0, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(avg_segment_jensen(0, 100.0), std::invalid_argument);
}

TEST_CASE("segment mean scales linearly in radius, decreases in count") {
  for (int n : {2, 10, 60}) {
    CHECK(avg_segment_exact(n, 400.0) ==
          doctest::Approx(4.0 * avg_segment_exact(n, 100.0)).epsilon(1e-12));
    CHECK(avg_segment_exact(n + 1, 100.0) < avg_segment_exact(n, 100.0));
  }
}

TEST_CASE("jensen bound sits below the sampled expectation") {
  Rng rng(31);
  const int draws = 4000;
  double mean = 0.0;
  int used = 0;
  for (int i = 0; i < draws; ++i) {
    const int n = rng.poisson(25.0);
    if (n < 1) continue;
    mean += avg_segment_exact(n, 100.0);
    ++used;
  }
  mean /= used;
  CHECK(mean > avg_segment_jensen(25, 100.0));
}

TEST_CASE("greedy trajectory visits everything once, within the cell") {
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto hops = simulate_greedy_trajectory(rng, 12.0, 100.0);
    for (double hop : hops) {
      CHECK(hop >= 0.0);
      CHECK(hop <= 200.0);  // bounded by the cell diameter
    }
  }
  // tiny mean: most runs see an empty cell and return no hops
  int empty = 0;
  for (int rep = 0; rep < 40; ++rep)
    if (simulate_greedy_trajectory(rng, 0.01, 100.0).empty()) ++empty;
  CHECK(empty >= 35);
  CHECK_THROWS_AS(simulate_greedy_trajectory(rng, 0.0, 100.0),
                  std::invalid_argument);
}

TEST_CASE("greedy trajectory mean near the reference point") {
  Rng rng(9);
  const int runs = 4000;
  double total = 0.0;
  for (int i = 0; i < runs; ++i) {
    const auto hops = simulate_greedy_trajectory(rng, 25.0, 100.0);
    double sum = 0.0;
    for (double hop : hops) sum += hop;
    if (!hops.empty()) total += sum / hops.size();
  }
  CHECK(total / runs == doctest::Approx(28.2).epsilon(0.04));
}

TEST_CASE("point process sampling") {
  Rng rng(17);
  CHECK(sample_ppp(rng, 0.0, RectRegion{0, 0, 1, 1}).empty());
  CHECK_THROWS_AS(sample_ppp(rng, -1.0, RectRegion{0, 0, 1, 1}),
                  std::invalid_argument);

  const AnnulusRegion annulus{Eigen::Vector2d(3.0, -2.0), 50.0, 120.0};
  const auto points = sample_ppp(rng, 1e-2, annulus);
  for (const auto& p : points) {
    const double r = (p - annulus.center).norm();
    CHECK(r >= 50.0);
    CHECK(r <= 120.0);
  }
}

TEST_CASE("poisson counts pass a goodness-of-fit check") {
  Rng rng(23);
  const int trials = 10000;
  const double mean = 1000.0;
  std::vector<int> counts(trials);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < trials; ++i) {
    counts[i] = static_cast<int>(
        sample_ppp(rng, mean, RectRegion{0, 0, 1, 1}).size());
    sum += counts[i];
    sum_sq += static_cast<double>(counts[i]) * counts[i];
  }
  const double sample_mean = sum / trials;
  const double sample_var = sum_sq / trials - sample_mean * sample_mean;
  // mean within 3 sigma of its sampling distribution
  CHECK(std::fabs(sample_mean - mean) <= 3.0 * std::sqrt(mean / trials));
  // index of dispersion near one
  CHECK(sample_var / sample_mean == doctest::Approx(1.0).epsilon(0.06));

  // chi-square against the exact pmf, 10-wide bins across +-4 sigma
  const double sd = std::sqrt(mean);
  const int lo = static_cast<int>(mean - 4 * sd), width = 10;
  const int bins = static_cast<int>(8 * sd / width);
  std::vector<double> expected(bins + 2, 0.0);
  for (int k = lo - 8 * width; k < lo + (bins + 8) * width; ++k) {
    const double pmf =
        std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
    const int bin = std::clamp((k - lo) / width, -1, bins) + 1;
    expected[bin] += pmf * trials;
  }
  expected[0] += trials * 0.0;  // far-left tail mass is negligible
  std::vector<double> observed(bins + 2, 0.0);
  for (int c : counts)
    observed[std::clamp((c - lo) / width, -1, bins) + 1] += 1.0;
  double chi2 = 0.0;
  int df = 0;
  for (std::size_t b = 0; b < expected.size(); ++b) {
    if (expected[b] < 5.0) continue;
    chi2 += (observed[b] - expected[b]) * (observed[b] - expected[b]) /
            expected[b];
    ++df;
  }
  --df;
  // roughly the 0.9995 quantile for the df in play
  CHECK(chi2 < df + 4.0 * std::sqrt(2.0 * df) + 4.0);
}

TEST_CASE("travel time branches") {
  const KinematicsConfig kin;  // 22 m/s, 11 m/s^2 both ways
  CHECK(kin.accel_dist() + kin.decel_dist() == doctest::Approx(44.0));
  CHECK(travel_time(0.0, kin) == 0.0);

  // cruise branch: ramp times plus the remaining distance at cruise speed
  CHECK(travel_time(97.607, kin) == doctest::Approx(6.4367).epsilon(1e-4));
  // published short-segment branch, kept verbatim
  CHECK(travel_time(20.0, kin) == doctest::Approx(std::sqrt(20.0 / 22.0)));
  // the two models agree above the knot
  CHECK(travel_time(100.0, kin, TravelTimeModel::Kinematic) ==
        travel_time(100.0, kin));

  // the reference form is discontinuous at the knot, the kinematic form is not
  const double knot = 44.0;
  const double below_ref = travel_time(knot - 1e-9, kin);
  const double above = travel_time(knot + 1e-9, kin);
  CHECK(std::fabs(above - below_ref) > 1.0);
  const double below_kin =
      travel_time(knot - 1e-9, kin, TravelTimeModel::Kinematic);
  CHECK(below_kin == doctest::Approx(above).epsilon(1e-6));

  // monotone increasing past the knot
  double prev = travel_time(knot, kin);
  for (double d = 50.0; d < 400.0; d += 25.0) {
    const double t = travel_time(d, kin);
    CHECK(t > prev);
    prev = t;
  }
  CHECK_THROWS_AS(travel_time(-1.0, kin), std::invalid_argument);
}

TEST_SUITE_END();
