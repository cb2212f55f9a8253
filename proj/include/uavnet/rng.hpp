#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace uavnet {

/// Seeded xoshiro256** generator with cheap substream derivation.
///
/// Substreams are derived from (seed, a, b) via SplitMix64 mixing, so a
/// simulation can hand every trial (and every cell within a trial) its own
/// stream: results are then independent of evaluation order and of how many
/// other streams exist.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0, 0) {}

  Rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = seed;
    x ^= 0x9e3779b97f4a7c15ULL * (a + 1) + 0xd1b54a32d192ed03ULL * (b + 1);
    for (auto& word : state_) word = splitmix64(x);
  }

  Rng substream(std::uint64_t a, std::uint64_t b = 0) const {
    Rng child(0);
    std::uint64_t x = state_[0] ^ (state_[2] + 0x9e3779b97f4a7c15ULL);
    x ^= 0xbf58476d1ce4e5b9ULL * (a + 1) + 0x94d049bb133111ebULL * (b + 1);
    for (auto& word : child.state_) word = splitmix64(x);
    return child;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Box-Muller; two uniforms per draw, no cached spare.
  double normal(double mean, double sd) {
    const double u1 = uniform();
    const double u2 = uniform();
    return mean + sd * std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Unit-mean exponential.
  double exponential() { return -std::log1p(-uniform()); }

  /// Poisson by multiplicative search, split into chunks so the product
  /// never underflows; exact for any mean.
  int poisson(double mean) {
    int total = 0;
    while (mean > 16.0) {
      total += poisson_small(16.0);
      mean -= 16.0;
    }
    return total + poisson_small(mean);
  }

  /// Unit-mean Gamma with integer shape m: sum of m exponentials scaled by 1/m.
  double gamma_unit_mean(int shape) {
    double sum = 0.0;
    for (int i = 0; i < shape; ++i) sum += exponential();
    return sum / shape;
  }

  /// Index draw from a discrete distribution given as cumulative-free weights.
  int categorical(std::span<const double> probs) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  int poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double floor = std::exp(-mean);
    double product = 1.0;
    int count = -1;
    do {
      ++count;
      product *= uniform();
    } while (product > floor);
    return count;
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace uavnet
