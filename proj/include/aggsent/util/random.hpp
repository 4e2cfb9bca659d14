#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "aggsent/util/hash.hpp"

namespace aggsent {

/// Deterministic random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; every distribution below is written
/// out here (std:: distributions are implementation-defined) so a seed
/// reproduces the same draws with any standard library.
///
/// Substreams: `Rng::substream(seed, {a, b, ...})` derives an independent
/// stream from a root seed and a path of integers (e.g. day index), so work
/// split across threads draws the same numbers regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

  static Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(seed ^ 0x5ca1ab1e0ddba11ULL);
    for (std::uint64_t p : path) h = mix64(h ^ mix64(p + 0x9e3779b97f4a7c15ULL));
    return Rng(h);
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  /// Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do x = next_u64();
    while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (cached second variate).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform_pos(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Number of trials up to and including the first success, p in (0,1].
  std::uint64_t geometric(double p) {
    if (p >= 1.0) return 1;
    double u = uniform_pos();
    return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
  }

  /// Gamma(shape, scale=1) by Marsaglia-Tsang.
  double gamma(double shape) {
    if (shape < 1.0) {
      double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0, c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Poisson(mean): multiplication method for small means, otherwise a
  /// gamma/binomial splitting recursion.
  std::uint64_t poisson(double mean) {
    std::uint64_t k = 0;
    while (mean > 30.0) {
      // Split off an integer-shape gamma arrival time.
      const double m = std::floor(0.875 * mean);
      double x = gamma(m);
      if (x > mean) return k + binomial(static_cast<std::uint64_t>(m) - 1, mean / x);
      k += static_cast<std::uint64_t>(m);
      mean -= x;
    }
    const double l = std::exp(-mean);
    double p = uniform_pos();
    while (p > l) {
      ++k;
      p *= uniform_pos();
    }
    return k;
  }

  std::uint64_t binomial(std::uint64_t n, double p) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i) k += bernoulli(p);
    return k;
  }

  /// Negative binomial (NB2): Poisson with Gamma(1/alpha, alpha*mean) rate.
  std::uint64_t negbin(double mean, double alpha) {
    if (alpha <= 0.0) return poisson(mean);
    double shape = 1.0 / alpha;
    return poisson(gamma(shape) * mean / shape);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Draws from a fixed discrete distribution by inverse CDF.
class DiscreteSampler {
 public:
  DiscreteSampler() = default;
  explicit DiscreteSampler(std::span<const double> weights) {
    cdf_.reserve(weights.size());
    double s = 0.0;
    for (double w : weights) cdf_.push_back(s += w);
    for (double& c : cdf_) c /= s;
    if (!cdf_.empty()) cdf_.back() = 1.0;
  }
  std::size_t operator()(Rng& rng) const {
    double u = rng.uniform();
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (u < cdf_[mid]) hi = mid;
      else lo = mid + 1;
    }
    return lo;
  }
  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

/// k distinct values from [0, n) (partial Fisher-Yates), in draw order.
inline std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k, Rng& rng) {
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
  for (std::uint32_t i = 0; i < k; ++i) {
    auto j = i + static_cast<std::uint32_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace aggsent
