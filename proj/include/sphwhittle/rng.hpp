#ifndef SPHWHITTLE_RNG_HPP
#define SPHWHITTLE_RNG_HPP

// Deterministic per-replication random streams and the variate generators used
// by the samplers. Only std::mt19937_64 is taken from the standard library;
// its output sequence is fixed by the standard, whereas the std distributions
// are implementation-defined, so uniform, normal and gamma draws are done here.

#include <cmath>
#include <cstdint>
#include <random>

namespace sphwhittle {

/// (master_seed, stream_index) fully determines every draw of a replication.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

constexpr std::uint64_t stream_seed(const SeedSpec& seed) noexcept {
  return detail::splitmix64(detail::splitmix64(seed.master_seed) ^
                            detail::splitmix64(seed.stream_index + 0x632be59bd9b4e019ULL));
}

class RandomStream {
 public:
  explicit RandomStream(const SeedSpec& seed) : engine_(stream_seed(seed)) {}

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by the Marsaglia polar method; the second variate is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Gamma(shape, 1) by Marsaglia and Tsang (2000). Shapes below one use the
  /// boost Gamma(shape+1) * U^{1/shape}.
  double gamma(double shape) noexcept {
    if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Chi-squared with `dof` degrees of freedom, as Gamma(dof/2, scale 2).
  double chi_squared(double dof) noexcept { return 2.0 * gamma(0.5 * dof); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sphwhittle

#endif  // SPHWHITTLE_RNG_HPP
