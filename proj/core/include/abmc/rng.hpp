#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace abmc {

/// Seeded random stream identified by (seed, stream_id). The same pair always
/// reproduces the same draw sequence; distinct stream_ids give streams that
/// are safe to treat as independent. All distributions are generated from the
/// raw engine output here (no std::*_distribution), so sequences are stable
/// across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    std::seed_seq sq{
        static_cast<std::uint32_t>(seed & 0xffffffffu),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream_id & 0xffffffffu),
        static_cast<std::uint32_t>(stream_id >> 32),
    };
    eng_.seed(sq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [lo, hi], inclusive, without modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1u;
    if (range == 0) return static_cast<std::int64_t>(eng_());  // full 64-bit span
    // Lemire's bounded generation with rejection.
    std::uint64_t x = eng_();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * range;
    std::uint64_t l = static_cast<std::uint64_t>(m);
    if (l < range) {
      const std::uint64_t t = (0u - range) % range;
      while (l < t) {
        x = eng_();
        m = static_cast<unsigned __int128>(x) * range;
        l = static_cast<std::uint64_t>(m);
      }
    }
    return lo + static_cast<std::int64_t>(m >> 64);
  }

  /// Derives an independent stream keyed by `key`. Children of distinct
  /// (seed, stream_id, key) triples do not collide in practice.
  RngStream child(std::uint64_t key) const {
    return RngStream(mix64(seed_ ^ mix64(stream_id_ + 0x9e3779b97f4a7c15ull)), key);
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace abmc
