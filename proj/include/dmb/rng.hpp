#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dmb {

// Counter-based pseudo-random generator: every draw is a keyed mix of
// (key, counter), so a stream is fully determined by (seed, stream id) and
// child streams can be split off in any order without perturbing the parent.
// The mixer is the splitmix64 finalizer over a Weyl sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(derive(seed, stream)) {}

  // Independent child stream. Deterministic in (parent key, id) only;
  // does not advance or depend on the parent's counter.
  [[nodiscard]] Rng split(std::uint64_t id) const noexcept {
    Rng child(*this);
    child.key_ = mix(key_ ^ mix(id + kGamma));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() noexcept {
    counter_ += kGamma;
    return mix(key_ + counter_);
  }

  // Uniform on [0, 1).
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  double next_double_open() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (cosine branch). Consumes exactly two
  // counter steps per variate, keeping stream positions input-independent.
  double next_gaussian() noexcept {
    const double u = next_double_open();
    const double v = next_double();
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(2.0 * std::numbers::pi * v);
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t next_below(std::uint64_t n) noexcept {
    const auto wide = static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  bool next_bernoulli(double p) noexcept { return next_double() < p; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix(mix(seed + kGamma) ^ mix(stream + 0xd1b54a32d192ed03ull));
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dmb
