#pragma once

#include <cstdint>

namespace bonusruin {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream keyed by (seed, path index). Draw k of path i depends
/// only on (seed, i, k), so a path is the same whichever worker runs it.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path) noexcept
      : key_(mix64(seed ^ mix64(path + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() noexcept { return mix64(key_ + kGamma * ++counter_); }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t cursor() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bonusruin
