#pragma once

#include <bit>
#include <cstdint>

namespace condwalk {

namespace detail {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Stafford variant 13 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Odd gamma with enough bit transitions (SplittableRandom's rule).
constexpr std::uint64_t mix_gamma(std::uint64_t z) {
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
  z = (z ^ (z >> 33)) | 1ULL;
  if (std::popcount(z ^ (z >> 1)) < 24) z ^= 0xaaaaaaaaaaaaaaaaULL;
  return z;
}

}  // namespace detail

/// Counter-based splittable stream: draw i is mix64(seed + i * gamma), with
/// (seed, gamma) derived from (master seed, stream tag, index). Any trial's
/// stream is a pure function of those three numbers, so results do not
/// depend on which thread runs which trial.
class RngStream {
 public:
  RngStream() = default;

  static constexpr RngStream derive(std::uint64_t master_seed, std::uint64_t tag, std::uint64_t index) {
    const std::uint64_t h0 = detail::mix64(master_seed + detail::kGoldenGamma);
    const std::uint64_t h1 = detail::mix64(h0 ^ detail::mix64(tag * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
    const std::uint64_t h2 = detail::mix64(h1 ^ detail::mix64(index + 0x8cb92ba72f3d8dd7ULL));
    RngStream s;
    s.seed_ = detail::mix64(h2);
    s.gamma_ = detail::mix_gamma(h2 + detail::kGoldenGamma);
    s.key_ = h2;
    return s;
  }

  constexpr std::uint64_t next_u64() {
    ++counter_;
    return detail::mix64(seed_ + counter_ * gamma_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  constexpr double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// 31-bit uniform used by the lattice step rule. Each 64-bit draw feeds two
  /// steps: bits 63..33 first, then bits 31..1.
  constexpr std::uint32_t step_bits() {
    if (has_half_) {
      has_half_ = false;
      return half_;
    }
    const std::uint64_t r = next_u64();
    half_ = static_cast<std::uint32_t>((r >> 1) & 0x7fffffffU);
    has_half_ = true;
    return static_cast<std::uint32_t>(r >> 33);
  }

  /// True when step_bits() has a buffered half-draw.
  constexpr bool has_pending_half() const { return has_half_; }
  /// Account for k draws consumed by a caller that inlined them
  /// (draw i is mix64(seed() + i * gamma()), i = draws() + 1, ...).
  constexpr void advance(std::uint64_t k) { counter_ += k; }

  /// Identifier of the stream (recorded in trajectories).
  constexpr std::uint64_t key() const { return key_; }
  constexpr std::uint64_t draws() const { return counter_; }

  // Raw state, for hot loops that inline the draw.
  constexpr std::uint64_t seed() const { return seed_; }
  constexpr std::uint64_t gamma() const { return gamma_; }

 private:
  std::uint64_t seed_{0};
  std::uint64_t gamma_{detail::kGoldenGamma};
  std::uint64_t key_{0};
  std::uint64_t counter_{0};
  std::uint32_t half_{0};
  bool has_half_{false};
};

}  // namespace condwalk
