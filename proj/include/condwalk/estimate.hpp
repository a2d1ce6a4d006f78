#pragma once

#include <cstdint>
#include <string>

namespace condwalk {

/// Monte Carlo sufficient statistics, kept in integers so that merging is
/// exactly associative and commutative: events as counts, real-valued
/// observations as fixed-point sums (value * 2^24, rounded) in 128 bits.
/// Any split of the trials over workers therefore yields the same bits.
class Estimate {
 public:
  enum class Kind { Event, Real };

  static constexpr double kScale = 16777216.0;  // 2^24
  static constexpr double kMaxAbsValue = 16777216.0;

  explicit Estimate(Kind kind = Kind::Event) : kind_(kind) {}

  void add_event(bool hit);
  /// Real observation; |v| <= 2^24 (ConfigError otherwise).
  void add_value(double v);
  /// Trial whose stopping rule hit the horizon.
  void add_undecided() { ++undecided_; }

  /// Throws ConfigError when kinds differ.
  Estimate& merge(const Estimate& other);

  Kind kind() const { return kind_; }
  std::uint64_t trials() const { return n_; }
  std::uint64_t successes() const { return successes_; }
  std::uint64_t undecided() const { return undecided_; }
  __int128 raw_sum() const { return sum_; }
  unsigned __int128 raw_sum_sq() const { return sum_sq_; }

  double mean() const;
  /// Events: sqrt(p(1-p)/n), floored at 0.5/sqrt(n) when p is 0 or 1.
  /// Real: sample standard deviation / sqrt(n).
  double std_error() const;
  /// 95% interval: normal approximation, Wilson score when successes < 10.
  double ci_lo() const;
  double ci_hi() const;

  friend bool operator==(const Estimate&, const Estimate&) = default;

 private:
  Kind kind_;
  std::uint64_t n_ = 0;
  std::uint64_t successes_ = 0;
  std::uint64_t undecided_ = 0;
  __int128 sum_ = 0;
  unsigned __int128 sum_sq_ = 0;
};

/// Wilson score interval for k successes in n trials at normal quantile z.
void wilson_interval(std::uint64_t k, std::uint64_t n, double z, double& lo, double& hi);

}  // namespace condwalk
