#include "condwalk/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "condwalk/errors.hpp"

namespace condwalk {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

void Estimate::add_event(bool hit) {
  if (kind_ != Kind::Event) throw ConfigError("add_event on a real-valued estimate");
  ++n_;
  successes_ += hit ? 1 : 0;
}

void Estimate::add_value(double v) {
  if (kind_ != Kind::Real) throw ConfigError("add_value on an event estimate");
  if (!(std::fabs(v) <= kMaxAbsValue)) throw ConfigError("observation out of range: " + std::to_string(v));
  const auto q = static_cast<std::int64_t>(std::llround(v * kScale));
  ++n_;
  sum_ += q;
  const auto aq = static_cast<unsigned __int128>(q < 0 ? -q : q);
  sum_sq_ += aq * aq;
}

Estimate& Estimate::merge(const Estimate& other) {
  if (kind_ != other.kind_) throw ConfigError("cannot merge estimates of different kinds");
  n_ += other.n_;
  successes_ += other.successes_;
  undecided_ += other.undecided_;
  sum_ += other.sum_;
  sum_sq_ += other.sum_sq_;
  return *this;
}

double Estimate::mean() const {
  if (n_ == 0) return 0.0;
  if (kind_ == Kind::Event) return static_cast<double>(successes_) / static_cast<double>(n_);
  return static_cast<double>(static_cast<long double>(sum_) / kScale / static_cast<long double>(n_));
}

double Estimate::std_error() const {
  if (n_ == 0) return 0.0;
  const double n = static_cast<double>(n_);
  if (kind_ == Kind::Event) {
    const double p = mean();
    if (successes_ == 0 || successes_ == n_) return 0.5 / std::sqrt(n);
    return std::sqrt(p * (1.0 - p) / n);
  }
  if (n_ < 2) return 0.0;
  const long double m = static_cast<long double>(sum_) / kScale / n;
  const long double m2 = static_cast<long double>(sum_sq_) / (static_cast<long double>(kScale) * kScale) / n;
  const long double var = std::max(0.0L, (m2 - m * m) * n / (n - 1.0L));
  return static_cast<double>(std::sqrt(var / n));
}

void wilson_interval(std::uint64_t k, std::uint64_t n, double z, double& lo, double& hi) {
  if (n == 0) {
    lo = 0.0;
    hi = 1.0;
    return;
  }
  const double nd = static_cast<double>(n);
  const double p = static_cast<double>(k) / nd;
  const double z2 = z * z;
  const double den = 1.0 + z2 / nd;
  const double centre = (p + z2 / (2.0 * nd)) / den;
  const double half = z * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd)) / den;
  lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
  hi = k == n ? 1.0 : std::min(1.0, centre + half);
}

double Estimate::ci_lo() const {
  if (kind_ == Kind::Event && successes_ < 10) {
    double lo, hi;
    wilson_interval(successes_, n_, kZ95, lo, hi);
    return lo;
  }
  return mean() - kZ95 * std_error();
}

double Estimate::ci_hi() const {
  if (kind_ == Kind::Event && successes_ < 10) {
    double lo, hi;
    wilson_interval(successes_, n_, kZ95, lo, hi);
    return hi;
  }
  return mean() + kZ95 * std_error();
}

}  // namespace condwalk
