#include "condwalk/potential.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "condwalk/errors.hpp"

namespace condwalk {

namespace {

// A column of MPFR numbers with a fixed precision.
class MpColumn {
 public:
  MpColumn(std::size_t n, mpfr_prec_t prec) : data_(n) {
    for (auto& v : data_) mpfr_init2(&v, prec);
  }
  MpColumn(const MpColumn&) = delete;
  MpColumn& operator=(const MpColumn&) = delete;
  ~MpColumn() {
    for (auto& v : data_) mpfr_clear(&v);
  }
  mpfr_ptr operator[](std::size_t i) { return &data_[i]; }
  void swap(MpColumn& other) noexcept { data_.swap(other.data_); }

 private:
  std::vector<__mpfr_struct> data_;
};

struct Mp {
  explicit Mp(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  ~Mp() { mpfr_clear(v); }
  mpfr_t v;
};

}  // namespace

PotentialTable PotentialTable::build(std::int64_t exact_radius, unsigned precision_bits) {
  if (exact_radius < 1 || exact_radius > kMaxExactRadius) {
    throw ConfigError("exact_radius must lie in [1, 4096], got " + std::to_string(exact_radius));
  }
  const std::int64_t R = exact_radius;
  if (precision_bits == 0) precision_bits = 128 + static_cast<unsigned>(std::ceil(2.6 * static_cast<double>(R)));
  const auto prec = static_cast<mpfr_prec_t>(precision_bits);

  PotentialTable t;
  t.radius_ = R;
  t.radius_sq_ = R * R;
  t.precision_bits_ = precision_bits;
  t.offsets_.resize(static_cast<std::size_t>(R + 2));
  std::size_t total = 0;
  for (std::int64_t x = 0; x <= R; ++x) {
    t.offsets_[static_cast<std::size_t>(x)] = total;
    std::int64_t ymax = std::min(x, static_cast<std::int64_t>(std::sqrt(static_cast<double>(R * R - x * x))));
    while (ymax * ymax > R * R - x * x) --ymax;
    while ((ymax + 1) * (ymax + 1) <= R * R - x * x && ymax < x) ++ymax;
    total += static_cast<std::size_t>(ymax + 1);
  }
  t.offsets_[static_cast<std::size_t>(R + 1)] = total;
  t.values_.assign(total, 0.0L);

  const auto n = static_cast<std::size_t>(R + 2);
  MpColumn prev(n, prec), cur(n, prec), next(n, prec);
  Mp four_over_pi(prec), odd_sum(prec), tmp(prec), diag(prec);
  mpfr_const_pi(four_over_pi.v, MPFR_RNDN);
  mpfr_ui_div(four_over_pi.v, 4, four_over_pi.v, MPFR_RNDN);
  mpfr_set_ui(odd_sum.v, 1, MPFR_RNDN);  // sum for n = 1

  auto store = [&](std::int64_t x, MpColumn& col) {
    const auto xi = static_cast<std::size_t>(x);
    const std::size_t len = t.offsets_[xi + 1] - t.offsets_[xi];
    for (std::size_t y = 0; y < len; ++y) t.values_[t.offsets_[xi] + y] = mpfr_get_ld(col[y], MPFR_RNDN);
  };

  // Column 0: a(0,0) = 0.  Column 1: a(1,0) = 1, a(1,1) = 4/pi.
  mpfr_set_zero(prev[0], 1);
  mpfr_set_ui(cur[0], 1, MPFR_RNDN);
  mpfr_set(cur[1], four_over_pi.v, MPFR_RNDN);
  store(0, prev);
  store(1, cur);

  for (std::int64_t x = 1; x < R; ++x) {
    // Harmonicity at (x, y), y < x, solved for a(x+1, y).
    for (std::int64_t y = 0; y < x; ++y) {
      const auto yi = static_cast<std::size_t>(y);
      const auto below = static_cast<std::size_t>(y == 0 ? 1 : y - 1);
      mpfr_mul_ui(next[yi], cur[yi], 4, MPFR_RNDN);
      mpfr_sub(next[yi], next[yi], prev[yi], MPFR_RNDN);
      mpfr_sub(next[yi], next[yi], cur[yi + 1], MPFR_RNDN);
      mpfr_sub(next[yi], next[yi], cur[below], MPFR_RNDN);
    }
    // Harmonicity at (x, x) with a(x, x+1) = a(x+1, x).
    const auto xi = static_cast<std::size_t>(x);
    mpfr_mul_ui(next[xi], cur[xi], 2, MPFR_RNDN);
    mpfr_sub(next[xi], next[xi], cur[xi - 1], MPFR_RNDN);
    // Diagonal closed form.
    mpfr_set_ui(tmp.v, static_cast<unsigned long>(2 * (x + 1) - 1), MPFR_RNDN);
    mpfr_ui_div(tmp.v, 1, tmp.v, MPFR_RNDN);
    mpfr_add(odd_sum.v, odd_sum.v, tmp.v, MPFR_RNDN);
    mpfr_mul(next[xi + 1], four_over_pi.v, odd_sum.v, MPFR_RNDN);

    store(x + 1, next);
    prev.swap(cur);
    cur.swap(next);
  }

  auto value = [&](std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    if (b > a) std::swap(a, b);
    return t.values_[t.index(a, b)];
  };

  // Self-checks: positivity and harmonicity residual.
  constexpr double kResidualTolerance = 1e-8;
  double max_residual = 0.0;
  double max_excess = 0.0;
  double crossover = 0.0;
  for (std::int64_t x = 0; x <= R; ++x) {
    for (std::int64_t y = 0; y <= x; ++y) {
      const std::int64_t n2 = x * x + y * y;
      if (n2 > t.radius_sq_) break;
      const long double v = value(x, y);
      if (n2 == 0) continue;
      if (!(v > 0.0L)) {
        throw NumericalFailure("potential recurrence unstable: non-positive value at " + to_string({x, y}));
      }
      const long double radial = potential_radius(std::sqrt(static_cast<double>(n2)));
      max_excess = std::max(max_excess, static_cast<double>(v - radial));
      if ((R - 1) * (R - 1) <= n2) crossover = std::max(crossover, static_cast<double>(std::fabs(v - radial)));
      if (n2 <= (R - 1) * (R - 1)) {
        const long double mean = 0.25L * (value(x + 1, y) + value(x - 1, y) + value(x, y + 1) + value(x, y - 1));
        const double r = static_cast<double>(std::fabs(v - mean));
        if (!(r <= kResidualTolerance)) {
          throw NumericalFailure("potential recurrence unstable: harmonicity residual " + std::to_string(r) + " at " +
                                 to_string({x, y}));
        }
        max_residual = std::max(max_residual, r);
      }
    }
  }
  t.max_residual_ = max_residual;
  t.max_excess_ = max_excess;
  t.crossover_error_ = crossover;
  return t;
}

bool PotentialTable::covers(LatticePoint p) const {
  if (inf_norm(p) > radius_) return false;
  return norm2(p) <= radius_sq_;
}

long double PotentialTable::exact_value(LatticePoint p) const {
  if (!covers(p)) throw DomainError("point " + to_string(p) + " outside the exact table");
  std::int64_t a = p.x1 < 0 ? -p.x1 : p.x1;
  std::int64_t b = p.x2 < 0 ? -p.x2 : p.x2;
  if (b > a) std::swap(a, b);
  return values_[index(a, b)];
}

double potential_radius(double r) {
  if (!(r > 0.0)) throw DomainError("potential_radius requires r > 0");
  return (2.0 / kPi) * std::log(r) + kPotentialConstant;
}

double potential_asymptotic(LatticePoint p) {
  const long double r = std::hypot(static_cast<long double>(p.x1), static_cast<long double>(p.x2));
  if (r == 0.0L) throw DomainError("asymptotic potential undefined at the origin");
  return static_cast<double>((2.0L / static_cast<long double>(kPi)) * std::log(r)) + kPotentialConstant;
}

double potential(LatticePoint p, const PotentialTable& table) {
  if (table.covers(p)) return static_cast<double>(table.exact_value(p));
  return potential_asymptotic(p);
}

double potential_oracle(LatticePoint p) {
  if (p == kOrigin) return 0.0;
  if (norm2(p) > 64 * 64) throw DomainError("potential_oracle is limited to |p| <= 64");
  // Inner angle integrated in closed form:
  //   a(p) = (2/pi) int_0^pi [1 - cos(p1 t) exp(-|p2| b(t))] / sinh b(t) dt,
  //   cosh b = 2 - cos t.
  const double p1 = static_cast<double>(p.x1 < 0 ? -p.x1 : p.x1);
  const double p2 = static_cast<double>(p.x2 < 0 ? -p.x2 : p.x2);
  auto integrand = [p1, p2](double theta) {
    const double s = std::sin(0.5 * theta);
    const double sinh_b = 2.0 * s * std::sqrt(1.0 + s * s);
    const double b = std::asinh(sinh_b);
    const double e = std::exp(-p2 * b);
    const double h = std::sin(0.5 * p1 * theta);
    return (-std::expm1(-p2 * b) + 2.0 * e * h * h) / sinh_b;
  };
  double error = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, kPi, 20, 1e-14, &error);
  if (!std::isfinite(integral) || error > 1e-11) {
    throw NumericalFailure("potential_oracle quadrature did not converge at " + to_string(p));
  }
  return (2.0 / kPi) * integral;
}

}  // namespace condwalk
