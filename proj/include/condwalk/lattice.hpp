#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace condwalk {

/// A site of Z^2. Arithmetic through the free operators is overflow-checked.
struct LatticePoint {
  std::int64_t x1{0};
  std::int64_t x2{0};

  friend constexpr bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend constexpr auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

inline constexpr LatticePoint kOrigin{0, 0};

enum class WalkKind { Srw, Conditioned };

/// Neighbor order used everywhere a tie-break is needed: E, N, W, S.
enum class Direction : std::uint8_t { East = 0, North = 1, West = 2, South = 3 };

inline constexpr std::array<LatticePoint, 4> kSteps{
    LatticePoint{1, 0}, LatticePoint{0, 1}, LatticePoint{-1, 0}, LatticePoint{0, -1}};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("lattice coordinate overflow");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("lattice coordinate overflow");
  return r;
}

inline LatticePoint operator+(LatticePoint a, LatticePoint b) {
  return {checked_add(a.x1, b.x1), checked_add(a.x2, b.x2)};
}

inline LatticePoint operator-(LatticePoint a, LatticePoint b) {
  return {checked_sub(a.x1, b.x1), checked_sub(a.x2, b.x2)};
}

inline LatticePoint operator-(LatticePoint a) { return kOrigin - a; }

inline LatticePoint step(LatticePoint p, Direction d) {
  return p + kSteps[static_cast<std::size_t>(d)];
}

/// Squared Euclidean norm; throws if it does not fit in 64 bits.
inline std::int64_t norm2(LatticePoint p) {
  const __int128 v = static_cast<__int128>(p.x1) * p.x1 + static_cast<__int128>(p.x2) * p.x2;
  if (v > static_cast<__int128>(INT64_MAX)) throw std::overflow_error("squared norm overflow");
  return static_cast<std::int64_t>(v);
}

inline double norm(LatticePoint p) { return std::hypot(static_cast<double>(p.x1), static_cast<double>(p.x2)); }

inline std::int64_t inf_norm(LatticePoint p) {
  const auto a1 = p.x1 < 0 ? -static_cast<__int128>(p.x1) : p.x1;
  const auto a2 = p.x2 < 0 ? -static_cast<__int128>(p.x2) : p.x2;
  const auto m = a1 > a2 ? a1 : a2;
  if (m > INT64_MAX) throw std::overflow_error("lattice coordinate overflow");
  return static_cast<std::int64_t>(m);
}

/// (x1 + x2) mod 2, computed without forming the sum.
inline int parity(LatticePoint p) { return static_cast<int>((p.x1 ^ p.x2) & 1); }

inline bool adjacent(LatticePoint a, LatticePoint b) {
  const LatticePoint d = a - b;
  return (d.x1 == 0 && (d.x2 == 1 || d.x2 == -1)) || (d.x2 == 0 && (d.x1 == 1 || d.x1 == -1));
}

inline std::array<LatticePoint, 4> neighbors(LatticePoint p) {
  return {p + kSteps[0], p + kSteps[1], p + kSteps[2], p + kSteps[3]};
}

/// |p| <= r, decided on the squared integer norm in extended precision.
inline bool within_radius(std::int64_t n2, double r) {
  const long double rr = static_cast<long double>(r) * static_cast<long double>(r);
  return static_cast<long double>(n2) <= rr;
}

/// Largest integer t with t <= r^2, i.e. |p| <= r  <=>  norm2(p) <= t.
inline std::int64_t closed_disk_threshold(double r) {
  const long double rr = static_cast<long double>(r) * static_cast<long double>(r);
  return static_cast<std::int64_t>(std::floor(rr));
}

/// Largest integer t with t < r^2, i.e. |p| < r  <=>  norm2(p) <= t.
inline std::int64_t open_disk_threshold(double r) {
  const long double rr = static_cast<long double>(r) * static_cast<long double>(r);
  auto t = static_cast<std::int64_t>(std::ceil(rr)) - 1;
  return t < -1 ? -1 : t;
}

inline std::string to_string(LatticePoint p) {
  return "(" + std::to_string(p.x1) + "," + std::to_string(p.x2) + ")";
}

inline const char* to_string(WalkKind k) { return k == WalkKind::Srw ? "srw" : "cond"; }

}  // namespace condwalk
