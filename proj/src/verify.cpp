#include "condwalk/verify.hpp"

#include <algorithm>
#include <cmath>

#include "condwalk/walk.hpp"

namespace condwalk {

std::vector<Gate> verify_potential(const PotentialTable& table, std::int64_t harmonic_radius,
                                   std::int64_t oracle_radius, double tol) {
  std::vector<Gate> out;
  out.push_back(make_gate("a(0,0)", static_cast<double>(table.exact_value(kOrigin)), "==", 0.0));
  double worst_unit = 0.0;
  for (auto p : kSteps) worst_unit = std::max(worst_unit, std::fabs(static_cast<double>(table.exact_value(p) - 1.0L)));
  out.push_back(make_gate("a(neighbours)-1", worst_unit, "==", 0.0));

  // a is invariant under the dihedral group, so the octant 0 <= y <= x
  // covers every residual.
  const std::int64_t hr = std::min(harmonic_radius, table.exact_radius() - 1);
  long double worst = 0.0L;
  std::uint64_t points = 0;
  for (std::int64_t x = 1; x <= hr; ++x) {
    for (std::int64_t y = 0; y <= x && x * x + y * y <= hr * hr; ++y) {
      const LatticePoint p{x, y};
      long double s = 0.0L;
      for (auto q : neighbors(p)) s += table.exact_value(q);
      worst = std::max(worst, std::fabs(s / 4.0L - table.exact_value(p)));
      ++points;
    }
  }
  out.push_back(make_gate("harmonic_residual(|p|<=" + std::to_string(hr) + ")", static_cast<double>(worst), "<=", tol));

  double worst_oracle = 0.0;
  for (std::int64_t x = 0; x <= oracle_radius; ++x) {
    for (std::int64_t y = 0; y <= x && x * x + y * y <= oracle_radius * oracle_radius; ++y) {
      const LatticePoint p{x, y};
      worst_oracle = std::max(worst_oracle, std::fabs(potential(p, table) - potential_oracle(p)));
    }
  }
  out.push_back(make_gate("oracle_gap(|p|<=" + std::to_string(oracle_radius) + ")", worst_oracle, "<=", tol));
  return out;
}

std::vector<Gate> verify_kernel(const PotentialTable& table, std::int64_t radius, double tol) {
  double worst_sum = 0, worst_db = 0, worst_mart = 0;
  const std::int64_t r2 = radius * radius;
  for (std::int64_t x1 = -radius; x1 <= radius; ++x1) {
    for (std::int64_t x2 = -radius; x2 <= radius; ++x2) {
      const LatticePoint x{x1, x2};
      if (x == kOrigin || norm2(x) > r2) continue;
      const double ax = potential(x, table);
      const auto row = step_distribution(WalkKind::Conditioned, x, table);
      double s = 0, m = 0;
      bool touches_origin = false;
      for (const auto& q : row) {
        s += q.p;
        if (q.y == kOrigin) {
          touches_origin = true;
          continue;
        }
        const double ay = potential(q.y, table);
        m += q.p / ay;
        double back = 0;
        for (const auto& b : step_distribution(WalkKind::Conditioned, q.y, table))
          if (b.y == x) back = b.p;
        worst_db = std::max(worst_db, std::fabs(ax * ax * q.p - ay * ay * back));
      }
      worst_sum = std::max(worst_sum, std::fabs(s - 1.0));
      if (!touches_origin) worst_mart = std::max(worst_mart, std::fabs(m - 1.0 / ax));
    }
  }
  const std::string where = "(B(" + std::to_string(radius) + "))";
  return {make_gate("row_sum" + where, worst_sum, "<=", tol), make_gate("detailed_balance" + where, worst_db, "<=", tol),
          make_gate("martingale" + where, worst_mart, "<=", tol)};
}

CsvTable gate_table(const std::vector<Gate>& gates) {
  CsvTable t({"check", "value", "relation", "threshold", "passed"});
  for (const auto& g : gates)
    t.row({g.name, csv_number(g.value), g.relation, csv_number(g.threshold), g.passed ? "1" : "0"});
  return t;
}

nlohmann::json to_json(const Gate& g) {
  nlohmann::json j{{"name", g.name}, {"value", g.value}, {"relation", g.relation}, {"threshold", g.threshold},
                   {"passed", g.passed}};
  if (g.relation == "in") j["threshold_hi"] = g.threshold_hi;
  return j;
}

}  // namespace condwalk
