#pragma once

#include <cstdint>
#include <vector>

#include "condwalk/potential.hpp"
#include "condwalk/report.hpp"

namespace condwalk {

/// Exact identities of the potential table: a(0) = 0, a = 1 at the four
/// neighbours of the origin, the discrete Laplacian residual on every
/// 0 < |p| <= harmonic_radius (capped one below the table radius), and
/// agreement with the quadrature oracle on |p| <= oracle_radius.
std::vector<Gate> verify_potential(const PotentialTable& table, std::int64_t harmonic_radius = 511,
                                   std::int64_t oracle_radius = 20, double tol = 1e-8);

/// Identities of the conditioned kernel on B(radius) \ {0}: rows sum to one,
/// a(x)^2 P(x,y) = a(y)^2 P(y,x), and sum_y P(x,y) / a(y) = 1 / a(x) where x
/// has no neighbour at the origin.
std::vector<Gate> verify_kernel(const PotentialTable& table, std::int64_t radius = 100, double tol = 1e-12);

/// check,value,relation,threshold,passed
CsvTable gate_table(const std::vector<Gate>& gates);
nlohmann::json to_json(const Gate& g);

}  // namespace condwalk
