#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "condwalk/lattice.hpp"
#include "condwalk/model.hpp"
#include "condwalk/montecarlo.hpp"
#include "condwalk/report.hpp"
#include "json.hpp"

namespace condwalk {

struct ExperimentReport {
  std::string name;
  CsvTable table{{"empty"}};
  std::vector<Gate> gates;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();

  bool passed() const;
  /// schema_version, name, parameters, gates, results, passed.
  nlohmann::json summary() const;
};

// ---------------------------------------------------------------------------
// Future minimum

struct MinimumScales {
  double n, delta;
  double u() const;  // sqrt(n ln^2 ln n)
  double l() const;  // sqrt(n) / ln ln n
  double m() const;  // sqrt(n) / ln^delta n
  double target() const;          // 2 delta ln ln n / ln n
  double upper_envelope() const;  // sqrt((e + delta) n ln ln n)
  double lower_envelope() const;  // exp(ln^{1-delta} n)
  double small_level() const;     // n^delta
};

struct MinimumConfig {
  double delta = 0.25;
  LatticePoint start{1, 0};
  /// Checkpoints; even, strictly increasing, in [16, 10^7].
  std::vector<std::uint64_t> horizons{10000, 100000, 1000000};
  /// The future after the last horizon is followed (with box jumps) out to
  /// this radius; beyond it the chance of coming back below a level u from
  /// z is taken as a(u)/a(z).
  double far_radius = 1e6;
  /// Every k-th trajectory is also stored in full and checked for the
  /// T_u / M_n duality.
  std::uint64_t identity_every = 100;
  double factor_gate = 2.0;
  double upper_gate = 0.05;
  double small_gate = 0.1;

  void validate() const;
};

ExperimentReport exp_minimum(const WalkModel& model, const MinimumConfig& mc, const EstimatorConfig& cfg);

// ---------------------------------------------------------------------------
// Local CLT

struct LcltConfig {
  std::uint64_t n = 10000;
  LatticePoint start{1, 0};
  double M = 4.0;
  std::uint64_t min_hits = 100;
  double spread_gate = 50.0;
  double uniform_gate = 10.0;
  double symmetry_sigmas = 5.0;
  double sanity_lo = 0.01, sanity_hi = 1.0;

  void validate() const;
};

ExperimentReport exp_lclt(const WalkModel& model, const LcltConfig& lc, const EstimatorConfig& cfg);

// ---------------------------------------------------------------------------
// Encounters and recurrence windows

struct EncounterWindows {
  // DoubleExp: b_k = floor(e^(3^k)); Scaled: b_k = b0 g^k.
  enum class Growth { DoubleExp, Scaled };
  Growth growth = Growth::Scaled;
  std::uint64_t b0 = 1024;
  std::uint64_t g = 4;
  int k_max = 4;

  /// b_0 < b_1 < ... < b_{k_max}; window k is [b_k, b_{k+1}).
  std::vector<std::uint64_t> bounds() const;
  void validate() const;
};

struct EncounterConfig {
  LatticePoint x1{1, 0};
  LatticePoint x2{-1, 0};
  EncounterWindows windows;
  std::vector<std::uint64_t> n_grid{1024, 2048, 4096, 8192, 16384, 32768, 65536};
  double flat_gate = 3.0;
  double window_gate = 0.2;
  /// Pairs for the opposite-parity control, started from x1 and x1 + (0,1).
  std::uint64_t control_pairs = 10000;

  void validate() const;
};

ExperimentReport exp_encounters(const WalkModel& model, const EncounterConfig& ec, const EstimatorConfig& cfg);

struct MeetingCounts {
  std::uint64_t pairs = 0;
  std::uint64_t meetings = 0;
};

/// Meetings (times 1..steps) of cfg.trials independent pairs of conditioned
/// walks from a and b; no parity requirement (used for the opposite-parity
/// control). Each walker's stream is keyed by its start point, so swapping a
/// and b swaps the streams and leaves the counts unchanged.
MeetingCounts count_meetings(const WalkModel& model, LatticePoint a, LatticePoint b, std::uint64_t steps,
                             const EstimatorConfig& cfg);

struct SrwRecurrenceConfig {
  EncounterWindows windows;
  LatticePoint start{1, 0};
  double gate = 0.2;
  /// Also run the conditioned walk, counting visits to start instead of 0.
  bool conditioned_contrast = true;

  void validate() const;
};

ExperimentReport exp_srw_recurrence(const WalkModel& model, const SrwRecurrenceConfig& sc, const EstimatorConfig& cfg);

// ---------------------------------------------------------------------------
// Confinement tails

struct ConfinementConfig {
  std::vector<double> radii{50.0, 100.0};
  LatticePoint start{1, 0};
  std::vector<double> t_over_r2{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  double r2_gate = 0.9;
  double slope_ratio_gate = 2.0;
  std::uint64_t min_tail_events = 30;

  void validate() const;
};

ExperimentReport exp_confinement(const WalkModel& model, const ConfinementConfig& cc, const EstimatorConfig& cfg);

/// Least squares y = a + b x; returns {slope, intercept, r2}.
struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace condwalk
