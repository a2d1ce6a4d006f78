#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "condwalk/estimate.hpp"
#include "condwalk/lattice.hpp"
#include "condwalk/model.hpp"
#include "condwalk/rng.hpp"
#include "condwalk/theory.hpp"

namespace condwalk {

struct EstimatorConfig {
  std::uint64_t trials = 100000;
  std::uint64_t master_seed = 0;
  /// Cap on transitions per trial (single steps plus box jumps).
  std::uint64_t horizon = 100'000'000;
  double truncation_radius = 1e4;
  unsigned workers = 1;
  /// Walk-on-squares acceleration for race-type trials.
  bool accelerate = true;

  void validate() const;
};

inline unsigned default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Runs trials 0..n-1 over `workers` threads. Each worker owns an
/// accumulator made by `make`; `trial(acc, i)` adds trial i; the partials
/// are then folded with `merge`. Provided merge is exactly associative and
/// commutative (integer statistics), the result does not depend on the
/// worker count or on scheduling. The first exception thrown by any trial
/// is rethrown after all workers stop.
template <class Acc, class Make, class Trial, class Merge>
Acc parallel_trials(std::uint64_t n, unsigned workers, Make&& make, Trial&& trial, Merge&& merge) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    Acc acc = make();
    for (std::uint64_t i = 0; i < n; ++i) trial(acc, i);
    return acc;
  }
  constexpr std::uint64_t kChunk = 64;
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::optional<Acc>> parts(workers);
  auto body = [&](unsigned w) {
    try {
      parts[w].emplace(make());
      Acc& acc = *parts[w];
      for (;;) {
        const std::uint64_t begin = next.fetch_add(kChunk);
        if (begin >= n || stop.load(std::memory_order_relaxed)) break;
        const std::uint64_t end = std::min(n, begin + kChunk);
        for (std::uint64_t i = begin; i < end; ++i) trial(acc, i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      stop = true;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body, w);
  body(0);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  Acc total = std::move(*parts[0]);
  for (unsigned w = 1; w < workers; ++w) {
    if (parts[w]) merge(total, *parts[w]);
  }
  return total;
}

/// Stream tag from an operation name and its integer arguments, so distinct
/// estimands draw from distinct stream families under one master seed.
std::uint64_t stream_tag(const std::string& op, std::initializer_list<std::int64_t> args);

struct ComparisonReport {
  std::string case_name;
  Estimate estimate;
  BracketedValue exact;
  double truncation_bound = 0.0;
  /// max(0, gap / stderr - 4), gap = distance between [sys_lo, sys_hi] and
  /// [mean - trunc, mean + trunc].
  double z_score = 0.0;
  /// Horizon exhausted in more than 0.1% of trials.
  bool horizon_warning = false;
};

ComparisonReport make_report(std::string case_name, const Estimate& est, const BracketedValue& exact,
                             double truncation_bound);

/// Return to x before leaving B(R); compared with return_prob(x).
ComparisonReport estimate_return_prob(const WalkModel& model, LatticePoint x, const EstimatorConfig& cfg);
/// Hit y before leaving B(R); compared with hit_prob(x, y).
ComparisonReport estimate_hit_prob(const WalkModel& model, LatticePoint x, LatticePoint y, const EstimatorConfig& cfg);
/// Visits to y before leaving B(R); compared with green(x, y).
ComparisonReport estimate_green(const WalkModel& model, LatticePoint x, LatticePoint y, const EstimatorConfig& cfg);
/// Leave B(R) without entering B(n); compared with escape_prob(x, n).
ComparisonReport estimate_escape_prob(const WalkModel& model, LatticePoint x, double n, const EstimatorConfig& cfg);
/// Reach dB(L) before B(r); compared with annulus_escape_prob(x, r, L).
ComparisonReport estimate_annulus_escape(const WalkModel& model, LatticePoint x, double r, double L,
                                         const EstimatorConfig& cfg);
/// SRW reaches dB(y, L) before the origin; compared with srw_exit_before_hit.
ComparisonReport estimate_srw_exit_before_hit(const WalkModel& model, LatticePoint x, LatticePoint y, double L,
                                              const EstimatorConfig& cfg);

enum class EventOutcome { Miss, Hit, Undecided };

/// A generic event: `trial` decides one trial from its stream. Events that
/// can run out of horizon must say so (`decidable = false`) and then carry a
/// truncation bound; undecided trials count as misses.
struct EventSpec {
  std::string name;
  std::uint64_t tag = 0;
  std::function<EventOutcome(RngStream&)> trial;
  bool decidable = true;
  std::optional<double> truncation_bound;
};

Estimate estimate_event(const EventSpec& spec, const EstimatorConfig& cfg);

/// Max over z in dB(R) of hit_prob(z, y) (probability of coming back to y
/// after the walk is stopped on the truncation circle).
double reentry_bound(LatticePoint y, double R, const PotentialTable& table);

}  // namespace condwalk
