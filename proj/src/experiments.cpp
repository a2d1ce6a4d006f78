#include "condwalk/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "condwalk/errors.hpp"
#include "condwalk/kernels.hpp"
#include "condwalk/potential.hpp"
#include "condwalk/race.hpp"
#include "condwalk/theory.hpp"
#include "condwalk/verify.hpp"
#include "condwalk/walk.hpp"

namespace condwalk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs `trials` trials in batches of L lanes; batch(acc, first, count).
template <std::size_t L, class Acc, class Make, class Batch, class Merge>
Acc run_batches(std::uint64_t trials, unsigned workers, Make&& make, Batch&& batch, Merge&& merge) {
  const std::uint64_t batches = (trials + L - 1) / L;
  return parallel_trials<Acc>(
      batches, workers, make,
      [&](Acc& acc, std::uint64_t b) { batch(acc, b * L, std::min<std::uint64_t>(L, trials - b * L)); }, merge);
}

template <std::size_t L, bool Track = true, class Visit>
void advance_steps(const FastStepper& st, std::array<InlineWalker, L>& w, std::uint64_t n0, std::uint64_t steps,
                   Visit&& visit) {
  for (std::uint64_t done = 0; done < steps;) {
    const auto len = static_cast<unsigned>(std::min<std::uint64_t>(kLaneBlock, steps - done));
    advance_lanes<L, Track>(st, w, n0 + done, len, visit);
    done += len;
  }
}

std::uint64_t even_ceil(std::uint64_t n) { return n + (n & 1); }

// Smallest norm2 with |w| >= v.
std::int64_t at_least_threshold(double v) { return open_disk_threshold(v) + 1; }
// Smallest norm2 with |w| > v.
std::int64_t above_threshold(double v) { return closed_disk_threshold(v) + 1; }

void merge_all(std::vector<Estimate>& into, const std::vector<Estimate>& from) {
  for (std::size_t i = 0; i < into.size(); ++i) into[i].merge(from[i]);
}

nlohmann::json estimate_json(const Estimate& e) { return to_json(e); }

}  // namespace

// ---------------------------------------------------------------------------

bool ExperimentReport::passed() const {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed; });
}

nlohmann::json ExperimentReport::summary() const {
  nlohmann::json gs = nlohmann::json::array();
  for (const auto& g : gates) gs.push_back(to_json(g));
  return {{"schema_version", kSchemaVersion}, {"name", name},       {"parameters", parameters},
          {"gates", gs},                      {"results", results}, {"passed", passed()}};
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fit_line needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw ConfigError("fit_line: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
  return f;
}

// ---------------------------------------------------------------------------
// Future minimum

double MinimumScales::u() const { return std::sqrt(n) * std::log(std::log(n)); }
double MinimumScales::l() const { return std::sqrt(n) / std::log(std::log(n)); }
double MinimumScales::m() const { return std::sqrt(n) / std::pow(std::log(n), delta); }
double MinimumScales::target() const { return 2.0 * delta * std::log(std::log(n)) / std::log(n); }
double MinimumScales::upper_envelope() const { return std::sqrt((std::numbers::e + delta) * n * std::log(std::log(n))); }
double MinimumScales::lower_envelope() const { return std::exp(std::pow(std::log(n), 1.0 - delta)); }
double MinimumScales::small_level() const { return std::pow(n, delta); }

void MinimumConfig::validate() const {
  if (!(delta > 0.05 && delta < 0.45)) throw ConfigError("delta must lie in (0.05, 0.45)");
  if (start == kOrigin) throw DomainError("the conditioned walk cannot start at the origin");
  if (horizons.empty()) throw ConfigError("at least one horizon is needed");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const auto n = horizons[i];
    if (n < 16 || n > 10'000'000) throw ConfigError("horizons must lie in [16, 10^7]");
    if (n & 1) throw ConfigError("horizons must be even");
    if (i > 0 && n <= horizons[i - 1]) throw ConfigError("horizons must be strictly increasing");
  }
  if (!(far_radius > 0.0) || !std::isfinite(far_radius)) throw ConfigError("far radius must be positive");
  if (identity_every == 0) throw ConfigError("identity_every must be at least 1");
  if (!(factor_gate >= 1.0)) throw ConfigError("factor gate must be at least 1");
}

namespace {

struct LevelEvent {
  const char* name;
  bool at_most;       // event M_n <= v instead of M_n >= v
  std::int64_t t;     // M_n >= v  <=>  norm2 >= t;  M_n <= v  <=>  not (norm2 >= t)
  double level;
};

std::vector<LevelEvent> minimum_events(const MinimumScales& s) {
  return {{"ge_m", false, at_least_threshold(s.m()), s.m()},
          {"ge_l", false, at_least_threshold(s.l()), s.l()},
          {"ge_u", false, at_least_threshold(s.u()), s.u()},
          {"ge_upper_env", false, at_least_threshold(s.upper_envelope()), s.upper_envelope()},
          {"le_lower_env", true, above_threshold(s.lower_envelope()), s.lower_envelope()},
          {"le_small", true, above_threshold(s.small_level()), s.small_level()}};
}

// Weights g[j] in [0, 1] that the walk after z never enters {norm2 < T[j]}.
// T is sorted. The walk is followed by races until it either goes below all
// remaining thresholds or reaches distance `far`; from a far point w the
// chance of ever entering B(rho) is taken as a(rho) / a(w).
std::vector<double> future_weights(const WalkModel& model, LatticePoint z, const std::vector<std::int64_t>& T,
                                   double far, const EstimatorConfig& cfg, RngStream& rng, std::uint64_t& transitions) {
  std::vector<double> g(T.size(), 0.0);
  std::int64_t F = norm2(z);
  LatticePoint w = z;
  for (;;) {
    const auto it = std::upper_bound(T.begin(), T.end(), F);
    if (it == T.begin()) return g;  // F is below every threshold
    const std::size_t j = static_cast<std::size_t>(it - T.begin()) - 1;
    if (T[j] <= 1) {
      std::fill(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(j) + 1, 1.0);
      return g;
    }
    RaceSpec spec;
    spec.kind = WalkKind::Conditioned;
    spec.start = w;
    spec.inner_threshold = T[j] - 1;
    spec.outer_radius = far;
    spec.horizon = cfg.horizon;
    spec.accelerate = cfg.accelerate;
    const RaceOutcome o = run_race(model, spec, rng);
    transitions += o.steps + o.jumps;
    if (o.stop == RaceStop::Inner) {
      w = o.final;
      F = norm2(w);
      continue;
    }
    if (o.stop != RaceStop::Outer) throw NumericalFailure("future-minimum race ran out of horizon");
    const double az = model.a(o.final);
    for (std::size_t i = 0; i <= j; ++i) {
      g[i] = T[i] <= 1 ? 1.0
                       : 1.0 - std::min(1.0, potential_radius(std::sqrt(static_cast<double>(T[i] - 1))) / az);
    }
    return g;
  }
}

struct MinimumAcc {
  std::vector<Estimate> events;  // horizon-major
  std::vector<Estimate> grid;    // horizon-major
  Estimate union_small{Estimate::Kind::Real};
  std::uint64_t identity_pairs = 0, identity_failures = 0, kernel_mismatches = 0, identity_paths = 0;
  std::uint64_t race_transitions = 0;
};

}  // namespace

ExperimentReport exp_minimum(const WalkModel& model, const MinimumConfig& mc, const EstimatorConfig& cfg) {
  mc.validate();
  cfg.validate();
  const std::size_t H = mc.horizons.size();
  const std::uint64_t n_max = mc.horizons.back();

  std::vector<MinimumScales> scales;
  std::vector<std::vector<LevelEvent>> events;
  for (auto n : mc.horizons) {
    scales.push_back({static_cast<double>(n), mc.delta});
    events.push_back(minimum_events(scales.back()));
  }
  const std::size_t E = events[0].size();

  // Quantile grid 2^(j/8) up to well past the largest upper envelope.
  std::vector<double> grid_levels;
  const double grid_top = 4.0 * scales.back().upper_envelope();
  for (int j = 0; std::pow(2.0, j / 8.0) <= grid_top; ++j) grid_levels.push_back(std::pow(2.0, j / 8.0));
  const std::size_t G = grid_levels.size();

  // Union event: M_{n_i} <= n_i^delta for some i; complement thresholds s_i.
  std::vector<std::int64_t> small_t(H);
  for (std::size_t h = 0; h < H; ++h) small_t[h] = above_threshold(scales[h].small_level());
  const std::int64_t small_max = *std::max_element(small_t.begin(), small_t.end());

  std::vector<std::int64_t> T;
  for (std::size_t h = 0; h < H; ++h)
    for (const auto& e : events[h]) T.push_back(e.t);
  for (double v : grid_levels) T.push_back(at_least_threshold(v));
  T.push_back(small_max);
  std::sort(T.begin(), T.end());
  T.erase(std::unique(T.begin(), T.end()), T.end());
  auto t_index = [&T](std::int64_t t) {
    return static_cast<std::size_t>(std::lower_bound(T.begin(), T.end(), t) - T.begin());
  };

  // Levels checked against the stored paths: every event level and every
  // power of two on the grid.
  std::vector<double> identity_levels;
  for (std::size_t j = 0; j < G; j += 8) identity_levels.push_back(grid_levels[j]);
  for (std::size_t h = 0; h < H; ++h)
    for (const auto& e : events[h]) identity_levels.push_back(e.level);

  const std::uint64_t walk_tag = stream_tag("minimum", {mc.start.x1, mc.start.x2});
  const FastStepper st(model.rule(), WalkKind::Conditioned);
  constexpr std::size_t L = 4;

  auto make = [&] {
    MinimumAcc a;
    a.events.assign(H * E, Estimate(Estimate::Kind::Real));
    a.grid.assign(H * G, Estimate(Estimate::Kind::Real));
    return a;
  };
  auto batch = [&](MinimumAcc& acc, std::uint64_t first, std::uint64_t count) {
    std::array<RngStream, L> rng;
    std::array<InlineWalker, L> w;
    for (std::size_t l = 0; l < L; ++l) {
      rng[l] = RngStream::derive(cfg.master_seed, walk_tag, first + l);
      w[l] = InlineWalker::from(rng[l], mc.start);
    }
    // seg[h][l]: min norm2 over [n_h, n_{h+1}] (the last segment is empty).
    std::vector<std::array<std::int64_t, L>> seg(H);
    advance_steps<L, false>(st, w, 0, mc.horizons[0], [](std::uint64_t) {});
    for (std::size_t h = 0; h + 1 < H; ++h) {
      auto& s = seg[h];
      for (std::size_t l = 0; l < L; ++l) s[l] = norm2(w[l].p);
      advance_steps(st, w, mc.horizons[h], mc.horizons[h + 1] - mc.horizons[h], [&](std::uint64_t) {
        for (std::size_t l = 0; l < L; ++l) {
          const std::int64_t q = w[l].p.x1 * w[l].p.x1 + w[l].p.x2 * w[l].p.x2;
          s[l] = std::min(s[l], q);
        }
      });
    }
    for (std::size_t l = 0; l < count; ++l) {
      const std::uint64_t i = first + l;
      const LatticePoint z = w[l].p;
      // P[h] = min norm2 over [n_h, n_max].
      std::vector<std::int64_t> P(H);
      P[H - 1] = norm2(z);
      for (std::size_t h = H - 1; h-- > 0;) P[h] = std::min(P[h + 1], seg[h][l]);

      w[l].commit(rng[l]);
      const std::vector<double> g = future_weights(model, z, T, mc.far_radius, cfg, rng[l], acc.race_transitions);
      auto weight = [&](std::size_t h, std::int64_t t) { return P[h] >= t ? g[t_index(t)] : 0.0; };

      for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t e = 0; e < E; ++e) {
          const auto& ev = events[h][e];
          const double v = weight(h, ev.t);
          acc.events[h * E + e].add_value(ev.at_most ? 1.0 - v : v);
        }
        for (std::size_t j = 0; j < G; ++j) acc.grid[h * G + j].add_value(weight(h, at_least_threshold(grid_levels[j])));
      }
      bool all_above = true;
      for (std::size_t h = 0; h < H; ++h) all_above = all_above && P[h] >= small_t[h];
      acc.union_small.add_value(all_above ? 1.0 - g[t_index(small_max)] : 1.0);

      if (i % mc.identity_every == 0) {
        auto r = RngStream::derive(cfg.master_seed, walk_tag, i);
        const Trajectory tr = sample_path(model.rule(), WalkKind::Conditioned, mc.start, n_max, r);
        ++acc.identity_paths;
        if (tr.path.back() != z) ++acc.kernel_mismatches;
        const auto prof = future_minimum_profile(tr, mc.horizons);
        for (std::size_t h = 0; h < H; ++h) {
          if (prof[h].m2 != P[h]) ++acc.kernel_mismatches;
          for (double u : identity_levels) {
            const auto Tu = last_exit_time(tr, u);
            const bool lhs = Tu && *Tu >= mc.horizons[h];
            const bool rhs = norm2_at_most(prof[h].m2, u);
            ++acc.identity_pairs;
            if (lhs != rhs) ++acc.identity_failures;
          }
        }
      }
    }
  };
  auto merge = [](MinimumAcc& a, const MinimumAcc& b) {
    merge_all(a.events, b.events);
    merge_all(a.grid, b.grid);
    a.union_small.merge(b.union_small);
    a.identity_pairs += b.identity_pairs;
    a.identity_failures += b.identity_failures;
    a.kernel_mismatches += b.kernel_mismatches;
    a.identity_paths += b.identity_paths;
    a.race_transitions += b.race_transitions;
  };
  const MinimumAcc acc = run_batches<L, MinimumAcc>(cfg.trials, cfg.workers, make, batch, merge);

  ExperimentReport rep;
  rep.name = "minimum";
  rep.table = CsvTable({"n",         "delta",    "m_n",          "l_n",             "u_n",       "target",
                        "p_ge_m",    "se_ge_m",  "ratio_ge_m",   "p_ge_l",          "p_ge_u",    "se_ge_u",
                        "upper_env", "p_ge_upper_env", "lower_env", "p_le_lower_env", "small_level", "p_le_small",
                        "q05",       "q50",      "q95"});
  auto quantile = [&](std::size_t h, double p) {
    for (std::size_t j = 0; j < G; ++j)
      if (acc.grid[h * G + j].mean() <= 1.0 - p) return grid_levels[j];
    return kNaN;
  };
  nlohmann::json per_n = nlohmann::json::array();
  for (std::size_t h = 0; h < H; ++h) {
    const auto& s = scales[h];
    auto ev = [&](std::size_t e) -> const Estimate& { return acc.events[h * E + e]; };
    const double p_m = ev(0).mean();
    rep.table.row({std::to_string(mc.horizons[h]), csv_number(mc.delta), csv_number(s.m()), csv_number(s.l()),
                   csv_number(s.u()), csv_number(s.target()), csv_number(p_m), csv_number(ev(0).std_error()),
                   csv_number(p_m / s.target()), csv_number(ev(1).mean()), csv_number(ev(2).mean()),
                   csv_number(ev(2).std_error()), csv_number(s.upper_envelope()), csv_number(ev(3).mean()),
                   csv_number(s.lower_envelope()), csv_number(ev(4).mean()), csv_number(s.small_level()),
                   csv_number(ev(5).mean()), csv_number(quantile(h, 0.05)), csv_number(quantile(h, 0.5)),
                   csv_number(quantile(h, 0.95))});
    const std::string tag = "n=" + std::to_string(mc.horizons[h]);
    rep.gates.push_back(make_gate("factor_" + tag, p_m, "in", s.target() / mc.factor_gate, s.target() * mc.factor_gate));
    rep.gates.push_back(make_gate("upper_" + tag, ev(2).mean(), "<", mc.upper_gate));

    nlohmann::json ej = nlohmann::json::object();
    for (std::size_t e = 0; e < E; ++e) ej[events[h][e].name] = estimate_json(ev(e));
    std::vector<double> surv;
    for (std::size_t j = 0; j < G; ++j) surv.push_back(acc.grid[h * G + j].mean());
    per_n.push_back({{"n", mc.horizons[h]}, {"events", ej}, {"survival", surv}});
  }
  rep.gates.push_back(make_gate("small_union", acc.union_small.mean(), ">=", mc.small_gate));
  rep.gates.push_back(make_gate("identity_pairs", static_cast<double>(acc.identity_pairs), ">", 0));
  rep.gates.push_back(make_gate("identity_failures", static_cast<double>(acc.identity_failures), "==", 0));
  rep.gates.push_back(make_gate("kernel_mismatches", static_cast<double>(acc.kernel_mismatches), "==", 0));

  rep.parameters = {{"delta", mc.delta},
                    {"start", {mc.start.x1, mc.start.x2}},
                    {"horizons", mc.horizons},
                    {"far_radius", mc.far_radius},
                    {"identity_every", mc.identity_every},
                    {"factor_gate", mc.factor_gate},
                    {"upper_gate", mc.upper_gate},
                    {"small_gate", mc.small_gate},
                    {"trials", cfg.trials},
                    {"seed", cfg.master_seed},
                    {"accelerate", cfg.accelerate}};
  rep.results = {{"per_horizon", per_n},
                 {"grid_levels", grid_levels},
                 {"small_union", estimate_json(acc.union_small)},
                 {"identity_paths", acc.identity_paths},
                 {"identity_pairs", acc.identity_pairs},
                 {"identity_failures", acc.identity_failures},
                 {"kernel_mismatches", acc.kernel_mismatches},
                 {"race_transitions", acc.race_transitions}};
  return rep;
}

// ---------------------------------------------------------------------------
// Local CLT

void LcltConfig::validate() const {
  if (n < 1000 || n > 100000 || (n & 1)) throw ConfigError("n must be even and in [10^3, 10^5]");
  if (start == kOrigin) throw DomainError("the conditioned walk cannot start at the origin");
  if (!within_radius(norm2(start), std::sqrt(static_cast<double>(n)))) throw ConfigError("|start| must be at most sqrt(n)");
  if (!(M > 0.0) || !std::isfinite(M)) throw ConfigError("M must be positive");
  if (!(spread_gate >= 1.0) || !(uniform_gate > 0.0) || !(symmetry_sigmas > 0.0)) throw ConfigError("bad gate constants");
  if (!(sanity_lo <= sanity_hi)) throw ConfigError("sanity window is empty");
}

namespace {
struct LcltAcc {
  std::vector<std::uint64_t> hist;
  std::uint64_t overflow = 0, wrong_parity = 0, origin = 0, total = 0;
};
}  // namespace

ExperimentReport exp_lclt(const WalkModel& model, const LcltConfig& lc, const EstimatorConfig& cfg) {
  lc.validate();
  cfg.validate();
  const double nd = static_cast<double>(lc.n);
  const std::int64_t disk_t = closed_disk_threshold(std::sqrt(lc.M * nd));
  const auto half = static_cast<std::int64_t>(std::ceil(std::sqrt(lc.M * nd)));
  const std::int64_t side = 2 * half + 1;
  const int want_parity = parity(lc.start) ^ static_cast<int>(lc.n & 1);

  const std::uint64_t tag = stream_tag("lclt", {static_cast<std::int64_t>(lc.n), lc.start.x1, lc.start.x2});
  const FastStepper st(model.rule(), WalkKind::Conditioned);
  constexpr std::size_t L = 6;

  auto make = [&] {
    LcltAcc a;
    a.hist.assign(static_cast<std::size_t>(side * side), 0);
    return a;
  };
  auto batch = [&](LcltAcc& acc, std::uint64_t first, std::uint64_t count) {
    std::array<InlineWalker, L> w;
    for (std::size_t l = 0; l < L; ++l) w[l] = InlineWalker::from(RngStream::derive(cfg.master_seed, tag, first + l), lc.start);
    advance_steps<L, false>(st, w, 0, lc.n, [](std::uint64_t) {});
    for (std::size_t l = 0; l < count; ++l) {
      const LatticePoint y = w[l].p;
      ++acc.total;
      if (parity(y) != want_parity) ++acc.wrong_parity;
      if (y == kOrigin) ++acc.origin;
      if (y.x1 >= -half && y.x1 <= half && y.x2 >= -half && y.x2 <= half) {
        ++acc.hist[static_cast<std::size_t>((y.x2 + half) * side + (y.x1 + half))];
      } else {
        ++acc.overflow;
      }
    }
  };
  auto merge = [](LcltAcc& a, const LcltAcc& b) {
    for (std::size_t i = 0; i < a.hist.size(); ++i) a.hist[i] += b.hist[i];
    a.overflow += b.overflow;
    a.wrong_parity += b.wrong_parity;
    a.origin += b.origin;
    a.total += b.total;
  };
  const LcltAcc acc = run_batches<L, LcltAcc>(cfg.trials, cfg.workers, make, batch, merge);
  auto count_at = [&](std::int64_t y1, std::int64_t y2) {
    return acc.hist[static_cast<std::size_t>((y2 + half) * side + (y1 + half))];
  };

  const double trials = static_cast<double>(cfg.trials);
  ExperimentReport rep;
  rep.name = "lclt";
  rep.table = CsvTable({"y1", "y2", "norm", "count", "p_hat", "n_p_hat", "prediction", "rho", "qualified"});
  double rho_min = std::numeric_limits<double>::infinity(), rho_max = 0.0;
  std::uint64_t qualified = 0, excluded_parity = 0, max_count = 0;
  double sanity_min = std::numeric_limits<double>::infinity(), sanity_max = -1.0;
  const double rn = std::sqrt(nd);
  for (std::int64_t y2 = -half; y2 <= half; ++y2) {
    for (std::int64_t y1 = -half; y1 <= half; ++y1) {
      const std::uint64_t c = count_at(y1, y2);
      max_count = std::max(max_count, c);
      const LatticePoint y{y1, y2};
      const std::int64_t q = norm2(y);
      if (q == 0 || q > disk_t) continue;
      if (parity(y) != want_parity) {
        ++excluded_parity;
        continue;
      }
      const double p = static_cast<double>(c) / trials;
      const double pred = lclt_prediction(lc.n, y, model.table());
      const bool ok = c >= lc.min_hits;
      const double rho = p / pred;
      if (ok) {
        ++qualified;
        rho_min = std::min(rho_min, rho);
        rho_max = std::max(rho_max, rho);
      }
      const double r = std::sqrt(static_cast<double>(q));
      if (r >= rn - 1.0 && r <= rn + 1.0) {
        sanity_min = std::min(sanity_min, nd * p);
        sanity_max = std::max(sanity_max, nd * p);
      }
      rep.table.row({std::to_string(y1), std::to_string(y2), csv_number(r), std::to_string(c), csv_number(p),
                     csv_number(nd * p), csv_number(pred), csv_number(rho), ok ? "1" : "0"});
    }
  }
  const double spread = qualified > 0 ? rho_max / rho_min : kNaN;
  const double uniform = nd * static_cast<double>(max_count) / trials;
  if (sanity_max < 0) sanity_min = sanity_max = kNaN;

  std::uint64_t symmetric_pairs = 0, symmetry_violations = 0;
  const bool on_axis = lc.start.x2 == 0;
  if (on_axis) {
    for (std::int64_t y2 = 1; y2 <= half; ++y2) {
      for (std::int64_t y1 = -half; y1 <= half; ++y1) {
        const double c1 = static_cast<double>(count_at(y1, y2)), c2 = static_cast<double>(count_at(y1, -y2));
        if (c1 + c2 == 0) continue;
        ++symmetric_pairs;
        if (std::abs(c1 - c2) > lc.symmetry_sigmas * std::sqrt(c1 + c2)) ++symmetry_violations;
      }
    }
  }
  std::uint64_t counted = acc.overflow;
  for (auto c : acc.hist) counted += c;

  rep.gates.push_back(make_gate("wrong_parity_hits", static_cast<double>(acc.wrong_parity), "==", 0));
  rep.gates.push_back(make_gate("origin_hits", static_cast<double>(acc.origin), "==", 0));
  rep.gates.push_back(make_gate("ratio_spread", spread, "<=", lc.spread_gate));
  rep.gates.push_back(make_gate("uniform_bound", uniform, "<=", lc.uniform_gate));
  if (on_axis) rep.gates.push_back(make_gate("reflection_violations", static_cast<double>(symmetry_violations), "==", 0));
  rep.gates.push_back(make_gate("sanity_min", sanity_min, ">=", lc.sanity_lo));
  rep.gates.push_back(make_gate("sanity_max", sanity_max, "<=", lc.sanity_hi));
  rep.gates.push_back(make_gate("mass_total", static_cast<double>(counted), "==", trials));

  rep.parameters = {{"n", lc.n},
                    {"start", {lc.start.x1, lc.start.x2}},
                    {"M", lc.M},
                    {"min_hits", lc.min_hits},
                    {"spread_gate", lc.spread_gate},
                    {"uniform_gate", lc.uniform_gate},
                    {"symmetry_sigmas", lc.symmetry_sigmas},
                    {"sanity_window", {lc.sanity_lo, lc.sanity_hi}},
                    {"trials", cfg.trials},
                    {"seed", cfg.master_seed}};
  rep.results = {{"qualified_cells", qualified},
                 {"excluded_parity_cells", excluded_parity},
                 {"rho_min", qualified ? rho_min : kNaN},
                 {"rho_max", qualified ? rho_max : kNaN},
                 {"ratio_spread", spread},
                 {"n_max_p_hat", uniform},
                 {"wrong_parity_hits", acc.wrong_parity},
                 {"origin_hits", acc.origin},
                 {"overflow", acc.overflow},
                 {"symmetric_pairs", symmetric_pairs},
                 {"reflection_violations", symmetry_violations},
                 {"reflection_checked", on_axis}};
  return rep;
}

// ---------------------------------------------------------------------------
// Encounters and recurrence windows

std::vector<std::uint64_t> EncounterWindows::bounds() const {
  validate();
  std::vector<std::uint64_t> b;
  for (int k = 0; k <= k_max; ++k) {
    if (growth == Growth::DoubleExp) {
      b.push_back(static_cast<std::uint64_t>(std::floor(std::exp(std::pow(3.0, k)))));
    } else {
      std::uint64_t v = b0;
      for (int j = 0; j < k; ++j) v *= g;
      b.push_back(v);
    }
  }
  return b;
}

void EncounterWindows::validate() const {
  if (k_max < 1) throw ConfigError("at least one window is needed");
  if (growth == Growth::DoubleExp) {
    if (k_max > 2) throw ConfigError("double-exponential windows are limited to k_max <= 2");
    return;
  }
  if (b0 < 1 || g < 2) throw ConfigError("scaled windows need b0 >= 1 and g >= 2");
  long double top = static_cast<long double>(b0);
  for (int k = 0; k < k_max; ++k) top *= static_cast<long double>(g);
  if (top > 1e10L) throw ConfigError("windows beyond 10^10 steps are not supported");
}

void EncounterConfig::validate() const {
  windows.validate();
  if (n_grid.empty()) throw ConfigError("the n-grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 4) throw ConfigError("n-grid values must be at least 4");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("the n-grid must be strictly increasing");
  }
  if (n_grid.back() > 10'000'000'000ULL) throw ConfigError("n-grid values beyond 10^10 are not supported");
  if (!(flat_gate >= 1.0)) throw ConfigError("flat gate must be at least 1");
  if (!(window_gate >= 0.0 && window_gate <= 1.0)) throw ConfigError("window gate must lie in [0, 1]");
}

namespace {

// Streams of the two walkers of a pair: keyed by start point (and role when
// both start at the same site) so that swapping the starts swaps them.
std::pair<std::uint64_t, std::uint64_t> pair_tags(const char* op, LatticePoint a, LatticePoint b) {
  const std::int64_t role_b = a == b ? 1 : 0;
  return {stream_tag(op, {a.x1, a.x2, 0}), stream_tag(op, {b.x1, b.x2, role_b})};
}

// Steps cfg.trials pairs in lockstep for `steps` steps; on_meet(acc, pair, n)
// for every meeting, done(acc, pair) after each pair.
template <class Acc, class Make, class OnMeet, class Done, class Merge>
Acc run_pairs(const WalkModel& model, LatticePoint a, LatticePoint b, std::uint64_t steps, const char* op,
              const EstimatorConfig& cfg, Make&& make, OnMeet&& on_meet, Done&& done, Merge&& merge) {
  constexpr std::size_t P = 2;  // pairs per batch
  const auto [ta, tb] = pair_tags(op, a, b);
  const FastStepper st(model.rule(), WalkKind::Conditioned);
  steps = even_ceil(steps);
  auto batch = [&](Acc& acc, std::uint64_t first, std::uint64_t count) {
    std::array<InlineWalker, 2 * P> w;
    for (std::size_t j = 0; j < P; ++j) {
      w[2 * j] = InlineWalker::from(RngStream::derive(cfg.master_seed, ta, first + j), a);
      w[2 * j + 1] = InlineWalker::from(RngStream::derive(cfg.master_seed, tb, first + j), b);
    }
    advance_steps(st, w, 0, steps, [&](std::uint64_t n) {
      for (std::size_t j = 0; j < P; ++j) {
        if (w[2 * j].p == w[2 * j + 1].p && j < count) on_meet(acc, j, n);
      }
    });
    for (std::size_t j = 0; j < count; ++j) done(acc, j);
  };
  return run_batches<P, Acc>(cfg.trials, cfg.workers, make, batch, merge);
}

struct EncounterAcc {
  std::vector<Estimate> windowed;  // per n: sum_{m in W_n} m 1{meet at m} / |W_n|
  std::vector<Estimate> single;    // per n: 1{meet at n}
  std::vector<Estimate> any;       // per window: N'_k >= 1
  std::vector<Estimate> count;     // per window: N'_k
  // Per-pair scratch for the (at most two) pairs of the current batch.
  std::array<std::vector<double>, 2> sum_m;
  std::array<std::vector<std::uint8_t>, 2> hit_n;
  std::array<std::vector<std::uint64_t>, 2> meets_k;
};

}  // namespace

MeetingCounts count_meetings(const WalkModel& model, LatticePoint a, LatticePoint b, std::uint64_t steps,
                             const EstimatorConfig& cfg) {
  cfg.validate();
  if (a == kOrigin || b == kOrigin) throw DomainError("the conditioned walk cannot start at the origin");
  auto acc = run_pairs<MeetingCounts>(
      model, a, b, steps, "meet", cfg, [] { return MeetingCounts{}; },
      [](MeetingCounts& m, std::size_t, std::uint64_t) { ++m.meetings; },
      [](MeetingCounts& m, std::size_t) { ++m.pairs; },
      [](MeetingCounts& x, const MeetingCounts& y) {
        x.pairs += y.pairs;
        x.meetings += y.meetings;
      });
  return acc;
}

ExperimentReport exp_encounters(const WalkModel& model, const EncounterConfig& ec, const EstimatorConfig& cfg) {
  ec.validate();
  cfg.validate();
  if (ec.x1 == kOrigin || ec.x2 == kOrigin) throw DomainError("the conditioned walk cannot start at the origin");
  if (parity(ec.x1) != parity(ec.x2)) throw DomainError("walkers of opposite parity never meet");

  const auto b = ec.windows.bounds();
  const std::size_t K = b.size() - 1;
  const std::size_t N = ec.n_grid.size();
  std::vector<std::uint64_t> lo(N), hi(N);  // W_n = [ceil(3n/4), ceil(5n/4))
  for (std::size_t g = 0; g < N; ++g) {
    lo[g] = (3 * ec.n_grid[g] + 3) / 4;
    hi[g] = (5 * ec.n_grid[g] + 3) / 4;
  }
  const std::uint64_t steps = std::max(b.back() - 1, hi.back() - 1);

  auto make = [&] {
    EncounterAcc a;
    a.windowed.assign(N, Estimate(Estimate::Kind::Real));
    a.single.assign(N, Estimate(Estimate::Kind::Event));
    a.any.assign(K, Estimate(Estimate::Kind::Event));
    a.count.assign(K, Estimate(Estimate::Kind::Real));
    for (int j = 0; j < 2; ++j) {
      a.sum_m[j].assign(N, 0.0);
      a.hit_n[j].assign(N, 0);
      a.meets_k[j].assign(K, 0);
    }
    return a;
  };
  auto on_meet = [&](EncounterAcc& a, std::size_t j, std::uint64_t n) {
    for (std::size_t g = 0; g < N; ++g) {
      if (n >= lo[g] && n < hi[g]) a.sum_m[j][g] += static_cast<double>(n);
      if (n == ec.n_grid[g]) a.hit_n[j][g] = 1;
    }
    for (std::size_t k = 0; k < K; ++k)
      if (n >= b[k] && n < b[k + 1]) ++a.meets_k[j][k];
  };
  auto done = [&](EncounterAcc& a, std::size_t j) {
    for (std::size_t g = 0; g < N; ++g) {
      a.windowed[g].add_value(a.sum_m[j][g] / static_cast<double>(hi[g] - lo[g]));
      a.single[g].add_event(a.hit_n[j][g] != 0);
      a.sum_m[j][g] = 0.0;
      a.hit_n[j][g] = 0;
    }
    for (std::size_t k = 0; k < K; ++k) {
      a.any[k].add_event(a.meets_k[j][k] > 0);
      a.count[k].add_value(static_cast<double>(a.meets_k[j][k]));
      a.meets_k[j][k] = 0;
    }
  };
  auto merge = [](EncounterAcc& x, const EncounterAcc& y) {
    merge_all(x.windowed, y.windowed);
    merge_all(x.single, y.single);
    merge_all(x.any, y.any);
    merge_all(x.count, y.count);
  };
  const EncounterAcc acc = run_pairs<EncounterAcc>(model, ec.x1, ec.x2, steps, "encounter", cfg, make, on_meet, done, merge);

  // Opposite-parity control: x1 against x1 + (0, 1).
  EstimatorConfig ccfg = cfg;
  ccfg.trials = ec.control_pairs;
  const LatticePoint shifted{ec.x1.x1, ec.x1.x2 + 1};
  MeetingCounts control{};
  if (ec.control_pairs > 0 && shifted != kOrigin) control = count_meetings(model, ec.x1, shifted, hi.back() - 1, ccfg);

  ExperimentReport rep;
  rep.name = "encounters";
  rep.table = CsvTable({"section", "index", "lo", "hi", "estimate", "stderr", "ci_lo", "ci_hi", "extra"});
  double flat_min = std::numeric_limits<double>::infinity(), flat_max = 0.0;
  nlohmann::json meet_rows = nlohmann::json::array();
  for (std::size_t g = 0; g < N; ++g) {
    const Estimate& e = acc.windowed[g];
    const double np_single = static_cast<double>(ec.n_grid[g]) * acc.single[g].mean();
    rep.table.row({"meet", std::to_string(ec.n_grid[g]), std::to_string(lo[g]), std::to_string(hi[g]),
                   csv_number(e.mean()), csv_number(e.std_error()), csv_number(e.ci_lo()), csv_number(e.ci_hi()),
                   csv_number(np_single)});
    flat_min = std::min(flat_min, e.mean());
    flat_max = std::max(flat_max, e.mean());
    meet_rows.push_back({{"n", ec.n_grid[g]}, {"n_p_windowed", estimate_json(e)}, {"n_p_single", np_single}});
  }
  const double flat = flat_min > 0 ? flat_max / flat_min : kNaN;
  rep.gates.push_back(make_gate("flatness", flat, "<=", ec.flat_gate));
  nlohmann::json window_rows = nlohmann::json::array();
  for (std::size_t k = 0; k < K; ++k) {
    const Estimate& e = acc.any[k];
    rep.table.row({"window", std::to_string(k), std::to_string(b[k]), std::to_string(b[k + 1]), csv_number(e.mean()),
                   csv_number(e.std_error()), csv_number(e.ci_lo()), csv_number(e.ci_hi()),
                   csv_number(acc.count[k].mean())});
    rep.gates.push_back(make_gate("window_" + std::to_string(k), e.mean(), ">=", ec.window_gate));
    window_rows.push_back({{"k", k}, {"lo", b[k]}, {"hi", b[k + 1]}, {"met", estimate_json(e)},
                           {"mean_meetings", acc.count[k].mean()}});
  }
  rep.gates.push_back(make_gate("control_meetings", static_cast<double>(control.meetings), "==", 0));

  rep.parameters = {{"x1", {ec.x1.x1, ec.x1.x2}},
                    {"x2", {ec.x2.x1, ec.x2.x2}},
                    {"windows",
                     {{"growth", ec.windows.growth == EncounterWindows::Growth::DoubleExp ? "double-exp" : "scaled"},
                      {"b0", ec.windows.b0},
                      {"g", ec.windows.g},
                      {"k_max", ec.windows.k_max}}},
                    {"n_grid", ec.n_grid},
                    {"flat_gate", ec.flat_gate},
                    {"window_gate", ec.window_gate},
                    {"control_pairs", ec.control_pairs},
                    {"trials", cfg.trials},
                    {"seed", cfg.master_seed}};
  rep.results = {{"meet", meet_rows},
                 {"windows", window_rows},
                 {"flatness", flat},
                 {"steps_per_walker", even_ceil(steps)},
                 {"control", {{"pairs", control.pairs}, {"meetings", control.meetings}}}};
  return rep;
}

void SrwRecurrenceConfig::validate() const {
  windows.validate();
  if (windows.growth != EncounterWindows::Growth::Scaled) throw ConfigError("recurrence windows must be scaled");
  if (!(gate >= 0.0 && gate <= 1.0)) throw ConfigError("gate must lie in [0, 1]");
  if (conditioned_contrast && start == kOrigin) throw DomainError("the conditioned walk cannot start at the origin");
}

namespace {

struct VisitAcc {
  std::vector<Estimate> any, count;
};

// Fraction of walks visiting `site` in each window [b_k, b_{k+1}).
VisitAcc window_visits(const WalkModel& model, WalkKind kind, LatticePoint start, LatticePoint site,
                       const std::vector<std::uint64_t>& b, const EstimatorConfig& cfg) {
  constexpr std::size_t L = 6;
  const std::size_t K = b.size() - 1;
  const FastStepper st(model.rule(), kind);
  const std::uint64_t tag =
      stream_tag("recurrence", {static_cast<std::int64_t>(kind), start.x1, start.x2, site.x1, site.x2});
  const std::uint64_t steps = even_ceil(b.back() - 1);
  auto make = [&] {
    VisitAcc a;
    a.any.assign(K, Estimate(Estimate::Kind::Event));
    a.count.assign(K, Estimate(Estimate::Kind::Real));
    return a;
  };
  auto batch = [&](VisitAcc& acc, std::uint64_t first, std::uint64_t count) {
    std::array<InlineWalker, L> w;
    for (std::size_t l = 0; l < L; ++l) w[l] = InlineWalker::from(RngStream::derive(cfg.master_seed, tag, first + l), start);
    std::array<std::vector<std::uint64_t>, L> visits;
    for (auto& v : visits) v.assign(K, 0);
    advance_steps(st, w, 0, steps, [&](std::uint64_t n) {
      for (std::size_t l = 0; l < L; ++l) {
        if (w[l].p == site) {
          for (std::size_t k = 0; k < K; ++k)
            if (n >= b[k] && n < b[k + 1]) ++visits[l][k];
        }
      }
    });
    for (std::size_t l = 0; l < count; ++l) {
      for (std::size_t k = 0; k < K; ++k) {
        acc.any[k].add_event(visits[l][k] > 0);
        acc.count[k].add_value(static_cast<double>(visits[l][k]));
      }
    }
  };
  auto merge = [](VisitAcc& x, const VisitAcc& y) {
    merge_all(x.any, y.any);
    merge_all(x.count, y.count);
  };
  return run_batches<L, VisitAcc>(cfg.trials, cfg.workers, make, batch, merge);
}

}  // namespace

ExperimentReport exp_srw_recurrence(const WalkModel& model, const SrwRecurrenceConfig& sc, const EstimatorConfig& cfg) {
  sc.validate();
  cfg.validate();
  const auto b = sc.windows.bounds();
  const std::size_t K = b.size() - 1;
  const VisitAcc srw = window_visits(model, WalkKind::Srw, sc.start, kOrigin, b, cfg);
  std::optional<VisitAcc> cond;
  if (sc.conditioned_contrast) cond = window_visits(model, WalkKind::Conditioned, sc.start, sc.start, b, cfg);

  ExperimentReport rep;
  rep.name = "srw-recurrence";
  rep.table = CsvTable({"walk", "k", "lo", "hi", "fraction", "stderr", "ci_lo", "ci_hi", "mean_visits"});
  auto rows = [&](const char* walk, const VisitAcc& v) {
    for (std::size_t k = 0; k < K; ++k) {
      const Estimate& e = v.any[k];
      rep.table.row({walk, std::to_string(k), std::to_string(b[k]), std::to_string(b[k + 1]), csv_number(e.mean()),
                     csv_number(e.std_error()), csv_number(e.ci_lo()), csv_number(e.ci_hi()),
                     csv_number(v.count[k].mean())});
    }
  };
  rows("srw", srw);
  if (cond) rows("cond", *cond);
  for (std::size_t k = 0; k < K; ++k)
    rep.gates.push_back(make_gate("window_" + std::to_string(k), srw.any[k].mean(), ">=", sc.gate));

  std::vector<double> srw_frac, cond_frac;
  for (std::size_t k = 0; k < K; ++k) {
    srw_frac.push_back(srw.any[k].mean());
    if (cond) cond_frac.push_back(cond->any[k].mean());
  }
  rep.parameters = {{"windows", {{"growth", "scaled"}, {"b0", sc.windows.b0}, {"g", sc.windows.g}, {"k_max", sc.windows.k_max}}},
                    {"start", {sc.start.x1, sc.start.x2}},
                    {"gate", sc.gate},
                    {"conditioned_contrast", sc.conditioned_contrast},
                    {"trials", cfg.trials},
                    {"seed", cfg.master_seed}};
  rep.results = {{"bounds", b}, {"srw_fraction", srw_frac}};
  if (cond) {
    rep.results["cond_fraction"] = cond_frac;
    rep.results["cond_decays"] = cond_frac.back() < cond_frac.front();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Confinement tails

void ConfinementConfig::validate() const {
  if (radii.empty()) throw ConfigError("at least one radius is needed");
  for (double r : radii)
    if (!(r >= 20.0 && r <= 200.0)) throw ConfigError("radii must lie in [20, 200]");
  if (start == kOrigin) throw DomainError("the conditioned walk cannot start at the origin");
  if (t_over_r2.size() < 2) throw ConfigError("the t-grid needs at least two points");
  for (std::size_t i = 0; i < t_over_r2.size(); ++i) {
    if (!(t_over_r2[i] >= 0.0) || !std::isfinite(t_over_r2[i])) throw ConfigError("t-grid values must be non-negative");
    if (i > 0 && t_over_r2[i] <= t_over_r2[i - 1]) throw ConfigError("the t-grid must be strictly increasing");
  }
  if (!(r2_gate <= 1.0) || !(slope_ratio_gate >= 1.0)) throw ConfigError("bad gate constants");
}

ExperimentReport exp_confinement(const WalkModel& model, const ConfinementConfig& cc, const EstimatorConfig& cfg) {
  cc.validate();
  cfg.validate();
  const std::size_t J = cc.t_over_r2.size();
  const FastStepper st(model.rule(), WalkKind::Conditioned);
  constexpr std::size_t L = 4;

  ExperimentReport rep;
  rep.name = "confinement";
  rep.table = CsvTable({"r", "t", "t_over_r2", "count", "p_hat", "stderr", "ci_lo", "ci_hi", "log_p_hat"});
  std::vector<double> slopes;
  nlohmann::json fits = nlohmann::json::array();
  for (double r : cc.radii) {
    std::vector<std::uint64_t> t(J);
    for (std::size_t j = 0; j < J; ++j) t[j] = static_cast<std::uint64_t>(std::llround(cc.t_over_r2[j] * r * r));
    const std::uint64_t t_max = even_ceil(t.back());
    const std::uint64_t tag = stream_tag("confinement", {std::llround(r * 1024.0), cc.start.x1, cc.start.x2});
    const std::int64_t disk = closed_disk_threshold(r);
    // On the internal boundary of B(r) or outside it.
    auto out = [disk](LatticePoint w) {
      const std::int64_t a = w.x1 < 0 ? -w.x1 : w.x1, b = w.x2 < 0 ? -w.x2 : w.x2;
      return (a + 1) * (a + 1) + b * b > disk || a * a + (b + 1) * (b + 1) > disk;
    };
    auto make = [&] { return std::vector<Estimate>(J, Estimate(Estimate::Kind::Event)); };
    auto batch = [&](std::vector<Estimate>& acc, std::uint64_t first, std::uint64_t count) {
      std::array<InlineWalker, L> w;
      std::array<std::uint64_t, L> tau;
      std::size_t alive = 0;
      for (std::size_t l = 0; l < L; ++l) {
        w[l] = InlineWalker::from(RngStream::derive(cfg.master_seed, tag, first + l), cc.start);
        tau[l] = out(cc.start) ? 0 : std::numeric_limits<std::uint64_t>::max();
        if (tau[l] != 0 && l < count) ++alive;
      }
      for (std::uint64_t n = 0; n < t_max && alive > 0; n += kLaneBlock) {
        const auto len = static_cast<unsigned>(std::min<std::uint64_t>(kLaneBlock, t_max - n));
        advance_lanes(st, w, n, len, [&](std::uint64_t m) {
          for (std::size_t l = 0; l < L; ++l) {
            if (tau[l] == std::numeric_limits<std::uint64_t>::max() && out(w[l].p)) {
              tau[l] = m;
              if (l < count) --alive;
            }
          }
        });
      }
      for (std::size_t l = 0; l < count; ++l)
        for (std::size_t j = 0; j < J; ++j) acc[j].add_event(tau[l] > t[j]);
    };
    auto merge = [](std::vector<Estimate>& x, const std::vector<Estimate>& y) { merge_all(x, y); };
    const auto est = run_batches<L, std::vector<Estimate>>(cfg.trials, cfg.workers, make, batch, merge);

    std::vector<double> xs, ys, ps;
    for (std::size_t j = 0; j < J; ++j) {
      const Estimate& e = est[j];
      const double p = e.mean();
      const double lp = p > 0 ? std::log(p) : kNaN;
      if (p > 0) {
        xs.push_back(cc.t_over_r2[j]);
        ys.push_back(lp);
      }
      ps.push_back(p);
      rep.table.row({csv_number(r), std::to_string(t[j]), csv_number(cc.t_over_r2[j]), std::to_string(e.successes()),
                     csv_number(p), csv_number(e.std_error()), csv_number(e.ci_lo()), csv_number(e.ci_hi()),
                     csv_number(lp)});
    }
    LineFit f{kNaN, kNaN, kNaN};
    if (xs.size() >= 2) f = fit_line(xs, ys);
    slopes.push_back(f.slope);
    const std::string tagname = "r=" + csv_number(r);
    rep.gates.push_back(make_gate("slope_" + tagname, f.slope, "<", 0.0));
    rep.gates.push_back(make_gate("r2_" + tagname, f.r2, ">=", cc.r2_gate));
    rep.gates.push_back(make_gate("tail_events_" + tagname, static_cast<double>(est[J - 1].successes()), ">=",
                                  static_cast<double>(cc.min_tail_events)));
    bool monotone = true;
    for (std::size_t j = 1; j < J; ++j) monotone = monotone && ps[j] <= ps[j - 1];
    fits.push_back({{"r", r},
                    {"slope", f.slope},
                    {"intercept", f.intercept},
                    {"r2", f.r2},
                    {"points_used", xs.size()},
                    {"tail_events", est[J - 1].successes()},
                    {"monotone", monotone}});
  }
  double ratio = kNaN;
  if (slopes.size() >= 2) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool ok = true;
    for (double s : slopes) {
      if (!(s < 0)) ok = false;
      lo = std::min(lo, std::abs(s));
      hi = std::max(hi, std::abs(s));
    }
    if (ok) ratio = hi / lo;
    rep.gates.push_back(make_gate("slope_ratio", ratio, "<=", cc.slope_ratio_gate));
  }
  rep.parameters = {{"radii", cc.radii},
                    {"start", {cc.start.x1, cc.start.x2}},
                    {"t_over_r2", cc.t_over_r2},
                    {"r2_gate", cc.r2_gate},
                    {"slope_ratio_gate", cc.slope_ratio_gate},
                    {"min_tail_events", cc.min_tail_events},
                    {"trials", cfg.trials},
                    {"seed", cfg.master_seed}};
  rep.results = {{"fits", fits}, {"slope_ratio", ratio}};
  return rep;
}

}  // namespace condwalk
