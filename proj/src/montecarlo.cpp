#include "condwalk/montecarlo.hpp"

#include <cmath>
#include <limits>

#include "condwalk/errors.hpp"
#include "condwalk/race.hpp"

namespace condwalk {

void EstimatorConfig::validate() const {
  if (trials == 0) throw ConfigError("trials must be positive");
  if (workers == 0) throw ConfigError("workers must be positive");
  if (horizon == 0) throw ConfigError("horizon must be positive");
  if (!(truncation_radius > 0.0)) throw ConfigError("truncation radius must be positive");
}

std::uint64_t stream_tag(const std::string& op, std::initializer_list<std::int64_t> args) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (unsigned char c : op) h = detail::mix64(h ^ c);
  for (std::int64_t a : args) h = detail::mix64(h ^ static_cast<std::uint64_t>(a));
  return h;
}

ComparisonReport make_report(std::string case_name, const Estimate& est, const BracketedValue& exact,
                             double truncation_bound) {
  ComparisonReport r;
  r.case_name = std::move(case_name);
  r.estimate = est;
  r.exact = exact;
  r.truncation_bound = truncation_bound;
  const double lo = est.mean() - truncation_bound;
  const double hi = est.mean() + truncation_bound;
  const double gap = std::max({0.0, exact.sys_lo - hi, lo - exact.sys_hi});
  const double se = std::max(est.std_error(), std::numeric_limits<double>::min());
  r.z_score = std::max(0.0, gap / se - 4.0);
  r.horizon_warning = est.undecided() * 1000 > est.trials();
  return r;
}

double reentry_bound(LatticePoint y, double R, const PotentialTable& table) {
  double worst = 0.0;
  for (const auto& z : internal_boundary(kOrigin, R)) {
    if (z == y) return 1.0;
    worst = std::max(worst, hit_prob(z, y, table));
  }
  return std::min(worst, 1.0);
}

namespace {

std::int64_t key(double v) { return static_cast<std::int64_t>(std::llround(v * 1024.0)); }

void require_inside(LatticePoint p, double R, const char* what) {
  // strictly inside B(R) and off its internal boundary
  if (on_or_beyond_boundary(p, kOrigin, R)) {
    throw ConfigError(std::string(what) + " must lie inside B(R), off its boundary");
  }
}

Estimate run_event_races(const WalkModel& model, const RaceSpec& base, const EstimatorConfig& cfg, std::uint64_t tag,
                         RaceStop success) {
  return parallel_trials<Estimate>(
      cfg.trials, cfg.workers, [] { return Estimate(Estimate::Kind::Event); },
      [&](Estimate& acc, std::uint64_t i) {
        auto rng = RngStream::derive(cfg.master_seed, tag, i);
        const RaceOutcome out = run_race(model, base, rng);
        if (out.stop == RaceStop::Horizon) acc.add_undecided();
        acc.add_event(out.stop == success);
      },
      [](Estimate& a, const Estimate& b) { a.merge(b); });
}

RaceSpec race_base(WalkKind kind, LatticePoint start, const EstimatorConfig& cfg) {
  RaceSpec s;
  s.kind = kind;
  s.start = start;
  s.horizon = cfg.horizon;
  s.accelerate = cfg.accelerate;
  return s;
}

}  // namespace

ComparisonReport estimate_return_prob(const WalkModel& model, LatticePoint x, const EstimatorConfig& cfg) {
  cfg.validate();
  if (x == kOrigin) throw DomainError("return: x must be nonzero");
  const double R = cfg.truncation_radius;
  if (R < 10.0 * norm(x)) throw ConfigError("return: truncation radius must be at least 10|x|");
  const double exact = return_prob(x, model.table());
  RaceSpec s = race_base(WalkKind::Conditioned, x, cfg);
  s.targets = {x};
  s.targets_from_step_one = true;
  s.outer_radius = R;
  const Estimate est = run_event_races(model, s, cfg, stream_tag("return", {x.x1, x.x2, key(R)}), RaceStop::Target);
  return make_report("return" + to_string(x), est, BracketedValue::exact(exact), reentry_bound(x, R, model.table()));
}

ComparisonReport estimate_hit_prob(const WalkModel& model, LatticePoint x, LatticePoint y, const EstimatorConfig& cfg) {
  cfg.validate();
  const double exact = hit_prob(x, y, model.table());  // domain checks
  const double R = cfg.truncation_radius;
  if (R < 10.0 * norm(x)) throw ConfigError("hit: truncation radius must be at least 10|x|");
  require_inside(y, R, "hit: y");
  RaceSpec s = race_base(WalkKind::Conditioned, x, cfg);
  s.targets = {y};
  s.outer_radius = R;
  const Estimate est =
      run_event_races(model, s, cfg, stream_tag("hit", {x.x1, x.x2, y.x1, y.x2, key(R)}), RaceStop::Target);
  return make_report("hit" + to_string(x) + "->" + to_string(y), est, BracketedValue::exact(exact),
                     reentry_bound(y, R, model.table()));
}

ComparisonReport estimate_green(const WalkModel& model, LatticePoint x, LatticePoint y, const EstimatorConfig& cfg) {
  cfg.validate();
  const double exact = green(x, y, model.table());
  const double R = cfg.truncation_radius;
  if (R < 10.0 * norm(x)) throw ConfigError("green: truncation radius must be at least 10|x|");
  require_inside(y, R, "green: y");
  RaceSpec s = race_base(WalkKind::Conditioned, x, cfg);
  s.count_site = y;
  s.outer_radius = R;
  const std::uint64_t tag = stream_tag("green", {x.x1, x.x2, y.x1, y.x2, key(R)});
  const Estimate est = parallel_trials<Estimate>(
      cfg.trials, cfg.workers, [] { return Estimate(Estimate::Kind::Real); },
      [&](Estimate& acc, std::uint64_t i) {
        auto rng = RngStream::derive(cfg.master_seed, tag, i);
        const RaceOutcome out = run_race(model, s, rng);
        if (out.stop == RaceStop::Horizon) acc.add_undecided();
        acc.add_value(static_cast<double>(out.visits));
      },
      [](Estimate& a, const Estimate& b) { a.merge(b); });
  const double trunc = green(y, y, model.table()) * reentry_bound(y, R, model.table());
  return make_report("green" + to_string(x) + "->" + to_string(y), est, BracketedValue::exact(exact), trunc);
}

ComparisonReport estimate_escape_prob(const WalkModel& model, LatticePoint x, double n, const EstimatorConfig& cfg) {
  cfg.validate();
  const BracketedValue exact = escape_prob(x, n, model.table());
  const double R = cfg.truncation_radius;
  require_inside(x, R, "escape: x");
  RaceSpec s = race_base(WalkKind::Conditioned, x, cfg);
  s.inner_threshold = closed_disk_threshold(n);
  s.outer_radius = R;
  const Estimate est =
      run_event_races(model, s, cfg, stream_tag("escape", {x.x1, x.x2, key(n), key(R)}), RaceStop::Outer);
  double trunc = 0.0;
  for (const auto& z : internal_boundary(kOrigin, R)) {
    trunc = std::max(trunc, 1.0 - escape_prob(z, n, model.table()).sys_lo);
  }
  return make_report("escape" + to_string(x) + ",n=" + std::to_string(static_cast<long long>(n)), est, exact,
                     std::min(trunc, 1.0));
}

ComparisonReport estimate_annulus_escape(const WalkModel& model, LatticePoint x, double r, double L,
                                         const EstimatorConfig& cfg) {
  cfg.validate();
  const BracketedValue exact = annulus_escape_prob(x, r, L, model.table());
  RaceSpec s = race_base(WalkKind::Conditioned, x, cfg);
  s.inner_threshold = closed_disk_threshold(r);
  s.outer_radius = L;
  const Estimate est =
      run_event_races(model, s, cfg, stream_tag("annulus", {x.x1, x.x2, key(r), key(L)}), RaceStop::Outer);
  return make_report("annulus" + to_string(x) + ",r=" + std::to_string(static_cast<long long>(r)) +
                         ",L=" + std::to_string(static_cast<long long>(L)),
                     est, exact, 0.0);
}

ComparisonReport estimate_srw_exit_before_hit(const WalkModel& model, LatticePoint x, LatticePoint y, double L,
                                              const EstimatorConfig& cfg) {
  cfg.validate();
  const BracketedValue exact = srw_exit_before_hit(x, y, L, model.table());
  if (on_or_beyond_boundary(x, y, L)) throw ConfigError("srw_exit: x must lie off the boundary of B(y, L)");
  RaceSpec s = race_base(WalkKind::Srw, x, cfg);
  s.targets = {kOrigin};
  s.outer_radius = L;
  s.outer_center = y;
  const Estimate est =
      run_event_races(model, s, cfg, stream_tag("srw_exit", {x.x1, x.x2, y.x1, y.x2, key(L)}), RaceStop::Outer);
  return make_report("srw_exit" + to_string(x) + ",y=" + to_string(y) + ",L=" + std::to_string(static_cast<long long>(L)),
                     est, exact, 0.0);
}

Estimate estimate_event(const EventSpec& spec, const EstimatorConfig& cfg) {
  cfg.validate();
  if (!spec.trial) throw ConfigError("event has no trial function");
  if (!spec.decidable && !spec.truncation_bound) {
    throw ConfigError("event " + spec.name + " is not decidable within the horizon and has no truncation bound");
  }
  return parallel_trials<Estimate>(
      cfg.trials, cfg.workers, [] { return Estimate(Estimate::Kind::Event); },
      [&](Estimate& acc, std::uint64_t i) {
        auto rng = RngStream::derive(cfg.master_seed, spec.tag, i);
        const EventOutcome o = spec.trial(rng);
        if (o == EventOutcome::Undecided) acc.add_undecided();
        acc.add_event(o == EventOutcome::Hit);
      },
      [](Estimate& a, const Estimate& b) { a.merge(b); });
}

}  // namespace condwalk
