// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--out DIR] [criterion ...]
//
// With no criteria listed, runs 1-8. Criterion 8 re-runs whichever of 1-7
// were selected with 8 workers and compares the CSV bytes with the 1-worker
// run. Exit status is 0 only if every selected criterion passed.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "condwalk/experiments.hpp"
#include "condwalk/model.hpp"
#include "condwalk/montecarlo.hpp"
#include "condwalk/report.hpp"
#include "condwalk/verify.hpp"

using namespace condwalk;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240607;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool passed = false;
  std::string detail;
  std::string csv;  // for the determinism comparison
};

std::string fmt(double v) { return csv_number(v); }

std::string gate_text(const Gate& g) {
  std::string s = g.name + "=" + fmt(g.value) + (g.passed ? "" : "(FAIL)");
  return s;
}

// Criterion verdict from the named gates of a report plus a runtime cap.
Outcome judge(const ExperimentReport& rep, const std::function<bool(const std::string&)>& relevant, double secs,
              double cap) {
  Outcome o;
  o.passed = secs < cap;
  std::string others;
  for (const auto& g : rep.gates) {
    if (relevant(g.name)) {
      o.passed = o.passed && g.passed;
      o.detail += gate_text(g) + " ";
    } else if (!g.passed) {
      others += gate_text(g) + " ";
    }
  }
  o.detail += "runtime=" + fmt(secs) + "s(cap " + fmt(cap) + ")";
  if (!others.empty()) o.detail += " [other gates: " + others + "]";
  o.csv = rep.table.text();
  return o;
}

bool starts_with(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

struct Context {
  const WalkModel& model;
  fs::path out;
};

Outcome criterion1(const Context& ctx, unsigned) {
  const auto t0 = Clock::now();
  const auto table = PotentialTable::build();
  const auto gates = verify_potential(table);
  const double secs = seconds_since(t0);
  Outcome o;
  o.passed = secs < 30.0;
  for (const auto& g : gates) {
    o.passed = o.passed && g.passed;
    o.detail += gate_text(g) + " ";
  }
  o.detail += "runtime=" + fmt(secs) + "s(cap 30)";
  o.csv = gate_table(gates).text();
  (void)ctx;
  return o;
}

Outcome criterion2(const Context& ctx, unsigned) {
  const auto t0 = Clock::now();
  const auto gates = verify_kernel(ctx.model.table());
  const double secs = seconds_since(t0);
  Outcome o;
  o.passed = secs < 5.0;
  for (const auto& g : gates) {
    o.passed = o.passed && g.passed;
    o.detail += gate_text(g) + " ";
  }
  o.detail += "runtime=" + fmt(secs) + "s(cap 5)";
  o.csv = gate_table(gates).text();
  return o;
}

Outcome criterion3(const Context& ctx, unsigned workers) {
  EstimatorConfig cfg;
  cfg.trials = 100000;
  cfg.truncation_radius = 1e4;
  cfg.master_seed = kSeed;
  cfg.workers = workers;
  const auto& m = ctx.model;
  const auto t0 = Clock::now();
  std::vector<ComparisonReport> r;
  r.push_back(estimate_return_prob(m, {1, 0}, cfg));
  r.push_back(estimate_return_prob(m, {1, 1}, cfg));
  r.push_back(estimate_hit_prob(m, {1, 0}, {-1, 0}, cfg));
  r.push_back(estimate_hit_prob(m, {1, 0}, {200, 0}, cfg));
  r.push_back(estimate_green(m, {1, 0}, {1, 0}, cfg));
  r.push_back(estimate_escape_prob(m, {100, 0}, 10, cfg));
  r.push_back(estimate_annulus_escape(m, {32, 0}, 10, 1000, cfg));
  r.push_back(estimate_srw_exit_before_hit(m, {10, 0}, kOrigin, 1e4, cfg));
  const double secs = seconds_since(t0);
  int positive = 0;
  bool over2 = false;
  Outcome o;
  for (const auto& c : r) {
    if (c.z_score > 0) ++positive;
    if (c.z_score > 2) over2 = true;
    o.detail += c.case_name + ":z=" + fmt(c.z_score) + (c.horizon_warning ? "(horizon)" : "") + " ";
  }
  o.passed = positive <= 1 && !over2 && secs < 600.0;
  o.detail += "runtime=" + fmt(secs) + "s(cap 600)";
  o.csv = comparison_table(r).text();
  return o;
}

EstimatorConfig exp_cfg(std::uint64_t trials, unsigned workers) {
  EstimatorConfig c;
  c.trials = trials;
  c.master_seed = kSeed;
  c.workers = workers;
  return c;
}

void save(const Context& ctx, unsigned workers, const ExperimentReport& rep) {
  const fs::path dir = ctx.out / ("w" + std::to_string(workers));
  write_text(dir / (rep.name + ".csv"), rep.table.text());
  write_text(dir / (rep.name + ".summary.json"), rep.summary().dump(2) + "\n");
}

Outcome criterion4(const Context& ctx, unsigned workers) {
  const auto t0 = Clock::now();
  const auto rep = exp_lclt(ctx.model, LcltConfig{}, exp_cfg(10'000'000, workers));
  const double secs = seconds_since(t0);
  save(ctx, workers, rep);
  return judge(
      rep, [](const std::string& n) { return n == "wrong_parity_hits" || n == "ratio_spread" || n == "uniform_bound"; },
      secs, 900.0);
}

Outcome criterion5(const Context& ctx, unsigned workers) {
  const auto t0 = Clock::now();
  const auto rep = exp_minimum(ctx.model, MinimumConfig{}, exp_cfg(10000, workers));
  const double secs = seconds_since(t0);
  save(ctx, workers, rep);
  return judge(
      rep,
      [](const std::string& n) { return starts_with(n, "factor_") || starts_with(n, "identity_"); }, secs, 1200.0);
}

Outcome criterion6(const Context& ctx, unsigned workers) {
  const auto t0 = Clock::now();
  const auto rep = exp_encounters(ctx.model, EncounterConfig{}, exp_cfg(100000, workers));
  const double secs = seconds_since(t0);
  save(ctx, workers, rep);
  return judge(
      rep,
      [](const std::string& n) { return n == "flatness" || starts_with(n, "window_") || n == "control_meetings"; },
      secs, 1800.0);
}

Outcome criterion7(const Context& ctx, unsigned workers) {
  const auto t0 = Clock::now();
  const auto rep = exp_confinement(ctx.model, ConfinementConfig{}, exp_cfg(100000, workers));
  const double secs = seconds_since(t0);
  save(ctx, workers, rep);
  return judge(
      rep,
      [](const std::string& n) { return starts_with(n, "slope_") || starts_with(n, "r2_"); }, secs, 600.0);
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = "acceptance_output";
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      out = argv[++i];
    } else {
      const int c = std::atoi(a.c_str());
      if (c < 1 || c > 8) {
        std::cerr << "usage: acceptance [--out DIR] [criterion 1..8 ...]\n";
        return 2;
      }
      chosen.insert(c);
    }
  }
  if (chosen.empty()) chosen = {1, 2, 3, 4, 5, 6, 7, 8};

  ModelOptions opts;
  opts.cache_radius = 1024;
  const WalkModel model(opts);
  const Context ctx{model, out};

  const std::map<int, std::function<Outcome(const Context&, unsigned)>> runs{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}};

  bool all = true;
  std::map<int, std::string> csv1;
  auto report = [&](int c, const Outcome& o) {
    std::printf("criterion %d: %s  %s\n", c, o.passed ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.passed;
  };
  for (int c = 1; c <= 7; ++c) {
    if (!chosen.count(c)) continue;
    Outcome o;
    try {
      o = runs.at(c)(ctx, 1);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    csv1[c] = o.csv;
    report(c, o);
  }
  if (chosen.count(8)) {
    Outcome o;
    o.passed = true;
    for (int c = 1; c <= 7; ++c) {
      if (!chosen.count(c)) continue;
      try {
        const Outcome w8 = runs.at(c)(ctx, 8);
        const bool same = !csv1[c].empty() && w8.csv == csv1[c];
        o.passed = o.passed && same;
        o.detail += "c" + std::to_string(c) + (same ? ":identical " : ":DIFFERENT ");
      } catch (const std::exception& e) {
        o.passed = false;
        o.detail += "c" + std::to_string(c) + ":exception(" + e.what() + ") ";
      }
    }
    if (o.detail.empty()) o.detail = "no criteria among 1-7 selected";
    report(8, o);
  }
  return all ? 0 : 1;
}
