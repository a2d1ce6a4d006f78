#include <cmath>
#include <random>

#include "condwalk/errors.hpp"
#include "condwalk/estimate.hpp"
#include "condwalk/montecarlo.hpp"
#include "condwalk/report.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace condwalk;
using testsupport::model;

TEST_CASE("estimate: event statistics") {
  Estimate e;
  for (int i = 0; i < 10; ++i) e.add_event(i < 5);
  CHECK(e.trials() == 10);
  CHECK(e.mean() == 0.5);
  CHECK(e.std_error() == doctest::Approx(std::sqrt(0.025)));
  // 5 successes < 10: Wilson at z = 1.96
  CHECK(e.ci_lo() == doctest::Approx(0.2366).epsilon(1e-3));
  CHECK(e.ci_hi() == doctest::Approx(0.7634).epsilon(1e-3));

  Estimate none;
  for (int i = 0; i < 100; ++i) none.add_event(false);
  CHECK(none.mean() == 0.0);
  CHECK(none.std_error() == doctest::Approx(0.05));
  CHECK(none.ci_lo() == 0.0);
  CHECK(none.ci_hi() == doctest::Approx(3.8415 / 103.8415).epsilon(1e-3));

  double lo, hi;
  wilson_interval(0, 0, 1.96, lo, hi);
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);
  CHECK_THROWS_AS(e.add_value(1.0), ConfigError);
}

TEST_CASE("estimate: real statistics and range") {
  Estimate e(Estimate::Kind::Real);
  for (double v : {1.0, 2.0, 3.0, 4.0}) e.add_value(v);
  CHECK(e.mean() == doctest::Approx(2.5));
  // sample sd sqrt(5/3), over sqrt(4)
  CHECK(e.std_error() == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-9));
  CHECK_THROWS_AS(e.add_value(2e7), ConfigError);
  CHECK_THROWS_AS(e.add_value(std::nan("")), ConfigError);
  CHECK_THROWS_AS(e.add_event(true), ConfigError);
  Estimate ev;
  CHECK_THROWS_AS(e.merge(ev), ConfigError);
}

TEST_CASE("estimate: merging is exact in any order") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::vector<double> xs(999);
  for (auto& x : xs) x = u(gen);
  Estimate whole(Estimate::Kind::Real);
  for (double x : xs) whole.add_value(x);
  Estimate a(Estimate::Kind::Real), b(Estimate::Kind::Real), c(Estimate::Kind::Real);
  for (std::size_t i = 0; i < xs.size(); ++i) (i % 3 == 0 ? a : i % 3 == 1 ? b : c).add_value(xs[i]);
  Estimate left = a;
  left.merge(b).merge(c);
  Estimate right = c;
  Estimate bc = b;
  bc.merge(a);
  right.merge(bc);
  CHECK(left == whole);
  CHECK(right == whole);
  CHECK(left.mean() == whole.mean());
}

TEST_CASE("parallel_trials: result does not depend on the worker count") {
  auto run = [](unsigned workers) {
    return parallel_trials<Estimate>(
        10007, workers, [] { return Estimate(Estimate::Kind::Real); },
        [](Estimate& acc, std::uint64_t i) {
          auto r = RngStream::derive(5, 9, i);
          acc.add_value(static_cast<double>(r.next_u64() >> 40) / 7.0);
        },
        [](Estimate& x, const Estimate& y) { x.merge(y); });
  };
  const Estimate one = run(1);
  CHECK(one.trials() == 10007);
  CHECK(run(3) == one);
  CHECK(run(8) == one);

  CHECK_THROWS_AS(parallel_trials<Estimate>(
                      1000, 4, [] { return Estimate(); },
                      [](Estimate&, std::uint64_t i) {
                        if (i == 777) throw DomainError("boom");
                      },
                      [](Estimate& x, const Estimate& y) { x.merge(y); }),
                  DomainError);
}

TEST_CASE("montecarlo: estimates are reproducible across worker counts") {
  EstimatorConfig cfg;
  cfg.trials = 2000;
  cfg.truncation_radius = 1000;
  cfg.master_seed = 11;
  const auto r1 = estimate_return_prob(model(), {1, 0}, cfg);
  cfg.workers = 3;
  const auto r3 = estimate_return_prob(model(), {1, 0}, cfg);
  CHECK(r1.estimate == r3.estimate);
  CHECK(r1.exact.value == 0.5);
  CHECK(r1.estimate.mean() == doctest::Approx(0.5).epsilon(0.1));

  cfg.workers = 1;
  const auto g1 = estimate_green(model(), {1, 0}, {1, 0}, cfg);
  cfg.workers = 4;
  CHECK(estimate_green(model(), {1, 0}, {1, 0}, cfg).estimate == g1.estimate);
  CHECK(comparison_table({r1, g1}).text() == comparison_table({r3, g1}).text());
}

TEST_CASE("montecarlo: small comparisons agree with closed forms") {
  EstimatorConfig cfg;
  cfg.trials = 20000;
  cfg.truncation_radius = 1000;
  cfg.master_seed = 3;
  for (const auto& r : {estimate_return_prob(model(), {1, 1}, cfg), estimate_hit_prob(model(), {1, 0}, {-1, 0}, cfg),
                        estimate_escape_prob(model(), {40, 0}, 10, cfg),
                        estimate_annulus_escape(model(), {32, 0}, 10, 500, cfg),
                        estimate_srw_exit_before_hit(model(), {10, 0}, kOrigin, 500, cfg)}) {
    INFO(r.case_name);
    CHECK(r.z_score == 0.0);
    CHECK(!r.horizon_warning);
  }
}

TEST_CASE("montecarlo: configuration and domain errors") {
  EstimatorConfig cfg;
  cfg.trials = 10;
  CHECK_THROWS_AS(estimate_return_prob(model(), kOrigin, cfg), DomainError);
  CHECK_THROWS_AS(estimate_srw_exit_before_hit(model(), kOrigin, kOrigin, 100, cfg), DomainError);
  cfg.trials = 0;
  CHECK_THROWS_AS(estimate_return_prob(model(), {1, 0}, cfg), ConfigError);
  CHECK(stream_tag("a", {1, 2}) != stream_tag("a", {2, 1}));
  CHECK(stream_tag("a", {1}) != stream_tag("b", {1}));
}

TEST_CASE("report: gates and csv") {
  CHECK(make_gate("g", 1.0, "<=", 1.0).passed);
  CHECK(!make_gate("g", 1.0, "<", 1.0).passed);
  CHECK(make_gate("g", 2.0, ">", 1.0).passed);
  CHECK(make_gate("g", 1.0, ">=", 1.0).passed);
  CHECK(make_gate("g", 0.0, "==", 0.0).passed);
  CHECK(!make_gate("g", 1e-300, "==", 0.0).passed);
  CHECK(make_gate("g", 2.0, "in", 1.0, 3.0).passed);
  CHECK(!make_gate("g", 3.5, "in", 1.0, 3.0).passed);
  CHECK(!make_gate("g", std::nan(""), "<=", 1.0).passed);
  CHECK_THROWS_AS(make_gate("g", 1.0, "~", 1.0), ConfigError);

  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"x\"") == "\"say \"\"x\"\"\"");
  CsvTable t({"a", "b"});
  t.row({"1", "2"});
  CHECK(t.text() == "a,b\n1,2\n");
  CHECK_THROWS_AS(t.row({"1"}), ConfigError);
  CHECK(csv_number(0.5) == "0.5");
}
