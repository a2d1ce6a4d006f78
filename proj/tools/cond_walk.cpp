// cond-walk: command-line front end for the conditioned-walk library.
//
// Exit codes: 0 all gates passed, 1 a statistical gate failed, 2 usage or
// configuration error, 3 internal numerical failure.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "condwalk/errors.hpp"
#include "condwalk/experiments.hpp"
#include "condwalk/model.hpp"
#include "condwalk/montecarlo.hpp"
#include "condwalk/report.hpp"
#include "condwalk/theory.hpp"
#include "condwalk/verify.hpp"
#include "condwalk/walk.hpp"

using namespace condwalk;
namespace fs = std::filesystem;

namespace {

constexpr int kExitGate = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

LatticePoint parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("expected X1,X2 but got '" + s + "'");
  try {
    std::size_t a = 0, b = 0;
    const long long x1 = std::stoll(s.substr(0, comma), &a);
    const long long x2 = std::stoll(s.substr(comma + 1), &b);
    if (a != comma || b != s.size() - comma - 1) throw std::invalid_argument("trailing characters");
    return {x1, x2};
  } catch (const std::logic_error&) {
    throw ConfigError("expected X1,X2 but got '" + s + "'");
  }
}

struct Global {
  std::uint64_t seed = 0;
  unsigned workers = default_workers();
  std::string out;
  std::int64_t cache_radius = 1024;
  std::vector<std::string> argv;
};

std::shared_ptr<const PotentialTable> shared_table() {
  static auto t = std::make_shared<const PotentialTable>(PotentialTable::build());
  return t;
}

WalkModel make_model(const Global& g) {
  if (g.cache_radius < 1) throw ConfigError("--cache-radius must be positive");
  ModelOptions o;
  o.cache_radius = g.cache_radius;
  return WalkModel(shared_table(), o);
}

// Data to --out when given, else to standard output.
void emit(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_text(g.out, text);
  }
}

nlohmann::json run_json(const Global& g, const std::string& command, const EstimatorConfig& cfg) {
  return {{"command", command},     {"argv", g.argv},           {"seed", cfg.master_seed},
          {"workers", cfg.workers}, {"trials", cfg.trials},     {"horizon", cfg.horizon},
          {"out", g.out},           {"cache_radius", g.cache_radius}};
}

int finish_experiment(const Global& g, const std::string& command, const ExperimentReport& rep,
                      const EstimatorConfig& cfg) {
  if (g.out.empty()) throw ConfigError("exp commands need --out DIR");
  const fs::path dir(g.out);
  write_text(dir / (rep.name + ".csv"), rep.table.text());
  nlohmann::json s = rep.summary();
  s["run"] = run_json(g, command, cfg);
  write_text(dir / (rep.name + ".summary.json"), s.dump(2) + "\n");
  for (const auto& gate : rep.gates) {
    std::cerr << (gate.passed ? "pass " : "FAIL ") << gate.name << ": " << csv_number(gate.value) << ' '
              << gate.relation << ' ' << csv_number(gate.threshold);
    if (gate.relation == "in") std::cerr << ".." << csv_number(gate.threshold_hi);
    std::cerr << '\n';
  }
  return rep.passed() ? 0 : kExitGate;
}

void add_window_options(CLI::App* c, EncounterWindows& w, std::string& growth) {
  c->add_option("--windows", growth, "window growth: scaled (b0 g^k) or double-exp (floor(e^(3^k)))")->check(CLI::IsMember({"scaled", "double-exp"}));
  c->add_option("--b0", w.b0, "first window start (scaled)");
  c->add_option("--g", w.g, "window growth factor (scaled)");
  c->add_option("--k-max", w.k_max, "number of windows");
}

void apply_growth(EncounterWindows& w, const std::string& growth) {
  w.growth = growth == "double-exp" ? EncounterWindows::Growth::DoubleExp : EncounterWindows::Growth::Scaled;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simple random walk on Z^2 conditioned to avoid the origin"};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);
  app.add_option("--seed", g.seed, "master seed (default: $COND_WALK_SEED or 0)")->envname("COND_WALK_SEED");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output file (or directory for exp/verify)");
  app.add_option("--cache-radius", g.cache_radius, "half-width of the step-threshold cache");

  std::function<int()> action;

  // potential
  auto* pot = app.add_subcommand("potential", "potential kernel a(x)");
  pot->require_subcommand(1);
  double dump_radius = 0;
  auto* dump = pot->add_subcommand("dump", "CSV x1,x2,a,source over the disk of radius R");
  dump->add_option("--radius", dump_radius, "disk radius")->required();
  dump->callback([&] {
    action = [&] {
      if (!(dump_radius >= 0) || dump_radius > 1e5) throw ConfigError("--radius must lie in [0, 1e5]");
      const auto t = shared_table();
      const auto r = static_cast<std::int64_t>(dump_radius);
      const std::int64_t lim = closed_disk_threshold(dump_radius);
      std::string text = "x1,x2,a,source\n";
      for (std::int64_t x2 = -r; x2 <= r; ++x2) {
        for (std::int64_t x1 = -r; x1 <= r; ++x1) {
          const LatticePoint p{x1, x2};
          if (norm2(p) > lim) continue;
          text += std::to_string(x1) + ',' + std::to_string(x2) + ',' + csv_number(potential(p, *t)) + ',' +
                  (t->covers(p) ? "exact" : "asymptotic") + '\n';
        }
      }
      emit(g, text);
      return 0;
    };
  });
  std::int64_t qx1 = 0, qx2 = 0;
  auto* query = pot->add_subcommand("query", "print a(X1, X2)");
  query->add_option("X1", qx1)->required();
  query->add_option("X2", qx2)->required();
  query->callback([&] {
    action = [&] {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12f\n", potential({qx1, qx2}, *shared_table()));
      emit(g, buf);
      return 0;
    };
  });

  // walk sample
  auto* walk = app.add_subcommand("walk", "sample paths");
  walk->require_subcommand(1);
  std::string kind = "cond", start_s = "1,0";
  std::uint64_t steps = 0;
  auto* sample = walk->add_subcommand("sample", "CSV n,x1,x2 of one path");
  sample->add_option("--kind", kind)->check(CLI::IsMember({"srw", "cond"}));
  sample->add_option("--start", start_s, "X1,X2");
  sample->add_option("--steps", steps)->required();
  sample->callback([&] {
    action = [&] {
      const WalkKind k = kind == "srw" ? WalkKind::Srw : WalkKind::Conditioned;
      const LatticePoint s = parse_point(start_s);
      const WalkModel model = make_model(g);
      auto rng = RngStream::derive(g.seed, stream_tag("walk-sample", {static_cast<std::int64_t>(k), s.x1, s.x2}), 0);
      const Trajectory tr = sample_path(model.rule(), k, s, steps, rng);
      CsvTable t({"n", "x1", "x2"});
      for (std::size_t n = 0; n < tr.path.size(); ++n)
        t.row({std::to_string(n), std::to_string(tr.path[n].x1), std::to_string(tr.path[n].x2)});
      emit(g, t.text());
      return 0;
    };
  });

  // theory eval
  auto* theory = app.add_subcommand("theory", "closed-form quantities");
  theory->require_subcommand(1);
  std::string formula, tx_s = "1,0", ty_s = "0,0";
  double tn = 0, tr_ = 0, tL = 0, tK = kDefaultRemainder;
  auto* eval = theory->add_subcommand("eval", "print a closed form as JSON");
  eval->add_option("--formula", formula)
      ->required()
      ->check(CLI::IsMember({"return", "hit", "green", "escape", "annulus", "srw-exit", "lclt"}));
  eval->add_option("--x", tx_s, "X1,X2");
  eval->add_option("--y", ty_s, "X1,X2");
  eval->add_option("--n", tn, "escape radius (escape) or time (lclt)");
  eval->add_option("--r", tr_, "inner radius (annulus)");
  eval->add_option("--L", tL, "outer radius (annulus, srw-exit)");
  eval->add_option("--K", tK, "remainder constant of the bracket");
  eval->callback([&] {
    action = [&] {
      const auto t = shared_table();
      const LatticePoint x = parse_point(tx_s), y = parse_point(ty_s);
      BracketedValue v;
      nlohmann::json args{{"x", {x.x1, x.x2}}};
      if (formula == "return") {
        v = BracketedValue::exact(return_prob(x, *t));
      } else if (formula == "hit") {
        v = BracketedValue::exact(hit_prob(x, y, *t));
        args["y"] = {y.x1, y.x2};
      } else if (formula == "green") {
        v = BracketedValue::exact(green(x, y, *t));
        args["y"] = {y.x1, y.x2};
      } else if (formula == "escape") {
        v = escape_prob(x, tn, *t, tK);
        args["n"] = tn;
      } else if (formula == "annulus") {
        v = annulus_escape_prob(x, tr_, tL, *t, tK);
        args["r"] = tr_;
        args["L"] = tL;
      } else if (formula == "srw-exit") {
        v = srw_exit_before_hit(x, y, tL, *t, tK);
        args["y"] = {y.x1, y.x2};
        args["L"] = tL;
      } else {
        if (!(tn >= 2) || tn != std::floor(tn)) throw ConfigError("--n must be an integer >= 2 for lclt");
        v = BracketedValue::exact(lclt_prediction(static_cast<std::uint64_t>(tn), x, *t));
        args = {{"n", tn}, {"y", {x.x1, x.x2}}};
      }
      if (formula != "lclt" && formula != "return" && formula != "hit" && formula != "green") args["K"] = tK;
      nlohmann::json j{{"formula", formula}, {"args", args}, {"value", v.value}, {"sys_lo", v.sys_lo},
                       {"sys_hi", v.sys_hi}};
      emit(g, j.dump(2) + "\n");
      return 0;
    };
  });

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate against the closed form");
  mc->require_subcommand(1);
  EstimatorConfig mcfg;
  std::string mx_s = "1,0", my_s;
  double m_n = 10, m_r = 10, m_L = 1000;
  std::string mc_kind;
  for (const char* name : {"return", "hit", "green", "escape", "annulus", "srw-exit"}) {
    auto* c = mc->add_subcommand(name, std::string("estimate ") + name);
    c->add_option("--x", mx_s, "X1,X2");
    c->add_option("--y", my_s, "X1,X2");
    c->add_option("--trials", mcfg.trials);
    c->add_option("--radius", mcfg.truncation_radius, "truncation radius R");
    c->add_option("--horizon", mcfg.horizon, "transition cap per trial");
    c->add_option("--n", m_n, "escape radius (escape)");
    c->add_option("--r", m_r, "inner radius (annulus)");
    c->add_option("--L", m_L, "outer radius (annulus, srw-exit)");
    c->callback([&, name] {
      mc_kind = name;
      action = [&] {
        mcfg.master_seed = g.seed;
        mcfg.workers = g.workers;
        const WalkModel model = make_model(g);
        const LatticePoint x = parse_point(mx_s);
        auto y_or = [&](LatticePoint d) { return my_s.empty() ? d : parse_point(my_s); };
        ComparisonReport r;
        if (mc_kind == "return") r = estimate_return_prob(model, x, mcfg);
        else if (mc_kind == "hit") r = estimate_hit_prob(model, x, y_or({-1, 0}), mcfg);
        else if (mc_kind == "green") r = estimate_green(model, x, y_or(x), mcfg);
        else if (mc_kind == "escape") r = estimate_escape_prob(model, x, m_n, mcfg);
        else if (mc_kind == "annulus") r = estimate_annulus_escape(model, x, m_r, m_L, mcfg);
        else r = estimate_srw_exit_before_hit(model, x, y_or(kOrigin), m_L, mcfg);
        emit(g, comparison_table({r}).text());
        std::cerr << r.case_name << ": z = " << csv_number(r.z_score) << (r.horizon_warning ? " (horizon warning)" : "")
                  << '\n';
        return r.z_score > 0 ? kExitGate : 0;
      };
    });
  }

  // exp
  auto* exp = app.add_subcommand("exp", "statistical experiments");
  exp->require_subcommand(1);
  std::optional<std::uint64_t> etrials;
  auto ecfg = [&](std::uint64_t default_trials) {
    EstimatorConfig c;
    c.trials = etrials.value_or(default_trials);
    c.master_seed = g.seed;
    c.workers = g.workers;
    return c;
  };

  MinimumConfig minc;
  auto* emin = exp->add_subcommand("minimum", "future minimum M_n");
  emin->add_option("--trials", etrials, "trajectories (default 10^4)");
  emin->add_option("--delta", minc.delta);
  emin->add_option("--horizons", minc.horizons)->delimiter(',');
  emin->add_option("--far-radius", minc.far_radius);
  emin->add_option("--identity-every", minc.identity_every);
  emin->callback([&] {
    action = [&] {
      const auto c = ecfg(10000);
      return finish_experiment(g, "exp minimum", exp_minimum(make_model(g), minc, c), c);
    };
  });

  LcltConfig lcc;
  std::string lstart = "1,0";
  auto* elclt = exp->add_subcommand("lclt", "endpoint distribution against the local CLT");
  elclt->add_option("--trials", etrials, "walks (default 10^7)");
  elclt->add_option("--n", lcc.n);
  elclt->add_option("--start", lstart, "X1,X2");
  elclt->add_option("--M", lcc.M);
  elclt->add_option("--min-hits", lcc.min_hits);
  elclt->callback([&] {
    action = [&] {
      lcc.start = parse_point(lstart);
      const auto c = ecfg(10'000'000);
      return finish_experiment(g, "exp lclt", exp_lclt(make_model(g), lcc, c), c);
    };
  });

  EncounterConfig encc;
  std::string ex1 = "1,0", ex2 = "-1,0", egrowth = "scaled";
  auto* eenc = exp->add_subcommand("encounters", "meetings of two independent conditioned walks");
  eenc->add_option("--trials", etrials, "pairs (default 10^5)");
  eenc->add_option("--x1", ex1, "X1,X2");
  eenc->add_option("--x2", ex2, "X1,X2");
  eenc->add_option("--n-grid", encc.n_grid)->delimiter(',');
  eenc->add_option("--control-pairs", encc.control_pairs);
  add_window_options(eenc, encc.windows, egrowth);
  eenc->callback([&] {
    action = [&] {
      encc.x1 = parse_point(ex1);
      encc.x2 = parse_point(ex2);
      apply_growth(encc.windows, egrowth);
      const auto c = ecfg(100000);
      return finish_experiment(g, "exp encounters", exp_encounters(make_model(g), encc, c), c);
    };
  });

  SrwRecurrenceConfig srwc;
  std::string sstart = "1,0", sgrowth = "scaled";
  bool no_contrast = false;
  auto* esrw = exp->add_subcommand("srw-recurrence", "visits of simple random walk to the origin by window");
  esrw->add_option("--trials", etrials, "walks (default 10^5)");
  esrw->add_option("--start", sstart, "X1,X2");
  esrw->add_flag("--no-contrast", no_contrast, "skip the conditioned-walk contrast");
  add_window_options(esrw, srwc.windows, sgrowth);
  esrw->callback([&] {
    action = [&] {
      srwc.start = parse_point(sstart);
      srwc.conditioned_contrast = !no_contrast;
      apply_growth(srwc.windows, sgrowth);
      const auto c = ecfg(100000);
      return finish_experiment(g, "exp srw-recurrence", exp_srw_recurrence(make_model(g), srwc, c), c);
    };
  });

  ConfinementConfig conc;
  std::string cstart = "1,0";
  auto* econ = exp->add_subcommand("confinement", "tails of the exit time from B(r)");
  econ->add_option("--trials", etrials, "walks per radius (default 10^5)");
  econ->add_option("--radii", conc.radii)->delimiter(',');
  econ->add_option("--t-grid", conc.t_over_r2, "values of t / r^2")->delimiter(',');
  econ->add_option("--start", cstart, "X1,X2");
  econ->callback([&] {
    action = [&] {
      conc.start = parse_point(cstart);
      const auto c = ecfg(100000);
      return finish_experiment(g, "exp confinement", exp_confinement(make_model(g), conc, c), c);
    };
  });

  // verify
  auto* ver = app.add_subcommand("verify", "exact-identity suite");
  ver->callback([&] {
    action = [&] {
      const auto t = shared_table();
      auto gates = verify_potential(*t);
      for (auto& k : verify_kernel(*t)) gates.push_back(k);
      bool ok = true;
      nlohmann::json js = nlohmann::json::array();
      for (const auto& x : gates) {
        ok = ok && x.passed;
        js.push_back(to_json(x));
        std::cout << (x.passed ? "pass " : "FAIL ") << x.name << ": " << csv_number(x.value) << ' ' << x.relation << ' '
                  << csv_number(x.threshold) << '\n';
      }
      if (!g.out.empty()) {
        write_text(fs::path(g.out) / "verify.csv", gate_table(gates).text());
        nlohmann::json s{{"schema_version", kSchemaVersion},
                         {"name", "verify"},
                         {"gates", js},
                         {"passed", ok},
                         {"run", {{"command", "verify"}, {"argv", g.argv}, {"out", g.out}}}};
        write_text(fs::path(g.out) / "verify.summary.json", s.dump(2) + "\n");
      }
      return ok ? 0 : kExitGate;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
