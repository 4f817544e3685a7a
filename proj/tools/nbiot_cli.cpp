// nbiot: model dump, single-point optimization, sweeps, scenario simulation,
// solver benchmark and scalability tables.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nbiot/config.hpp"
#include "nbiot/report.hpp"

using namespace nbiot;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string output;
  std::string format = "csv";
  std::vector<std::string> overrides;
};

Scenario load(const Common &c) {
  json doc = json::object();
  std::string path = c.config;
  if (path.empty()) {
    if (const char *env = std::getenv(kConfigEnvVar)) path = env;
  }
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    doc = json::parse(in);
  }
  for (const auto &o : c.overrides) apply_override(doc, o);
  return scenario_from_json(doc);
}

// Write to a sibling temp file and rename, so a failed run leaves nothing behind.
void emit(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << text;
    out.close();
    if (!out) {
      fs::remove(tmp);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, target);
}

std::string dump(const json &doc) { return round_numbers(doc).dump(2) + "\n"; }

void add_common(CLI::App *app, Common &c) {
  app->add_option("-c,--config", c.config,
                  std::string("scenario JSON (default: $") + kConfigEnvVar + ")");
  app->add_option("-o,--output", c.output, "output file (default: stdout)");
  app->add_option("-f,--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app->add_option("-s,--set", c.overrides, "override a config key, e.g. --set n_ue=100")
      ->take_all();
}

std::vector<Strategy> parse_strategies(const std::vector<std::string> &names) {
  std::vector<Strategy> out;
  if (names.empty()) return {std::begin(kAllStrategies), std::end(kAllStrategies)};
  for (const auto &n : names) out.push_back(parse_strategy(n));
  return out;
}

// dump-model ---------------------------------------------------------------

void dump_model(const Common &c) {
  const Scenario scn = load(c);
  const json table = model_table(scn);
  if (c.format == "json") {
    emit(c.output, dump(table));
    return;
  }
  std::ostringstream out;
  out << "mcs,tbs_bits,transport_blocks,snr_threshold_linear,snr_threshold_db\n";
  const auto p = scn.problem(1.0);
  for (int m = kMcsMin; m <= kMcsMax; ++m) {
    const double thr = snr_threshold(m, scn.threshold);
    out << m << ',' << format_number(tbs_of_mcs(m, scn.tbs)) << ','
        << transport_blocks(m, p.delay, scn.tbs) << ',' << format_number(thr) << ','
        << format_number(linear_to_db(thr)) << '\n';
  }
  emit(c.output, out.str());
}

// optimize -----------------------------------------------------------------

struct OptimizeArgs {
  std::optional<double> k3;
  std::optional<double> snr_db;
  std::optional<double> distance_km;
  bool indoor = false;
  std::string strategy;
  std::string solver;
};

void optimize(const Common &c, const OptimizeArgs &a) {
  const Scenario scn = load(c);
  double k3 = 0.0;
  if (a.k3) k3 = *a.k3;
  if (a.snr_db) k3 = db_to_linear(*a.snr_db);
  if (a.distance_km) {
    if (!(*a.distance_km > 0.0)) throw CLI::ValidationError("--distance-km", "must be positive");
    k3 = ue_k3(scn, *a.distance_km * 1000.0, a.indoor);
  }
  if (!(k3 > 0.0) || !std::isfinite(k3)) throw CLI::ValidationError("--k3", "must be positive");

  const Strategy strategy = a.strategy.empty() ? scn.strategy : parse_strategy(a.strategy);
  AdaptationOutcome out;
  if (!a.solver.empty()) {
    if (strategy != Strategy::hybrid_lagrange && strategy != Strategy::hybrid_exhaustive) {
      throw CLI::ValidationError("--solver", "applies to hybrid strategies only");
    }
    Solver s;
    if (a.solver == "exhaustive") {
      s = Solver::exhaustive;
    } else if (a.solver == "lagrange") {
      s = Solver::lagrange;
    } else {
      s = Solver::numeric_kkt;
    }
    out = solve(scn.problem(k3), s);
  } else {
    const auto start = std::chrono::steady_clock::now();
    out = adapt_link(k3, strategy, scn);
    out.solve_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  if (c.format == "json") {
    json j = to_json(out);
    j["k3"] = k3;
    j["snr_db"] = linear_to_db(k3);
    j["strategy"] = to_string(strategy);
    if (a.distance_km) {
      j["distance_km"] = *a.distance_km;
      j["indoor"] = a.indoor;
      j["extrapolated_pathloss"] = beyond_hata_validity(*a.distance_km);
    }
    emit(c.output, dump(j));
    return;
  }
  std::ostringstream s;
  const BenchmarkRow row{k3, out};
  write_outcome_csv(s, std::span(&row, 1));
  emit(c.output, s.str());
}

// sweep --------------------------------------------------------------------

struct SweepArgs {
  std::string over = "zones";
  double from = 0.0;
  double to = 0.0;
  std::size_t n = 0;
  std::vector<std::string> strategies;
};

void sweep(const Common &c, const SweepArgs &a) {
  const Scenario scn = load(c);
  std::vector<SweepPoint> points;
  if (a.over == "zones") {
    points = zone_sweep_points(scn);
  } else {
    if (a.n == 0 || !(a.from > 0.0) || !(a.to >= a.from)) {
      throw CLI::ValidationError("--from/--to/--n", "need 0 < from <= to and n >= 1");
    }
    points = a.over == "distance" ? distance_sweep_points(scn, a.from, a.to, a.n)
                                  : k3_sweep_points(a.from, a.to, a.n);
  }
  const auto rows = run_sweep(scn, points, parse_strategies(a.strategies));
  if (c.format == "json") {
    json arr = json::array();
    for (const auto &r : rows) {
      json j = to_json(r.outcome);
      j.erase("solve_time_s");
      j["point"] = r.point;
      j["k3"] = r.at.k3;
      j["distance_km"] = r.at.distance_km ? json(*r.at.distance_km) : json(nullptr);
      j["strategy"] = to_string(r.strategy);
      j["sim_delay_ms"] = r.sim_delay_ms;
      j["delivered"] = r.delivered;
      arr.push_back(j);
    }
    emit(c.output, dump({{"rows", arr}}));
    return;
  }
  std::ostringstream s;
  write_sweep_csv(s, rows);
  emit(c.output, s.str());
}

// simulate -----------------------------------------------------------------

void simulate(const Common &c, const std::string &raw) {
  const Scenario scn = load(c);
  const auto res = run_scenario(scn, {.keep_records = !raw.empty()});
  if (res.extrapolated_pathloss) {
    std::cerr << "warning: some UEs lie beyond " << kHataMaxDistanceKm
              << " km; path loss is extrapolated\n";
  }
  std::ostringstream s;
  if (c.format == "json") {
    s << dump(to_json(res, scn));
  } else {
    write_zone_csv(s, res);
  }
  if (!raw.empty()) {
    std::ostringstream r;
    write_record_csv(r, res.records);
    emit(raw, r.str());
  }
  emit(c.output, s.str());
}

// bench --------------------------------------------------------------------

struct BenchArgs {
  std::size_t points = 1000;
  int repetitions = 5;
  bool no_numeric = false;
  std::string summary;
};

void bench(const Common &c, const BenchArgs &a) {
  const Scenario scn = load(c);
  if (a.points == 0) throw CLI::ValidationError("--points", "must be at least 1");
  const auto base = scn.problem(1.0);
  const auto k3 = default_k3_sweep(a.points, base);
  const auto result = benchmark_solvers(k3, base, {a.repetitions, !a.no_numeric});
  const json summary = to_json(result, a.points, a.repetitions);
  if (!a.summary.empty()) emit(a.summary, dump(summary));
  if (c.format == "json") {
    emit(c.output, dump(summary));
    return;
  }
  std::ostringstream s;
  write_outcome_csv(s, result.rows);
  emit(c.output, s.str());
}

// scalability --------------------------------------------------------------

void scalability(const Common &c, int far_zones) {
  Scenario scn = load(c);
  if (far_zones > 0) scn = far_zone_scenario(scn, far_zones);
  const auto rows = run_scalability(scn);
  if (c.format == "json") {
    emit(c.output, dump(to_json(rows, scn)));
    return;
  }
  std::ostringstream s;
  write_scalability_csv(s, rows);
  emit(c.output, s.str());
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"NB-IoT uplink link adaptation: delay model, optimizers and zone simulator"};
  app.require_subcommand(1);

  Common common;

  auto *dm = app.add_subcommand("dump-model", "value sets, fits and per-MCS table");
  add_common(dm, common);

  OptimizeArgs oa;
  auto *op = app.add_subcommand("optimize", "best configuration for one link");
  add_common(op, common);
  auto *k3_opt = op->add_option("--k3", oa.k3, "linear SNR at full bandwidth, one repetition");
  auto *snr_opt = op->add_option("--snr-db", oa.snr_db, "the same quantity in dB");
  auto *dist_opt = op->add_option("--distance-km", oa.distance_km, "derive k3 from the channel");
  k3_opt->excludes(snr_opt)->excludes(dist_opt);
  snr_opt->excludes(dist_opt);
  op->add_flag("--indoor", oa.indoor, "indoor UE (urban building loss)")->needs(dist_opt);
  op->add_option("--strategy", oa.strategy,
                 "mcs, tone, repetition, hybrid-lagrange, hybrid-exhaustive");
  op->add_option("--solver", oa.solver, "hybrid only: exhaustive, lagrange, numeric-kkt")
      ->transform([](std::string s) {
        std::replace(s.begin(), s.end(), '-', '_');
        return s;
      })
      ->check(CLI::IsMember({"exhaustive", "lagrange", "numeric_kkt"}));

  SweepArgs sa;
  auto *sw = app.add_subcommand("sweep", "one row per (point, strategy)");
  add_common(sw, common);
  sw->add_option("--over", sa.over, "zones, distance (km) or k3")
      ->check(CLI::IsMember({"zones", "distance", "k3"}));
  sw->add_option("--from", sa.from, "range start");
  sw->add_option("--to", sa.to, "range end");
  sw->add_option("--n", sa.n, "number of points");
  sw->add_option("--strategies", sa.strategies, "subset of strategies (default: all)")
      ->delimiter(',');

  std::string raw;
  auto *sim = app.add_subcommand("simulate", "zone statistics over all runs");
  add_common(sim, common);
  sim->add_option("--raw", raw, "also write one CSV row per UE and run to this file");

  BenchArgs ba;
  auto *be = app.add_subcommand("bench", "solver accuracy and speed against exhaustive search");
  add_common(be, common);
  be->add_option("--points", ba.points, "log-spaced k3 values");
  be->add_option("--repetitions", ba.repetitions, "timed sweeps per solver")
      ->check(CLI::PositiveNumber);
  be->add_flag("--no-numeric", ba.no_numeric, "skip the numeric KKT solver");
  be->add_option("--summary", ba.summary, "write the summary JSON here");

  int far_zones = 3;
  auto *sc = app.add_subcommand("scalability", "maximum supported users per strategy");
  add_common(sc, common);
  sc->add_option("--far-zones", far_zones, "keep only the last N zones (0: all)")
      ->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dm) {
      dump_model(common);
    } else if (*op) {
      if (!oa.k3 && !oa.snr_db && !oa.distance_km) {
        throw CLI::RequiredError("one of --k3, --snr-db, --distance-km");
      }
      optimize(common, oa);
    } else if (*sw) {
      sweep(common, sa);
    } else if (*sim) {
      simulate(common, raw);
    } else if (*be) {
      bench(common, ba);
    } else if (*sc) {
      scalability(common, far_zones);
    }
  } catch (const CLI::Error &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
