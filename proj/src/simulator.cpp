#include "nbiot/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nbiot {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::mcs_only:
      return "mcs_only";
    case Strategy::tone_only:
      return "tone_only";
    case Strategy::repetition_only:
      return "repetition_only";
    case Strategy::hybrid_lagrange:
      return "hybrid_lagrange";
    case Strategy::hybrid_exhaustive:
      return "hybrid_exhaustive";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  std::string n(name);
  std::replace(n.begin(), n.end(), '-', '_');
  if (n == "mcs" || n == "mcs_only") return Strategy::mcs_only;
  if (n == "tone" || n == "tones" || n == "tone_only") return Strategy::tone_only;
  if (n == "repetition" || n == "repetitions" || n == "repetition_only") {
    return Strategy::repetition_only;
  }
  if (n == "hybrid" || n == "lagrange" || n == "hybrid_lagrange") return Strategy::hybrid_lagrange;
  if (n == "exhaustive" || n == "hybrid_exhaustive") return Strategy::hybrid_exhaustive;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

bool allocates_subcarriers(Strategy s) {
  return s == Strategy::tone_only || s == Strategy::hybrid_lagrange ||
         s == Strategy::hybrid_exhaustive;
}

std::string_view to_string(Area a) { return a == Area::open_area ? "open_area" : "urban"; }

Area parse_area(std::string_view name) {
  if (name == "open_area" || name == "open-area" || name == "open") return Area::open_area;
  if (name == "urban") return Area::urban;
  throw std::invalid_argument("unknown area '" + std::string(name) + "'");
}

std::vector<Zone> default_zones() {
  return {{0, 200},     {200, 200},   {600, 200},   {800, 200},   {1000, 500},  {2000, 500},
          {2500, 250},  {2750, 250},  {3000, 500},  {3500, 500},  {4000, 1000}, {5000, 1000},
          {6000, 1000}, {8000, 1000}, {9000, 1000}, {10000, 1000}};
}

OptimizationProblem Scenario::problem(double k3) const {
  OptimizationProblem p;
  p.radio = RadioContext::from_k3(k3);
  p.delay = delay;
  p.delay.data_length_bits = 8.0 * packet_size_bytes;
  p.tbs = tbs;
  p.threshold = threshold;
  p.tones = tones;
  return p;
}

Scenario Scenario::open_area() {
  Scenario s;
  s.area = Area::open_area;
  s.pathloss.variant = PathlossVariant::open_area_hata;
  s.budget.extra_loss_db = 17.0;
  return s;
}

Scenario Scenario::urban() {
  Scenario s = open_area();
  s.area = Area::urban;
  s.pathloss.variant = PathlossVariant::urban_hata_with_buildings;
  return s;
}

void validate(const Scenario &scn) {
  if (scn.n_ue < 1) throw std::invalid_argument("n_ue must be at least 1");
  if (scn.n_runs < 1) throw std::invalid_argument("n_runs must be at least 1");
  if (scn.packet_size_bytes <= 0) throw std::invalid_argument("packet_size must be positive");
  if (!(scn.reporting_period_s > 0.0)) {
    throw std::invalid_argument("reporting_period must be positive");
  }
  if (scn.n_subcarriers < 1) throw std::invalid_argument("n_subcarriers must be at least 1");
  if (scn.zones.empty()) throw std::invalid_argument("at least one zone is required");
  for (std::size_t i = 0; i < scn.zones.size(); ++i) {
    const auto &z = scn.zones[i];
    if (!(z.start_m >= 0.0) || !(z.width_m > 0.0)) {
      throw std::invalid_argument("zone " + std::to_string(i + 1) + " has invalid bounds");
    }
    if (i > 0 && z.start_m < scn.zones[i - 1].end_m()) {
      throw std::invalid_argument("zones " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                  " overlap or are out of order");
    }
  }
  validate(scn.pathloss);
  validate(scn.budget);
  validate(scn.delay);
  if (scn.area == Area::open_area && scn.pathloss.variant != PathlossVariant::open_area_hata) {
    throw std::invalid_argument("open area scenario needs the open-area path-loss model");
  }
}

std::uint64_t run_seed(std::uint64_t scenario_seed, int run) {
  // splitmix64 finalizer
  std::uint64_t z = scenario_seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(run) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

double ue_k3(const Scenario &scn, double distance_m, bool indoor) {
  return k3_of(scn.budget, pathloss_db(scn.pathloss, distance_m / 1000.0, indoor));
}

std::vector<UeState> deploy(const Scenario &scn, int run) {
  std::mt19937_64 rng(run_seed(scn.seed, run));
  const auto zones = static_cast<int>(scn.zones.size());
  const int share = scn.n_ue / zones;
  const int remainder = scn.n_ue % zones;
  const bool urban = scn.area == Area::urban;

  std::vector<UeState> ues;
  ues.reserve(static_cast<std::size_t>(scn.n_ue));
  for (int z = 0; z < zones; ++z) {
    const int count = share + (z < remainder ? 1 : 0);
    const auto &zone = scn.zones[static_cast<std::size_t>(z)];
    for (int i = 0; i < count; ++i) {
      UeState ue;
      ue.id = static_cast<int>(ues.size());
      ue.zone = z;
      // (start, end]: keeps the distance strictly positive in the first zone.
      ue.distance_m = zone.start_m + zone.width_m * (1.0 - uniform01(rng));
      ue.indoor = urban && uniform01(rng) < scn.pathloss.indoor_fraction;
      ue.k3 = ue_k3(scn, ue.distance_m, ue.indoor);
      ues.push_back(ue);
    }
  }
  return ues;
}

namespace {

template <typename Range, typename MakeConfig>
AdaptationOutcome scan_until_feasible(const Range &values, MakeConfig make,
                                      const OptimizationProblem &p) {
  AdaptationOutcome out;
  out.solver = Solver::single_parameter;
  for (const int v : values) {
    out.config = make(v);
    ++out.evaluations;
    if (is_feasible(p.radio, out.config, p.threshold)) {
      out.feasible = true;
      break;
    }
  }
  out.delay_ms = transmission_delay(out.config, p.delay, p.tbs);
  return out;
}

constexpr int kMcsDescending[] = {12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 0};

}  // namespace

AdaptationOutcome adapt_link(double k3, Strategy strategy, const Scenario &scn,
                             const LagrangeOptimizer &lagrange) {
  const OptimizationProblem p = scn.problem(k3);
  switch (strategy) {
    case Strategy::mcs_only:
      return scan_until_feasible(kMcsDescending, [](int m) { return LinkConfig{m, 1, 1}; }, p);
    case Strategy::tone_only:
      return scan_until_feasible(kTimeFactors, [](int t) { return LinkConfig{kMcsMax, t, 1}; }, p);
    case Strategy::repetition_only:
      return scan_until_feasible(kRepetitions, [](int r) { return LinkConfig{kMcsMax, 1, r}; }, p);
    case Strategy::hybrid_lagrange:
      return lagrange(p);
    case Strategy::hybrid_exhaustive:
      return exhaustive_search(p);
  }
  throw std::logic_error("unknown strategy");
}

AdaptationOutcome adapt_link(double k3, Strategy strategy, const Scenario &scn) {
  return adapt_link(k3, strategy, scn, LagrangeOptimizer(scn.tones));
}

UeRecord simulate_ue(const UeState &ue, int run, Strategy strategy, const Scenario &scn,
                     const LagrangeOptimizer &lagrange) {
  const AdaptationOutcome outcome = adapt_link(ue.k3, strategy, scn, lagrange);
  const LinkConfig &cfg = outcome.config;
  const OptimizationProblem p = scn.problem(ue.k3);

  UeRecord rec;
  rec.run = run;
  rec.ue = ue.id;
  rec.zone = ue.zone;
  rec.distance_m = ue.distance_m;
  rec.indoor = ue.indoor;
  rec.k3 = ue.k3;
  rec.config = cfg;
  rec.feasible = outcome.feasible;
  const double per_repetition = ue.k3 * freq_factor(cfg.time_factor);
  rec.delivered = packet_delivered(aggregate_snr(per_repetition, cfg.repetitions), cfg.mcs,
                                   scn.threshold);
  rec.delay_ms = transmission_delay(cfg, p.delay, p.tbs);
  rec.subcarriers =
      allocates_subcarriers(strategy) ? subcarriers_used(cfg.time_factor) : 12.0;
  return rec;
}

namespace {

struct ZoneAccumulator {
  double mcs = 0.0;
  double tones = 0.0;
  double time_factor = 0.0;
  double repetitions = 0.0;
  double subcarriers = 0.0;
  double delay = 0.0;
  long delivered = 0;
  long n = 0;
  bool extrapolated = false;

  void add(const UeRecord &r) {
    mcs += r.config.mcs;
    tones += tone_count(r.config.time_factor);
    time_factor += r.config.time_factor;
    repetitions += r.config.repetitions;
    subcarriers += r.subcarriers;
    delay += r.delay_ms;
    delivered += r.delivered ? 1 : 0;
    ++n;
    extrapolated = extrapolated || beyond_hata_validity(r.distance_m / 1000.0);
  }

  void merge(const ZoneAccumulator &o) {
    mcs += o.mcs;
    tones += o.tones;
    time_factor += o.time_factor;
    repetitions += o.repetitions;
    subcarriers += o.subcarriers;
    delay += o.delay;
    delivered += o.delivered;
    n += o.n;
    extrapolated = extrapolated || o.extrapolated;
  }
};

struct RunResult {
  std::vector<ZoneAccumulator> zones;
  std::vector<UeRecord> records;
};

RunResult simulate_run(const Scenario &scn, int run, const LagrangeOptimizer &lagrange,
                       bool keep_records) {
  RunResult out;
  out.zones.resize(scn.zones.size());
  const auto ues = deploy(scn, run);
  if (keep_records) out.records.reserve(ues.size());
  for (const auto &ue : ues) {
    const UeRecord rec = simulate_ue(ue, run, scn.strategy, scn, lagrange);
    out.zones[static_cast<std::size_t>(ue.zone)].add(rec);
    if (keep_records) out.records.push_back(rec);
  }
  return out;
}

ScenarioResult reduce(const Scenario &scn, std::vector<RunResult> &runs, bool keep_records) {
  std::vector<ZoneAccumulator> total(scn.zones.size());
  ScenarioResult result;
  for (auto &run : runs) {
    for (std::size_t z = 0; z < total.size(); ++z) total[z].merge(run.zones[z]);
    if (keep_records) {
      result.records.insert(result.records.end(), run.records.begin(), run.records.end());
    }
  }
  ZoneAccumulator all;
  for (std::size_t z = 0; z < total.size(); ++z) {
    const auto &acc = total[z];
    all.merge(acc);
    ZoneReport rep;
    rep.zone = static_cast<int>(z) + 1;
    rep.start_m = scn.zones[z].start_m;
    rep.n = acc.n;
    if (acc.n > 0) {
      const auto n = static_cast<double>(acc.n);
      rep.mean_mcs = acc.mcs / n;
      rep.mean_tones = acc.tones / n;
      rep.mean_time_factor = acc.time_factor / n;
      rep.mean_repetitions = acc.repetitions / n;
      rep.mean_subcarriers = acc.subcarriers / n;
      rep.pdr = static_cast<double>(acc.delivered) / n;
      rep.mean_delay_ms = acc.delay / n;
    }
    result.zones.push_back(rep);
  }
  result.n = all.n;
  if (all.n > 0) {
    const auto n = static_cast<double>(all.n);
    result.mean_delay_ms = all.delay / n;
    result.mean_subcarriers = all.subcarriers / n;
    result.pdr = static_cast<double>(all.delivered) / n;
  }
  result.extrapolated_pathloss = all.extrapolated;
  return result;
}

}  // namespace

ScenarioResult run_scenario_serial(const Scenario &scn, const RunOptions &options) {
  validate(scn);
  const LagrangeOptimizer lagrange(scn.tones);
  std::vector<RunResult> runs(static_cast<std::size_t>(scn.n_runs));
  for (int run = 0; run < scn.n_runs; ++run) {
    runs[static_cast<std::size_t>(run)] = simulate_run(scn, run, lagrange, options.keep_records);
  }
  return reduce(scn, runs, options.keep_records);
}

ScenarioResult run_scenario(const Scenario &scn, const RunOptions &options) {
  validate(scn);
  const LagrangeOptimizer lagrange(scn.tones);
  std::vector<RunResult> runs(static_cast<std::size_t>(scn.n_runs));
#pragma omp parallel for schedule(dynamic)
  for (int run = 0; run < scn.n_runs; ++run) {
    runs[static_cast<std::size_t>(run)] = simulate_run(scn, run, lagrange, options.keep_records);
  }
  return reduce(scn, runs, options.keep_records);
}

int max_reliable_zone(const ScenarioResult &result, double min_pdr) {
  int best = 0;
  for (const auto &z : result.zones) {
    if (z.n > 0 && z.pdr >= min_pdr) best = std::max(best, z.zone);
  }
  return best;
}

long max_users(double delay_ue_ms, double reporting_period_s, double n_subcarriers,
               double subcarriers_per_user) {
  if (!(delay_ue_ms > 0.0)) throw std::domain_error("per-user delay must be positive");
  if (!(subcarriers_per_user > 0.0)) {
    throw std::domain_error("subcarriers per user must be positive");
  }
  if (!(reporting_period_s >= 0.0) || !(n_subcarriers >= 0.0)) {
    throw std::domain_error("reporting period and subcarrier count must be non-negative");
  }
  const auto slots = static_cast<long>(std::floor(reporting_period_s * 1000.0 / delay_ue_ms));
  const auto sharing = static_cast<long>(std::floor(n_subcarriers / subcarriers_per_user));
  return slots * sharing;
}

Scenario far_zone_scenario(const Scenario &base, int zones) {
  if (zones < 1 || static_cast<std::size_t>(zones) > base.zones.size()) {
    throw std::invalid_argument("far-zone count must be between 1 and the number of zones");
  }
  Scenario s = base;
  const auto keep = static_cast<std::size_t>(zones);
  s.zones.assign(base.zones.end() - static_cast<std::ptrdiff_t>(keep), base.zones.end());
  return s;
}

std::vector<ScalabilityRow> run_scalability(const Scenario &scn) {
  std::vector<ScalabilityRow> rows;
  for (const Strategy strategy : kAllStrategies) {
    Scenario s = scn;
    s.strategy = strategy;
    const bool simulate = s.n_ue <= kMaxSimulatedUsers;
    const ScenarioResult res = run_scenario(s, {.keep_records = simulate});

    ScalabilityRow row;
    row.strategy = strategy;
    row.mean_delay_ms = res.mean_delay_ms;
    row.subcarriers_per_user = res.mean_subcarriers;
    row.max_users =
        max_users(res.mean_delay_ms, s.reporting_period_s, s.n_subcarriers, res.mean_subcarriers);
    if (simulate) {
      // Pack run 0's delivered UEs into one reporting period of the subcarrier grid.
      const double capacity = s.reporting_period_s * 1000.0 * s.n_subcarriers;
      double used = 0.0;
      long fitted = 0;
      for (const auto &rec : res.records) {
        if (rec.run != 0) break;
        if (!rec.delivered) continue;
        used += rec.delay_ms * rec.subcarriers;
        if (used > capacity) break;
        ++fitted;
      }
      row.simulated_supported = fitted;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepPoint> zone_sweep_points(const Scenario &scn) {
  std::vector<SweepPoint> out;
  for (const auto &z : scn.zones) {
    const double d = z.start_m + 0.5 * z.width_m;
    out.push_back({ue_k3(scn, d, false), d / 1000.0});
  }
  return out;
}

std::vector<SweepPoint> distance_sweep_points(const Scenario &scn, double lo_km, double hi_km,
                                              std::size_t n) {
  if (!(lo_km > 0.0) || !(hi_km >= lo_km) || n == 0) {
    throw std::invalid_argument("distance sweep needs 0 < lo <= hi and at least one point");
  }
  std::vector<SweepPoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double d =
        n == 1 ? lo_km : lo_km + (hi_km - lo_km) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back({ue_k3(scn, d * 1000.0, false), d});
  }
  return out;
}

std::vector<SweepPoint> k3_sweep_points(double lo, double hi, std::size_t n) {
  std::vector<SweepPoint> out;
  for (const double k3 : log_space(lo, hi, n)) out.push_back({k3, std::nullopt});
  return out;
}

std::vector<SweepRow> run_sweep(const Scenario &scn, const std::vector<SweepPoint> &points,
                                const std::vector<Strategy> &strategies) {
  if (points.empty()) throw std::invalid_argument("sweep has no points");
  if (strategies.empty()) throw std::invalid_argument("sweep has no strategies");
  const LagrangeOptimizer lagrange(scn.tones);
  std::vector<SweepRow> rows;
  rows.reserve(points.size() * strategies.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    UeState ue;
    ue.id = static_cast<int>(i);
    ue.k3 = points[i].k3;
    ue.distance_m = points[i].distance_km.value_or(0.0) * 1000.0;
    for (const Strategy s : strategies) {
      SweepRow row;
      row.point = i;
      row.at = points[i];
      row.strategy = s;
      row.outcome = adapt_link(ue.k3, s, scn, lagrange);
      const UeRecord rec = simulate_ue(ue, 0, s, scn, lagrange);
      row.sim_delay_ms = rec.delay_ms;
      row.delivered = rec.delivered;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace nbiot
