#include "nbiot/report.hpp"

namespace nbiot {

namespace {

const char *flag(bool b) { return b ? "1" : "0"; }

}  // namespace

void write_zone_csv(std::ostream &out, const ScenarioResult &result) {
  out << kZoneCsvHeader << '\n';
  for (const auto &z : result.zones) {
    out << z.zone << ',' << format_number(z.start_m) << ',' << format_number(z.mean_mcs) << ','
        << format_number(z.mean_tones) << ',' << format_number(z.mean_repetitions) << ','
        << format_number(z.pdr) << ',' << format_number(z.mean_delay_ms) << ',' << z.n << '\n';
  }
}

void write_record_csv(std::ostream &out, std::span<const UeRecord> records) {
  out << kRecordCsvHeader << '\n';
  for (const auto &r : records) {
    out << r.run << ',' << r.ue << ',' << r.zone + 1 << ',' << format_number(r.distance_m) << ','
        << flag(r.indoor) << ',' << format_number(r.k3) << ',' << r.config.mcs << ','
        << tone_count(r.config.time_factor) << ',' << r.config.time_factor << ','
        << r.config.repetitions << ',' << flag(r.feasible) << ',' << flag(r.delivered) << ','
        << format_number(r.delay_ms) << '\n';
  }
}

void write_outcome_csv(std::ostream &out, std::span<const BenchmarkRow> rows) {
  out << kOutcomeCsvHeader << '\n';
  for (const auto &row : rows) {
    const auto &o = row.outcome;
    out << format_number(row.k3) << ',' << to_string(o.solver) << ',' << o.config.mcs << ','
        << tone_count(o.config.time_factor) << ',' << o.config.time_factor << ',' << o.config.repetitions << ',' << format_number(o.delay_ms)
        << ',' << flag(o.feasible) << ',' << format_number(o.solve_time_s) << '\n';
  }
}

void write_sweep_csv(std::ostream &out, std::span<const SweepRow> rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto &row : rows) {
    const auto &c = row.outcome.config;
    out << row.point << ',' << format_number(row.at.k3) << ','
        << (row.at.distance_km ? format_number(*row.at.distance_km) : std::string()) << ','
        << to_string(row.strategy) << ',' << c.mcs << ',' << tone_count(c.time_factor) << ','
        << c.time_factor << ',' << c.repetitions << ',' << format_number(row.outcome.delay_ms)
        << ',' << format_number(row.sim_delay_ms) << ',' << flag(row.outcome.feasible) << ','
        << flag(row.delivered) << '\n';
  }
}

void write_scalability_csv(std::ostream &out, std::span<const ScalabilityRow> rows) {
  out << kScalabilityCsvHeader << '\n';
  for (const auto &r : rows) {
    out << to_string(r.strategy) << ',' << format_number(r.mean_delay_ms) << ','
        << format_number(r.subcarriers_per_user) << ',' << r.max_users << ','
        << (r.simulated_supported ? std::to_string(*r.simulated_supported) : std::string())
        << '\n';
  }
}

json to_json(const AdaptationOutcome &o) {
  return {{"m", o.config.mcs},
          {"tones", tone_count(o.config.time_factor)},
          {"t", o.config.time_factor},
          {"r", o.config.repetitions},
          {"delay_ms", o.delay_ms},
          {"feasible", o.feasible},
          {"solver", to_string(o.solver)},
          {"solve_time_s", o.solve_time_s},
          {"evaluations", o.evaluations}};
}

json to_json(const ScenarioResult &result, const Scenario &scn) {
  json zones = json::array();
  for (const auto &z : result.zones) {
    zones.push_back({{"zone", z.zone},
                     {"start_m", z.start_m},
                     {"mean_m", z.mean_mcs},
                     {"mean_tones", z.mean_tones},
                     {"mean_r", z.mean_repetitions},
                     {"pdr", z.pdr},
                     {"mean_delay_ms", z.mean_delay_ms},
                     {"n", z.n}});
  }
  return {{"area", to_string(scn.area)},
          {"strategy", to_string(scn.strategy)},
          {"seed", scn.seed},
          {"n_runs", scn.n_runs},
          {"n_ue", scn.n_ue},
          {"pdr", result.pdr},
          {"mean_delay_ms", result.mean_delay_ms},
          {"max_reliable_zone", max_reliable_zone(result)},
          {"extrapolated_pathloss", result.extrapolated_pathloss},
          {"zones", zones}};
}

json to_json(const BenchmarkResult &bench, std::size_t sweep_points, int repetitions) {
  json methods = json::array();
  for (const auto &s : bench.summaries) {
    methods.push_back({{"method", to_string(s.solver)},
                       {"normalized_mse", s.normalized_mse},
                       {"exact_match_fraction", s.exact_match_fraction},
                       {"undercuts", s.undercuts},
                       {"median_sweep_time_s", s.median_sweep_time_s},
                       {"speedup", s.speedup},
                       {"evaluations", s.evaluations}});
  }
  return {{"reference", "exhaustive"},
          {"mse_definition", "mean of ((delay - exhaustive_delay) / exhaustive_delay)^2"},
          {"timing", "median wall-clock time of the whole sweep, single thread"},
          {"sweep_points", sweep_points},
          {"repetitions", repetitions},
          {"methods", methods}};
}

json to_json(std::span<const ScalabilityRow> rows, const Scenario &scn) {
  json out = json::array();
  for (const auto &r : rows) {
    json row = {{"strategy", to_string(r.strategy)},
                {"mean_delay_ms", r.mean_delay_ms},
                {"subcarriers_per_user", r.subcarriers_per_user},
                {"max_users", r.max_users}};
    row["simulated_supported"] = r.simulated_supported ? json(*r.simulated_supported) : json(nullptr);
    out.push_back(row);
  }
  return {{"reporting_period_s", scn.reporting_period_s},
          {"n_subcarriers", scn.n_subcarriers},
          {"n_ue", scn.n_ue},
          {"strategies", out}};
}

}  // namespace nbiot
