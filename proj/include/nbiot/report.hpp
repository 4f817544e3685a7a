#pragma once

#include <ostream>
#include <span>

#include "nbiot/config.hpp"
#include "nbiot/optimizer.hpp"
#include "nbiot/simulator.hpp"

// CSV and JSON renderings of results. Numbers use six significant digits so
// reruns diff cleanly.

namespace nbiot {

inline constexpr const char *kZoneCsvHeader =
    "zone,start_m,mean_m,mean_tones,mean_r,pdr,mean_delay_ms,n";
inline constexpr const char *kRecordCsvHeader =
    "run,ue,zone,distance_m,indoor,k3,m,tones,t,r,feasible,delivered,delay_ms";
inline constexpr const char *kOutcomeCsvHeader =
    "k3,solver,m,tones,t,r,delay_ms,feasible,solve_time_s";
inline constexpr const char *kSweepCsvHeader =
    "point,k3,distance_km,strategy,m,tones,t,r,model_delay_ms,sim_delay_ms,feasible,delivered";
inline constexpr const char *kScalabilityCsvHeader =
    "strategy,mean_delay_ms,subcarriers_per_user,max_users,simulated_supported";

void write_zone_csv(std::ostream &out, const ScenarioResult &result);
void write_record_csv(std::ostream &out, std::span<const UeRecord> records);
void write_outcome_csv(std::ostream &out, std::span<const BenchmarkRow> rows);
void write_sweep_csv(std::ostream &out, std::span<const SweepRow> rows);
void write_scalability_csv(std::ostream &out, std::span<const ScalabilityRow> rows);

json to_json(const AdaptationOutcome &outcome);
json to_json(const ScenarioResult &result, const Scenario &scn);
json to_json(const BenchmarkResult &bench, std::size_t sweep_points, int repetitions);
json to_json(std::span<const ScalabilityRow> rows, const Scenario &scn);

}  // namespace nbiot
