#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nbiot/channel.hpp"
#include "nbiot/model.hpp"
#include "nbiot/optimizer.hpp"

// Zone-based uplink scenario: deploy UEs, run link adaptation for every UE and
// aggregate delivery ratio, delay and assigned parameters per zone.

namespace nbiot {

enum class Strategy { mcs_only, tone_only, repetition_only, hybrid_lagrange, hybrid_exhaustive };

inline constexpr Strategy kAllStrategies[] = {Strategy::mcs_only, Strategy::tone_only,
                                              Strategy::repetition_only, Strategy::hybrid_lagrange,
                                              Strategy::hybrid_exhaustive};

std::string_view to_string(Strategy s);
/// Accepts the canonical names plus CLI spellings such as "mcs", "repetition",
/// "hybrid-lagrange". Throws std::invalid_argument otherwise.
Strategy parse_strategy(std::string_view name);
/// Tone and hybrid strategies allocate per subcarrier; the others per resource block.
bool allocates_subcarriers(Strategy s);

enum class Area { open_area, urban };
std::string_view to_string(Area a);
Area parse_area(std::string_view name);

struct Zone {
  double start_m = 0.0;
  double width_m = 0.0;
  double end_m() const { return start_m + width_m; }
};

/// The sixteen zones of the reference deployment.
std::vector<Zone> default_zones();

struct Scenario {
  std::uint64_t seed = 1;
  int n_ue = 600;
  Area area = Area::open_area;
  std::vector<Zone> zones = default_zones();
  double reporting_period_s = 10.0;
  int packet_size_bytes = 12;
  int n_runs = 100;
  Strategy strategy = Strategy::hybrid_lagrange;
  int n_subcarriers = 24;

  PathlossModel pathloss;
  LinkBudget budget;
  DelayModelParams delay;
  TbsModel tbs;
  SnrThresholdModel threshold;
  ToneMapping tones;

  /// Optimization problem for one UE; packet size drives the data length.
  OptimizationProblem problem(double k3) const;

  static Scenario open_area();
  static Scenario urban();
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate(const Scenario &scn);

struct UeState {
  int id = 0;
  int zone = 0;
  double distance_m = 0.0;
  bool indoor = false;
  double k3 = 0.0;
  AdaptationOutcome outcome;
};

/// Seed of an individual run, derived from the scenario seed.
std::uint64_t run_seed(std::uint64_t scenario_seed, int run);

/// Equal share of UEs per zone (remainder to the zones nearest the base
/// station), distance uniform inside the zone, indoor with probability
/// indoor_fraction in the urban area only. Deterministic in (seed, run).
std::vector<UeState> deploy(const Scenario &scn, int run = 0);

double ue_k3(const Scenario &scn, double distance_m, bool indoor);

/// Fixes two of the three parameters and walks the third toward more
/// robustness; hybrid strategies delegate to the optimizer.
AdaptationOutcome adapt_link(double k3, Strategy strategy, const Scenario &scn,
                             const LagrangeOptimizer &lagrange);
AdaptationOutcome adapt_link(double k3, Strategy strategy, const Scenario &scn);

struct UeRecord {
  int run = 0;
  int ue = 0;
  int zone = 0;
  double distance_m = 0.0;
  bool indoor = false;
  double k3 = 0.0;
  LinkConfig config;
  bool feasible = false;
  bool delivered = false;
  double delay_ms = 0.0;
  double subcarriers = 0.0;
};

/// Adapt, decide delivery and account delay for one deployed UE.
UeRecord simulate_ue(const UeState &ue, int run, Strategy strategy, const Scenario &scn,
                     const LagrangeOptimizer &lagrange);

struct ZoneReport {
  int zone = 0;  ///< 1-based
  double start_m = 0.0;
  double mean_mcs = 0.0;
  double mean_tones = 0.0;
  double mean_time_factor = 0.0;
  double mean_repetitions = 0.0;
  double mean_subcarriers = 0.0;
  double pdr = 0.0;
  /// Mean transmission delay over every UE in the zone, delivered or not.
  double mean_delay_ms = 0.0;
  long n = 0;
};

struct ScenarioResult {
  std::vector<ZoneReport> zones;
  std::vector<UeRecord> records;  ///< only when requested
  double mean_delay_ms = 0.0;
  double mean_subcarriers = 0.0;
  double pdr = 0.0;
  long n = 0;
  /// True when some UE lies past the Hata validity range.
  bool extrapolated_pathloss = false;
};

struct RunOptions {
  bool keep_records = false;
};

/// Runs are distributed over OpenMP threads; per-run partial sums are reduced
/// in run order, so the result is bit-identical to the serial reference.
ScenarioResult run_scenario(const Scenario &scn, const RunOptions &options = {});
ScenarioResult run_scenario_serial(const Scenario &scn, const RunOptions &options = {});

/// Largest zone index (1-based) with PDR >= min_pdr, 0 if none.
int max_reliable_zone(const ScenarioResult &result, double min_pdr = 0.99);

/// floor(period / delay) * floor(n_sc / scu). Throws std::domain_error for a
/// non-positive delay or subcarrier share.
long max_users(double delay_ue_ms, double reporting_period_s, double n_subcarriers,
               double subcarriers_per_user);

struct ScalabilityRow {
  Strategy strategy = Strategy::hybrid_lagrange;
  double mean_delay_ms = 0.0;
  double subcarriers_per_user = 0.0;
  long max_users = 0;
  /// Delivered UEs of run 0 that fit in one reporting period, when n_ue <= 600.
  std::optional<long> simulated_supported;
};

inline constexpr int kMaxSimulatedUsers = 600;

/// The scenario restricted to its last `zones` zones; throws std::invalid_argument
/// unless 1 <= zones <= zone count.
Scenario far_zone_scenario(const Scenario &base, int zones = 3);

std::vector<ScalabilityRow> run_scalability(const Scenario &scn);

struct SweepPoint {
  double k3 = 0.0;
  std::optional<double> distance_km;  ///< set when k3 was derived from geometry
};

/// Midpoint of every zone, outdoor.
std::vector<SweepPoint> zone_sweep_points(const Scenario &scn);
std::vector<SweepPoint> distance_sweep_points(const Scenario &scn, double lo_km, double hi_km,
                                              std::size_t n);
std::vector<SweepPoint> k3_sweep_points(double lo, double hi, std::size_t n);

struct SweepRow {
  std::size_t point = 0;
  SweepPoint at;
  Strategy strategy = Strategy::hybrid_lagrange;
  AdaptationOutcome outcome;
  /// Delay as accounted by the per-UE simulation path.
  double sim_delay_ms = 0.0;
  bool delivered = false;
};

/// One row per (point, strategy), points outermost.
std::vector<SweepRow> run_sweep(const Scenario &scn, const std::vector<SweepPoint> &points,
                                const std::vector<Strategy> &strategies);

}  // namespace nbiot
