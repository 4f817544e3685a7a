#include "nbiot/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>

namespace nbiot {

namespace {

std::string_view to_string(PathlossVariant v) {
  return v == PathlossVariant::open_area_hata ? "open_area_hata" : "urban_hata_with_buildings";
}

PathlossVariant parse_variant(const std::string &s) {
  if (s == "open_area_hata") return PathlossVariant::open_area_hata;
  if (s == "urban_hata_with_buildings") return PathlossVariant::urban_hata_with_buildings;
  throw std::invalid_argument("unknown path-loss variant '" + s + "'");
}

void reject_unknown(const json &obj, std::initializer_list<const char *> keys,
                    const std::string &where) {
  if (!obj.is_object()) throw std::invalid_argument(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto &[key, _] : obj.items()) {
    if (!allowed.count(key)) throw std::invalid_argument("unknown key '" + where + key + "'");
  }
}

template <typename T>
void read(const json &obj, const char *key, T &out, const std::string &where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception &e) {
    throw std::invalid_argument("bad value for '" + where + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const Scenario &scn) {
  json zones = json::array();
  for (const auto &z : scn.zones) zones.push_back({{"start_m", z.start_m}, {"width_m", z.width_m}});
  json tbs = {{"a", scn.tbs.a}, {"b", scn.tbs.b}, {"c", scn.tbs.c}};
  tbs["table"] = scn.tbs.table ? json(*scn.tbs.table) : json(nullptr);
  return {
      {"seed", scn.seed},
      {"n_ue", scn.n_ue},
      {"area", to_string(scn.area)},
      {"zones", zones},
      {"reporting_period_s", scn.reporting_period_s},
      {"packet_size_bytes", scn.packet_size_bytes},
      {"n_runs", scn.n_runs},
      {"strategy", to_string(scn.strategy)},
      {"n_subcarriers", scn.n_subcarriers},
      {"pathloss",
       {{"variant", to_string(scn.pathloss.variant)},
        {"carrier_mhz", scn.pathloss.carrier_mhz},
        {"bs_antenna_height_m", scn.pathloss.bs_antenna_height_m},
        {"ue_antenna_height_m", scn.pathloss.ue_antenna_height_m},
        {"building_penetration_loss_db", scn.pathloss.building_penetration_loss_db},
        {"indoor_fraction", scn.pathloss.indoor_fraction}}},
      {"link_budget",
       {{"tx_power_dbm", scn.budget.tx_power_dbm},
        {"enb_tx_power_dbm", scn.budget.enb_tx_power_dbm},
        {"noise_psd_dbm_per_hz", scn.budget.noise_psd_dbm_per_hz},
        {"receiver_noise_figure_db", scn.budget.receiver_noise_figure_db},
        {"extra_loss_db", scn.budget.extra_loss_db}}},
      {"delay",
       {{"t_pusch_ms", scn.delay.t_pusch_ms},
        {"t_pdcch_ms", scn.delay.t_pdcch_ms},
        {"rldc", scn.delay.rldc},
        {"t_dus_ms", scn.delay.t_dus_ms},
        {"t_uds_ms", scn.delay.t_uds_ms},
        {"t_ack_ms", scn.delay.t_ack_ms},
        {"rluc", scn.delay.rluc},
        {"resource_units", scn.delay.resource_units}}},
      {"tbs", tbs},
      {"snr_threshold",
       {{"q1", scn.threshold.q1}, {"q2", scn.threshold.q2}, {"q3", scn.threshold.q3},
        {"q4", scn.threshold.q4}}},
      {"tone_mapping",
       {{"p1", scn.tones.p1}, {"p2", scn.tones.p2}, {"p3", scn.tones.p3}, {"p4", scn.tones.p4}}},
  };
}

Scenario scenario_from_json(const json &j) {
  reject_unknown(j,
                 {"seed", "n_ue", "area", "zones", "reporting_period_s", "packet_size_bytes",
                  "n_runs", "strategy", "n_subcarriers", "pathloss", "link_budget", "delay", "tbs",
                  "snr_threshold", "tone_mapping"},
                 "");
  std::string area = "open_area";
  read(j, "area", area, "");
  Scenario s = parse_area(area) == Area::urban ? Scenario::urban() : Scenario::open_area();

  read(j, "seed", s.seed, "");
  read(j, "n_ue", s.n_ue, "");
  read(j, "reporting_period_s", s.reporting_period_s, "");
  read(j, "packet_size_bytes", s.packet_size_bytes, "");
  read(j, "n_runs", s.n_runs, "");
  read(j, "n_subcarriers", s.n_subcarriers, "");
  if (j.contains("strategy")) s.strategy = parse_strategy(j.at("strategy").get<std::string>());
  if (j.contains("zones")) {
    s.zones.clear();
    for (const auto &z : j.at("zones")) {
      reject_unknown(z, {"start_m", "width_m"}, "zones[].");
      s.zones.push_back({z.at("start_m").get<double>(), z.at("width_m").get<double>()});
    }
  }
  if (j.contains("pathloss")) {
    const auto &o = j.at("pathloss");
    reject_unknown(o,
                   {"variant", "carrier_mhz", "bs_antenna_height_m", "ue_antenna_height_m",
                    "building_penetration_loss_db", "indoor_fraction"},
                   "pathloss.");
    if (o.contains("variant")) s.pathloss.variant = parse_variant(o.at("variant").get<std::string>());
    read(o, "carrier_mhz", s.pathloss.carrier_mhz, "pathloss.");
    read(o, "bs_antenna_height_m", s.pathloss.bs_antenna_height_m, "pathloss.");
    read(o, "ue_antenna_height_m", s.pathloss.ue_antenna_height_m, "pathloss.");
    read(o, "building_penetration_loss_db", s.pathloss.building_penetration_loss_db, "pathloss.");
    read(o, "indoor_fraction", s.pathloss.indoor_fraction, "pathloss.");
  }
  if (j.contains("link_budget")) {
    const auto &o = j.at("link_budget");
    reject_unknown(o,
                   {"tx_power_dbm", "enb_tx_power_dbm", "noise_psd_dbm_per_hz",
                    "receiver_noise_figure_db", "extra_loss_db"},
                   "link_budget.");
    read(o, "tx_power_dbm", s.budget.tx_power_dbm, "link_budget.");
    read(o, "enb_tx_power_dbm", s.budget.enb_tx_power_dbm, "link_budget.");
    read(o, "noise_psd_dbm_per_hz", s.budget.noise_psd_dbm_per_hz, "link_budget.");
    read(o, "receiver_noise_figure_db", s.budget.receiver_noise_figure_db, "link_budget.");
    read(o, "extra_loss_db", s.budget.extra_loss_db, "link_budget.");
  }
  if (j.contains("delay")) {
    const auto &o = j.at("delay");
    reject_unknown(o,
                   {"t_pusch_ms", "t_pdcch_ms", "rldc", "t_dus_ms", "t_uds_ms", "t_ack_ms", "rluc",
                    "resource_units"},
                   "delay.");
    read(o, "t_pusch_ms", s.delay.t_pusch_ms, "delay.");
    read(o, "t_pdcch_ms", s.delay.t_pdcch_ms, "delay.");
    read(o, "rldc", s.delay.rldc, "delay.");
    read(o, "t_dus_ms", s.delay.t_dus_ms, "delay.");
    read(o, "t_uds_ms", s.delay.t_uds_ms, "delay.");
    read(o, "t_ack_ms", s.delay.t_ack_ms, "delay.");
    read(o, "rluc", s.delay.rluc, "delay.");
    read(o, "resource_units", s.delay.resource_units, "delay.");
  }
  if (j.contains("tbs")) {
    const auto &o = j.at("tbs");
    reject_unknown(o, {"a", "b", "c", "table"}, "tbs.");
    read(o, "a", s.tbs.a, "tbs.");
    read(o, "b", s.tbs.b, "tbs.");
    read(o, "c", s.tbs.c, "tbs.");
    if (o.contains("table") && !o.at("table").is_null()) {
      const auto &t = o.at("table");
      if (!t.is_array() || t.size() != 13) {
        throw std::invalid_argument("tbs.table must list 13 sizes (MCS 0..12)");
      }
      s.tbs.table = t.get<std::array<double, 13>>();
    }
  }
  if (j.contains("snr_threshold")) {
    const auto &o = j.at("snr_threshold");
    reject_unknown(o, {"q1", "q2", "q3", "q4"}, "snr_threshold.");
    read(o, "q1", s.threshold.q1, "snr_threshold.");
    read(o, "q2", s.threshold.q2, "snr_threshold.");
    read(o, "q3", s.threshold.q3, "snr_threshold.");
    read(o, "q4", s.threshold.q4, "snr_threshold.");
  }
  if (j.contains("tone_mapping")) {
    const auto &o = j.at("tone_mapping");
    reject_unknown(o, {"p1", "p2", "p3", "p4"}, "tone_mapping.");
    read(o, "p1", s.tones.p1, "tone_mapping.");
    read(o, "p2", s.tones.p2, "tone_mapping.");
    read(o, "p3", s.tones.p3, "tone_mapping.");
    read(o, "p4", s.tones.p4, "tone_mapping.");
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw std::invalid_argument("cannot parse " + path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

void apply_override(json &doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw std::invalid_argument("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error &) {
    value = raw;
  }
  json *node = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot - pos);
    if (part.empty()) throw std::invalid_argument("empty path segment in '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    pos = dot + 1;
  }
}

json model_table(const Scenario &scn) {
  json tones = json::array();
  for (std::size_t i = 0; i < kTimeFactors.size(); ++i) {
    tones.push_back({{"time_factor", kTimeFactors[i]},
                     {"frequency_factor", kFrequencyFactors[i]},
                     {"tones", kToneCounts[i]},
                     {"subcarrier_spacing_khz", kSubcarrierSpacingKhz[i]}});
  }
  json mcs = json::array();
  for (int m = kMcsMin; m <= kMcsMax; ++m) {
    mcs.push_back({{"mcs", m},
                   {"tbs_bits", tbs_of_mcs(m, scn.tbs)},
                   {"snr_threshold_linear", snr_threshold(m, scn.threshold)},
                   {"snr_threshold_db", linear_to_db(snr_threshold(m, scn.threshold))}});
  }
  json mcs_set = json::array();
  for (int m = kMcsMin; m <= kMcsMax; ++m) mcs_set.push_back(m);
  return {
      {"mcs_values", mcs_set},
      {"repetition_values", kRepetitions},
      {"time_factor_values", kTimeFactors},
      {"tone_mapping", tones},
      {"tone_fit", {{"p1", scn.tones.p1}, {"p2", scn.tones.p2}, {"p3", scn.tones.p3},
                    {"p4", scn.tones.p4}, {"mse", scn.tones.fit_mse()}}},
      {"tbs_fit", {{"a", scn.tbs.a}, {"b", scn.tbs.b}, {"c", scn.tbs.c}}},
      {"snr_threshold_fit", {{"q1", scn.threshold.q1}, {"q2", scn.threshold.q2},
                             {"q3", scn.threshold.q3}, {"q4", scn.threshold.q4}}},
      {"per_mcs", mcs},
      {"delay", {{"k0_ms", scn.delay.k0()}, {"k1_ms", scn.delay.k1()},
                 {"k2_bits", 8.0 * scn.packet_size_bytes}}},
      {"carrier_bandwidth_hz", kCarrierBandwidthHz},
  };
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

json round_numbers(const json &doc) {
  if (doc.is_number_float()) return std::strtod(format_number(doc.get<double>()).c_str(), nullptr);
  if (doc.is_array() || doc.is_object()) {
    json out = doc;
    for (auto &v : out) v = round_numbers(v);
    return out;
  }
  return doc;
}

}  // namespace nbiot
