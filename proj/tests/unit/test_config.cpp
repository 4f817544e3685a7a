#include <doctest.h>

#include <stdexcept>

#include "nbiot/config.hpp"

using namespace nbiot;

TEST_SUITE("config") {

TEST_CASE("round trip") {
  for (const Scenario &s : {Scenario::open_area(), Scenario::urban()}) {
    const json j = to_json(s);
    CHECK(to_json(scenario_from_json(j)) == j);
  }
}

TEST_CASE("defaults follow the area") {
  const auto open = scenario_from_json(json::object());
  CHECK(open.area == Area::open_area);
  CHECK(open.budget.extra_loss_db == 17.0);
  const auto urban = scenario_from_json(json{{"area", "urban"}});
  CHECK(urban.pathloss.variant == PathlossVariant::urban_hata_with_buildings);
}

TEST_CASE("overrides") {
  json doc = to_json(Scenario::open_area());
  apply_override(doc, "n_ue=50");
  apply_override(doc, "pathloss.carrier_mhz=900");
  apply_override(doc, "strategy=mcs_only");
  apply_override(doc, "tbs.table=[16,24,32,40,56,72,88,104,120,136,144,176,208]");
  const auto s = scenario_from_json(doc);
  CHECK(s.n_ue == 50);
  CHECK(s.pathloss.carrier_mhz == 900.0);
  CHECK(s.strategy == Strategy::mcs_only);
  REQUIRE(s.tbs.table.has_value());
  CHECK((*s.tbs.table)[12] == 208.0);

  CHECK_THROWS_AS(apply_override(doc, "n_ue"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(doc, "=3"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(doc, "a..b=3"), std::invalid_argument);
}

TEST_CASE("rejections") {
  json doc = to_json(Scenario::open_area());
  doc["bogus"] = 1;
  CHECK_THROWS_AS(scenario_from_json(doc), std::invalid_argument);
  doc = to_json(Scenario::open_area());
  doc["pathloss"]["bogus"] = 1;
  CHECK_THROWS_AS(scenario_from_json(doc), std::invalid_argument);
  doc = to_json(Scenario::open_area());
  doc["strategy"] = "fastest";
  CHECK_THROWS(scenario_from_json(doc));
  doc = to_json(Scenario::open_area());
  doc["n_runs"] = -1;
  CHECK_THROWS(scenario_from_json(doc));
  CHECK_THROWS(load_scenario("/nonexistent/scenario.json"));
}

TEST_CASE("model table") {
  const json t = model_table();
  CHECK(t.contains("tone_mapping"));
  CHECK(t["repetition_values"].size() == 8);
}

TEST_CASE("number format") {
  CHECK(format_number(9.0) == "9");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333");
  CHECK(format_number(1234567.0) == "1.23457e+06");
}

}
