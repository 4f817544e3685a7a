#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nbiot/simulator.hpp"

// JSON scenario files, command-line overrides and fixed-precision formatting.

namespace nbiot {

using json = nlohmann::json;

/// Environment variable naming the default scenario file.
inline constexpr const char *kConfigEnvVar = "NBIOT_CONFIG";

json to_json(const Scenario &scn);
/// Missing keys take the defaults of the scenario's area; unknown keys are
/// rejected. Throws std::invalid_argument with the offending key.
Scenario scenario_from_json(const json &j);
Scenario load_scenario(const std::filesystem::path &path);

/// Applies "a.b.c=value" to a JSON document. The value is parsed as JSON when
/// possible (numbers, booleans, arrays) and kept as a string otherwise.
void apply_override(json &doc, std::string_view assignment);

/// Value sets, tone mapping and fit coefficients of the model.
json model_table(const Scenario &scn = Scenario::open_area());

/// Six significant digits, locale independent.
std::string format_number(double x);
/// Copy of a document with every floating-point value cut to six significant digits.
json round_numbers(const json &doc);

}  // namespace nbiot
