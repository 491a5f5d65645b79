#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace avgq {

inline constexpr int kReportSchemaVersion = 1;

// Result of an experiment or measurement, serialised as
// {experiment, schema_version, params, seed, trials, statistics,
//  bound{formula, value}, verdict}.
// Verdicts: "pass", "fail", "vacuous" (the bound says nothing at this scale),
// "info" (nothing to check).
struct ExperimentReport {
  std::string experiment;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  nlohmann::json statistics = nlohmann::json::object();
  std::string bound_formula;
  std::optional<double> bound_value;
  std::string verdict = "info";

  nlohmann::json to_json() const;
  // Pretty-printed JSON followed by a newline.
  std::string dump() const;
  // Flattened CSV: dotted column names in lexicographic order. A "rows" array
  // in statistics yields one line per element; otherwise one line.
  std::string to_csv() const;
};

}  // namespace avgq
