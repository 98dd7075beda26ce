#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "disca/dcov.hpp"
#include "disca/engine.hpp"
#include "disca/monte_carlo.hpp"

namespace disca {

enum class Format { kJson, kCsv, kText };

Format parse_format(const std::string& name);

//! Labels carried alongside a fit.
struct FitMeta {
  std::string scenario;
  std::uint64_t seed = 0;
  Index n = 0;
  std::vector<std::string> x_names;  //!< empty = x1..xp
  std::vector<std::string> y_names;
  bool varimax = false;
};

struct FitReport {
  FitMeta meta;
  DiscaOutput output;
};

nlohmann::json to_json(const SolverConfig& cfg);
SolverConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FitReport& report);
//! Inverse of to_json; throws ParseError on malformed input.
FitReport fit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MonteCarloSummary& summary);

std::string format_fit(const FitReport& report, Format format);
std::string format_monte_carlo(const MonteCarloSummary& summary, Format format);
std::string format_dcov(const DistanceStats& stats, double statistic, double alpha, Format format);

}  // namespace disca
