#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disca/sample_matrix.hpp"
#include "disca/subspace.hpp"

namespace disca {

enum class ScenarioKind { kCounterexample, kExample1, kExample2, kExample3, kCsv };

ScenarioKind parse_scenario(const std::string& name);
std::string to_string(ScenarioKind kind);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kCounterexample;
  Index n = 200;
  std::uint64_t seed = 0;
  double noise = 0.01;
  // csv only
  std::string path;
  std::vector<std::string> x_cols;
  std::vector<std::string> y_cols;
  bool weekly = false;

  //! Throws InvalidParameter on N < 2, or for csv on empty/overlapping column lists.
  void validate() const;
};

//! A sample pair together with the dependence subspaces it was built around.
struct GeneratedData {
  SampleMatrix x;
  SampleMatrix y;
  Basis truth_x;
  Basis truth_y;
};

//! Draws a synthetic sample pair. Row i consumes its X draws, then its noise
//! and independent-Y draws, from a single mt19937_64 seeded with spec.seed.
GeneratedData generate(const ScenarioSpec& spec);

}  // namespace disca
