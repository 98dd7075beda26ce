#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disca/dc_solver.hpp"
#include "disca/scenario.hpp"

namespace disca {

struct RunRecord {
  Index n = 0;
  int run = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  Index rank_x = 0;
  Index rank_y = 0;
  //! ||P_hat - P_true||_2; equals 1 whenever the ranks differ.
  double dist_x = 0.0;
  double dist_y = 0.0;
};

struct Quantiles {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

//! Type-7 (linear interpolation) quantiles. Throws on an empty sample.
Quantiles quantiles(std::vector<double> values);

struct SizeSummary {
  Index n = 0;
  int runs = 0;
  int failures = 0;
  std::vector<int> rank_hist_x;  //!< index = rank, over non-failed runs
  std::vector<int> rank_hist_y;
  Quantiles dist_x;
  Quantiles dist_y;
};

struct MonteCarloSummary {
  std::string scenario;
  int runs = 0;
  std::uint64_t seed = 0;
  std::vector<SizeSummary> per_size;
  std::vector<RunRecord> records;  //!< ordered by (size index, run)
};

//! Seed of replicate `run` at sample size n.
std::uint64_t replicate_seed(std::uint64_t master, Index n, int run);

//! Runs disca on `runs` fresh draws of the scenario at each sample size.
//! Replicates are spread over `threads` workers (0 = hardware concurrency);
//! the summary does not depend on the thread count.
MonteCarloSummary monte_carlo(const ScenarioSpec& spec, int runs, const std::vector<Index>& sizes,
                              const SolverConfig& cfg, unsigned threads = 0);

}  // namespace disca
