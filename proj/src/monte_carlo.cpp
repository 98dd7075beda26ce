#include "disca/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "disca/engine.hpp"
#include "disca/errors.hpp"
#include "disca/rng.hpp"

namespace disca {

Quantiles quantiles(std::vector<double> values) {
  if (values.empty()) throw InvalidParameter("quantiles of an empty sample");
  std::sort(values.begin(), values.end());
  auto at = [&](double prob) {
    const double h = (static_cast<double>(values.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {values.front(), at(0.25), at(0.5), at(0.75), values.back()};
}

std::uint64_t replicate_seed(std::uint64_t master, Index n, int run) {
  return derive_seed(master, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(run)});
}

namespace {

double distance_to_truth(const Basis& estimate, const Basis& truth) {
  if (estimate.rank() != truth.rank()) return 1.0;
  return subspace_distance(estimate, truth);
}

RunRecord run_one(const ScenarioSpec& base, Index n, int run, const SolverConfig& cfg) {
  RunRecord rec;
  rec.n = n;
  rec.run = run;
  rec.seed = replicate_seed(base.seed, n, run);
  try {
    ScenarioSpec spec = base;
    spec.n = n;
    spec.seed = rec.seed;
    const GeneratedData data = generate(spec);
    SolverConfig run_cfg = cfg;
    run_cfg.seed = rec.seed;
    const DiscaOutput out = disca(data.x, data.y, run_cfg);
    rec.rank_x = out.basis_x.rank();
    rec.rank_y = out.basis_y.rank();
    rec.dist_x = distance_to_truth(out.basis_x, data.truth_x);
    rec.dist_y = distance_to_truth(out.basis_y, data.truth_y);
  } catch (const Error& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

MonteCarloSummary monte_carlo(const ScenarioSpec& spec, int runs, const std::vector<Index>& sizes,
                              const SolverConfig& cfg, unsigned threads) {
  if (runs < 1) throw InvalidParameter("monte carlo needs runs >= 1");
  if (sizes.empty()) throw InvalidParameter("monte carlo needs at least one sample size");
  spec.validate();
  cfg.validate();
  if (spec.kind == ScenarioKind::kCsv) throw InvalidParameter("monte carlo needs a generated scenario");

  // Probe the dimensions once so the histograms have a fixed width.
  ScenarioSpec probe = spec;
  probe.n = 2;
  const GeneratedData shape = generate(probe);
  const Index p = shape.x.cols();
  const Index q = shape.y.cols();

  const std::size_t total = sizes.size() * static_cast<std::size_t>(runs);
  std::vector<RunRecord> records(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t s = i / static_cast<std::size_t>(runs);
      const int run = static_cast<int>(i % static_cast<std::size_t>(runs));
      records[i] = run_one(spec, sizes[s], run, cfg);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  MonteCarloSummary summary;
  summary.scenario = to_string(spec.kind);
  summary.runs = runs;
  summary.seed = spec.seed;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    SizeSummary size;
    size.n = sizes[s];
    size.runs = runs;
    size.rank_hist_x.assign(static_cast<std::size_t>(p + 1), 0);
    size.rank_hist_y.assign(static_cast<std::size_t>(q + 1), 0);
    std::vector<double> dx, dy;
    for (int r = 0; r < runs; ++r) {
      const RunRecord& rec = records[s * static_cast<std::size_t>(runs) + static_cast<std::size_t>(r)];
      if (rec.failed) {
        ++size.failures;
        continue;
      }
      ++size.rank_hist_x[static_cast<std::size_t>(rec.rank_x)];
      ++size.rank_hist_y[static_cast<std::size_t>(rec.rank_y)];
      dx.push_back(rec.dist_x);
      dy.push_back(rec.dist_y);
    }
    if (!dx.empty()) {
      size.dist_x = quantiles(dx);
      size.dist_y = quantiles(dy);
    } else {
      const double nan = std::nan("");
      size.dist_x = size.dist_y = {nan, nan, nan, nan, nan};
    }
    summary.per_size.push_back(std::move(size));
  }
  summary.records = std::move(records);
  return summary;
}

}  // namespace disca
