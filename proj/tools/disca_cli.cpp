// Command-line front end: dcov, fit, simulate, threshold.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "disca/csv.hpp"
#include "disca/dcov.hpp"
#include "disca/engine.hpp"
#include "disca/errors.hpp"
#include "disca/monte_carlo.hpp"
#include "disca/report.hpp"
#include "disca/scenario.hpp"

namespace {

constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

struct CommonOptions {
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int restarts = 5;
  std::string format = "text";
};

struct DataOptions {
  std::string csv_path;
  std::string x_cols;
  std::string y_cols;
  bool weekly = false;
  std::string scenario;
  long n = 200;
  double noise = 0.01;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool solver) {
  cmd->add_option("--alpha", o.alpha, "Significance level of the independence test")->capture_default_str();
  cmd->add_option("--format", o.format, "Output format: text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  if (!solver) return;
  cmd->add_option("--seed", o.seed, "Master seed for restarts and simulated data")->capture_default_str();
  cmd->add_option("--restarts", o.restarts, "Random restarts per direction search")->capture_default_str();
}

void add_data(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("csv", d.csv_path, "CSV file with a header row");
  cmd->add_option("--x-cols", d.x_cols, "Comma-separated X column names");
  cmd->add_option("--y-cols", d.y_cols, "Comma-separated Y column names");
  cmd->add_flag("--weekly", d.weekly, "Average non-overlapping blocks of 7 rows");
  cmd->add_option("--scenario", d.scenario, "Use a simulated sample instead of a CSV file")
      ->check(CLI::IsMember({"counterexample", "example1", "example2", "example3"}));
  cmd->add_option("--n", d.n, "Sample size of the simulated sample")->capture_default_str();
  cmd->add_option("--noise", d.noise, "Noise scale of the simulated sample")->capture_default_str();
}

struct Loaded {
  disca::SampleMatrix x;
  disca::SampleMatrix y;
  std::string label;
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;
};

Loaded load(const DataOptions& d, std::uint64_t seed) {
  if (!d.scenario.empty()) {
    if (!d.csv_path.empty()) throw disca::InvalidParameter("give either a CSV file or --scenario, not both");
    disca::ScenarioSpec spec;
    spec.kind = disca::parse_scenario(d.scenario);
    spec.n = d.n;
    spec.seed = seed;
    spec.noise = d.noise;
    disca::GeneratedData g = disca::generate(spec);
    return {std::move(g.x), std::move(g.y), d.scenario, {}, {}};
  }
  if (d.csv_path.empty()) throw disca::InvalidParameter("no input: give a CSV file or --scenario");
  const auto xs = disca::split_list(d.x_cols);
  const auto ys = disca::split_list(d.y_cols);
  auto samples = disca::load_csv(d.csv_path, xs, ys,
                                 d.weekly ? disca::Aggregation::kWeekly : disca::Aggregation::kNone);
  return {std::move(samples.x), std::move(samples.y), d.csv_path, samples.x_names, samples.y_names};
}

disca::SolverConfig solver_config(const CommonOptions& o) {
  disca::SolverConfig cfg;
  cfg.alpha = o.alpha;
  cfg.seed = o.seed;
  cfg.n_restarts = o.restarts;
  cfg.validate();
  return cfg;
}

std::vector<disca::Index> parse_sizes(const std::string& text) {
  std::vector<disca::Index> sizes;
  for (const auto& item : disca::split_list(text)) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      sizes.push_back(v);
    } catch (const std::logic_error&) {
      throw disca::InvalidParameter("sample size '" + item + "' is not an integer");
    }
  }
  if (sizes.empty()) throw disca::InvalidParameter("--n needs at least one sample size");
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance-covariance screening of dependence subspaces"};
  app.require_subcommand(1);

  CommonOptions dcov_opts;
  DataOptions dcov_data;
  auto* dcov_cmd = app.add_subcommand("dcov", "Empirical distance covariance and independence test");
  add_common(dcov_cmd, dcov_opts, false);
  add_data(dcov_cmd, dcov_data);
  dcov_cmd->add_option("--seed", dcov_opts.seed, "Seed of the simulated sample");

  CommonOptions fit_opts;
  DataOptions fit_data;
  bool rotate = false;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate the dependence subspaces W_X and W_Y");
  add_common(fit_cmd, fit_opts, true);
  add_data(fit_cmd, fit_data);
  fit_cmd->add_flag("--varimax", rotate, "Report varimax-rotated bases");

  CommonOptions sim_opts;
  std::string sim_scenario = "counterexample";
  std::string sim_sizes = "50,200";
  int sim_runs = 100;
  double sim_noise = 0.01;
  unsigned sim_threads = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo study on a simulated scenario");
  add_common(sim_cmd, sim_opts, true);
  sim_cmd->add_option("--scenario", sim_scenario, "counterexample, example1, example2 or example3")
      ->check(CLI::IsMember({"counterexample", "example1", "example2", "example3"}))
      ->capture_default_str();
  sim_cmd->add_option("--n", sim_sizes, "Comma-separated sample sizes")->capture_default_str();
  sim_cmd->add_option("--runs", sim_runs, "Replicates per sample size")->capture_default_str();
  sim_cmd->add_option("--noise", sim_noise, "Noise scale")->capture_default_str();
  sim_cmd->add_option("--threads", sim_threads, "Worker threads (0 = all cores)")->capture_default_str();

  CommonOptions thr_opts;
  auto* thr_cmd = app.add_subcommand("threshold", "Print the rejection threshold (Phi^-1(1 - alpha/2))^2");
  add_common(thr_cmd, thr_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*thr_cmd) {
      const double t = disca::rejection_threshold(thr_opts.alpha);
      const auto format = disca::parse_format(thr_opts.format);
      if (format == disca::Format::kJson) {
        std::cout << nlohmann::json{{"alpha", thr_opts.alpha}, {"threshold", t}}.dump(2) << "\n";
      } else if (format == disca::Format::kCsv) {
        std::printf("alpha,threshold\n%.17g,%.17g\n", thr_opts.alpha, t);
      } else {
        std::printf("%.6f\n", t);
      }
      return 0;
    }
    if (*dcov_cmd) {
      const Loaded data = load(dcov_data, dcov_opts.seed);
      disca::rejection_threshold(dcov_opts.alpha);  // validates alpha
      const auto stats = disca::empirical_dcov(data.x, data.y);
      std::cout << disca::format_dcov(stats, disca::independence_statistic(stats), dcov_opts.alpha,
                                      disca::parse_format(dcov_opts.format));
      return 0;
    }
    if (*fit_cmd) {
      const disca::SolverConfig cfg = solver_config(fit_opts);
      const auto format = disca::parse_format(fit_opts.format);
      const Loaded data = load(fit_data, fit_opts.seed);
      disca::FitReport report;
      report.meta.scenario = data.label;
      report.meta.seed = fit_opts.seed;
      report.meta.n = data.x.rows();
      report.meta.x_names = data.x_names;
      report.meta.y_names = data.y_names;
      report.output = disca::disca(data.x, data.y, cfg);
      if (rotate) {
        report.meta.varimax = true;
        report.output.basis_x = disca::varimax(report.output.basis_x);
        report.output.basis_y = disca::varimax(report.output.basis_y);
      }
      std::cout << disca::format_fit(report, format);
      return 0;
    }
    if (*sim_cmd) {
      const disca::SolverConfig cfg = solver_config(sim_opts);
      const auto format = disca::parse_format(sim_opts.format);
      disca::ScenarioSpec spec;
      spec.kind = disca::parse_scenario(sim_scenario);
      spec.seed = sim_opts.seed;
      spec.noise = sim_noise;
      const auto summary = disca::monte_carlo(spec, sim_runs, parse_sizes(sim_sizes), cfg, sim_threads);
      std::cout << disca::format_monte_carlo(summary, format);
      return 0;
    }
  } catch (const disca::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const disca::NumericalFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const disca::ConvexityViolation& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const disca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
