#include "disca/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "disca/errors.hpp"

namespace disca {

ScenarioKind parse_scenario(const std::string& name) {
  if (name == "counterexample") return ScenarioKind::kCounterexample;
  if (name == "example1") return ScenarioKind::kExample1;
  if (name == "example2") return ScenarioKind::kExample2;
  if (name == "example3") return ScenarioKind::kExample3;
  if (name == "csv") return ScenarioKind::kCsv;
  throw InvalidParameter("unknown scenario '" + name + "'");
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kCounterexample: return "counterexample";
    case ScenarioKind::kExample1: return "example1";
    case ScenarioKind::kExample2: return "example2";
    case ScenarioKind::kExample3: return "example3";
    case ScenarioKind::kCsv: return "csv";
  }
  return "unknown";
}

void ScenarioSpec::validate() const {
  if (n < 2) throw InvalidParameter("scenario needs N >= 2");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw InvalidParameter("noise scale must be >= 0");
  if (kind != ScenarioKind::kCsv) return;
  if (x_cols.empty() || y_cols.empty()) throw InvalidParameter("csv scenario needs x and y columns");
  std::set<std::string> xs(x_cols.begin(), x_cols.end());
  for (const auto& c : y_cols) {
    if (xs.count(c)) throw InvalidParameter("column '" + c + "' is listed for both x and y");
  }
}

namespace {

Basis diagonal_line(Index dim) {
  return Basis(VectorXd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

Basis axes(Index dim, std::initializer_list<Index> which) {
  MatrixXd cols = MatrixXd::Zero(dim, static_cast<Index>(which.size()));
  Index j = 0;
  for (const Index i : which) cols(i, j++) = 1.0;
  return Basis(std::move(cols));
}

}  // namespace

GeneratedData generate(const ScenarioSpec& spec) {
  spec.validate();
  if (spec.kind == ScenarioKind::kCsv) {
    throw InvalidParameter("csv scenarios are loaded with load_csv, not generated");
  }
  const Index n = spec.n;
  std::mt19937_64 gen(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sigma = spec.noise;

  switch (spec.kind) {
    case ScenarioKind::kCounterexample: {
      MatrixXd x(n, 3), y(n, 2);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < 3; ++j) x(i, j) = normal(gen);
        const double s = x.row(i).sum();
        y(i, 0) = s + sigma * normal(gen);
        y(i, 1) = s * s + sigma * normal(gen);
      }
      return {SampleMatrix(std::move(x)), SampleMatrix(std::move(y)), diagonal_line(3),
              Basis::identity(2)};
    }
    case ScenarioKind::kExample1: {
      // Sigma = 0.5 I + 0.5 11'.
      MatrixXd sigma_x = MatrixXd::Constant(3, 3, 0.5);
      sigma_x.diagonal().setOnes();
      const MatrixXd chol = sigma_x.llt().matrixL();
      MatrixXd x(n, 3), y(n, 3);
      for (Index i = 0; i < n; ++i) {
        VectorXd z(3);
        for (Index j = 0; j < 3; ++j) z(j) = normal(gen);
        x.row(i) = (chol * z).transpose();
        const double s = x.row(i).sum();
        y(i, 0) = s + sigma * normal(gen);
        y(i, 1) = s * s + sigma * normal(gen);
        y(i, 2) = normal(gen);
      }
      return {SampleMatrix(std::move(x)), SampleMatrix(std::move(y)), diagonal_line(3),
              axes(3, {0, 1})};
    }
    case ScenarioKind::kExample2: {
      std::binomial_distribution<int> bx(10, 0.5);
      std::binomial_distribution<int> by(10, 0.35);
      MatrixXd x(n, 3), y(n, 2);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < 3; ++j) x(i, j) = bx(gen);
        const double s = x.row(i).sum();
        y(i, 0) = s * s + sigma * normal(gen);
        y(i, 1) = by(gen);
      }
      return {SampleMatrix(std::move(x)), SampleMatrix(std::move(y)), diagonal_line(3),
              axes(2, {0})};
    }
    case ScenarioKind::kExample3: {
      // t(2) as Z / sqrt(chi2(2) / 2).
      std::chi_squared_distribution<double> chi2(2.0);
      MatrixXd x(n, 3), y(n, 2);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < 3; ++j) {
          const double z = normal(gen);
          double c = 0.0;
          while (c == 0.0) c = chi2(gen);
          x(i, j) = z / std::sqrt(c / 2.0);
        }
        const double t = std::tanh(x.row(i).sum());
        y(i, 0) = t + sigma * normal(gen);
        y(i, 1) = t + sigma * normal(gen);
      }
      return {SampleMatrix(std::move(x)), SampleMatrix(std::move(y)), diagonal_line(3),
              diagonal_line(2)};
    }
    case ScenarioKind::kCsv:
      break;
  }
  throw InvalidParameter("unsupported scenario");
}

}  // namespace disca
