#include "disca/reduction.hpp"

#include <string>

#include "disca/dcov.hpp"
#include "disca/errors.hpp"

namespace disca {

GMatrix g_coefficients(const SampleMatrix& y) {
  const MatrixXd dist = pairwise_distances(y);
  const double n = static_cast<double>(dist.rows());
  const VectorXd row_mean = dist.rowwise().sum() / n;
  const double grand_mean = row_mean.sum() / n;

  GMatrix out;
  out.g = dist;
  out.g.colwise() -= row_mean;
  out.g.rowwise() -= row_mean.transpose();
  out.g.array() += grand_mean;
  return out;
}

SignedDiffProblem build_signed_diffs(const SampleMatrix& x, const GMatrix& g) {
  const Index n = x.rows();
  if (g.g.rows() != n || g.g.cols() != n) {
    throw DimensionMismatch("g-coefficient matrix is " + std::to_string(g.g.rows()) + "x" +
                            std::to_string(g.g.cols()) + " but x has " + std::to_string(n) + " rows");
  }
  const MatrixXd& data = x.data();
  const Index p = data.cols();

  Index n_plus = 0;
  Index n_minus = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (g.g(i, j) > 0.0) {
        ++n_plus;
      } else if (g.g(i, j) < 0.0) {
        ++n_minus;
      }
    }
  }

  SignedDiffProblem problem;
  problem.n_samples = n;
  problem.m_plus.resize(n_plus, p);
  problem.m_minus.resize(n_minus, p);
  Index rp = 0;
  Index rm = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double gij = g.g(i, j);
      if (gij > 0.0) {
        problem.m_plus.row(rp++) = gij * (data.row(i) - data.row(j));
      } else if (gij < 0.0) {
        problem.m_minus.row(rm++) = -gij * (data.row(i) - data.row(j));
      }
    }
  }
  return problem;
}

SignedDiffProblem build_problem(const SampleMatrix& x, const SampleMatrix& y) {
  if (x.rows() != y.rows()) {
    throw DimensionMismatch("sample pair has " + std::to_string(x.rows()) + " and " +
                            std::to_string(y.rows()) + " rows");
  }
  return build_signed_diffs(x, g_coefficients(y));
}

double objective(const SignedDiffProblem& problem, const VectorXd& u) {
  if (u.size() != problem.dim()) {
    throw DimensionMismatch("direction has length " + std::to_string(u.size()) + ", expected " +
                            std::to_string(problem.dim()));
  }
  double value = 0.0;
  if (problem.n_plus() > 0) value += (problem.m_plus * u).lpNorm<1>();
  if (problem.n_minus() > 0) value -= (problem.m_minus * u).lpNorm<1>();
  return value;
}

}  // namespace disca
