#include "disca/dcov.hpp"

#include <cmath>
#include <string>

#include "disca/errors.hpp"

namespace disca {

MatrixXd pairwise_distances(const SampleMatrix& samples) {
  const MatrixXd& x = samples.data();
  const Index n = x.rows();
  MatrixXd dist = MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double d = (x.row(i) - x.row(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

DistanceStats dcov_from_distances(const MatrixXd& dist_x, const MatrixXd& dist_y) {
  if (dist_x.rows() != dist_y.rows() || dist_x.cols() != dist_y.cols() ||
      dist_x.rows() != dist_x.cols()) {
    throw DimensionMismatch("distance matrices must be square and of equal size");
  }
  const double n = static_cast<double>(dist_x.rows());

  // S3 contracts the triple sum through row sums: sum_i (sum_j a_ij)(sum_m b_im).
  const VectorXd row_x = dist_x.rowwise().sum();
  const VectorXd row_y = dist_y.rowwise().sum();

  DistanceStats stats;
  stats.n = static_cast<std::size_t>(dist_x.rows());
  stats.s1 = dist_x.cwiseProduct(dist_y).sum() / (n * n);
  stats.s2 = (row_x.sum() / (n * n)) * (row_y.sum() / (n * n));
  stats.s3 = row_x.dot(row_y) / (n * n * n);
  stats.v2n_raw = stats.s1 + stats.s2 - 2.0 * stats.s3;
  stats.v2n = stats.v2n_raw > 0.0 ? stats.v2n_raw : 0.0;
  return stats;
}

DistanceStats empirical_dcov(const SampleMatrix& x, const SampleMatrix& y) {
  if (x.rows() != y.rows()) {
    throw DimensionMismatch("sample pair has " + std::to_string(x.rows()) + " and " +
                            std::to_string(y.rows()) + " rows");
  }
  return dcov_from_distances(pairwise_distances(x), pairwise_distances(y));
}

double test_statistic(const DistanceStats& stats) {
  if (stats.s2 == 0.0) {
    throw DegenerateSample("S2 is zero: one of the samples is constant");
  }
  return static_cast<double>(stats.n) * stats.v2n / stats.s2;
}

double test_statistic(const SampleMatrix& x, const SampleMatrix& y) {
  return test_statistic(empirical_dcov(x, y));
}

double independence_statistic(const DistanceStats& stats) noexcept {
  if (stats.s2 == 0.0) return 0.0;
  return static_cast<double>(stats.n) * stats.v2n / stats.s2;
}

// Wichura's AS 241 (PPND16), relative accuracy about 1e-16.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidParameter("normal_quantile needs 0 < p < 1, got " + std::to_string(p));
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        ((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
            45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
         133.14166789178437745) * r + 3.387132872796366608;
    const double den =
        ((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
            21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
         42.313330701600911252) * r + 1.0;
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        ((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
            1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
         4.6303378461565452959) * r + 1.42343711074968357734;
    const double den =
        ((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
            0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
         2.05319162663775882187) * r + 1.0;
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        ((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
            0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
         5.4637849111641143699) * r + 6.6579046435011037772;
    const double den =
        ((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
            7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
         0.59983220655588793769) * r + 1.0;
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

double rejection_threshold(double alpha) {
  if (!(alpha > 0.0 && alpha <= kMaxAlpha)) {
    throw InvalidParameter("alpha must lie in (0, 0.215], got " + std::to_string(alpha));
  }
  const double z = normal_quantile(1.0 - alpha / 2.0);
  return z * z;
}

bool reject_independence(double statistic, double alpha) {
  return statistic > rejection_threshold(alpha);
}

}  // namespace disca
