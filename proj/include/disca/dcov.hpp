#pragma once

#include <cstddef>

#include "disca/sample_matrix.hpp"

namespace disca {

//! Components of the squared empirical distance covariance of a sample pair.
struct DistanceStats {
  double s1 = 0.0;  //!< mean of |Xi-Xj||Yi-Yj| over all ordered pairs
  double s2 = 0.0;  //!< product of the mean X-distance and mean Y-distance
  double s3 = 0.0;  //!< (1/N^3) sum_i sum_{j,m} |Xi-Xj||Yi-Ym|
  double v2n = 0.0;      //!< s1 + s2 - 2 s3, clamped at 0
  double v2n_raw = 0.0;  //!< s1 + s2 - 2 s3 as computed
  std::size_t n = 0;
};

//! Symmetric N x N matrix of Euclidean distances between rows.
MatrixXd pairwise_distances(const SampleMatrix& samples);

DistanceStats empirical_dcov(const SampleMatrix& x, const SampleMatrix& y);

//! Same statistics from precomputed distance matrices (each N x N).
DistanceStats dcov_from_distances(const MatrixXd& dist_x, const MatrixXd& dist_y);

//! N * V^2_N / S2. Throws DegenerateSample when S2 == 0.
double test_statistic(const SampleMatrix& x, const SampleMatrix& y);
double test_statistic(const DistanceStats& stats);

//! Like test_statistic, but a constant sample yields 0 (a constant is
//! independent of everything).
double independence_statistic(const DistanceStats& stats) noexcept;

//! Standard normal quantile function. Requires 0 < p < 1.
double normal_quantile(double p);

//! (Phi^{-1}(1 - alpha/2))^2 for 0 < alpha <= 0.215.
double rejection_threshold(double alpha);

//! True iff statistic > rejection_threshold(alpha).
bool reject_independence(double statistic, double alpha);

//! Largest significance level for which the asymptotic test is valid.
inline constexpr double kMaxAlpha = 0.215;

}  // namespace disca
