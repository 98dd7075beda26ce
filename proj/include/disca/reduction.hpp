#pragma once

#include "disca/sample_matrix.hpp"

namespace disca {

//! Doubly-centred Y-distances g_ij weighting |u'(Xi - Xj)| in N^2 V^2_N(Xu, Y).
struct GMatrix {
  MatrixXd g;
};

//! The l1-difference form of min V^2_N(Xu, Y):
//!   V^2_N(Xu, Y) = (2 / N^2) (||M+ u||_1 - ||M- u||_1).
//! Row r of m_plus is g_ij (Xi - Xj)' for a pair j > i with g_ij > 0; row r of
//! m_minus is -g_ij (Xi - Xj)' for a pair with g_ij < 0. Pairs with g_ij == 0
//! appear in neither matrix.
struct SignedDiffProblem {
  MatrixXd m_plus;
  MatrixXd m_minus;
  Index n_samples = 0;  //!< N of the sample pair the problem was built from

  Index n_plus() const noexcept { return m_plus.rows(); }
  Index n_minus() const noexcept { return m_minus.rows(); }
  Index dim() const noexcept { return m_plus.cols(); }
  bool empty() const noexcept { return n_plus() == 0 && n_minus() == 0; }
};

GMatrix g_coefficients(const SampleMatrix& y);

SignedDiffProblem build_signed_diffs(const SampleMatrix& x, const GMatrix& g);

//! Convenience: g_coefficients(y) followed by build_signed_diffs.
SignedDiffProblem build_problem(const SampleMatrix& x, const SampleMatrix& y);

//! ||M+ u||_1 - ||M- u||_1.
double objective(const SignedDiffProblem& problem, const VectorXd& u);

}  // namespace disca
