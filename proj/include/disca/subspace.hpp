#pragma once

#include <vector>

#include "disca/sample_matrix.hpp"

namespace disca {

//! A linear subspace of R^d stored as a d x k matrix with orthonormal columns.
//! k = 0 encodes the trivial subspace {0}.
class Basis {
 public:
  //! Validates orthonormality of the columns to 1e-10.
  explicit Basis(MatrixXd columns);

  static Basis identity(Index dim);
  static Basis trivial(Index dim);

  const MatrixXd& columns() const noexcept { return columns_; }
  Index ambient_dim() const noexcept { return columns_.rows(); }
  Index rank() const noexcept { return columns_.cols(); }

  //! Orthogonal projector onto the subspace (d x d).
  MatrixXd projector() const;

 private:
  MatrixXd columns_;
};

//! Orthonormal basis of the span of the columns of `vectors` (d x m). The
//! numerical rank cut-off is 1e-10 times the largest singular value.
Basis orthonormalize(const MatrixXd& vectors);
Basis orthonormalize(const std::vector<VectorXd>& vectors, Index ambient_dim);

Basis complement(const Basis& basis);

//! Coordinates X U of the samples in the basis (N x k). Requires rank >= 1.
SampleMatrix project_samples(const SampleMatrix& x, const Basis& basis);

//! ||P1 - P2||_2 for subspaces of equal rank and ambient dimension.
double subspace_distance(const Basis& b1, const Basis& b2);

//! ||A1' B2||_2, with B2 an orthonormal basis of the complement of b2.
double subspace_distance_via_complement(const Basis& b1, const Basis& b2);

//! Kaiser-normalized varimax criterion of the loadings (rows = variables).
double varimax_criterion(const MatrixXd& loadings);

//! Rotates the basis by the orthogonal k x k matrix maximizing the
//! Kaiser-normalized varimax criterion; the span is unchanged.
Basis varimax(const Basis& basis, int max_iters = 100, double tol = 1e-8);

}  // namespace disca
