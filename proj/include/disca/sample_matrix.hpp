#pragma once

#include <Eigen/Dense>

namespace disca {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

//! N observations (rows) of a d-dimensional random vector (columns).
//!
//! Construction validates N >= 2, d >= 1 and that every entry is finite;
//! a SampleMatrix that exists is always usable by the rest of the library.
class SampleMatrix {
 public:
  explicit SampleMatrix(MatrixXd data);

  Index rows() const noexcept { return data_.rows(); }
  Index cols() const noexcept { return data_.cols(); }
  const MatrixXd& data() const noexcept { return data_; }

  //! Samples of the scalar projection X u.
  SampleMatrix project(const VectorXd& direction) const;

  //! An N x 1 sample whose rows are all zero; stands in for "nothing left".
  static SampleMatrix constant(Index n);

 private:
  MatrixXd data_;
};

}  // namespace disca
