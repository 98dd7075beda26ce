#include "disca/sample_matrix.hpp"

#include <string>

#include "disca/errors.hpp"

namespace disca {

SampleMatrix::SampleMatrix(MatrixXd data) : data_(std::move(data)) {
  if (data_.rows() < 2) {
    throw InvalidInput("sample matrix needs at least 2 rows, got " + std::to_string(data_.rows()));
  }
  if (data_.cols() < 1) {
    throw InvalidInput("sample matrix needs at least 1 column");
  }
  if (!data_.allFinite()) {
    throw InvalidInput("sample matrix contains non-finite entries");
  }
}

SampleMatrix SampleMatrix::project(const VectorXd& direction) const {
  if (direction.size() != cols()) {
    throw DimensionMismatch("projection direction has length " + std::to_string(direction.size()) +
                            ", expected " + std::to_string(cols()));
  }
  return SampleMatrix(data_ * direction);
}

SampleMatrix SampleMatrix::constant(Index n) { return SampleMatrix(MatrixXd::Zero(n, 1)); }

}  // namespace disca
