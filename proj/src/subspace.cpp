#include "disca/subspace.hpp"

#include <cmath>
#include <string>

#include "disca/errors.hpp"

namespace disca {

namespace {

constexpr double kOrthonormalTol = 1e-10;
constexpr double kRankTol = 1e-10;

void require_comparable(const Basis& b1, const Basis& b2) {
  if (b1.ambient_dim() != b2.ambient_dim()) {
    throw InvalidComparison("subspaces live in R^" + std::to_string(b1.ambient_dim()) + " and R^" +
                            std::to_string(b2.ambient_dim()));
  }
  if (b1.rank() != b2.rank()) {
    throw InvalidComparison("subspace distance needs equal ranks, got " +
                            std::to_string(b1.rank()) + " and " + std::to_string(b2.rank()));
  }
}

}  // namespace

Basis::Basis(MatrixXd columns) : columns_(std::move(columns)) {
  if (columns_.rows() < 1) throw InvalidInput("basis needs ambient dimension >= 1");
  if (columns_.cols() > columns_.rows()) throw InvalidInput("basis has more columns than rows");
  if (!columns_.allFinite()) throw InvalidInput("basis contains non-finite entries");
  const Index k = columns_.cols();
  if (k > 0) {
    const double err = (columns_.transpose() * columns_ - MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (err > kOrthonormalTol) {
      throw InvalidInput("basis columns are not orthonormal (max deviation " + std::to_string(err) + ")");
    }
  }
}

Basis Basis::identity(Index dim) { return Basis(MatrixXd::Identity(dim, dim)); }

Basis Basis::trivial(Index dim) { return Basis(MatrixXd(dim, 0)); }

MatrixXd Basis::projector() const { return columns_ * columns_.transpose(); }

Basis orthonormalize(const MatrixXd& vectors) {
  if (!vectors.allFinite()) throw InvalidInput("cannot orthonormalize non-finite vectors");
  const Index d = vectors.rows();
  if (vectors.cols() == 0) return Basis::trivial(d);
  const Eigen::JacobiSVD<MatrixXd> svd(vectors, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Basis::trivial(d);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > kRankTol * sv(0)) ++rank;
  return Basis(svd.matrixU().leftCols(rank));
}

Basis orthonormalize(const std::vector<VectorXd>& vectors, Index ambient_dim) {
  MatrixXd stacked(ambient_dim, static_cast<Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != ambient_dim) {
      throw DimensionMismatch("vector " + std::to_string(j) + " has length " +
                              std::to_string(vectors[j].size()));
    }
    stacked.col(static_cast<Index>(j)) = vectors[j];
  }
  return orthonormalize(stacked);
}

Basis complement(const Basis& basis) {
  const Index d = basis.ambient_dim();
  const Index k = basis.rank();
  if (k == 0) return Basis::identity(d);
  if (k == d) return Basis::trivial(d);
  const Eigen::JacobiSVD<MatrixXd> svd(basis.columns(), Eigen::ComputeFullU);
  MatrixXd comp = svd.matrixU().rightCols(d - k);
  // Re-orthogonalize against the input to strip rounding drift.
  comp -= basis.columns() * (basis.columns().transpose() * comp);
  const Eigen::HouseholderQR<MatrixXd> qr(comp);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(d, d - k);
  return Basis(std::move(q));
}

SampleMatrix project_samples(const SampleMatrix& x, const Basis& basis) {
  if (x.cols() != basis.ambient_dim()) {
    throw DimensionMismatch("samples have " + std::to_string(x.cols()) +
                            " columns but the basis lives in R^" + std::to_string(basis.ambient_dim()));
  }
  if (basis.rank() == 0) throw InvalidParameter("cannot project onto the trivial subspace");
  return SampleMatrix(x.data() * basis.columns());
}

double subspace_distance(const Basis& b1, const Basis& b2) {
  require_comparable(b1, b2);
  const MatrixXd diff = b1.projector() - b2.projector();
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(diff, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double subspace_distance_via_complement(const Basis& b1, const Basis& b2) {
  require_comparable(b1, b2);
  const Basis b2_perp = complement(b2);
  if (b1.rank() == 0 || b2_perp.rank() == 0) return 0.0;
  const MatrixXd cross = b1.columns().transpose() * b2_perp.columns();
  const Eigen::JacobiSVD<MatrixXd> svd(cross);
  return svd.singularValues()(0);
}

namespace {

VectorXd row_scales(const MatrixXd& loadings) {
  VectorXd sc = loadings.rowwise().norm();
  for (Index i = 0; i < sc.size(); ++i) {
    if (sc(i) == 0.0) sc(i) = 1.0;
  }
  return sc;
}

}  // namespace

double varimax_criterion(const MatrixXd& loadings) {
  const MatrixXd x = loadings.array().colwise() / row_scales(loadings).array();
  const double p = static_cast<double>(x.rows());
  const Eigen::ArrayXXd sq = x.array().square();
  double value = 0.0;
  for (Index j = 0; j < x.cols(); ++j) {
    const double mean_sq = sq.col(j).sum() / p;
    value += sq.col(j).square().sum() / p - mean_sq * mean_sq;
  }
  return value;
}

Basis varimax(const Basis& basis, int max_iters, double tol) {
  const Index k = basis.rank();
  if (k < 1) throw InvalidParameter("varimax needs a basis of rank >= 1");
  if (k == 1) return basis;

  const VectorXd sc = row_scales(basis.columns());
  const MatrixXd x = basis.columns().array().colwise() / sc.array();
  const double p = static_cast<double>(x.rows());

  MatrixXd rotation = MatrixXd::Identity(k, k);
  double d = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const MatrixXd z = x * rotation;
    const VectorXd col_sq = z.array().square().colwise().sum().transpose();
    const MatrixXd target = z.array().cube().matrix() - z * (col_sq / p).asDiagonal();
    const MatrixXd b = x.transpose() * target;
    const Eigen::JacobiSVD<MatrixXd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    rotation = svd.matrixU() * svd.matrixV().transpose();
    const double d_past = d;
    d = svd.singularValues().sum();
    if (d < d_past * (1.0 + tol)) break;
  }

  // Rotate the original (unnormalized) columns; the rotation is orthogonal so
  // the result stays orthonormal and spans the same subspace.
  MatrixXd rotated = basis.columns() * rotation;
  // Strip rounding so the orthonormality check in Basis holds tightly.
  const Eigen::HouseholderQR<MatrixXd> qr(rotated);
  const MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(rotated.rows(), k);
  for (Index j = 0; j < k; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return Basis(std::move(q));
}

}  // namespace disca
