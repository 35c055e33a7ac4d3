#include "dpadmm/linear_operator.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "dpadmm/kernels.hpp"

namespace dpadmm {

namespace {

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

Vector LinearOperator::apply(const Vector& u) const {
  Vector out = Vector::Zero(rows());
  apply_add(u, out);
  return out;
}

DenseOperator::DenseOperator(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() < 1 || matrix_.cols() < 1) throw DimensionError("dense operator must be non-empty");
  const Eigen::MatrixXd gram = matrix_.transpose() * matrix_;
  const double s = gram(0, 0);
  const Eigen::MatrixXd residual = gram - s * Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
  if (residual.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + std::abs(s))) gram_scale_ = s;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_);
  norm_ = svd.singularValues()(0);
}

void DenseOperator::apply_add(const Vector& u, Vector& out) const {
  if (u.size() != matrix_.cols() || out.size() != matrix_.rows()) throw DimensionError("dense operator apply");
  out.noalias() += matrix_ * u;
}

Vector DenseOperator::adjoint(const Vector& y) const {
  if (y.size() != matrix_.rows()) throw DimensionError("dense operator adjoint");
  return matrix_.transpose() * y;
}

StackedIdentityOperator::StackedIdentityOperator(std::vector<double> weights, int block_dim)
    : weights_(std::move(weights)), block_dim_(block_dim) {
  if (weights_.empty() || block_dim_ < 1) throw DimensionError("stacked identity operator needs weights and n_t >= 1");
}

void StackedIdentityOperator::apply_add(const Vector& u, Vector& out) const {
  if (u.size() != block_dim_ || out.size() != rows()) throw DimensionError("stacked identity apply");
  kernels::parallel::stacked_apply_add(weights_, view(u), view(out));
}

Vector StackedIdentityOperator::adjoint(const Vector& y) const {
  if (y.size() != rows()) throw DimensionError("stacked identity adjoint");
  Vector out(block_dim_);
  kernels::parallel::stacked_adjoint(weights_, view(y), view(out));
  return out;
}

std::optional<double> StackedIdentityOperator::gram_scale() const {
  double s = 0.0;
  for (double w : weights_) s += w * w;
  return s;
}

double StackedIdentityOperator::norm() const { return std::sqrt(*gram_scale()); }

Eigen::MatrixXd StackedIdentityOperator::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows(), cols());
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    m.block(static_cast<Eigen::Index>(j) * block_dim_, 0, block_dim_, block_dim_) =
        weights_[j] * Eigen::MatrixXd::Identity(block_dim_, block_dim_);
  }
  return m;
}

BlockOperator::BlockOperator(std::vector<OperatorPtr> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw DimensionError("block operator needs at least one block");
  const int ell = blocks_.front()->rows();
  for (const auto& b : blocks_) {
    if (!b) throw DimensionError("null block operator");
    if (b->rows() != ell) throw DimensionError("all A_t must share the same row dimension");
  }
}

int BlockOperator::rows() const { return blocks_.empty() ? 0 : blocks_.front()->rows(); }

Vector BlockOperator::apply(const BlockVector& x) const {
  if (x.num_blocks() != num_blocks()) throw DimensionError("block count mismatch applying A");
  Vector out = Vector::Zero(rows());
  for (int t = 0; t < num_blocks(); ++t) block(t).apply_add(x[t], out);
  return out;
}

BlockVector BlockOperator::adjoint(const Vector& y) const {
  std::vector<Vector> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b->adjoint(y));
  return BlockVector(std::move(blocks));
}

Eigen::MatrixXd BlockOperator::to_dense() const {
  int cols = 0;
  for (const auto& b : blocks_) cols += b->cols();
  Eigen::MatrixXd m(rows(), cols);
  int pos = 0;
  for (const auto& b : blocks_) {
    m.middleCols(pos, b->cols()) = b->to_dense();
    pos += b->cols();
  }
  return m;
}

double BlockOperator::dagger_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b->norm();
  return s;
}

BlockOperator make_consensus3(int n) {
  return BlockOperator({std::make_shared<StackedIdentityOperator>(std::vector<double>{1.0, 0.0}, n),
                        std::make_shared<StackedIdentityOperator>(std::vector<double>{0.0, 1.0}, n),
                        std::make_shared<StackedIdentityOperator>(std::vector<double>{-1.0, -1.0}, n)});
}

}  // namespace dpadmm
