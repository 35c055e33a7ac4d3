#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "dpadmm/block_vector.hpp"

namespace dpadmm {

/// A linear map A_t : R^{n_t} -> R^ell with its adjoint.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual int rows() const = 0;
  virtual int cols() const = 0;

  /// out += A u
  virtual void apply_add(const Vector& u, Vector& out) const = 0;
  /// A^* y
  virtual Vector adjoint(const Vector& y) const = 0;

  /// Returns s when A^*A = s I, nothing otherwise.
  virtual std::optional<double> gram_scale() const = 0;
  /// Spectral norm ||A||.
  virtual double norm() const = 0;
  /// Dense materialization.
  virtual Eigen::MatrixXd to_dense() const = 0;

  Vector apply(const Vector& u) const;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXd matrix);

  int rows() const override { return static_cast<int>(matrix_.rows()); }
  int cols() const override { return static_cast<int>(matrix_.cols()); }
  void apply_add(const Vector& u, Vector& out) const override;
  Vector adjoint(const Vector& y) const override;
  std::optional<double> gram_scale() const override { return gram_scale_; }
  double norm() const override { return norm_; }
  Eigen::MatrixXd to_dense() const override { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
  std::optional<double> gram_scale_;
  double norm_ = 0.0;
};

/// u -> (w_0 u, w_1 u, ..., w_{r-1} u) with ell = r * n_t. Covers consensus
/// difference maps such as A_3 = [-I; -I] without materializing them.
class StackedIdentityOperator final : public LinearOperator {
 public:
  StackedIdentityOperator(std::vector<double> weights, int block_dim);

  int rows() const override { return static_cast<int>(weights_.size()) * block_dim_; }
  int cols() const override { return block_dim_; }
  void apply_add(const Vector& u, Vector& out) const override;
  Vector adjoint(const Vector& y) const override;
  std::optional<double> gram_scale() const override;
  double norm() const override;
  Eigen::MatrixXd to_dense() const override;

  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
  int block_dim_;
};

/// The block operators A_1..A_B and their aggregate A x = sum_t A_t x_t.
class BlockOperator {
 public:
  BlockOperator() = default;
  explicit BlockOperator(std::vector<OperatorPtr> blocks);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int rows() const;
  const LinearOperator& block(int t) const { return *blocks_.at(static_cast<std::size_t>(t)); }

  Vector apply(const BlockVector& x) const;
  BlockVector adjoint(const Vector& y) const;
  Eigen::MatrixXd to_dense() const;

  /// ||A||_dagger = sum_t ||A_t||.
  double dagger_norm() const;

 private:
  std::vector<OperatorPtr> blocks_;
};

/// The three-block consensus map A = [[I, 0, -I], [0, I, -I]] on R^n x R^n x R^n.
BlockOperator make_consensus3(int n);

}  // namespace dpadmm
