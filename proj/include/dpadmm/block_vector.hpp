#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dpadmm {

using Vector = Eigen::VectorXd;

/// Thrown when vector or operator dimensions do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Block partition of the decision variable: B blocks of sizes n_1..n_B and a
/// constraint space of dimension ell.
struct BlockStructure {
  std::vector<int> dims;
  int constraint_dim = 0;

  BlockStructure() = default;
  BlockStructure(std::vector<int> block_dims, int ell);

  int num_blocks() const { return static_cast<int>(dims.size()); }
  int total_dim() const;
  /// Offset of block t inside the concatenated vector.
  int offset(int t) const;
};

/// A real vector partitioned into blocks x = (x_1, ..., x_B).
class BlockVector {
 public:
  BlockVector() = default;
  /// Zero vector with the given partition.
  explicit BlockVector(const BlockStructure& structure);
  explicit BlockVector(std::vector<Vector> blocks);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int total_dim() const;

  Vector& block(int t) { return blocks_.at(static_cast<std::size_t>(t)); }
  const Vector& block(int t) const { return blocks_.at(static_cast<std::size_t>(t)); }
  Vector& operator[](int t) { return blocks_[static_cast<std::size_t>(t)]; }
  const Vector& operator[](int t) const { return blocks_[static_cast<std::size_t>(t)]; }

  bool matches(const BlockStructure& structure) const;
  /// Throws DimensionError naming `what` when the partition differs.
  void require_matches(const BlockStructure& structure, const std::string& what) const;

  Vector concatenated() const;
  static BlockVector split(const Eigen::Ref<const Vector>& flat, const BlockStructure& structure);

  /// Euclidean norm of the concatenated vector.
  double norm() const;
  double squared_norm() const;
  /// ||u||_dagger = sum_t ||u_t||.
  double dagger_norm() const;

  BlockVector& operator+=(const BlockVector& other);
  BlockVector& operator-=(const BlockVector& other);
  friend BlockVector operator-(BlockVector lhs, const BlockVector& rhs) { return lhs -= rhs; }
  friend BlockVector operator+(BlockVector lhs, const BlockVector& rhs) { return lhs += rhs; }

  bool operator==(const BlockVector& other) const;

 private:
  std::vector<Vector> blocks_;
};

}  // namespace dpadmm
