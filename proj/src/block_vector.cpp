#include "dpadmm/block_vector.hpp"

#include <cmath>
#include <numeric>

namespace dpadmm {

BlockStructure::BlockStructure(std::vector<int> block_dims, int ell)
    : dims(std::move(block_dims)), constraint_dim(ell) {
  if (dims.empty()) throw DimensionError("block structure needs at least one block");
  for (int d : dims) {
    if (d < 1) throw DimensionError("every block dimension must be positive");
  }
  if (constraint_dim < 1) throw DimensionError("constraint dimension must be positive");
}

int BlockStructure::total_dim() const { return std::accumulate(dims.begin(), dims.end(), 0); }

int BlockStructure::offset(int t) const {
  return std::accumulate(dims.begin(), dims.begin() + t, 0);
}

BlockVector::BlockVector(const BlockStructure& structure) {
  blocks_.reserve(structure.dims.size());
  for (int d : structure.dims) blocks_.push_back(Vector::Zero(d));
}

BlockVector::BlockVector(std::vector<Vector> blocks) : blocks_(std::move(blocks)) {}

int BlockVector::total_dim() const {
  int n = 0;
  for (const auto& b : blocks_) n += static_cast<int>(b.size());
  return n;
}

bool BlockVector::matches(const BlockStructure& structure) const {
  if (blocks_.size() != structure.dims.size()) return false;
  for (std::size_t t = 0; t < blocks_.size(); ++t) {
    if (blocks_[t].size() != structure.dims[t]) return false;
  }
  return true;
}

void BlockVector::require_matches(const BlockStructure& structure, const std::string& what) const {
  if (!matches(structure)) {
    throw DimensionError(what + ": block partition does not match the problem structure");
  }
}

Vector BlockVector::concatenated() const {
  Vector out(total_dim());
  Eigen::Index pos = 0;
  for (const auto& b : blocks_) {
    out.segment(pos, b.size()) = b;
    pos += b.size();
  }
  return out;
}

BlockVector BlockVector::split(const Eigen::Ref<const Vector>& flat, const BlockStructure& structure) {
  if (flat.size() != structure.total_dim()) {
    throw DimensionError("flat vector length does not match total block dimension");
  }
  std::vector<Vector> blocks;
  Eigen::Index pos = 0;
  for (int d : structure.dims) {
    blocks.emplace_back(flat.segment(pos, d));
    pos += d;
  }
  return BlockVector(std::move(blocks));
}

double BlockVector::squared_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b.squaredNorm();
  return s;
}

double BlockVector::norm() const { return std::sqrt(squared_norm()); }

double BlockVector::dagger_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b.norm();
  return s;
}

BlockVector& BlockVector::operator+=(const BlockVector& other) {
  if (other.blocks_.size() != blocks_.size()) throw DimensionError("block count mismatch in +=");
  for (std::size_t t = 0; t < blocks_.size(); ++t) blocks_[t] += other.blocks_[t];
  return *this;
}

BlockVector& BlockVector::operator-=(const BlockVector& other) {
  if (other.blocks_.size() != blocks_.size()) throw DimensionError("block count mismatch in -=");
  for (std::size_t t = 0; t < blocks_.size(); ++t) blocks_[t] -= other.blocks_[t];
  return *this;
}

bool BlockVector::operator==(const BlockVector& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t t = 0; t < blocks_.size(); ++t) {
    if (blocks_[t].size() != other.blocks_[t].size()) return false;
    if (blocks_[t] != other.blocks_[t]) return false;
  }
  return true;
}

}  // namespace dpadmm
