#pragma once

#include <Eigen/Dense>

#include <vector>

namespace netmtl {

using Index = Eigen::Index;

/// Stacked network vector col{w_1, ..., w_N} with per-agent block lengths.
class TaskField {
 public:
  TaskField() = default;
  /// Zero field with the given block lengths.
  explicit TaskField(std::vector<Index> block_sizes);
  TaskField(Eigen::VectorXd stacked, std::vector<Index> block_sizes);

  static TaskField uniform(Index agents, Index block_size);
  static TaskField from_blocks(const std::vector<Eigen::VectorXd>& blocks);

  Index agents() const { return static_cast<Index>(sizes_.size()); }
  Index total_size() const { return values_.size(); }
  Index block_size(Index k) const { return sizes_[static_cast<std::size_t>(k)]; }
  Index offset(Index k) const { return offsets_[static_cast<std::size_t>(k)]; }
  const std::vector<Index>& block_sizes() const { return sizes_; }

  /// Common block length M; throws ConfigError when lengths differ.
  Index uniform_block_size() const;
  bool has_uniform_blocks() const;
  bool same_shape(const TaskField& other) const { return sizes_ == other.sizes_; }

  auto block(Index k) { return values_.segment(offset(k), block_size(k)); }
  auto block(Index k) const { return values_.segment(offset(k), block_size(k)); }

  Eigen::VectorXd& stacked() { return values_; }
  const Eigen::VectorXd& stacked() const { return values_; }

  void set_zero() { values_.setZero(); }

  /// Reshapes a uniform field into the N x M matrix whose k-th row is w_k.
  Eigen::MatrixXd as_rows() const;
  static TaskField from_rows(const Eigen::MatrixXd& rows);

 private:
  Eigen::VectorXd values_;
  std::vector<Index> sizes_;
  std::vector<Index> offsets_;
};

}  // namespace netmtl
