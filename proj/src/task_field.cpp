#include "netmtl/task_field.hpp"

#include "netmtl/error.hpp"

namespace netmtl {

namespace {

std::vector<Index> prefix_offsets(const std::vector<Index>& sizes, Index& total) {
  std::vector<Index> offsets;
  offsets.reserve(sizes.size());
  total = 0;
  for (Index s : sizes) {
    if (s < 0) throw ConfigError("task field: negative block length");
    offsets.push_back(total);
    total += s;
  }
  return offsets;
}

}  // namespace

TaskField::TaskField(std::vector<Index> block_sizes) : sizes_(std::move(block_sizes)) {
  Index total = 0;
  offsets_ = prefix_offsets(sizes_, total);
  values_ = Eigen::VectorXd::Zero(total);
}

TaskField::TaskField(Eigen::VectorXd stacked, std::vector<Index> block_sizes)
    : values_(std::move(stacked)), sizes_(std::move(block_sizes)) {
  Index total = 0;
  offsets_ = prefix_offsets(sizes_, total);
  if (total != values_.size()) {
    throw ConfigError("task field: stacked length does not match block lengths");
  }
}

TaskField TaskField::uniform(Index agents, Index block_size) {
  return TaskField(std::vector<Index>(static_cast<std::size_t>(agents), block_size));
}

TaskField TaskField::from_blocks(const std::vector<Eigen::VectorXd>& blocks) {
  std::vector<Index> sizes;
  Index total = 0;
  for (const auto& b : blocks) {
    sizes.push_back(b.size());
    total += b.size();
  }
  Eigen::VectorXd v(total);
  Index at = 0;
  for (const auto& b : blocks) {
    v.segment(at, b.size()) = b;
    at += b.size();
  }
  return TaskField(std::move(v), std::move(sizes));
}

bool TaskField::has_uniform_blocks() const {
  for (Index s : sizes_) {
    if (s != sizes_.front()) return false;
  }
  return true;
}

Index TaskField::uniform_block_size() const {
  if (sizes_.empty()) return 0;
  if (!has_uniform_blocks()) throw ConfigError("task field: agents have unequal block lengths");
  return sizes_.front();
}

Eigen::MatrixXd TaskField::as_rows() const {
  const Index m = uniform_block_size();
  Eigen::MatrixXd rows(agents(), m);
  for (Index k = 0; k < agents(); ++k) rows.row(k) = block(k).transpose();
  return rows;
}

TaskField TaskField::from_rows(const Eigen::MatrixXd& rows) {
  TaskField f = uniform(rows.rows(), rows.cols());
  for (Index k = 0; k < rows.rows(); ++k) f.block(k) = rows.row(k).transpose();
  return f;
}

}  // namespace netmtl
