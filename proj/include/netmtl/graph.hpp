#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "netmtl/rng.hpp"

namespace netmtl {

using Index = Eigen::Index;

struct Neighbor {
  Index agent;
  double weight;
};

struct WeightedEdge {
  Index from;
  Index to;
  double weight;
};

/// Undirected weighted graph over N agents. The adjacency C is symmetric,
/// nonnegative, with zero diagonal. Immutable after construction.
class Graph {
 public:
  explicit Graph(Eigen::MatrixXd adjacency);

  /// Builds from an undirected edge list with 0-based endpoints. Each edge
  /// must appear once; self-loops and nonpositive weights are rejected.
  static Graph from_edges(Index n, std::span<const WeightedEdge> edges);

  Index size() const { return adjacency_.rows(); }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }

  /// Neighbors of k, excluding k itself, in increasing agent order.
  std::span<const Neighbor> neighbors(Index k) const {
    return {edges_.data() + offsets_[static_cast<std::size_t>(k)],
            edges_.data() + offsets_[static_cast<std::size_t>(k) + 1]};
  }
  Index degree(Index k) const { return static_cast<Index>(neighbors(k).size()); }
  bool adjacent(Index k, Index l) const { return adjacency_(k, l) > 0.0; }
  bool connected() const { return connected_; }

  std::vector<WeightedEdge> edge_list() const;

 private:
  Eigen::MatrixXd adjacency_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> edges_;
  bool connected_ = false;
};

/// True when the agents in `members` induce a connected subgraph.
bool induced_connected(const Graph& graph, std::span<const Index> members);

Graph path_graph(Index n, double weight = 1.0);
Graph ring_graph(Index n, double weight = 1.0);
Graph star_graph(Index leaves, double weight = 1.0);
Graph complete_graph(Index n, double weight = 1.0);

struct GeometricGraph {
  Graph graph;
  Eigen::MatrixX2d positions;
};

/// Agents uniform in the unit square, linked when closer than `radius`, with
/// Gaussian kernel weights exp(-d^2 / (2 kernel_width^2)). When
/// `require_connected` is set, redraws (up to `max_attempts`) until the graph
/// is connected.
GeometricGraph random_geometric_graph(Index n, double radius, double kernel_width, Rng& rng,
                                      bool require_connected = true, int max_attempts = 1000);

/// Assignment of agents to Q clusters of consecutive indices.
class ClusterPartition {
 public:
  explicit ClusterPartition(std::vector<Index> cluster_sizes);
  /// Rejects assignments whose clusters are not runs of consecutive agents.
  static ClusterPartition from_assignment(std::span<const Index> cluster_of_agent);

  Index clusters() const { return static_cast<Index>(sizes_.size()); }
  Index agents() const { return static_cast<Index>(cluster_of_.size()); }
  Index size(Index q) const { return sizes_[static_cast<std::size_t>(q)]; }
  Index first(Index q) const { return first_[static_cast<std::size_t>(q)]; }
  Index cluster_of(Index k) const { return cluster_of_[static_cast<std::size_t>(k)]; }
  bool same_cluster(Index k, Index l) const { return cluster_of(k) == cluster_of(l); }
  const std::vector<Index>& sizes() const { return sizes_; }

 private:
  std::vector<Index> sizes_;
  std::vector<Index> first_;
  std::vector<Index> cluster_of_;
};

}  // namespace netmtl
