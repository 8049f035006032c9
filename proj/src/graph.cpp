#include "netmtl/graph.hpp"

#include <cmath>
#include <queue>
#include <string>

#include "netmtl/error.hpp"

namespace netmtl {

namespace {

bool reachable_all(const Eigen::MatrixXd& adjacency, std::span<const Index> members) {
  if (members.size() <= 1) return true;
  std::vector<char> in_set(static_cast<std::size_t>(adjacency.rows()), 0);
  for (Index k : members) in_set[static_cast<std::size_t>(k)] = 1;
  std::vector<char> seen(in_set.size(), 0);
  std::queue<Index> frontier;
  frontier.push(members.front());
  seen[static_cast<std::size_t>(members.front())] = 1;
  std::size_t visited = 1;
  while (!frontier.empty()) {
    const Index k = frontier.front();
    frontier.pop();
    for (Index l = 0; l < adjacency.cols(); ++l) {
      const auto ul = static_cast<std::size_t>(l);
      if (adjacency(k, l) > 0.0 && in_set[ul] && !seen[ul]) {
        seen[ul] = 1;
        ++visited;
        frontier.push(l);
      }
    }
  }
  return visited == members.size();
}

}  // namespace

Graph::Graph(Eigen::MatrixXd adjacency) : adjacency_(std::move(adjacency)) {
  const Index n = adjacency_.rows();
  if (n < 1 || adjacency_.cols() != n) {
    throw ConfigError("graph: adjacency must be a nonempty square matrix");
  }
  if (!adjacency_.allFinite()) throw ConfigError("graph: adjacency has non-finite entries");
  const double scale = std::max(1.0, adjacency_.cwiseAbs().maxCoeff());
  for (Index k = 0; k < n; ++k) {
    if (adjacency_(k, k) != 0.0) {
      throw ConfigError("graph: adjacency diagonal must be zero (agent " + std::to_string(k) + ")");
    }
    for (Index l = 0; l < n; ++l) {
      if (adjacency_(k, l) < 0.0) throw ConfigError("graph: negative edge weight");
      if (std::abs(adjacency_(k, l) - adjacency_(l, k)) > 1e-12 * scale) {
        throw ConfigError("graph: adjacency is not symmetric");
      }
    }
  }
  // Exact symmetry from here on.
  adjacency_ = 0.5 * (adjacency_ + adjacency_.transpose()).eval();

  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      if (adjacency_(k, l) > 0.0) edges_.push_back({l, adjacency_(k, l)});
    }
    offsets_[static_cast<std::size_t>(k) + 1] = edges_.size();
  }
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) all[static_cast<std::size_t>(k)] = k;
  connected_ = reachable_all(adjacency_, all);
}

Graph Graph::from_edges(Index n, std::span<const WeightedEdge> edges) {
  if (n < 1) throw ConfigError("graph: number of agents must be positive");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    if (e.from < 0 || e.to < 0 || e.from >= n || e.to >= n) {
      throw ConfigError("graph: edge endpoint out of range");
    }
    if (e.from == e.to) throw ConfigError("graph: self-loop on agent " + std::to_string(e.from));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ConfigError("graph: edge weights must be positive and finite");
    }
    if (c(e.from, e.to) != 0.0) {
      throw ConfigError("graph: duplicate edge (" + std::to_string(e.from) + ", " +
                        std::to_string(e.to) + ")");
    }
    c(e.from, e.to) = e.weight;
    c(e.to, e.from) = e.weight;
  }
  return Graph(std::move(c));
}

std::vector<WeightedEdge> Graph::edge_list() const {
  std::vector<WeightedEdge> out;
  for (Index k = 0; k < size(); ++k) {
    for (const auto& nb : neighbors(k)) {
      if (nb.agent > k) out.push_back({k, nb.agent, nb.weight});
    }
  }
  return out;
}

bool induced_connected(const Graph& graph, std::span<const Index> members) {
  return reachable_all(graph.adjacency(), members);
}

Graph path_graph(Index n, double weight) {
  std::vector<WeightedEdge> e;
  for (Index k = 0; k + 1 < n; ++k) e.push_back({k, k + 1, weight});
  return Graph::from_edges(n, e);
}

Graph ring_graph(Index n, double weight) {
  if (n < 3) return path_graph(n, weight);
  std::vector<WeightedEdge> e;
  for (Index k = 0; k < n; ++k) e.push_back({k, (k + 1) % n, weight});
  return Graph::from_edges(n, e);
}

Graph star_graph(Index leaves, double weight) {
  std::vector<WeightedEdge> e;
  for (Index k = 1; k <= leaves; ++k) e.push_back({0, k, weight});
  return Graph::from_edges(leaves + 1, e);
}

Graph complete_graph(Index n, double weight) {
  std::vector<WeightedEdge> e;
  for (Index k = 0; k < n; ++k) {
    for (Index l = k + 1; l < n; ++l) e.push_back({k, l, weight});
  }
  return Graph::from_edges(n, e);
}

GeometricGraph random_geometric_graph(Index n, double radius, double kernel_width, Rng& rng,
                                      bool require_connected, int max_attempts) {
  if (n < 1) throw ConfigError("random geometric graph: n must be positive");
  if (!(radius > 0.0)) throw ConfigError("random geometric graph: radius must be positive");
  if (!(kernel_width > 0.0)) throw ConfigError("random geometric graph: kernel width must be positive");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Eigen::MatrixX2d pos(n, 2);
    for (Index k = 0; k < n; ++k) {
      pos(k, 0) = rng.uniform();
      pos(k, 1) = rng.uniform();
    }
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
      for (Index l = k + 1; l < n; ++l) {
        const double d2 = (pos.row(k) - pos.row(l)).squaredNorm();
        if (d2 < radius * radius) {
          c(k, l) = c(l, k) = std::exp(-d2 / (2.0 * kernel_width * kernel_width));
        }
      }
    }
    Graph g(std::move(c));
    if (!require_connected || g.connected()) return {std::move(g), std::move(pos)};
  }
  throw ConfigError("random geometric graph: no connected draw within attempt budget; increase radius");
}

ClusterPartition::ClusterPartition(std::vector<Index> cluster_sizes) : sizes_(std::move(cluster_sizes)) {
  if (sizes_.empty()) throw ConfigError("cluster partition: at least one cluster required");
  Index next = 0;
  for (std::size_t q = 0; q < sizes_.size(); ++q) {
    if (sizes_[q] < 1) throw ConfigError("cluster partition: empty cluster");
    first_.push_back(next);
    for (Index j = 0; j < sizes_[q]; ++j) cluster_of_.push_back(static_cast<Index>(q));
    next += sizes_[q];
  }
}

ClusterPartition ClusterPartition::from_assignment(std::span<const Index> cluster_of_agent) {
  if (cluster_of_agent.empty()) throw ConfigError("cluster partition: no agents");
  std::vector<Index> sizes;
  Index current = -1;
  for (Index q : cluster_of_agent) {
    if (q == current) {
      ++sizes.back();
    } else if (q == current + 1) {
      sizes.push_back(1);
      current = q;
    } else {
      throw ConfigError("cluster partition: clusters must be numbered 0..Q-1 over consecutive agents");
    }
  }
  return ClusterPartition(std::move(sizes));
}

}  // namespace netmtl
