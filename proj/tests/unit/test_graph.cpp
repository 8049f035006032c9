#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "netmtl/error.hpp"
#include "netmtl/graph.hpp"

using namespace netmtl;

TEST(Graph, PathAdjacencyAndNeighbors) {
  const Graph g = path_graph(4, 2.0);
  EXPECT_EQ(g.size(), 4);
  EXPECT_TRUE(g.connected());
  EXPECT_EQ(g.degree(0), 1);
  EXPECT_EQ(g.degree(1), 2);
  ASSERT_EQ(g.neighbors(1).size(), 2u);
  EXPECT_EQ(g.neighbors(1)[0].agent, 0);
  EXPECT_EQ(g.neighbors(1)[1].agent, 2);
  EXPECT_DOUBLE_EQ(g.neighbors(1)[0].weight, 2.0);
  EXPECT_TRUE(g.adjacent(2, 3));
  EXPECT_FALSE(g.adjacent(0, 3));
}

TEST(Graph, RejectsInvalidAdjacency) {
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 0.5, 0;
  EXPECT_THROW(Graph{asym}, ConfigError);
  Eigen::MatrixXd loop(2, 2);
  loop << 1, 1, 1, 0;
  EXPECT_THROW(Graph{loop}, ConfigError);
  Eigen::MatrixXd neg(2, 2);
  neg << 0, -1, -1, 0;
  EXPECT_THROW(Graph{neg}, ConfigError);
  EXPECT_THROW(Graph{Eigen::MatrixXd(2, 3)}, ConfigError);
}

TEST(Graph, FromEdgesValidation) {
  const std::vector<WeightedEdge> ok = {{0, 1, 1.0}, {1, 2, 0.5}};
  const Graph g = Graph::from_edges(3, ok);
  EXPECT_DOUBLE_EQ(g.adjacency()(2, 1), 0.5);
  const std::vector<WeightedEdge> dup = {{0, 1, 1.0}, {1, 0, 1.0}};
  EXPECT_THROW(Graph::from_edges(3, dup), ConfigError);
  const std::vector<WeightedEdge> self = {{1, 1, 1.0}};
  EXPECT_THROW(Graph::from_edges(3, self), ConfigError);
  const std::vector<WeightedEdge> range = {{0, 3, 1.0}};
  EXPECT_THROW(Graph::from_edges(3, range), ConfigError);
  const std::vector<WeightedEdge> zero = {{0, 1, 0.0}};
  EXPECT_THROW(Graph::from_edges(3, zero), ConfigError);
}

TEST(Graph, EdgeListRoundTrip) {
  const Graph g = ring_graph(5, 1.5);
  const auto edges = g.edge_list();
  EXPECT_EQ(edges.size(), 5u);
  const Graph h = Graph::from_edges(5, edges);
  EXPECT_EQ((g.adjacency() - h.adjacency()).norm(), 0.0);
}

TEST(Graph, ConnectivityMatchesReachability) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  c(0, 1) = c(1, 0) = 1.0;
  c(2, 3) = c(3, 2) = 1.0;
  const Graph g(c);
  EXPECT_FALSE(g.connected());
  const std::vector<Index> left = {0, 1};
  const std::vector<Index> mixed = {1, 2};
  EXPECT_TRUE(induced_connected(g, left));
  EXPECT_FALSE(induced_connected(g, mixed));
  EXPECT_TRUE(Graph(Eigen::MatrixXd::Zero(1, 1)).connected());
  EXPECT_FALSE(Graph(Eigen::MatrixXd::Zero(3, 3)).connected());
}

TEST(Graph, Generators) {
  EXPECT_EQ(star_graph(3).degree(0), 3);
  EXPECT_EQ(star_graph(3).degree(2), 1);
  EXPECT_EQ(complete_graph(5).degree(4), 4);
  EXPECT_EQ(ring_graph(6).degree(3), 2);
  EXPECT_EQ(ring_graph(2).degree(0), 1);
}

TEST(Graph, RandomGeometricWeightsAndDeterminism) {
  Rng a(42);
  Rng b(42);
  const GeometricGraph g = random_geometric_graph(30, 0.35, 0.2, a);
  const GeometricGraph h = random_geometric_graph(30, 0.35, 0.2, b);
  EXPECT_EQ((g.graph.adjacency() - h.graph.adjacency()).norm(), 0.0);
  EXPECT_TRUE(g.graph.connected());
  for (Index k = 0; k < 30; ++k) {
    for (Index l = 0; l < 30; ++l) {
      const double d = (g.positions.row(k) - g.positions.row(l)).norm();
      if (k == l) continue;
      if (d < 0.35) {
        EXPECT_NEAR(g.graph.adjacency()(k, l), std::exp(-d * d / (2 * 0.04)), 1e-14);
      } else {
        EXPECT_EQ(g.graph.adjacency()(k, l), 0.0);
      }
    }
  }
}

TEST(ClusterPartition, Layout) {
  const ClusterPartition p({2, 3});
  EXPECT_EQ(p.agents(), 5);
  EXPECT_EQ(p.clusters(), 2);
  EXPECT_EQ(p.first(1), 2);
  EXPECT_EQ(p.cluster_of(4), 1);
  EXPECT_TRUE(p.same_cluster(0, 1));
  EXPECT_FALSE(p.same_cluster(1, 2));
  const std::vector<Index> assign = {0, 0, 1, 1, 1};
  EXPECT_EQ(ClusterPartition::from_assignment(assign).sizes(), p.sizes());
  const std::vector<Index> split = {0, 1, 0};
  EXPECT_THROW(ClusterPartition::from_assignment(split), ConfigError);
  EXPECT_THROW(ClusterPartition({2, 0}), ConfigError);
}
