#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "netmtl/error.hpp"
#include "netmtl/spectrum.hpp"

using namespace netmtl;

namespace {

Graph random_graph(std::uint64_t seed, Index n = 15) {
  Rng rng(seed);
  return random_geometric_graph(n, 0.45, 0.25, rng).graph;
}

TaskField random_field(Index n, Index m, std::uint64_t seed) {
  Rng rng(seed);
  TaskField f = TaskField::uniform(n, m);
  for (Index i = 0; i < f.total_size(); ++i) f.stacked()(i) = rng.normal();
  return f;
}

// Dense sum_s beta_s L^s by repeated multiplication.
Eigen::MatrixXd power_sum(const std::vector<double>& beta, const Eigen::MatrixXd& l) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(l.rows(), l.cols());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(l.rows(), l.cols());
  for (double b : beta) {
    acc += b * p;
    p = (p * l).eval();
  }
  return acc;
}

}  // namespace

TEST(Spectrum, TwoNodePath) {
  const Spectrum s(path_graph(2));
  Eigen::MatrixXd l(2, 2);
  l << 1, -1, -1, 1;
  EXPECT_EQ((s.laplacian() - l).norm(), 0.0);
  EXPECT_NEAR(s.eigenvalue(0), 0.0, 1e-15);
  EXPECT_NEAR(s.eigenvalue(1), 2.0, 1e-15);
  EXPECT_NEAR(s.eigenvectors()(0, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.eigenvectors()(1, 0), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Spectrum, TriangleAndEmptyGraph) {
  const Spectrum t(complete_graph(3));
  EXPECT_NEAR(t.eigenvalue(0), 0.0, 1e-14);
  EXPECT_NEAR(t.eigenvalue(1), 3.0, 1e-14);
  EXPECT_NEAR(t.eigenvalue(2), 3.0, 1e-14);
  const Spectrum e(Graph(Eigen::MatrixXd::Zero(4, 4)));
  EXPECT_EQ(e.laplacian().norm(), 0.0);
  EXPECT_EQ(e.eigenvalues().norm(), 0.0);
}

TEST(Spectrum, DecompositionResiduals) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Spectrum s(random_graph(seed, 25));
    const Eigen::MatrixXd& v = s.eigenvectors();
    const Eigen::MatrixXd rec = v * s.eigenvalues().asDiagonal() * v.transpose();
    EXPECT_LE((s.laplacian() - rec).norm(), 1e-10 * s.laplacian().norm());
    EXPECT_LE((v.transpose() * v - Eigen::MatrixXd::Identity(25, 25)).norm(), 1e-10 * 5.0);
    EXPECT_NEAR(s.eigenvalue(0), 0.0, 1e-10);
    EXPECT_GT(s.eigenvalue(1), 1e-8);
    EXPECT_NEAR(std::abs(v(0, 0)), 1.0 / 5.0, 1e-10);
    for (Index m = 0; m < 25; ++m) {
      Index arg = 0;
      v.col(m).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(v(arg, m), 0.0);
    }
  }
}

TEST(Smoothness, Examples) {
  const Graph g = path_graph(2);
  const Spectrum s(g);
  TaskField w = TaskField::uniform(2, 1);
  w.stacked() << 1, 0;
  EXPECT_NEAR(smoothness(w, s), 1.0, 1e-15);
  EXPECT_NEAR(smoothness_edge_sum(w, g), 1.0, 1e-15);
  TaskField c = TaskField::uniform(2, 1);
  c.stacked() << 3, 3;
  EXPECT_NEAR(smoothness(c, s), 0.0, 1e-14);
}

TEST(Smoothness, ThreeWaysAgreeAndHomogeneous) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = random_graph(seed);
    const Spectrum s(g);
    TaskField w = random_field(g.size(), 3, seed + 100);
    const double q = smoothness(w, s);
    EXPECT_NEAR(smoothness_edge_sum(w, g), q, 1e-9 * q);
    EXPECT_NEAR(smoothness_spectral(w, s), q, 1e-9 * q);
    TaskField w2 = w;
    w2.stacked() *= 2.5;
    EXPECT_NEAR(smoothness(w2, s), 6.25 * q, 1e-9 * q);
  }
}

TEST(GraphFourier, ExamplesAndParseval) {
  const Spectrum s(path_graph(2));
  TaskField w = TaskField::uniform(2, 1);
  w.stacked() << 1, 1;
  const TaskField bar = graph_fourier(w, s);
  EXPECT_NEAR(bar.stacked()(0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(bar.stacked()(1), 0.0, 1e-15);

  const Spectrum r(random_graph(7));
  const TaskField x = random_field(r.size(), 2, 8);
  const TaskField xb = graph_fourier(x, r);
  EXPECT_NEAR(xb.stacked().squaredNorm(), x.stacked().squaredNorm(), 1e-10 * x.stacked().squaredNorm());
  const TaskField back = inverse_graph_fourier(xb, r);
  EXPECT_LE((back.stacked() - x.stacked()).norm(), 1e-12 * x.stacked().norm());
  EXPECT_EQ(graph_fourier(TaskField::uniform(r.size(), 2), r).stacked().norm(), 0.0);
}

TEST(SpectralKernel, ApplyExamples) {
  const Spectrum s(path_graph(2));
  const auto lin = SpectralKernel::polynomial({0.0, 1.0}, s);
  EXPECT_LE((apply_spectral_kernel(lin, s) - s.laplacian()).norm(), 1e-14);
  const auto cube = SpectralKernel::polynomial({0, 0, 0, 1}, s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(apply_spectral_kernel(cube, s));
  EXPECT_NEAR(eig.eigenvalues()(0), 0.0, 1e-13);
  EXPECT_NEAR(eig.eigenvalues()(1), 8.0, 1e-13);
  const auto one = SpectralKernel::polynomial({1.0}, s);
  EXPECT_LE((apply_spectral_kernel(one, s) - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-14);
}

TEST(SpectralKernel, PolynomialMatchesPowerSum) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Spectrum s(random_graph(seed));
    const std::vector<double> beta = {0.3, 0.5, 0.2, 0.1};
    const Eigen::MatrixXd want = power_sum(beta, s.laplacian());
    const Eigen::MatrixXd got = apply_spectral_kernel(SpectralKernel::polynomial(beta, s), s);
    EXPECT_LE((got - want).norm(), 1e-9 * want.norm());
  }
}

TEST(SpectralKernel, RejectsNegativeKernel) {
  const Spectrum s(path_graph(3));
  EXPECT_THROW(SpectralKernel::polynomial({-1.0}, s), ConfigError);
  EXPECT_THROW(SpectralKernel::polynomial({0.0, -1.0}, s), ConfigError);
  EXPECT_THROW(SpectralKernel::polynomial({}, s), ConfigError);
  EXPECT_THROW(apply_spectral_kernel([](double x) { return 1.0 - x; }, s), ConfigError);
}

TEST(Chebyshev, ExactForPolynomials) {
  const auto lin = chebyshev_fit([](double x) { return x; }, 1, 2.0);
  ASSERT_EQ(lin.coefficients.size(), 2u);
  EXPECT_NEAR(lin.coefficients[0], 0.0, 1e-13);
  EXPECT_NEAR(lin.coefficients[1], 1.0, 1e-13);
  EXPECT_LE(lin.max_error, 1e-13);
  const auto cube = chebyshev_fit([](double x) { return x * x * x; }, 3, 2.0);
  ASSERT_EQ(cube.coefficients.size(), 4u);
  for (int s = 0; s < 3; ++s) EXPECT_NEAR(cube.coefficients[static_cast<std::size_t>(s)], 0.0, 1e-12);
  EXPECT_NEAR(cube.coefficients[3], 1.0, 1e-12);
  EXPECT_LE(cube.max_error, 1e-12);
}

TEST(Chebyshev, ErrorDecreasesWithDegree) {
  auto f = [](double x) { return std::exp(x); };
  const double e4 = chebyshev_fit(f, 4, 2.0).max_error;
  const double e5 = chebyshev_fit(f, 5, 2.0).max_error;
  EXPECT_LT(e5, e4);
  // Independent check of the reported error on a fresh grid.
  const auto fit = chebyshev_fit(f, 5, 2.0);
  double worst = 0.0;
  for (int i = 0; i <= 997; ++i) {
    const double x = 2.0 * i / 997.0;
    worst = std::max(worst, std::abs(eval_polynomial(fit.coefficients, x) - f(x)));
  }
  EXPECT_LE(worst, fit.max_error * 1.01 + 1e-15);
  EXPECT_THROW(chebyshev_fit(f, -1, 2.0), ConfigError);
  EXPECT_THROW(chebyshev_fit(f, 3, 0.0), ConfigError);
}

TEST(SpectralKernel, FunctionSurrogate) {
  const Spectrum s(random_graph(3));
  const auto k = SpectralKernel::function([](double x) { return x * x; }, 5, s);
  EXPECT_FALSE(k.is_polynomial());
  EXPECT_EQ(k.degree(), 5);
  EXPECT_LE(k.fit_error(), 1e-9);
  EXPECT_NEAR(k(1.5), 2.25, 1e-15);
}

TEST(Polynomial, Horner) {
  EXPECT_DOUBLE_EQ(eval_polynomial({1, 2, 3}, 2.0), 17.0);
  EXPECT_DOUBLE_EQ(eval_polynomial({}, 2.0), 0.0);
}
