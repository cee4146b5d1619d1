#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "gcox/duplicated_design.hpp"
#include "gcox/graph_norm.hpp"
#include "oracles.hpp"

using gcox::DuplicatedDesign;
using gcox::NodeWeights;
using gcox::PredictorGraph;

namespace {

PredictorGraph complete_graph(int p) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) edges.emplace_back(i, j);
  return PredictorGraph(p, std::move(edges));
}

Eigen::VectorXd random_beta(int p, std::mt19937_64& rng, double scale = 1.5) {
  std::normal_distribution<double> gauss(0.0, scale);
  Eigen::VectorXd b(p);
  for (int j = 0; j < p; ++j) b[j] = gauss(rng);
  return b;
}

NodeWeights random_weights(int p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.3, 2.5);
  Eigen::VectorXd tau(p);
  for (int k = 0; k < p; ++k) tau[k] = unif(rng);
  return NodeWeights(std::move(tau));
}

}  // namespace

TEST_CASE("duplication layout: edgeless graph is the identity") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(6, 3);
  PredictorGraph g(3, {});
  const DuplicatedDesign d(x, g);
  CHECK(d.expanded_dim() == 3);
  CHECK(d.num_groups() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(d.group_size(k) == 1);
    CHECK(d.group_of(k) == k);
    CHECK(d.feature_of(k) == k);
  }
  CHECK((d.expanded_matrix() - x).lpNorm<Eigen::Infinity>() == 0.0);
  Eigen::VectorXd u(3);
  u << 1.0, -2.0, 0.5;
  CHECK((d.collapse(u) - u).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("duplication layout: single edge duplicates both columns") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 2);
  PredictorGraph g(2, {{0, 1}});
  const DuplicatedDesign d(x, g);
  CHECK(d.expanded_dim() == 4);
  CHECK(d.num_groups() == 2);
  CHECK(d.group_offset(0) == 0);
  CHECK(d.group_offset(1) == 2);
  // group k lists features of N_k ascending: (0:{0,1}), (1:{0,1})
  CHECK(d.feature_of(0) == 0);
  CHECK(d.feature_of(1) == 1);
  CHECK(d.feature_of(2) == 0);
  CHECK(d.feature_of(3) == 1);
  CHECK((d.expanded_matrix().col(0) - x.col(0)).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((d.expanded_matrix().col(1) - x.col(1)).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((d.expanded_matrix().col(2) - x.col(0)).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((d.expanded_matrix().col(3) - x.col(1)).lpNorm<Eigen::Infinity>() == 0.0);
  Eigen::VectorXd u(4);
  u << 1.0, 2.0, 4.0, 8.0;
  Eigen::VectorXd beta = d.collapse(u);
  CHECK(beta[0] == 5.0);
  CHECK(beta[1] == 10.0);
}

TEST_CASE("duplication layout: ring of four has dimension twelve") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(7, 4);
  const auto g = gcox::generate_graph(gcox::GraphTopologySpec::Ring(4), 0);
  const auto d = gcox::duplicate_design(x, g);
  CHECK(d.expanded_dim() == 12);
  CHECK(d.num_groups() == 4);

  // explicit 4x12 collapse matrix built from the coordinate map
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 12);
  for (int c = 0; c < 12; ++c) A(d.feature_of(c), c) = 1.0;
  std::mt19937_64 rng(3);
  const Eigen::VectorXd u = random_beta(12, rng);
  CHECK((d.collapse(u) - A * u).lpNorm<Eigen::Infinity>() < 1e-14);
  // expanded design applies the same map: Xtilde u = X collapse(u)
  CHECK((d.expanded_matrix() * u - x * d.collapse(u)).lpNorm<Eigen::Infinity>() < 1e-12);
  // every (group, feature in N_k) pair appears exactly once
  for (int k = 0; k < 4; ++k) {
    std::vector<int> feats;
    for (int c = d.group_offset(k); c < d.group_offset(k) + d.group_size(k); ++c) {
      CHECK(d.group_of(c) == k);
      feats.push_back(d.feature_of(c));
    }
    CHECK(feats == g.neighborhood(k));
  }
}

TEST_CASE("scatter is the adjoint of collapse") {
  std::mt19937_64 rng(5);
  const auto g = oracle::random_graph(6, 0.4, 17);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 6);
  const DuplicatedDesign d(x, g);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd u = random_beta(d.expanded_dim(), rng);
    const Eigen::VectorXd w = random_beta(6, rng);
    CHECK(std::abs(d.collapse(u).dot(w) - u.dot(d.scatter(w))) < 1e-12);
  }
}

TEST_CASE("decomposition splits the expanded vector by neighborhoods") {
  std::mt19937_64 rng(6);
  const auto g = oracle::random_graph(5, 0.5, 23);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 5);
  const DuplicatedDesign d(x, g);
  const Eigen::VectorXd u = random_beta(d.expanded_dim(), rng);
  const auto dec = d.decomposition(u);
  REQUIRE(static_cast<int>(dec.vectors.size()) == 5);
  for (int k = 0; k < 5; ++k) {
    const auto& nk = g.neighborhood(k);
    for (int j = 0; j < 5; ++j) {
      const bool in_nk = std::binary_search(nk.begin(), nk.end(), j);
      if (!in_nk) CHECK(dec.vectors[k][j] == 0.0);
    }
  }
  CHECK((dec.sum() - d.collapse(u)).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("explicit group layout reproduces the graph layout") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 3);
  PredictorGraph g(3, {{0, 1}, {1, 2}});
  const DuplicatedDesign from_graph(x, g);
  std::vector<std::vector<int>> members;
  for (int k = 0; k < 3; ++k) members.push_back(g.neighborhood(k));
  const DuplicatedDesign explicit_layout(x, 3, members);
  CHECK(explicit_layout.expanded_dim() == from_graph.expanded_dim());
  std::mt19937_64 rng(8);
  const Eigen::VectorXd u = random_beta(from_graph.expanded_dim(), rng);
  CHECK((explicit_layout.collapse(u) - from_graph.collapse(u)).lpNorm<Eigen::Infinity>() ==
        0.0);

  CHECK_THROWS_AS(DuplicatedDesign(x, PredictorGraph(4, {})), std::invalid_argument);
  CHECK_THROWS_AS(DuplicatedDesign(x, 3, {{0, 3}}), std::invalid_argument);
  Eigen::VectorXd short_u(2);
  CHECK_THROWS_AS(from_graph.collapse(short_u), std::invalid_argument);
}

TEST_CASE("zero vector has zero norm") {
  const auto g = oracle::random_graph(5, 0.4, 31);
  const auto w = NodeWeights::Unit(5);
  CHECK(gcox::graph_norm(Eigen::VectorXd::Zero(5), g, w) == 0.0);
}

TEST_CASE("edgeless graph reduces to the weighted l1 norm") {
  PredictorGraph g(2, {});
  Eigen::VectorXd beta(2);
  beta << 1.0, -2.0;
  CHECK(std::abs(gcox::graph_norm(beta, g, NodeWeights::Unit(2)) - 3.0) < 1e-8);

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 1 + trial % 6;
    PredictorGraph free_graph(p, {});
    const auto w = random_weights(p, rng);
    const Eigen::VectorXd b = random_beta(p, rng);
    double want = 0.0;
    for (int k = 0; k < p; ++k) want += w[k] * std::abs(b[k]);
    CHECK(std::abs(gcox::graph_norm(b, free_graph, w) - want) < 1e-8);
  }
}

TEST_CASE("complete graph reduces to the cheapest l2 norm") {
  Eigen::VectorXd beta(2);
  beta << 3.0, 4.0;
  Eigen::VectorXd tau(2);
  tau << 1.0, 2.0;
  CHECK(std::abs(gcox::graph_norm(beta, PredictorGraph(2, {{0, 1}}), NodeWeights(tau)) -
                 5.0) < 1e-6);

  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 2 + trial % 4;
    const auto g = complete_graph(p);
    const auto w = random_weights(p, rng);
    const Eigen::VectorXd b = random_beta(p, rng);
    const double want = w.values().minCoeff() * b.norm();
    CHECK(std::abs(gcox::graph_norm(b, g, w) - want) < 1e-6 * (1.0 + want));
  }
}

TEST_CASE("disconnected complete components give a group lasso") {
  // components {0,1,2}, {3,4}, {5}
  std::vector<std::pair<int, int>> edges{{0, 1}, {0, 2}, {1, 2}, {3, 4}};
  PredictorGraph g(6, edges);
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const auto w = random_weights(6, rng);
    const Eigen::VectorXd b = random_beta(6, rng);
    const double want = std::min({w[0], w[1], w[2]}) * b.head(3).norm() +
                        std::min(w[3], w[4]) * b.segment(3, 2).norm() +
                        w[5] * std::abs(b[5]);
    CHECK(std::abs(gcox::graph_norm(b, g, w) - want) < 1e-6 * (1.0 + want));
  }
}

TEST_CASE("norm axioms hold numerically") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> cdist(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 2 + trial % 3;
    const auto g = oracle::random_graph(p, 0.5, 100 + trial);
    const auto w = random_weights(p, rng);
    const Eigen::VectorXd a = random_beta(p, rng);
    const Eigen::VectorXd b = random_beta(p, rng);
    const double na = gcox::graph_norm(a, g, w);
    const double nb = gcox::graph_norm(b, g, w);
    const double nab = gcox::graph_norm(a + b, g, w);
    CHECK(nab <= na + nb + 1e-6);
    const double c = cdist(rng);
    CHECK(std::abs(gcox::graph_norm(c * a, g, w) - std::abs(c) * na) <
          1e-6 * (1.0 + std::abs(c) * na));
    CHECK(na > 0.0);  // nonzero beta has positive norm
  }
}

TEST_CASE("norm lower-bounds every feasible decomposition") {
  std::mt19937_64 rng(59);
  const int p = 4;
  const auto g = oracle::random_graph(p, 0.5, 61);
  const auto w = random_weights(p, rng);
  const DuplicatedDesign d(Eigen::MatrixXd::Zero(1, p), g);
  const Eigen::VectorXd beta = random_beta(p, rng);
  const double norm = gcox::graph_norm(beta, g, w);
  for (int trial = 0; trial < 100; ++trial) {
    // random feasible expanded vector: start from scatter-based split, add a
    // random element of the collapse null space
    Eigen::VectorXd u = random_beta(d.expanded_dim(), rng);
    const Eigen::VectorXd gap = beta - d.collapse(u);
    // distribute the gap onto one copy of each feature
    for (int j = 0; j < p; ++j) {
      for (int c = 0; c < d.expanded_dim(); ++c)
        if (d.feature_of(c) == j) {
          u[c] += gap[j];
          break;
        }
    }
    REQUIRE((d.collapse(u) - beta).lpNorm<Eigen::Infinity>() < 1e-10);
    double cost = 0.0;
    for (int k = 0; k < p; ++k)
      cost += w[k] * u.segment(d.group_offset(k), d.group_size(k)).norm();
    CHECK(norm <= cost + 1e-6);
  }
}

TEST_CASE("norm matches a derivative-free oracle on small graphs") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    const int p = 2 + trial % 2;
    const auto g = oracle::random_graph(p, 0.6, 300 + trial);
    const auto w = random_weights(p, rng);
    const Eigen::VectorXd b = random_beta(p, rng);
    const double got = gcox::graph_norm(b, g, w);
    const double want = oracle::graph_norm_brute(b, g, w, 400 + trial);
    CHECK(std::abs(got - want) < 1e-4 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("detailed result is feasible and converged") {
  std::mt19937_64 rng(71);
  const auto g = oracle::random_graph(6, 0.4, 73);
  const auto w = random_weights(6, rng);
  const Eigen::VectorXd b = random_beta(6, rng);
  const auto res = gcox::graph_norm_detailed(b, g, w);
  CHECK(res.converged);
  CHECK(res.iterations > 0);
  const DuplicatedDesign d(Eigen::MatrixXd::Zero(1, 6), g);
  CHECK((d.collapse(res.expanded) - b).lpNorm<Eigen::Infinity>() < 1e-6);
  double cost = 0.0;
  for (int k = 0; k < 6; ++k)
    cost += w[k] * res.expanded.segment(d.group_offset(k), d.group_size(k)).norm();
  CHECK(res.value == doctest::Approx(cost).epsilon(1e-12));
}

TEST_CASE("invalid norm inputs throw") {
  const auto g = oracle::random_graph(3, 0.5, 79);
  const auto w = NodeWeights::Unit(3);
  Eigen::VectorXd bad(3);
  bad << 1.0, std::nan(""), 0.0;
  CHECK_THROWS_AS(gcox::graph_norm(bad, g, w), std::invalid_argument);
  CHECK_THROWS_AS(gcox::graph_norm(Eigen::VectorXd::Zero(4), g, w), std::invalid_argument);
  CHECK_THROWS_AS(gcox::graph_norm(Eigen::VectorXd::Zero(3), g, NodeWeights::Unit(4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(gcox::graph_norm(Eigen::VectorXd::Zero(3), g, w, -1.0),
                  std::invalid_argument);
}
