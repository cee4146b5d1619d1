#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "gcox/graph.hpp"

using gcox::GraphTopologySpec;
using gcox::PredictorGraph;

TEST_CASE("constructor normalizes, deduplicates, and validates") {
  PredictorGraph g(4, {{2, 0}, {0, 2}, {1, 3}});
  CHECK(g.num_nodes() == 4);
  CHECK(g.num_edges() == 2);
  CHECK(g.edges()[0] == std::make_pair(0, 2));
  CHECK(g.edges()[1] == std::make_pair(1, 3));
  CHECK(g.has_edge(2, 0));
  CHECK(g.has_edge(0, 2));
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(1, 1));

  CHECK_THROWS_AS(PredictorGraph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PredictorGraph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(PredictorGraph(3, {{-1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(PredictorGraph(0, {}), std::invalid_argument);
}

TEST_CASE("neighborhoods include the node itself") {
  PredictorGraph g(5, {{0, 1}, {1, 2}});
  CHECK(g.neighborhood(0) == std::vector<int>{0, 1});
  CHECK(g.neighborhood(1) == std::vector<int>{0, 1, 2});
  CHECK(g.neighborhood(4) == std::vector<int>{4});
  CHECK(g.degree(1) == 3);
  CHECK(g.degree(4) == 1);
}

TEST_CASE("ring topology wires each node to its two cyclic neighbors") {
  const auto g = gcox::generate_graph(GraphTopologySpec::Ring(4), 0);
  CHECK(g.num_edges() == 4);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(2, 3));
  CHECK(g.has_edge(0, 3));
  for (int k = 0; k < 4; ++k) CHECK(g.degree(k) == 3);

  const auto big = gcox::generate_graph(GraphTopologySpec::Ring(11), 5);
  const int p = big.num_nodes();
  for (int k = 0; k < p; ++k) {
    std::vector<int> expect{(k + p - 1) % p, k, (k + 1) % p};
    std::sort(expect.begin(), expect.end());
    CHECK(big.neighborhood(k) == expect);
  }
}

TEST_CASE("erdos-renyi endpoints and edge-count calibration") {
  const auto empty = gcox::generate_graph(GraphTopologySpec::ErdosRenyi(20, 0.0), 3);
  CHECK(empty.num_edges() == 0);
  const auto full = gcox::generate_graph(GraphTopologySpec::ErdosRenyi(10, 1.0), 3);
  CHECK(full.num_edges() == 45);

  // p = 100, p0 = 0.05: mean edge count over 200 seeds should sit near
  // 4950 * 0.05 = 247.5 (sd of the mean is about 1.08).
  double total = 0.0;
  int lo = 1 << 30, hi = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto g = gcox::generate_graph(GraphTopologySpec::ErdosRenyi(100, 0.05), seed);
    total += g.num_edges();
    lo = std::min(lo, g.num_edges());
    hi = std::max(hi, g.num_edges());
  }
  CHECK(std::abs(total / 200.0 - 247.5) < 5.0);
  CHECK(lo < hi);  // seeds actually vary
}

TEST_CASE("generation is deterministic in the seed") {
  const auto a = gcox::generate_graph(GraphTopologySpec::ErdosRenyi(30, 0.2), 42);
  const auto b = gcox::generate_graph(GraphTopologySpec::ErdosRenyi(30, 0.2), 42);
  const auto c = gcox::generate_graph(GraphTopologySpec::ErdosRenyi(30, 0.2), 43);
  CHECK(a.edges() == b.edges());
  CHECK(a.edges() != c.edges());
}

TEST_CASE("community topology with p_in 1 and p_out 0 gives block cliques") {
  const auto g =
      gcox::generate_graph(GraphTopologySpec::Community({3, 2, 4}, 1.0, 0.0), 7);
  CHECK(g.num_nodes() == 9);
  CHECK(g.num_edges() == 3 + 1 + 6);
  // blocks: {0,1,2}, {3,4}, {5..8}
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(3, 4));
  CHECK(g.has_edge(5, 8));
  CHECK_FALSE(g.has_edge(2, 3));
  CHECK_FALSE(g.has_edge(4, 5));
}

TEST_CASE("random specs keep structural invariants") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> psize(1, 12);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    GraphTopologySpec spec;
    switch (trial % 3) {
      case 0:
        spec = GraphTopologySpec::ErdosRenyi(psize(rng) + 1, prob(rng));
        break;
      case 1:
        spec = GraphTopologySpec::Ring(psize(rng) + 2);
        break;
      default: {
        std::vector<int> sizes{psize(rng), psize(rng)};
        spec = GraphTopologySpec::Community(sizes, prob(rng), prob(rng));
        break;
      }
    }
    const auto g = gcox::generate_graph(spec, rng());
    int degree_sum = 0;
    for (int k = 0; k < g.num_nodes(); ++k) {
      const auto& nk = g.neighborhood(k);
      CHECK(std::is_sorted(nk.begin(), nk.end()));
      CHECK(std::binary_search(nk.begin(), nk.end(), k));
      CHECK(g.degree(k) == static_cast<int>(nk.size()));
      degree_sum += g.degree(k) - 1;
      for (int j : nk)
        if (j != k) CHECK(g.has_edge(k, j));
    }
    CHECK(degree_sum == 2 * g.num_edges());
    for (const auto& e : g.edges()) CHECK(e.first < e.second);
    CHECK(std::is_sorted(g.edges().begin(), g.edges().end()));
    CHECK(std::adjacent_find(g.edges().begin(), g.edges().end()) == g.edges().end());
  }
}

TEST_CASE("merged_with unions edge sets") {
  PredictorGraph g(5, {{0, 1}});
  const auto merged = g.merged_with({{1, 0}, {3, 2}});
  CHECK(merged.num_edges() == 2);
  CHECK(merged.has_edge(0, 1));
  CHECK(merged.has_edge(2, 3));
  CHECK(g.num_edges() == 1);  // original untouched
}

namespace {

Eigen::MatrixXd chain_sample(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd x(n, 3);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = gauss(rng);
    x(i, 1) = 0.7 * x(i, 0) + gauss(rng);
    x(i, 2) = 0.7 * x(i, 1) + gauss(rng);
  }
  return x;
}

}  // namespace

TEST_CASE("edge screen finds a near-duplicate column") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd x(100, 3);
  for (int i = 0; i < 100; ++i) {
    x(i, 0) = gauss(rng);
    x(i, 1) = x(i, 0) + 0.01 * gauss(rng);
    x(i, 2) = gauss(rng);
  }
  const auto g = gcox::graph_from_data(x, 0.05);
  CHECK(g.has_edge(0, 1));
}

TEST_CASE("edge screen separates direct from mediated association") {
  // x0 -> x1 -> x2: partial correlation of (x0, x2) given x1 is zero, so the
  // screen should keep the chain edges and drop the shortcut most of the time.
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = gcox::graph_from_data(chain_sample(400, 1000 + seed), 0.05);
    if (g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2)) ++good;
  }
  CHECK(good >= 85);
}

TEST_CASE("edge screen is calibrated on independent columns") {
  int flagged = 0, tested = 0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    std::mt19937_64 rng(5000 + rep);
    Eigen::MatrixXd x(500, 5);
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j) x(i, j) = gauss(rng);
    const auto g = gcox::graph_from_data(x, 0.05);
    flagged += g.num_edges();
    tested += 10;
  }
  const double rate = static_cast<double>(flagged) / tested;
  CHECK(rate > 0.02);
  CHECK(rate < 0.09);
}

TEST_CASE("edge screen ignores column location and scale") {
  const Eigen::MatrixXd x = chain_sample(300, 77);
  Eigen::MatrixXd scaled = x;
  scaled.col(0) *= 100.0;
  scaled.col(1) *= 1e-3;
  scaled.col(2).array() += 5.0;
  const auto g1 = gcox::graph_from_data(x, 0.05);
  const auto g2 = gcox::graph_from_data(scaled, 0.05);
  CHECK(g1.edges() == g2.edges());
}

TEST_CASE("edge screen needs more rows than columns") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(7, 5);
  CHECK_THROWS_AS(gcox::graph_from_data(x, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(gcox::graph_from_data(chain_sample(50, 2), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gcox::graph_from_data(chain_sample(50, 2), 1.5), std::invalid_argument);
}

TEST_CASE("graph file io round trips and tolerates comments") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = (dir / "gcox_graph_roundtrip.txt").string();
  const auto g = gcox::generate_graph(GraphTopologySpec::ErdosRenyi(15, 0.3), 9);
  gcox::write_graph_file(g, path);
  const auto back = gcox::read_graph_file(path, 15);
  CHECK(back.edges() == g.edges());
  std::filesystem::remove(path);

  const auto messy = (dir / "gcox_graph_messy.txt").string();
  {
    std::ofstream out(messy);
    out << "# comment line\n\n 2 0  # trailing comment\n0 2\n3 3\n1 3\n";
  }
  const auto parsed = gcox::read_graph_file(messy, 4);
  CHECK(parsed.num_edges() == 2);  // duplicate collapsed, self-loop skipped
  CHECK(parsed.has_edge(0, 2));
  CHECK(parsed.has_edge(1, 3));
  std::filesystem::remove(messy);

  const auto bad = (dir / "gcox_graph_bad.txt").string();
  {
    std::ofstream out(bad);
    out << "0 9\n";
  }
  CHECK_THROWS_AS(gcox::read_graph_file(bad, 4), std::invalid_argument);
  {
    std::ofstream out(bad);
    out << "0 1 2\n";
  }
  CHECK_THROWS_AS(gcox::read_graph_file(bad, 4), std::invalid_argument);
  std::filesystem::remove(bad);
  CHECK_THROWS_AS(gcox::read_graph_file((dir / "gcox_nope.txt").string(), 4),
                  std::invalid_argument);
}
