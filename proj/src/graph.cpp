#include "gcox/graph.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "io_util.hpp"

namespace gcox {

PredictorGraph::PredictorGraph(int p, std::vector<std::pair<int, int>> edges) : p_(p) {
  if (p <= 0) throw std::invalid_argument("graph: need at least one node");
  for (auto& e : edges) {
    if (e.first == e.second) throw std::invalid_argument("graph: self-loop edge");
    if (e.first < 0 || e.second < 0 || e.first >= p || e.second >= p)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  neighborhoods_.assign(p, {});
  for (int k = 0; k < p; ++k) neighborhoods_[k].push_back(k);
  for (const auto& e : edges_) {
    neighborhoods_[e.first].push_back(e.second);
    neighborhoods_[e.second].push_back(e.first);
  }
  for (auto& nb : neighborhoods_) std::sort(nb.begin(), nb.end());
}

const std::vector<int>& PredictorGraph::neighborhood(int k) const {
  if (k < 0 || k >= p_) throw std::invalid_argument("graph: node index out of range");
  return neighborhoods_[k];
}

bool PredictorGraph::has_edge(int i, int j) const {
  if (i == j) return false;
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(i, j));
}

PredictorGraph PredictorGraph::merged_with(const std::vector<std::pair<int, int>>& extra) const {
  auto all = edges_;
  all.insert(all.end(), extra.begin(), extra.end());
  return PredictorGraph(p_, std::move(all));
}

GraphTopologySpec GraphTopologySpec::ErdosRenyi(int p, double p0) {
  GraphTopologySpec s;
  s.kind = Kind::erdos_renyi;
  s.p = p;
  s.p0 = p0;
  return s;
}

GraphTopologySpec GraphTopologySpec::Ring(int p) {
  GraphTopologySpec s;
  s.kind = Kind::ring;
  s.p = p;
  return s;
}

GraphTopologySpec GraphTopologySpec::Community(std::vector<int> sizes, double p_in, double p_out) {
  GraphTopologySpec s;
  s.kind = Kind::community;
  s.community_sizes = std::move(sizes);
  s.p = 0;
  for (int sz : s.community_sizes) s.p += sz;
  s.p_in = p_in;
  s.p_out = p_out;
  return s;
}

PredictorGraph generate_graph(const GraphTopologySpec& spec, std::uint64_t seed) {
  const int p = spec.p;
  if (p <= 0) throw std::invalid_argument("generate_graph: p must be positive");
  std::vector<std::pair<int, int>> edges;

  switch (spec.kind) {
    case GraphTopologySpec::Kind::erdos_renyi: {
      if (spec.p0 < 0.0 || spec.p0 > 1.0)
        throw std::invalid_argument("generate_graph: p0 must lie in [0, 1]");
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
          if (unif(rng) < spec.p0) edges.emplace_back(i, j);
      break;
    }
    case GraphTopologySpec::Kind::ring: {
      if (p < 3) throw std::invalid_argument("generate_graph: ring needs p >= 3");
      for (int i = 0; i < p; ++i) edges.emplace_back(i, (i + 1) % p);
      break;
    }
    case GraphTopologySpec::Kind::community: {
      if (spec.community_sizes.empty())
        throw std::invalid_argument("generate_graph: community sizes missing");
      for (int sz : spec.community_sizes)
        if (sz <= 0) throw std::invalid_argument("generate_graph: community sizes must be positive");
      if (spec.p_in < 0 || spec.p_in > 1 || spec.p_out < 0 || spec.p_out > 1)
        throw std::invalid_argument("generate_graph: probabilities must lie in [0, 1]");
      std::vector<int> block(p);
      int node = 0, b = 0;
      for (int sz : spec.community_sizes) {
        for (int k = 0; k < sz; ++k) block[node++] = b;
        ++b;
      }
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
          const double prob = block[i] == block[j] ? spec.p_in : spec.p_out;
          if (unif(rng) < prob) edges.emplace_back(i, j);
        }
      break;
    }
  }
  return PredictorGraph(p, std::move(edges));
}

PredictorGraph graph_from_data(const Eigen::MatrixXd& covariates, double alpha) {
  const int n = static_cast<int>(covariates.rows());
  const int p = static_cast<int>(covariates.cols());
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("graph_from_data: alpha must lie in (0, 1)");
  if (n <= p + 2)
    throw std::invalid_argument("graph_from_data: need n > p + 2 observations");

  // Standardized columns make the screen exactly invariant to positive
  // rescaling of any predictor; partial correlations do not change.
  Eigen::MatrixXd Z = covariates.rowwise() - covariates.colwise().mean();
  for (int j = 0; j < p; ++j) {
    const double sd = std::sqrt(Z.col(j).squaredNorm() / (n - 1));
    if (sd <= 0.0 || !std::isfinite(sd))
      throw std::invalid_argument("graph_from_data: constant covariate column");
    Z.col(j) /= sd;
  }
  Eigen::MatrixXd R = (Z.transpose() * Z) / (n - 1);
  const double gamma = 1e-4 * R.trace() / p;
  R.diagonal().array() += gamma;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(R);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("graph_from_data: covariance inversion failed");
  Eigen::MatrixXd omega = ldlt.solve(Eigen::MatrixXd::Identity(p, p));

  const double df = n - p;
  boost::math::students_t tdist(df);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      double r = -omega(i, j) / std::sqrt(omega(i, i) * omega(j, j));
      r = std::clamp(r, -1.0 + 1e-12, 1.0 - 1e-12);
      const double t = r * std::sqrt(df / (1.0 - r * r));
      const double pval = 2.0 * boost::math::cdf(boost::math::complement(tdist, std::abs(t)));
      if (pval < alpha) edges.emplace_back(i, j);
    }
  return PredictorGraph(p, std::move(edges));
}

PredictorGraph read_graph_file(const std::string& path, int p) {
  auto lines = io::read_lines(path);
  std::vector<std::pair<int, int>> edges;
  for (size_t li = 0; li < lines.size(); ++li) {
    std::string line = lines[li];
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = io::trim(line);
    if (line.empty()) continue;
    std::istringstream in(line);
    int i, j;
    if (!(in >> i >> j))
      throw std::invalid_argument(path + ": expected 'i j' on line " + std::to_string(li + 1));
    std::string rest;
    if (in >> rest)
      throw std::invalid_argument(path + ": trailing tokens on line " + std::to_string(li + 1));
    if (i == j) continue;
    edges.emplace_back(i, j);
  }
  return PredictorGraph(p, std::move(edges));
}

void write_graph_file(const PredictorGraph& graph, const std::string& path) {
  std::ostringstream out;
  out << "# " << graph.num_nodes() << " nodes, " << graph.num_edges() << " edges\n";
  for (const auto& e : graph.edges()) out << e.first << " " << e.second << "\n";
  io::write_text(path, out.str());
}

}  // namespace gcox
