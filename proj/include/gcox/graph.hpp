#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gcox {

// Undirected simple graph on predictor indices 0..p-1. Edges are stored
// normalized (i < j), sorted, deduplicated; self-loops are rejected.
class PredictorGraph {
 public:
  PredictorGraph(int p, std::vector<std::pair<int, int>> edges);

  int num_nodes() const { return p_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  // N_k: sorted neighbor list including k itself.
  const std::vector<int>& neighborhood(int k) const;
  // d_k = |N_k| (so an isolated node has degree 1).
  int degree(int k) const { return static_cast<int>(neighborhoods_[k].size()); }
  bool has_edge(int i, int j) const;

  // Union of edge sets; used to overlay hand-made couplings (e.g. dummy
  // columns of one categorical predictor) on a learned or generated graph.
  PredictorGraph merged_with(const std::vector<std::pair<int, int>>& extra) const;

 private:
  int p_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> neighborhoods_;
};

struct GraphTopologySpec {
  enum class Kind { erdos_renyi, ring, community };
  Kind kind = Kind::erdos_renyi;
  int p = 0;
  double p0 = 0.0;                   // erdos_renyi edge probability
  std::vector<int> community_sizes;  // community block sizes, sum = p
  double p_in = 0.0;                 // community within-block probability
  double p_out = 0.0;                // community between-block probability

  static GraphTopologySpec ErdosRenyi(int p, double p0);
  static GraphTopologySpec Ring(int p);
  static GraphTopologySpec Community(std::vector<int> sizes, double p_in, double p_out);
};

// Random edges are drawn over pairs (i, j), i < j, in lexicographic order,
// one uniform draw per pair, so a topology + seed pins the graph exactly.
PredictorGraph generate_graph(const GraphTopologySpec& spec, std::uint64_t seed);

// Gaussian-graphical-model edge screen: standardize columns, invert the
// ridge-stabilized correlation matrix, test each partial correlation with a
// two-sided t-test on n - p degrees of freedom, keep edges with p-value
// below alpha. Requires n > p + 2.
PredictorGraph graph_from_data(const Eigen::MatrixXd& covariates, double alpha);

// Text format: one "i j" pair per line, 0-based, '#' starts a comment.
PredictorGraph read_graph_file(const std::string& path, int p);
void write_graph_file(const PredictorGraph& graph, const std::string& path);

}  // namespace gcox
