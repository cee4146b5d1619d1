#pragma once

#include <Eigen/Core>

#include "gcox/graph.hpp"

namespace gcox {

// Per-node weights tau_k > 0 for the latent-group penalty.
class NodeWeights {
 public:
  explicit NodeWeights(Eigen::VectorXd tau);

  // tau_k = sqrt(d_k) with d_k the self-inclusive neighborhood size.
  static NodeWeights SqrtDegree(const PredictorGraph& graph);
  static NodeWeights Unit(int p);

  const Eigen::VectorXd& values() const { return tau_; }
  double operator[](int k) const { return tau_[k]; }
  int size() const { return static_cast<int>(tau_.size()); }

 private:
  Eigen::VectorXd tau_;
};

// Text format: one "k tau_k" pair per line, 0-based, '#' starts a comment.
// Nodes absent from the file keep the sqrt-degree default.
NodeWeights read_weights_file(const std::string& path, const PredictorGraph& graph);
void write_weights_file(const NodeWeights& weights, const std::string& path);

// Classical penalties used as benchmark baselines. The penalty scale lambda
// lives in the fit configuration; spec fields are shape parameters only.
struct PenaltySpec {
  enum class Kind { lasso, ridge, elastic_net, scad, adaptive_lasso };
  Kind kind = Kind::lasso;
  double scad_a = 3.7;
  double enet_gamma = 0.0;          // quadratic coefficient of the elastic net
  Eigen::VectorXd adaptive_weights; // empty: derived from a pilot ridge fit

  static PenaltySpec Lasso();
  static PenaltySpec Ridge();
  static PenaltySpec ElasticNet(double gamma);
  static PenaltySpec Scad(double a = 3.7);
  static PenaltySpec AdaptiveLasso(Eigen::VectorXd weights = {});
};

// argmin_x t * threshold * ||x|| + 0.5 ||x - v||^2: scales v toward zero,
// exactly zero once ||v|| <= t * threshold.
Eigen::VectorXd group_soft_threshold(const Eigen::Ref<const Eigen::VectorXd>& v,
                                     double threshold);

// Proximal operator of step * (penalty at scale lambda), evaluated exactly
// (coordinate-separable for every kind here; SCAD picks the best of its
// regional minimizers, valid for any step size). Ridge has no prox use in
// the solver but is defined for completeness.
Eigen::VectorXd penalty_prox(const PenaltySpec& spec,
                             const Eigen::Ref<const Eigen::VectorXd>& v,
                             double step, double lambda);

// Penalty value at scale lambda (for objective traces and tests).
double penalty_value(const PenaltySpec& spec,
                     const Eigen::Ref<const Eigen::VectorXd>& beta, double lambda);

}  // namespace gcox
