#pragma once

#include <Eigen/Core>

#include "gcox/duplicated_design.hpp"
#include "gcox/graph.hpp"
#include "gcox/penalty.hpp"

namespace gcox {

struct GraphNormOptions {
  double tol = 1e-8;
  int max_iter = 50000;
  double rho = 1.0;  // initial ADMM step, adapted by residual balancing
};

struct GraphNormResult {
  double value = 0.0;
  Eigen::VectorXd expanded;  // feasible expanded minimizer (collapses to beta)
  int iterations = 0;
  bool converged = false;
};

// ||beta||_{G,tau} = min { sum_k tau_k ||V^(k)|| : sum_k V^(k) = beta,
// supp(V^(k)) inside N_k }, evaluated by operator splitting over the expanded
// coordinates: alternate a Euclidean projection onto {u : A u = beta} with a
// group soft-threshold, with dual updates. The reported value is the group
// norm at the feasible (projected) iterate, so it is always an upper bound
// that tightens to the optimum.
GraphNormResult graph_norm_detailed(const Eigen::Ref<const Eigen::VectorXd>& beta,
                                    const PredictorGraph& graph,
                                    const NodeWeights& weights,
                                    const GraphNormOptions& options = {});

double graph_norm(const Eigen::Ref<const Eigen::VectorXd>& beta,
                  const PredictorGraph& graph, const NodeWeights& weights,
                  double tol = 1e-8);

}  // namespace gcox
