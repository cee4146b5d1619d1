#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "gcox/duplicated_design.hpp"
#include "gcox/graph.hpp"
#include "gcox/penalty.hpp"
#include "gcox/prox_grad.hpp"
#include "gcox/survival_data.hpp"

namespace gcox {

struct FitConfig {
  double lambda = 0.0;
  std::optional<NodeWeights> weights;  // graph fits; default sqrt-degree
  int max_iter = 5000;
  double tol = 1e-7;
  double shrink = 0.5;
  double initial_step = 1.0;
  bool acceleration = true;
};

struct FitResult {
  Eigen::VectorXd beta_hat;
  std::optional<LatentDecomposition> decomposition;  // graph fits only
  Eigen::VectorXd expanded_hat;                      // graph fits: solution in expanded coords
  std::vector<double> objective_trace;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  double lambda = 0.0;
  std::string penalty;
};

// Latent-group-penalized Cox fit: minimize over expanded coordinates u
//   nll(X collapse(u)) + lambda * sum_k tau_k ||u_k||,
// never materializing the duplicated matrix in the iteration.
FitResult fit_graph_cox(const SurvivalDataset& data, const PredictorGraph& graph,
                        const FitConfig& config);

// Same solve against a prebuilt layout, with optional warm start in the
// expanded coordinates (used by cross-validation paths). group_tau holds one
// weight per group of the design.
FitResult fit_duplicated(const SurvivalDataset& data, const DuplicatedDesign& design,
                         const Eigen::VectorXd& group_tau, const FitConfig& config,
                         const Eigen::VectorXd* warm_expanded = nullptr);

// Unregularized Cox fit by damped Newton (step-halving; LDLT with escalating
// diagonal jitter when the Hessian is numerically singular). Sets diverged
// and stops once ||beta||_inf exceeds 1e3, which is how a nonexistent MLE
// (e.g. separable data, p > n) surfaces.
FitResult fit_cox_newton(const SurvivalDataset& data, const FitConfig& config);

// Classical penalized fits. Ridge runs damped Newton on the smooth objective;
// the rest run proximal gradient. Adaptive lasso requires resolved weights in
// the spec (see resolve_model in model_selection).
FitResult fit_penalized_cox(const SurvivalDataset& data, const PenaltySpec& spec,
                            const FitConfig& config,
                            const Eigen::VectorXd* warm_start = nullptr);

// Smallest lambda with all-zero solution: max_k ||grad_k at 0|| / tau_k over
// expanded groups, or per-coordinate for the separable penalties.
double lambda_max_graph(const SurvivalDataset& data, const PredictorGraph& graph,
                        const NodeWeights& weights);
double lambda_max_penalty(const SurvivalDataset& data, const PenaltySpec& spec);

// One benchmark arm: which estimator, plus what it needs.
struct ModelSpec {
  enum class Kind {
    graph,
    lasso,
    ridge,
    elastic_net,
    scad,
    adaptive_lasso,
    cox_unregularized,
    zero
  };
  Kind kind = Kind::graph;
  std::optional<PredictorGraph> graph;
  std::optional<NodeWeights> weights;
  PenaltySpec penalty{};
  // Elastic net is tuned on one scale: gamma = enet_gamma_ratio * lambda.
  double enet_gamma_ratio = 0.5;

  bool needs_lambda() const {
    return kind != Kind::cox_unregularized && kind != Kind::zero;
  }
};

std::string model_kind_name(ModelSpec::Kind kind);
ModelSpec::Kind model_kind_from_name(const std::string& name);

// Dispatch on spec.kind; lambda (and tied elastic-net gamma) come from
// config.lambda. Adaptive-lasso weights must already be resolved.
FitResult fit_model(const SurvivalDataset& data, const ModelSpec& spec,
                    const FitConfig& config,
                    const Eigen::VectorXd* warm_start = nullptr);

double lambda_max_model(const SurvivalDataset& data, const ModelSpec& spec);

std::string fit_result_to_json(const FitResult& result);
FitResult fit_result_from_json(const std::string& text);
void write_fit_json(const FitResult& result, const std::string& path);
FitResult read_fit_json(const std::string& path);

}  // namespace gcox
