#pragma once

#include <Eigen/Core>

#include "gcox/survival_data.hpp"

namespace gcox {

// Negative mean Cox partial log-likelihood,
//   f(beta) = -(1/n) sum_{i: event} [ eta_i - log sum_{j: y_j >= y_i} exp(eta_j) ],
// eta = X beta. Computed in one sweep over observations sorted by descending
// time with a running log-sum-exp, so cost is O(n log n + n p) after the sort
// cached in the dataset. Zero events gives f = 0.
double cox_nll(const Eigen::Ref<const Eigen::VectorXd>& beta,
               const SurvivalDataset& data);

// Same quantity evaluated from a precomputed linear predictor eta = X beta.
double cox_nll_eta(const Eigen::Ref<const Eigen::VectorXd>& eta,
                   const SurvivalDataset& data);

// Gradient of cox_nll. O(n log n + n p).
Eigen::VectorXd cox_gradient(const Eigen::Ref<const Eigen::VectorXd>& beta,
                             const SurvivalDataset& data);

// Value and gradient in one sweep; grad is resized.
double cox_value_gradient(const Eigen::Ref<const Eigen::VectorXd>& beta,
                          const SurvivalDataset& data, Eigen::VectorXd& grad);

// Hessian of cox_nll (positive semidefinite). O(n log n + n p^2).
Eigen::MatrixXd cox_hessian(const Eigen::Ref<const Eigen::VectorXd>& beta,
                            const SurvivalDataset& data);

}  // namespace gcox
