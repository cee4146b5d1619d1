#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "gcox/graph.hpp"
#include "gcox/survival_data.hpp"

namespace gcox {

// Precision matrix Omega paired with the graph handed to the estimator.
// For the ring topology Omega is the tridiagonal band (no wraparound entry)
// while the graph keeps the closing edge; for the random topologies Omega
// puts 0.5 on drawn edges, 1 on the diagonal, with eigenvalues floored at
// 1e-3 of the largest to restore positive definiteness.
struct PrecisionModel {
  Eigen::MatrixXd omega;
  PredictorGraph graph;
};

PrecisionModel build_precision(const GraphTopologySpec& topology, std::uint64_t seed);

struct BetaRule {
  enum class Kind { top_degree, all_ones };
  Kind kind = Kind::top_degree;
  int count = 4;       // top_degree: how many nodes get a signal
  double value = 10.0; // top_degree: signal size
};

// beta0 = Omega c, where c is all ones or puts `value` on the `count` nodes
// with the most edges (ties to the lowest index). Under X ~ N(0, Omega^{-1})
// this makes cov(x, x'beta0) = c, so the signal lives exactly on those nodes.
Eigen::VectorXd true_coefficients(const PrecisionModel& model, const BetaRule& rule);

// Rows iid N(0, Omega^{-1}) via the Cholesky factor of Omega.
Eigen::MatrixXd sample_predictors(int n, const Eigen::MatrixXd& omega, std::uint64_t seed);

// Exponential-rate parameter theta such that with C ~ Exp(theta) independent
// of T_i ~ Exp(exp(eta_i)), the mean censoring probability
// mean_i sigmoid(log theta - eta_i) hits the target to 1e-6 (bisection).
double censoring_exp_rate(const Eigen::VectorXd& eta, double target);

// T_i = -log(U) exp(-eta_i) (unit-exponential baseline hazard), censored by
// an independent Exp(theta) calibrated to the target rate. Exact duplicate
// observed times are separated by a relative 1e-12 jitter so event times
// stay pairwise distinct.
SurvivalDataset simulate_survival(const Eigen::MatrixXd& covariates,
                                  const Eigen::VectorXd& beta0, double censor_rate,
                                  std::uint64_t seed);

}  // namespace gcox
