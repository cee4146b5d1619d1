#pragma once

#include <Eigen/Core>
#include <vector>

namespace gcox {

// Concordance index for risk scores (higher score = shorter expected
// survival). A pair (i, j) is comparable when y_i < y_j and i is an event;
// equal observed times are never comparable. Score ties count 1/2. Throws
// when no comparable pair exists. O(n log n) via a Fenwick tree over
// compressed score ranks.
double c_index(const Eigen::VectorXd& scores, const Eigen::VectorXd& times,
               const Eigen::VectorXi& status);

// Quadratic-time reference of the same definition.
double c_index_naive(const Eigen::VectorXd& scores, const Eigen::VectorXd& times,
                     const Eigen::VectorXi& status);

struct PredictionError {
  double l2 = 0.0;   // ||beta_hat - beta0||_2
  double rpe = 0.0;  // ||X (beta_hat - beta0)||^2 / rows(X)
};

PredictionError prediction_errors(const Eigen::VectorXd& beta_hat,
                                  const Eigen::VectorXd& beta0,
                                  const Eigen::MatrixXd& covariates);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample sd (n - 1); 0 when n < 2
};

MeanSd aggregate(const std::vector<double>& values);

}  // namespace gcox
