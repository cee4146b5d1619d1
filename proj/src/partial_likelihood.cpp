#include "gcox/partial_likelihood.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gcox {

namespace {

void check_dims(const Eigen::Ref<const Eigen::VectorXd>& beta, const SurvivalDataset& data) {
  if (beta.size() != data.n_features())
    throw std::invalid_argument("cox: beta length does not match feature count");
}

}  // namespace

// All sweeps below walk observations by descending time and keep the risk-set
// sum exp(M) * S with M the running max of eta, so exp never overflows. Tie
// blocks are absorbed into the sums before any event in the block is scored,
// which keeps a censored observation at an event's exact time inside that
// event's risk set.
double cox_nll_eta(const Eigen::Ref<const Eigen::VectorXd>& eta, const SurvivalDataset& data) {
  const int n = data.n_obs();
  if (eta.size() != n) throw std::invalid_argument("cox: eta length does not match observations");
  const auto& order = data.risk_order().by_desc_time;
  const auto& times = data.times();
  const auto& status = data.status();

  double M = -std::numeric_limits<double>::infinity();
  double S = 0.0;
  double acc = 0.0;
  int i = 0;
  while (i < n) {
    int j = i;
    const double t = times[order[i]];
    while (j < n && times[order[j]] == t) ++j;
    for (int k = i; k < j; ++k) {
      const double e = eta[order[k]];
      if (e > M) {
        S *= std::exp(M - e);
        M = e;
      }
      S += std::exp(e - M);
    }
    for (int k = i; k < j; ++k) {
      const int idx = order[k];
      if (status[idx] == 1) acc += eta[idx] - (M + std::log(S));
    }
    i = j;
  }
  return -acc / n;
}

double cox_nll(const Eigen::Ref<const Eigen::VectorXd>& beta, const SurvivalDataset& data) {
  check_dims(beta, data);
  return cox_nll_eta(data.covariates() * beta, data);
}

double cox_value_gradient(const Eigen::Ref<const Eigen::VectorXd>& beta,
                          const SurvivalDataset& data, Eigen::VectorXd& grad) {
  check_dims(beta, data);
  const int n = data.n_obs();
  const int p = data.n_features();
  const Eigen::MatrixXd& X = data.covariates();
  const Eigen::VectorXd eta = X * beta;
  const auto& order = data.risk_order().by_desc_time;
  const auto& times = data.times();
  const auto& status = data.status();

  double M = -std::numeric_limits<double>::infinity();
  double S = 0.0;
  Eigen::VectorXd W = Eigen::VectorXd::Zero(p);
  double acc = 0.0;
  Eigen::VectorXd gacc = Eigen::VectorXd::Zero(p);

  int i = 0;
  while (i < n) {
    int j = i;
    const double t = times[order[i]];
    while (j < n && times[order[j]] == t) ++j;
    for (int k = i; k < j; ++k) {
      const int idx = order[k];
      const double e = eta[idx];
      if (e > M) {
        const double c = std::exp(M - e);
        S *= c;
        W *= c;
        M = e;
      }
      const double w = std::exp(e - M);
      S += w;
      W.noalias() += w * X.row(idx).transpose();
    }
    for (int k = i; k < j; ++k) {
      const int idx = order[k];
      if (status[idx] == 1) {
        acc += eta[idx] - (M + std::log(S));
        gacc += X.row(idx).transpose();
        gacc.noalias() -= W / S;
      }
    }
    i = j;
  }
  grad = -gacc / n;
  return -acc / n;
}

Eigen::VectorXd cox_gradient(const Eigen::Ref<const Eigen::VectorXd>& beta,
                             const SurvivalDataset& data) {
  Eigen::VectorXd grad;
  cox_value_gradient(beta, data, grad);
  return grad;
}

Eigen::MatrixXd cox_hessian(const Eigen::Ref<const Eigen::VectorXd>& beta,
                            const SurvivalDataset& data) {
  check_dims(beta, data);
  const int n = data.n_obs();
  const int p = data.n_features();
  const Eigen::MatrixXd& X = data.covariates();
  const Eigen::VectorXd eta = X * beta;
  const auto& order = data.risk_order().by_desc_time;
  const auto& times = data.times();
  const auto& status = data.status();

  double M = -std::numeric_limits<double>::infinity();
  double S = 0.0;
  Eigen::VectorXd W = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(p, p);

  int i = 0;
  while (i < n) {
    int j = i;
    const double t = times[order[i]];
    while (j < n && times[order[j]] == t) ++j;
    for (int k = i; k < j; ++k) {
      const int idx = order[k];
      const double e = eta[idx];
      if (e > M) {
        const double c = std::exp(M - e);
        S *= c;
        W *= c;
        Q *= c;
        M = e;
      }
      const double w = std::exp(e - M);
      S += w;
      W.noalias() += w * X.row(idx).transpose();
      Q.noalias() += w * X.row(idx).transpose() * X.row(idx);
    }
    for (int k = i; k < j; ++k) {
      if (status[order[k]] == 1) {
        const Eigen::VectorXd m = W / S;
        H.noalias() += Q / S;
        H.noalias() -= m * m.transpose();
      }
    }
    i = j;
  }
  return H / n;
}

}  // namespace gcox
