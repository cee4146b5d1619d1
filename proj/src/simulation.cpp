#include "gcox/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace gcox {

namespace {

Eigen::MatrixXd edge_precision(const PredictorGraph& graph) {
  const int p = graph.num_nodes();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(p, p);
  for (const auto& e : graph.edges()) {
    omega(e.first, e.second) = 0.5;
    omega(e.second, e.first) = 0.5;
  }
  return omega;
}

// Floor the spectrum at 1e-3 of the top eigenvalue; leaves an already
// well-conditioned matrix untouched.
Eigen::MatrixXd floor_eigenvalues(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("build_precision: eigendecomposition failed");
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const double floor = 1e-3 * vals[vals.size() - 1];
  if (floor <= 0.0) throw std::runtime_error("build_precision: nonpositive spectrum");
  if (vals[0] >= floor) return sym;
  Eigen::VectorXd clipped = vals.cwiseMax(floor);
  return eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

PrecisionModel build_precision(const GraphTopologySpec& topology, std::uint64_t seed) {
  if (topology.kind == GraphTopologySpec::Kind::ring) {
    const int p = topology.p;
    PredictorGraph graph = generate_graph(topology, seed);
    // Band part: 0.5 everywhere within |i-j| < 2. Its eigenvalues are
    // 0.5 + cos(k pi / (p+1)); delta*I is added so cond(Omega) = p.
    const double c = std::cos(M_PI / (p + 1));
    auto cond = [&](double delta) {
      return (0.5 + delta + c) / (0.5 + delta - c);
    };
    double lo = c - 0.5 + 1e-12;  // just past the PD boundary, cond huge
    double hi = 10.0 + c;
    while (cond(hi) > p) hi *= 2.0;
    double delta = 0.5 * (lo + hi);
    for (int it = 0; it < 500; ++it) {
      delta = 0.5 * (lo + hi);
      const double f = cond(delta);
      if (std::abs(f - p) <= 1e-6 * p) break;
      if (f > p)
        lo = delta;
      else
        hi = delta;
    }
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i) {
      omega(i, i) = 0.5 + delta;
      if (i + 1 < p) omega(i, i + 1) = omega(i + 1, i) = 0.5;
    }
    return PrecisionModel{std::move(omega), std::move(graph)};
  }

  PredictorGraph graph = generate_graph(topology, seed);
  Eigen::MatrixXd omega = floor_eigenvalues(edge_precision(graph));
  return PrecisionModel{std::move(omega), std::move(graph)};
}

Eigen::VectorXd true_coefficients(const PrecisionModel& model, const BetaRule& rule) {
  const int p = model.graph.num_nodes();
  Eigen::VectorXd c(p);
  switch (rule.kind) {
    case BetaRule::Kind::all_ones:
      c.setOnes();
      break;
    case BetaRule::Kind::top_degree: {
      if (rule.count < 0 || rule.count > p)
        throw std::invalid_argument("true_coefficients: count out of range");
      std::vector<int> idx(p);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return model.graph.degree(a) > model.graph.degree(b);
      });
      c.setZero();
      for (int r = 0; r < rule.count; ++r) c[idx[r]] = rule.value;
      break;
    }
  }
  return model.omega * c;
}

Eigen::MatrixXd sample_predictors(int n, const Eigen::MatrixXd& omega, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("sample_predictors: n must be positive");
  const int p = static_cast<int>(omega.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sample_predictors: precision matrix not positive definite");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd z(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z[j] = gauss(rng);
    // x = L^{-T} z has covariance (L L^T)^{-1} = Omega^{-1}.
    X.row(i) = llt.matrixU().solve(z).transpose();
  }
  return X;
}

double censoring_exp_rate(const Eigen::VectorXd& eta, double target) {
  if (eta.size() == 0) throw std::invalid_argument("censoring rate: empty eta");
  if (target <= 0.0 || target >= 1.0)
    throw std::invalid_argument("censoring rate: target must lie in (0, 1)");
  const auto expected = [&](double log_theta) {
    double acc = 0.0;
    for (int i = 0; i < eta.size(); ++i) {
      const double z = log_theta - eta[i];
      acc += z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    }
    return acc / eta.size();
  };
  double lo = eta.minCoeff() - 60.0;
  double hi = eta.maxCoeff() + 60.0;
  for (int it = 0; it < 500; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = expected(mid);
    if (std::abs(f - target) <= 1e-6) return std::exp(mid);
    if (f < target)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

SurvivalDataset simulate_survival(const Eigen::MatrixXd& covariates,
                                  const Eigen::VectorXd& beta0, double censor_rate,
                                  std::uint64_t seed) {
  const int n = static_cast<int>(covariates.rows());
  if (covariates.cols() != beta0.size())
    throw std::invalid_argument("simulate_survival: beta0 length mismatch");
  const Eigen::VectorXd eta = covariates * beta0;
  const double theta = censoring_exp_rate(eta, censor_rate);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(std::numeric_limits<double>::min(), 1.0);
  Eigen::VectorXd y(n);
  Eigen::VectorXi status(n);
  for (int i = 0; i < n; ++i) {
    const double t = -std::log(unif(rng)) * std::exp(-eta[i]);
    const double cens = -std::log(unif(rng)) / theta;
    y[i] = std::min(t, cens);
    status[i] = t <= cens ? 1 : 0;
  }

  // Exact FP duplicates (essentially impossible, but cheap to rule out):
  // separate them by a relative jitter, retry in the rare chain case.
  for (int round = 0; round < 100; ++round) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return y[a] < y[b]; });
    bool clean = true;
    int dup = 0;
    for (int k = 1; k < n; ++k) {
      if (y[idx[k]] == y[idx[k - 1]]) {
        clean = false;
        y[idx[k]] *= 1.0 + 1e-12 * (++dup);
      } else {
        dup = 0;
      }
    }
    if (clean) break;
    if (round == 99) throw std::runtime_error("simulate_survival: could not separate ties");
  }
  return SurvivalDataset(std::move(y), std::move(status), covariates);
}

}  // namespace gcox
