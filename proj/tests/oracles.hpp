// Test-only reference implementations, deliberately written the slow and
// obvious way so the fast library code has something independent to match.
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "gcox/graph.hpp"
#include "gcox/penalty.hpp"
#include "gcox/survival_data.hpp"

namespace oracle {

// ---- Cox partial likelihood by explicit risk-set enumeration ----

inline double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

inline double cox_nll(const Eigen::VectorXd& beta, const gcox::SurvivalDataset& data) {
  const int n = data.n_obs();
  const Eigen::VectorXd eta = data.covariates() * beta;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    if (data.status()[i] != 1) continue;
    std::vector<double> risk;
    for (int j = 0; j < n; ++j)
      if (data.times()[j] >= data.times()[i]) risk.push_back(eta[j]);
    acc += eta[i] - log_sum_exp(risk);
  }
  return -acc / n;
}

inline Eigen::VectorXd cox_gradient(const Eigen::VectorXd& beta,
                                    const gcox::SurvivalDataset& data) {
  const int n = data.n_obs();
  const int p = data.n_features();
  const Eigen::VectorXd eta = data.covariates() * beta;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(p);
  for (int i = 0; i < n; ++i) {
    if (data.status()[i] != 1) continue;
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (data.times()[j] >= data.times()[i]) m = std::max(m, eta[j]);
    double wsum = 0.0;
    Eigen::VectorXd xw = Eigen::VectorXd::Zero(p);
    for (int j = 0; j < n; ++j) {
      if (data.times()[j] < data.times()[i]) continue;
      const double w = std::exp(eta[j] - m);
      wsum += w;
      xw += w * data.covariates().row(j).transpose();
    }
    acc += data.covariates().row(i).transpose() - xw / wsum;
  }
  return -acc / n;
}

inline Eigen::MatrixXd cox_hessian(const Eigen::VectorXd& beta,
                                   const gcox::SurvivalDataset& data) {
  const int n = data.n_obs();
  const int p = data.n_features();
  const Eigen::VectorXd eta = data.covariates() * beta;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < n; ++i) {
    if (data.status()[i] != 1) continue;
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (data.times()[j] >= data.times()[i]) m = std::max(m, eta[j]);
    double wsum = 0.0;
    Eigen::VectorXd xw = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd xxw = Eigen::MatrixXd::Zero(p, p);
    for (int j = 0; j < n; ++j) {
      if (data.times()[j] < data.times()[i]) continue;
      const double w = std::exp(eta[j] - m);
      const Eigen::VectorXd xj = data.covariates().row(j).transpose();
      wsum += w;
      xw += w * xj;
      xxw += w * xj * xj.transpose();
    }
    const Eigen::VectorXd mean = xw / wsum;
    acc += xxw / wsum - mean * mean.transpose();
  }
  return acc / n;
}

// ---- finite differences ----

inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (int j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    g[j] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd fd_hessian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::MatrixXd H(x.size(), x.size());
  for (int j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    H.col(j) = (grad(xp) - grad(xm)) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

// ---- Nelder-Mead over the free coordinates of the latent decomposition ----

inline double nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          Eigen::VectorXd& x, double scale, int max_iter = 4000) {
  const int d = static_cast<int>(x.size());
  if (d == 0) return f(x);
  std::vector<Eigen::VectorXd> pts(d + 1, x);
  std::vector<double> vals(d + 1);
  for (int i = 1; i <= d; ++i) pts[i][i - 1] += scale;
  for (int i = 0; i <= d; ++i) vals[i] = f(pts[i]);

  for (int it = 0; it < max_iter; ++it) {
    std::vector<int> ord(d + 1);
    for (int i = 0; i <= d; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    std::vector<Eigen::VectorXd> ps(d + 1);
    std::vector<double> vs(d + 1);
    for (int i = 0; i <= d; ++i) {
      ps[i] = pts[ord[i]];
      vs[i] = vals[ord[i]];
    }
    pts = ps;
    vals = vs;
    if (std::abs(vals[d] - vals[0]) <= 1e-13 * (1.0 + std::abs(vals[0]))) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) centroid += pts[i];
    centroid /= d;

    const Eigen::VectorXd xr = centroid + (centroid - pts[d]);
    const double fr = f(xr);
    if (fr < vals[0]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[d]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[d] = xe;
        vals[d] = fe;
      } else {
        pts[d] = xr;
        vals[d] = fr;
      }
    } else if (fr < vals[d - 1]) {
      pts[d] = xr;
      vals[d] = fr;
    } else {
      const Eigen::VectorXd xc = centroid + 0.5 * (pts[d] - centroid);
      const double fc = f(xc);
      if (fc < vals[d]) {
        pts[d] = xc;
        vals[d] = fc;
      } else {
        for (int i = 1; i <= d; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= d; ++i)
    if (vals[i] < vals[best]) best = i;
  x = pts[best];
  return vals[best];
}

// min { sum_k tau_k ||V^(k)|| : sum_k V^(k) = beta, supp(V^(k)) in N_k } by
// direct search over the free coordinates: the copy of feature j living in
// group j is eliminated by the constraint, everything else varies freely.
inline double graph_norm_brute(const Eigen::VectorXd& beta, const gcox::PredictorGraph& graph,
                               const gcox::NodeWeights& weights, std::uint64_t seed) {
  const int p = graph.num_nodes();
  struct Free {
    int group, feature;
  };
  std::vector<Free> free_coords;
  for (int k = 0; k < p; ++k)
    for (int j : graph.neighborhood(k))
      if (j != k) free_coords.push_back({k, j});
  const int d = static_cast<int>(free_coords.size());

  auto objective = [&](const Eigen::VectorXd& u) {
    // V[k][j]: start with anchors V[j][j] = beta_j, subtract the free mass.
    std::vector<std::vector<double>> V(p);
    for (int k = 0; k < p; ++k) V[k].assign(p, 0.0);
    for (int j = 0; j < p; ++j) V[j][j] = beta[j];
    for (int c = 0; c < d; ++c) {
      V[free_coords[c].group][free_coords[c].feature] += u[c];
      V[free_coords[c].feature][free_coords[c].feature] -= u[c];
    }
    double acc = 0.0;
    for (int k = 0; k < p; ++k) {
      double sq = 0.0;
      for (int j = 0; j < p; ++j) sq += V[k][j] * V[k][j];
      acc += weights[k] * std::sqrt(sq);
    }
    return acc;
  };

  const double span = std::max(1.0, beta.lpNorm<Eigen::Infinity>());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = objective(Eigen::VectorXd::Zero(d));
  for (int trial = 0; trial < 12; ++trial) {
    Eigen::VectorXd x(d);
    if (trial == 0)
      x.setZero();
    else
      for (int c = 0; c < d; ++c) x[c] = 0.5 * span * gauss(rng);
    double val = nelder_mead(objective, x, 0.5 * span);
    for (double s : {0.1 * span, 0.01 * span, 1e-4 * span}) {
      val = nelder_mead(objective, x, s);
    }
    best = std::min(best, val);
  }
  return best;
}

// ---- 1-D prox by dense grid plus local refinement ----

inline double prox_1d_brute(const std::function<double(double)>& penalty, double v,
                            double step) {
  auto h = [&](double x) { return step * penalty(x) + 0.5 * (x - v) * (x - v); };
  const double lo = -std::abs(v) - 1.0, hi = std::abs(v) + 1.0;
  const int grid = 20001;
  double best_x = 0.0, best = h(0.0);
  for (int i = 0; i < grid; ++i) {
    const double x = lo + (hi - lo) * i / (grid - 1);
    const double hx = h(x);
    if (hx < best) {
      best = hx;
      best_x = x;
    }
  }
  double a = best_x - (hi - lo) / (grid - 1), b = best_x + (hi - lo) / (grid - 1);
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (h(m1) < h(m2))
      b = m2;
    else
      a = m1;
  }
  return 0.5 * (a + b);
}

// ---- misc helpers ----

inline gcox::SurvivalDataset random_dataset(int n, int p, std::uint64_t seed,
                                            double censor_frac = 0.3,
                                            double beta_scale = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = gauss(rng);
  Eigen::VectorXd beta(p);
  for (int j = 0; j < p; ++j) beta[j] = beta_scale * gauss(rng);
  Eigen::VectorXd t(n);
  Eigen::VectorXi s(n);
  const Eigen::VectorXd eta = X * beta;
  for (int i = 0; i < n; ++i) {
    t[i] = -std::log(1.0 - unif(rng)) * std::exp(-eta[i]) + 1e-9;
    s[i] = unif(rng) < censor_frac ? 0 : 1;
  }
  return gcox::SurvivalDataset(std::move(t), std::move(s), std::move(X));
}

inline gcox::PredictorGraph random_graph(int p, double edge_prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (unif(rng) < edge_prob) edges.emplace_back(i, j);
  return gcox::PredictorGraph(p, std::move(edges));
}

}  // namespace oracle
