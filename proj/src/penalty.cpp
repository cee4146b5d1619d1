#include "gcox/penalty.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "io_util.hpp"

namespace gcox {

NodeWeights::NodeWeights(Eigen::VectorXd tau) : tau_(std::move(tau)) {
  if (tau_.size() == 0) throw std::invalid_argument("weights: empty");
  for (int k = 0; k < tau_.size(); ++k)
    if (!(tau_[k] > 0.0) || !std::isfinite(tau_[k]))
      throw std::invalid_argument("weights: tau must be positive and finite");
}

NodeWeights NodeWeights::SqrtDegree(const PredictorGraph& graph) {
  Eigen::VectorXd tau(graph.num_nodes());
  for (int k = 0; k < graph.num_nodes(); ++k) tau[k] = std::sqrt(double(graph.degree(k)));
  return NodeWeights(std::move(tau));
}

NodeWeights NodeWeights::Unit(int p) { return NodeWeights(Eigen::VectorXd::Ones(p)); }

NodeWeights read_weights_file(const std::string& path, const PredictorGraph& graph) {
  Eigen::VectorXd tau = NodeWeights::SqrtDegree(graph).values();
  auto lines = io::read_lines(path);
  for (size_t li = 0; li < lines.size(); ++li) {
    std::string line = lines[li];
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = io::trim(line);
    if (line.empty()) continue;
    std::istringstream in(line);
    int k;
    double t;
    if (!(in >> k >> t))
      throw std::invalid_argument(path + ": expected 'k tau' on line " + std::to_string(li + 1));
    std::string rest;
    if (in >> rest)
      throw std::invalid_argument(path + ": trailing tokens on line " + std::to_string(li + 1));
    if (k < 0 || k >= graph.num_nodes())
      throw std::invalid_argument(path + ": node index out of range on line " + std::to_string(li + 1));
    tau[k] = t;
  }
  return NodeWeights(std::move(tau));
}

void write_weights_file(const NodeWeights& weights, const std::string& path) {
  std::ostringstream out;
  for (int k = 0; k < weights.size(); ++k)
    out << k << " " << io::format_full(weights[k]) << "\n";
  io::write_text(path, out.str());
}

PenaltySpec PenaltySpec::Lasso() { return PenaltySpec{Kind::lasso, 3.7, 0.0, {}}; }
PenaltySpec PenaltySpec::Ridge() { return PenaltySpec{Kind::ridge, 3.7, 0.0, {}}; }
PenaltySpec PenaltySpec::ElasticNet(double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("elastic net: gamma must be nonnegative");
  return PenaltySpec{Kind::elastic_net, 3.7, gamma, {}};
}
PenaltySpec PenaltySpec::Scad(double a) {
  if (a <= 2.0) throw std::invalid_argument("scad: a must exceed 2");
  return PenaltySpec{Kind::scad, a, 0.0, {}};
}
PenaltySpec PenaltySpec::AdaptiveLasso(Eigen::VectorXd weights) {
  for (int j = 0; j < weights.size(); ++j)
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j]))
      throw std::invalid_argument("adaptive lasso: weights must be positive");
  return PenaltySpec{Kind::adaptive_lasso, 3.7, 0.0, std::move(weights)};
}

Eigen::VectorXd group_soft_threshold(const Eigen::Ref<const Eigen::VectorXd>& v,
                                     double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("group_soft_threshold: negative threshold");
  const double nrm = v.norm();
  if (nrm <= threshold) return Eigen::VectorXd::Zero(v.size());
  return v * (1.0 - threshold / nrm);
}

namespace {

double soft(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double scad_value_1d(double theta, double lambda, double a) {
  theta = std::abs(theta);
  if (theta <= lambda) return lambda * theta;
  if (theta <= a * lambda)
    return (2.0 * a * lambda * theta - theta * theta - lambda * lambda) / (2.0 * (a - 1.0));
  return lambda * lambda * (a + 1.0) / 2.0;
}

// Exact prox of t * scad(.; lambda, a) in 1-D: the objective is quadratic on
// each of the three regions, so the minimum is one of the clamped stationary
// points or a region boundary. Valid for any t > 0, including t >= a - 1
// where the middle region turns concave.
double scad_prox_1d(double v, double t, double lambda, double a) {
  const double s = v < 0.0 ? -1.0 : 1.0;
  v = std::abs(v);
  double cands[4];
  int ncand = 0;
  cands[ncand++] = std::clamp(v - t * lambda, 0.0, lambda);
  cands[ncand++] = std::max(v, a * lambda);
  const double denom = a - 1.0 - t;
  if (denom > 0.0)
    cands[ncand++] = std::clamp((v * (a - 1.0) - t * a * lambda) / denom, lambda, a * lambda);
  else
    cands[ncand++] = lambda;  // concave middle region: ends only; a*lambda is covered above
  double best = 0.0, best_h = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ncand; ++i) {
    const double x = cands[i];
    const double h = t * scad_value_1d(x, lambda, a) + 0.5 * (x - v) * (x - v);
    if (h < best_h) {
      best_h = h;
      best = x;
    }
  }
  return s * best;
}

}  // namespace

Eigen::VectorXd penalty_prox(const PenaltySpec& spec,
                             const Eigen::Ref<const Eigen::VectorXd>& v,
                             double step, double lambda) {
  if (step <= 0.0) throw std::invalid_argument("penalty_prox: step must be positive");
  if (lambda < 0.0) throw std::invalid_argument("penalty_prox: lambda must be nonnegative");
  const int p = static_cast<int>(v.size());
  Eigen::VectorXd out(p);
  switch (spec.kind) {
    case PenaltySpec::Kind::lasso:
      for (int j = 0; j < p; ++j) out[j] = soft(v[j], step * lambda);
      break;
    case PenaltySpec::Kind::ridge:
      out = v / (1.0 + step * lambda);
      break;
    case PenaltySpec::Kind::elastic_net:
      for (int j = 0; j < p; ++j)
        out[j] = soft(v[j], step * lambda) / (1.0 + step * spec.enet_gamma);
      break;
    case PenaltySpec::Kind::scad:
      for (int j = 0; j < p; ++j) out[j] = scad_prox_1d(v[j], step, lambda, spec.scad_a);
      break;
    case PenaltySpec::Kind::adaptive_lasso:
      if (spec.adaptive_weights.size() != p)
        throw std::invalid_argument("adaptive lasso: weights not resolved to feature count");
      for (int j = 0; j < p; ++j) out[j] = soft(v[j], step * lambda * spec.adaptive_weights[j]);
      break;
  }
  return out;
}

double penalty_value(const PenaltySpec& spec,
                     const Eigen::Ref<const Eigen::VectorXd>& beta, double lambda) {
  const int p = static_cast<int>(beta.size());
  switch (spec.kind) {
    case PenaltySpec::Kind::lasso:
      return lambda * beta.lpNorm<1>();
    case PenaltySpec::Kind::ridge:
      return 0.5 * lambda * beta.squaredNorm();
    case PenaltySpec::Kind::elastic_net:
      return lambda * beta.lpNorm<1>() + 0.5 * spec.enet_gamma * beta.squaredNorm();
    case PenaltySpec::Kind::scad: {
      double acc = 0.0;
      for (int j = 0; j < p; ++j) acc += scad_value_1d(beta[j], lambda, spec.scad_a);
      return acc;
    }
    case PenaltySpec::Kind::adaptive_lasso: {
      if (spec.adaptive_weights.size() != p)
        throw std::invalid_argument("adaptive lasso: weights not resolved to feature count");
      double acc = 0.0;
      for (int j = 0; j < p; ++j) acc += spec.adaptive_weights[j] * std::abs(beta[j]);
      return lambda * acc;
    }
  }
  return 0.0;
}

}  // namespace gcox
