#include "gcox/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <json.hpp>

#include "gcox/partial_likelihood.hpp"
#include "io_util.hpp"

namespace gcox {

namespace {

ProxGradOptions engine_options(const FitConfig& config) {
  ProxGradOptions opt;
  opt.max_iter = config.max_iter;
  opt.tol = config.tol;
  opt.shrink = config.shrink;
  opt.initial_step = config.initial_step;
  opt.accelerate = config.acceleration;
  return opt;
}

Eigen::VectorXd group_tau_from_weights(const DuplicatedDesign& design,
                                       const NodeWeights& weights) {
  if (weights.size() != design.num_groups())
    throw std::invalid_argument("fit: weights length does not match group count");
  return weights.values();
}

// Damped Newton on nll + (gamma/2)||beta||^2 (gamma = 0 for the plain MLE).
FitResult newton_smooth(const SurvivalDataset& data, double gamma, const FitConfig& config) {
  const int p = data.n_features();
  FitResult res;
  res.lambda = gamma;
  res.penalty = gamma == 0.0 ? "cox" : "ridge";

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd grad(p);
  double f = cox_value_gradient(beta, data, grad) + 0.5 * gamma * beta.squaredNorm();
  grad += gamma * beta;
  res.objective_trace.push_back(f);

  bool warned = false;
  int it = 0;
  for (; it < config.max_iter; ++it) {
    if (grad.norm() < config.tol) {
      res.converged = true;
      break;
    }
    Eigen::MatrixXd H = cox_hessian(beta, data);
    H.diagonal().array() += gamma;

    Eigen::VectorXd dir;
    double jitter = 0.0;
    while (true) {
      Eigen::MatrixXd Hj = H;
      Hj.diagonal().array() += jitter;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(Hj);
      if (ldlt.info() == Eigen::Success) {
        dir = ldlt.solve(-grad);
        if (dir.allFinite() && grad.dot(dir) < 0.0) break;
      }
      const double next = jitter == 0.0 ? 1e-8 : jitter * 10.0;
      if (next > 1e6) {
        dir = -grad;  // give up on curvature, plain descent
        break;
      }
      if (!warned) {
        std::cerr << "newton: singular Hessian, adding diagonal jitter\n";
        warned = true;
      }
      jitter = next;
    }

    const double slope = grad.dot(dir);
    double t = 1.0;
    double f_new = 0.0;
    Eigen::VectorXd beta_new;
    bool accepted = false;
    while (true) {
      beta_new = beta + t * dir;
      f_new = cox_nll(beta_new, data) + 0.5 * gamma * beta_new.squaredNorm();
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
      if (t < 1e-12) break;
    }
    // Step underflow without any decrease means the objective is flat to
    // machine precision; stop rather than spin until max_iter.
    if (!accepted && !(f_new < f)) break;
    beta = beta_new;
    f = cox_value_gradient(beta, data, grad) + 0.5 * gamma * beta.squaredNorm();
    grad += gamma * beta;
    res.objective_trace.push_back(f);

    if (beta.lpNorm<Eigen::Infinity>() > 1e3) {
      res.diverged = true;
      ++it;
      break;
    }
  }
  res.iterations = it;
  res.beta_hat = beta;
  res.objective = f;
  return res;
}

}  // namespace

FitResult fit_duplicated(const SurvivalDataset& data, const DuplicatedDesign& design,
                         const Eigen::VectorXd& group_tau, const FitConfig& config,
                         const Eigen::VectorXd* warm_expanded) {
  if (group_tau.size() != design.num_groups())
    throw std::invalid_argument("fit: group weight count mismatch");
  if (config.lambda < 0.0) throw std::invalid_argument("fit: lambda must be nonnegative");
  const Eigen::MatrixXd& X = data.covariates();
  const double lambda = config.lambda;
  const int G = design.num_groups();

  SmoothFn smooth = [&](const Eigen::VectorXd& u, Eigen::VectorXd* grad) {
    const Eigen::VectorXd beta = design.collapse(u);
    if (!grad) return cox_nll_eta(X * beta, data);
    Eigen::VectorXd gb;
    const double val = cox_value_gradient(beta, data, gb);
    *grad = design.scatter(gb);
    return val;
  };
  ProxFn prox = [&](const Eigen::VectorXd& v, double step) {
    Eigen::VectorXd out(v.size());
    for (int k = 0; k < G; ++k) {
      const int off = design.group_offset(k);
      const int len = design.group_size(k);
      out.segment(off, len) =
          group_soft_threshold(v.segment(off, len), step * lambda * group_tau[k]);
    }
    return out;
  };
  NonsmoothFn nonsmooth = [&](const Eigen::VectorXd& u) {
    double acc = 0.0;
    for (int k = 0; k < G; ++k)
      acc += group_tau[k] * u.segment(design.group_offset(k), design.group_size(k)).norm();
    return lambda * acc;
  };

  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(design.expanded_dim());
  if (warm_expanded) {
    if (warm_expanded->size() != design.expanded_dim())
      throw std::invalid_argument("fit: warm start length mismatch");
    u0 = *warm_expanded;
  }

  ProxGradResult pg = prox_gradient(smooth, prox, nonsmooth, std::move(u0), engine_options(config));

  FitResult res;
  res.beta_hat = design.collapse(pg.x);
  res.decomposition = design.decomposition(pg.x);
  res.expanded_hat = std::move(pg.x);
  res.objective_trace = std::move(pg.objective_trace);
  res.objective = pg.objective;
  res.iterations = pg.iterations;
  res.converged = pg.converged;
  res.diverged = pg.diverged;
  res.lambda = lambda;
  res.penalty = "graph";
  return res;
}

FitResult fit_graph_cox(const SurvivalDataset& data, const PredictorGraph& graph,
                        const FitConfig& config) {
  if (data.n_features() != graph.num_nodes())
    throw std::invalid_argument("fit: feature count does not match graph nodes");
  const DuplicatedDesign design(data.covariates(), graph);
  const NodeWeights weights =
      config.weights ? *config.weights : NodeWeights::SqrtDegree(graph);
  return fit_duplicated(data, design, group_tau_from_weights(design, weights), config);
}

FitResult fit_cox_newton(const SurvivalDataset& data, const FitConfig& config) {
  return newton_smooth(data, 0.0, config);
}

FitResult fit_penalized_cox(const SurvivalDataset& data, const PenaltySpec& spec,
                            const FitConfig& config, const Eigen::VectorXd* warm_start) {
  if (config.lambda < 0.0) throw std::invalid_argument("fit: lambda must be nonnegative");
  if (spec.kind == PenaltySpec::Kind::ridge) {
    FitResult res = newton_smooth(data, config.lambda, config);
    return res;
  }

  const double lambda = config.lambda;
  SmoothFn smooth = [&](const Eigen::VectorXd& beta, Eigen::VectorXd* grad) {
    if (!grad) return cox_nll(beta, data);
    return cox_value_gradient(beta, data, *grad);
  };
  ProxFn prox = [&](const Eigen::VectorXd& v, double step) {
    return penalty_prox(spec, v, step, lambda);
  };
  NonsmoothFn nonsmooth = [&](const Eigen::VectorXd& beta) {
    return penalty_value(spec, beta, lambda);
  };

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(data.n_features());
  if (warm_start) {
    if (warm_start->size() != data.n_features())
      throw std::invalid_argument("fit: warm start length mismatch");
    x0 = *warm_start;
  }
  ProxGradResult pg = prox_gradient(smooth, prox, nonsmooth, std::move(x0), engine_options(config));

  FitResult res;
  res.beta_hat = std::move(pg.x);
  res.objective_trace = std::move(pg.objective_trace);
  res.objective = pg.objective;
  res.iterations = pg.iterations;
  res.converged = pg.converged;
  res.diverged = pg.diverged;
  res.lambda = lambda;
  switch (spec.kind) {
    case PenaltySpec::Kind::lasso: res.penalty = "lasso"; break;
    case PenaltySpec::Kind::elastic_net: res.penalty = "elastic_net"; break;
    case PenaltySpec::Kind::scad: res.penalty = "scad"; break;
    case PenaltySpec::Kind::adaptive_lasso: res.penalty = "adaptive_lasso"; break;
    case PenaltySpec::Kind::ridge: break;
  }
  return res;
}

double lambda_max_graph(const SurvivalDataset& data, const PredictorGraph& graph,
                        const NodeWeights& weights) {
  if (data.n_features() != graph.num_nodes())
    throw std::invalid_argument("lambda_max: feature count does not match graph nodes");
  if (weights.size() != graph.num_nodes())
    throw std::invalid_argument("lambda_max: weights length mismatch");
  const Eigen::VectorXd g0 = cox_gradient(Eigen::VectorXd::Zero(data.n_features()), data);
  double best = 0.0;
  for (int k = 0; k < graph.num_nodes(); ++k) {
    double sq = 0.0;
    for (int j : graph.neighborhood(k)) sq += g0[j] * g0[j];
    best = std::max(best, std::sqrt(sq) / weights[k]);
  }
  return best;
}

double lambda_max_penalty(const SurvivalDataset& data, const PenaltySpec& spec) {
  const Eigen::VectorXd g0 = cox_gradient(Eigen::VectorXd::Zero(data.n_features()), data);
  switch (spec.kind) {
    case PenaltySpec::Kind::lasso:
    case PenaltySpec::Kind::elastic_net:
    case PenaltySpec::Kind::scad:
      return g0.lpNorm<Eigen::Infinity>();
    case PenaltySpec::Kind::adaptive_lasso: {
      if (spec.adaptive_weights.size() != data.n_features())
        throw std::invalid_argument("lambda_max: adaptive weights not resolved");
      double best = 0.0;
      for (int j = 0; j < g0.size(); ++j)
        best = std::max(best, std::abs(g0[j]) / spec.adaptive_weights[j]);
      return best;
    }
    case PenaltySpec::Kind::ridge:
      throw std::invalid_argument("lambda_max: ridge has no finite zero threshold");
  }
  return 0.0;
}

std::string model_kind_name(ModelSpec::Kind kind) {
  switch (kind) {
    case ModelSpec::Kind::graph: return "graph";
    case ModelSpec::Kind::lasso: return "lasso";
    case ModelSpec::Kind::ridge: return "ridge";
    case ModelSpec::Kind::elastic_net: return "elastic_net";
    case ModelSpec::Kind::scad: return "scad";
    case ModelSpec::Kind::adaptive_lasso: return "adaptive_lasso";
    case ModelSpec::Kind::cox_unregularized: return "cox";
    case ModelSpec::Kind::zero: return "zero";
  }
  return "?";
}

ModelSpec::Kind model_kind_from_name(const std::string& name) {
  if (name == "graph") return ModelSpec::Kind::graph;
  if (name == "lasso") return ModelSpec::Kind::lasso;
  if (name == "ridge") return ModelSpec::Kind::ridge;
  if (name == "elastic_net" || name == "enet") return ModelSpec::Kind::elastic_net;
  if (name == "scad") return ModelSpec::Kind::scad;
  if (name == "adaptive_lasso" || name == "alasso") return ModelSpec::Kind::adaptive_lasso;
  if (name == "cox" || name == "none") return ModelSpec::Kind::cox_unregularized;
  if (name == "zero") return ModelSpec::Kind::zero;
  throw std::invalid_argument("unknown model kind: " + name);
}

FitResult fit_model(const SurvivalDataset& data, const ModelSpec& spec,
                    const FitConfig& config, const Eigen::VectorXd* warm_start) {
  switch (spec.kind) {
    case ModelSpec::Kind::graph: {
      if (!spec.graph) throw std::invalid_argument("fit_model: graph model needs a graph");
      FitConfig c = config;
      if (!c.weights && spec.weights) c.weights = spec.weights;
      return fit_graph_cox(data, *spec.graph, c);
    }
    case ModelSpec::Kind::lasso:
      return fit_penalized_cox(data, PenaltySpec::Lasso(), config, warm_start);
    case ModelSpec::Kind::ridge:
      return fit_penalized_cox(data, PenaltySpec::Ridge(), config, warm_start);
    case ModelSpec::Kind::elastic_net: {
      PenaltySpec p = PenaltySpec::ElasticNet(spec.enet_gamma_ratio * config.lambda);
      return fit_penalized_cox(data, p, config, warm_start);
    }
    case ModelSpec::Kind::scad:
      return fit_penalized_cox(data, PenaltySpec::Scad(spec.penalty.scad_a), config, warm_start);
    case ModelSpec::Kind::adaptive_lasso: {
      if (spec.penalty.kind != PenaltySpec::Kind::adaptive_lasso ||
          spec.penalty.adaptive_weights.size() != data.n_features())
        throw std::invalid_argument("fit_model: adaptive lasso weights not resolved");
      return fit_penalized_cox(data, spec.penalty, config, warm_start);
    }
    case ModelSpec::Kind::cox_unregularized:
      return fit_cox_newton(data, config);
    case ModelSpec::Kind::zero: {
      FitResult res;
      res.beta_hat = Eigen::VectorXd::Zero(data.n_features());
      res.objective = cox_nll(res.beta_hat, data);
      res.objective_trace = {res.objective};
      res.converged = true;
      res.iterations = 0;
      res.lambda = 0.0;
      res.penalty = "zero";
      return res;
    }
  }
  throw std::logic_error("fit_model: unreachable");
}

double lambda_max_model(const SurvivalDataset& data, const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelSpec::Kind::graph: {
      if (!spec.graph) throw std::invalid_argument("lambda_max: graph model needs a graph");
      const NodeWeights w = spec.weights ? *spec.weights : NodeWeights::SqrtDegree(*spec.graph);
      return lambda_max_graph(data, *spec.graph, w);
    }
    case ModelSpec::Kind::lasso:
    case ModelSpec::Kind::elastic_net:
    case ModelSpec::Kind::scad:
      return lambda_max_penalty(data, PenaltySpec::Lasso());
    case ModelSpec::Kind::adaptive_lasso:
      return lambda_max_penalty(data, spec.penalty);
    case ModelSpec::Kind::ridge:
      // No finite zero threshold; anchor the tuning grid above the lasso bound.
      return 10.0 * lambda_max_penalty(data, PenaltySpec::Lasso());
    case ModelSpec::Kind::cox_unregularized:
    case ModelSpec::Kind::zero:
      throw std::invalid_argument("lambda_max: model has no penalty scale");
  }
  throw std::logic_error("lambda_max_model: unreachable");
}

std::string fit_result_to_json(const FitResult& result) {
  nlohmann::json j;
  j["beta"] = std::vector<double>(result.beta_hat.data(),
                                  result.beta_hat.data() + result.beta_hat.size());
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  j["objective"] = result.objective_trace;
  j["lambda"] = result.lambda;
  j["penalty"] = result.penalty;
  return j.dump(2) + "\n";
}

FitResult fit_result_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  FitResult res;
  const auto& b = j.at("beta");
  res.beta_hat.resize(b.size());
  for (size_t i = 0; i < b.size(); ++i) res.beta_hat[static_cast<int>(i)] = b[i].get<double>();
  res.converged = j.at("converged").get<bool>();
  res.iterations = j.at("iterations").get<int>();
  res.objective_trace = j.at("objective").get<std::vector<double>>();
  // The solvers return the best iterate, so its objective is the trace minimum.
  res.objective = res.objective_trace.empty()
                      ? 0.0
                      : *std::min_element(res.objective_trace.begin(), res.objective_trace.end());
  res.lambda = j.at("lambda").get<double>();
  res.penalty = j.at("penalty").get<std::string>();
  return res;
}

void write_fit_json(const FitResult& result, const std::string& path) {
  io::write_text(path, fit_result_to_json(result));
}

FitResult read_fit_json(const std::string& path) {
  auto lines = io::read_lines(path);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  return fit_result_from_json(text);
}

}  // namespace gcox
