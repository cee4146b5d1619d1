#include "gcox/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "gcox/metrics.hpp"
#include "gcox/partial_likelihood.hpp"
#include "gcox/seeding.hpp"
#include "io_util.hpp"

namespace gcox {

std::vector<double> make_lambda_grid(double lambda_max, const LambdaGridSpec& spec) {
  if (!spec.explicit_values.empty()) {
    auto grid = spec.explicit_values;
    for (double v : grid)
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument("lambda grid: values must be positive");
    std::sort(grid.begin(), grid.end(), std::greater<double>());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
  }
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max))
    throw std::invalid_argument("lambda grid: lambda_max must be positive");
  if (spec.size < 1) throw std::invalid_argument("lambda grid: size must be positive");
  if (!(spec.min_ratio > 0.0) || spec.min_ratio > 1.0)
    throw std::invalid_argument("lambda grid: min_ratio must lie in (0, 1]");
  std::vector<double> grid(spec.size);
  if (spec.size == 1) {
    grid[0] = lambda_max;
    return grid;
  }
  for (int i = 0; i < spec.size; ++i)
    grid[i] = lambda_max * std::pow(spec.min_ratio, double(i) / (spec.size - 1));
  return grid;
}

std::vector<int> make_folds(const SurvivalDataset& data, int k, std::uint64_t seed) {
  const int n = data.n_obs();
  if (k < 2) throw std::invalid_argument("folds: need k >= 2");
  if (k > n) throw std::invalid_argument("folds: more folds than observations");
  std::vector<int> events, censored;
  for (int i = 0; i < n; ++i) (data.status()[i] == 1 ? events : censored).push_back(i);
  std::mt19937_64 rng(derive_seed(seed, stream::folds));
  std::shuffle(events.begin(), events.end(), rng);
  std::shuffle(censored.begin(), censored.end(), rng);
  std::vector<int> fold_of(n);
  int pos = 0;
  for (int i : events) fold_of[i] = pos++ % k;
  for (int i : censored) fold_of[i] = pos++ % k;
  return fold_of;
}

namespace {

double unnormalized_pl(const Eigen::VectorXd& beta, const SurvivalDataset& data) {
  return -double(data.n_obs()) * cox_nll(beta, data);
}

// Fits the model along the descending grid on `train`, reporting each
// beta_hat to `score`. Warm starts carry along the path.
template <typename ScoreFn>
void path_fits(const SurvivalDataset& train, const ModelSpec& resolved,
               const std::vector<double>& grid, const FitConfig& base,
               ScoreFn&& score) {
  FitConfig config = base;
  if (resolved.kind == ModelSpec::Kind::graph) {
    const DuplicatedDesign design(train.covariates(), *resolved.graph);
    const NodeWeights weights =
        resolved.weights ? *resolved.weights : NodeWeights::SqrtDegree(*resolved.graph);
    if (weights.size() != design.num_groups())
      throw std::invalid_argument("cv: weights length mismatch");
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(design.expanded_dim());
    for (size_t gi = 0; gi < grid.size(); ++gi) {
      config.lambda = grid[gi];
      FitResult fit = fit_duplicated(train, design, weights.values(), config, &warm);
      warm = fit.expanded_hat;
      score(gi, fit.beta_hat);
    }
    return;
  }
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(train.n_features());
  for (size_t gi = 0; gi < grid.size(); ++gi) {
    config.lambda = grid[gi];
    FitResult fit = fit_model(train, resolved, config, &warm);
    warm = fit.beta_hat;
    score(gi, fit.beta_hat);
  }
}

}  // namespace

CvResult cross_validate(const SurvivalDataset& data, const ModelSpec& spec,
                        const CvPlan& plan) {
  if (!spec.needs_lambda())
    throw std::invalid_argument("cv: model has no tuning parameter");

  const ModelSpec resolved_full = resolve_model(spec, data);
  const double lmax = lambda_max_model(data, resolved_full);
  CvResult res;
  res.lambda_grid = make_lambda_grid(lmax, plan.grid);
  res.criterion_values.assign(res.lambda_grid.size(), 0.0);

  const std::vector<int> fold_of = make_folds(data, plan.k, plan.seed);
  FitConfig base;

  for (int f = 0; f < plan.k; ++f) {
    std::vector<int> train_rows, val_rows;
    for (int i = 0; i < data.n_obs(); ++i)
      (fold_of[i] == f ? val_rows : train_rows).push_back(i);
    const SurvivalDataset train = data.subset(train_rows);
    if (train.n_events() == 0)
      throw std::invalid_argument("cv: a training split has no events");
    const ModelSpec resolved = resolve_model(spec, train);

    if (plan.criterion == CvCriterion::partial_likelihood) {
      path_fits(train, resolved, res.lambda_grid, base,
                [&](size_t gi, const Eigen::VectorXd& beta) {
                  res.criterion_values[gi] +=
                      unnormalized_pl(beta, data) - unnormalized_pl(beta, train);
                });
    } else {
      const SurvivalDataset val = data.subset(val_rows);
      path_fits(train, resolved, res.lambda_grid, base,
                [&](size_t gi, const Eigen::VectorXd& beta) {
                  const Eigen::VectorXd scores = val.covariates() * beta;
                  res.criterion_values[gi] +=
                      c_index(scores, val.times(), val.status()) / plan.k;
                });
    }
  }

  res.best_index = 0;
  for (size_t gi = 1; gi < res.criterion_values.size(); ++gi)
    if (res.criterion_values[gi] > res.criterion_values[res.best_index])
      res.best_index = static_cast<int>(gi);
  res.best_lambda = res.lambda_grid[res.best_index];
  return res;
}

ModelSpec resolve_model(const ModelSpec& spec, const SurvivalDataset& data) {
  if (spec.kind != ModelSpec::Kind::adaptive_lasso) return spec;
  if (spec.penalty.kind == PenaltySpec::Kind::adaptive_lasso &&
      spec.penalty.adaptive_weights.size() == data.n_features())
    return spec;

  // Ridge pilot, tuned by its own small CV on the leave-fold-out likelihood.
  const double anchor = lambda_max_penalty(data, PenaltySpec::Lasso());
  std::vector<double> gammas(10);
  for (int i = 0; i < 10; ++i)
    gammas[i] = anchor * std::pow(10.0, 2.0 - 6.0 * i / 9.0);  // 1e2 .. 1e-4 times anchor

  const int k = std::min(5, std::max(2, data.n_events()));
  const std::vector<int> fold_of = make_folds(data, k, derive_seed(0, 7777));
  std::vector<double> crit(gammas.size(), 0.0);
  FitConfig config;
  for (int f = 0; f < k; ++f) {
    std::vector<int> train_rows;
    for (int i = 0; i < data.n_obs(); ++i)
      if (fold_of[i] != f) train_rows.push_back(i);
    const SurvivalDataset train = data.subset(train_rows);
    if (train.n_events() == 0)
      throw std::invalid_argument("adaptive lasso pilot: a training split has no events");
    for (size_t gi = 0; gi < gammas.size(); ++gi) {
      config.lambda = gammas[gi];
      const FitResult fit = fit_penalized_cox(train, PenaltySpec::Ridge(), config);
      crit[gi] += unnormalized_pl(fit.beta_hat, data) - unnormalized_pl(fit.beta_hat, train);
    }
  }
  size_t best = 0;
  for (size_t gi = 1; gi < crit.size(); ++gi)
    if (crit[gi] > crit[best]) best = gi;

  config.lambda = gammas[best];
  const FitResult pilot = fit_penalized_cox(data, PenaltySpec::Ridge(), config);
  Eigen::VectorXd tau(data.n_features());
  for (int j = 0; j < tau.size(); ++j)
    tau[j] = 1.0 / std::max(std::abs(pilot.beta_hat[j]), 1e-8);

  ModelSpec out = spec;
  out.penalty = PenaltySpec::AdaptiveLasso(std::move(tau));
  return out;
}

std::string cv_result_to_json(const CvResult& result) {
  nlohmann::json j;
  j["lambda_grid"] = result.lambda_grid;
  j["criterion"] = result.criterion_values;
  j["best_lambda"] = result.best_lambda;
  return j.dump(2) + "\n";
}

void write_cv_json(const CvResult& result, const std::string& path) {
  io::write_text(path, cv_result_to_json(result));
}

}  // namespace gcox
