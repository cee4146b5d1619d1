#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcox/solver.hpp"
#include "gcox/survival_data.hpp"

namespace gcox {

struct LambdaGridSpec {
  int size = 30;
  double min_ratio = 1e-3;                // smallest lambda / largest
  std::vector<double> explicit_values;    // overrides size/min_ratio when set
};

// Descending log-spaced grid from lambda_max down to lambda_max * min_ratio.
std::vector<double> make_lambda_grid(double lambda_max, const LambdaGridSpec& spec);

enum class CvCriterion { partial_likelihood, c_index };

struct CvPlan {
  int k = 5;
  CvCriterion criterion = CvCriterion::partial_likelihood;
  std::uint64_t seed = 0;
  LambdaGridSpec grid{};
};

// Event-stratified fold assignment: shuffled events dealt round-robin, then
// shuffled censored, so every fold holds at least one event whenever
// k <= number of events. Returns fold id per observation.
std::vector<int> make_folds(const SurvivalDataset& data, int k, std::uint64_t seed);

struct CvResult {
  std::vector<double> lambda_grid;      // descending
  std::vector<double> criterion_values; // higher is better
  double best_lambda = 0.0;
  int best_index = -1;
};

// Cross-validated tuning curve. partial_likelihood is the leave-fold-out
// criterion sum_f [ pl_full(beta_f) - pl_train_f(beta_f) ] with pl the
// unnormalized partial log-likelihood; c_index averages the validation-fold
// concordance. Fits along the grid are warm-started from the previous
// lambda. Ties prefer the larger lambda.
CvResult cross_validate(const SurvivalDataset& data, const ModelSpec& spec,
                        const CvPlan& plan);

// Fills in whatever the model needs to learn from the data before fitting:
// adaptive-lasso weights from a CV-tuned ridge pilot. Other kinds pass
// through unchanged.
ModelSpec resolve_model(const ModelSpec& spec, const SurvivalDataset& data);

std::string cv_result_to_json(const CvResult& result);
void write_cv_json(const CvResult& result, const std::string& path);

}  // namespace gcox
