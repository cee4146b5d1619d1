#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcox/metrics.hpp"
#include "gcox/model_selection.hpp"
#include "gcox/simulation.hpp"

namespace gcox {

enum class TauRule { sqrt_degree, unit };

// Everything that pins down a simulation study. One base seed; replication r
// derives all its generator streams from seed + r, so any single replication
// can be reproduced without running the others.
struct StudySpec {
  GraphTopologySpec topology;
  int n_train = 100;
  int n_test = 400;
  double censor_rate = 0.3;
  int replications = 20;
  std::uint64_t seed = 0;
  LambdaGridSpec lambda_grid{};
  TauRule tau_rule = TauRule::sqrt_degree;
  std::optional<BetaRule> beta_rule;  // default: all_ones on ring, else top_degree
  int cv_folds = 5;
  CvCriterion cv_criterion = CvCriterion::partial_likelihood;

  BetaRule effective_beta_rule() const;
};

StudySpec study_spec_from_json(const std::string& text);
std::string study_spec_to_json(const StudySpec& spec);
StudySpec read_study_spec(const std::string& path);

struct ReplicationData {
  PrecisionModel model;
  Eigen::VectorXd beta0;
  SurvivalDataset train;
  SurvivalDataset test;
  std::uint64_t rep_seed = 0;
};

ReplicationData make_replication(const StudySpec& spec, int replication);

struct ReplicationRow {
  std::string model;
  int replication = 0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double l2 = 0.0;
  double rpe = 0.0;
  double cindex = 0.0;
  bool converged = false;
};

struct AggregateRow {
  std::string model;
  MeanSd l2, rpe, cindex;
};

struct StudyReport {
  std::vector<ReplicationRow> rows;        // replication-major, models in run order
  std::vector<AggregateRow> aggregates;    // one per model, in run order
};

// CV-tunes (when the model has a scale), refits on the training half, and
// scores the test half of one replication.
ReplicationRow evaluate_model_on(const StudySpec& spec, const ReplicationData& rep,
                                 ModelSpec::Kind kind);

struct BenchmarkRun {
  StudySpec spec;
  std::vector<ModelSpec::Kind> models;
  std::string out_dir;
  int threads = 1;
};

// Runs every (replication, model) cell, writes replications.csv, report.csv,
// report.json and manifest.json under out_dir, and returns the report.
// Output is byte-identical for a given spec regardless of thread count.
// On failure, rows already computed are still written (manifest records the
// error) before the exception propagates.
StudyReport run_benchmark(const BenchmarkRun& run);

std::string report_csv(const StudyReport& report);
std::string replications_csv(const StudyReport& report);

}  // namespace gcox
