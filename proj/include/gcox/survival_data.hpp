#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace gcox {

// Observation order for risk-set accumulation: indices sorted by
// non-increasing time (stable in the original index for ties).
struct RiskSetOrder {
  std::vector<int> by_desc_time;
  // risk_set_size[i] = |{j : y_j >= y_i}| for observation i.
  std::vector<int> risk_set_size;
};

// Right-censored survival sample. status 1 = event, 0 = censored.
// Event times must be pairwise distinct (ties among censored times, or a
// censored time equal to an event time, are allowed).
class SurvivalDataset {
 public:
  SurvivalDataset(Eigen::VectorXd times, Eigen::VectorXi status,
                  Eigen::MatrixXd covariates,
                  std::vector<std::string> feature_names = {});

  int n_obs() const { return static_cast<int>(times_.size()); }
  int n_features() const { return static_cast<int>(covariates_.cols()); }
  int n_events() const { return n_events_; }

  const Eigen::VectorXd& times() const { return times_; }
  const Eigen::VectorXi& status() const { return status_; }
  const Eigen::MatrixXd& covariates() const { return covariates_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const RiskSetOrder& risk_order() const { return order_; }

  SurvivalDataset subset(const std::vector<int>& rows) const;

 private:
  Eigen::VectorXd times_;
  Eigen::VectorXi status_;
  Eigen::MatrixXd covariates_;
  std::vector<std::string> feature_names_;
  RiskSetOrder order_;
  int n_events_ = 0;
};

// CSV layout: header "time,status,<name1>,<name2>,..." then one row per
// observation. Values are written with enough digits to round-trip exactly.
SurvivalDataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const SurvivalDataset& data, const std::string& path);

}  // namespace gcox
