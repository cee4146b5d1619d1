#pragma once

#include <Eigen/Core>
#include <vector>

#include "gcox/graph.hpp"

namespace gcox {

// Latent decomposition beta = sum_k V^(k) with supp(V^(k)) inside N_k.
struct LatentDecomposition {
  std::vector<Eigen::VectorXd> vectors;  // one p-vector per node

  Eigen::VectorXd sum() const;
};

// Predictor-duplication layout: one group per node k holding copies of the
// features in N_k. Expanded coordinates are ordered by group (k ascending),
// and inside a group by feature index ascending. collapse() maps an expanded
// vector u to beta = A u by summing the copies of each feature; the expanded
// design satisfies Xtilde = X A^T column-wise, i.e. Xtilde u = X collapse(u).
class DuplicatedDesign {
 public:
  DuplicatedDesign(const Eigen::MatrixXd& covariates, const PredictorGraph& graph);
  // Explicit group layout (members listed per group, any order); used to
  // check that group ordering is a representation detail only.
  DuplicatedDesign(const Eigen::MatrixXd& covariates, int p,
                   std::vector<std::vector<int>> group_members);

  int expanded_dim() const { return dim_; }
  int num_groups() const { return static_cast<int>(offset_.size()); }
  int n_features() const { return p_; }
  int group_offset(int k) const { return offset_[k]; }
  int group_size(int k) const { return size_[k]; }
  // Expanded coordinate c -> (group, feature).
  int group_of(int c) const { return group_of_[c]; }
  int feature_of(int c) const { return feature_of_[c]; }

  const Eigen::MatrixXd& expanded_matrix() const { return expanded_; }

  Eigen::VectorXd collapse(const Eigen::Ref<const Eigen::VectorXd>& expanded) const;
  // Adjoint of collapse: copies each feature entry to all its duplicates.
  Eigen::VectorXd scatter(const Eigen::Ref<const Eigen::VectorXd>& by_feature) const;

  LatentDecomposition decomposition(const Eigen::Ref<const Eigen::VectorXd>& expanded) const;

 private:
  void build(const Eigen::MatrixXd& covariates, std::vector<std::vector<int>> group_members);

  int p_ = 0;
  int dim_ = 0;
  std::vector<int> offset_, size_, group_of_, feature_of_;
  Eigen::MatrixXd expanded_;
};

inline Eigen::VectorXd collapse(const Eigen::Ref<const Eigen::VectorXd>& expanded,
                                const DuplicatedDesign& design) {
  return design.collapse(expanded);
}

DuplicatedDesign duplicate_design(const Eigen::MatrixXd& covariates,
                                  const PredictorGraph& graph);

}  // namespace gcox
