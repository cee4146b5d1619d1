#include "gcox/duplicated_design.hpp"

#include <stdexcept>

namespace gcox {

Eigen::VectorXd LatentDecomposition::sum() const {
  if (vectors.empty()) return Eigen::VectorXd();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(vectors.front().size());
  for (const auto& v : vectors) s += v;
  return s;
}

DuplicatedDesign::DuplicatedDesign(const Eigen::MatrixXd& covariates,
                                   const PredictorGraph& graph) {
  if (covariates.cols() != graph.num_nodes())
    throw std::invalid_argument("duplicate_design: columns do not match graph nodes");
  std::vector<std::vector<int>> members;
  members.reserve(graph.num_nodes());
  for (int k = 0; k < graph.num_nodes(); ++k) members.push_back(graph.neighborhood(k));
  build(covariates, std::move(members));
}

DuplicatedDesign::DuplicatedDesign(const Eigen::MatrixXd& covariates, int p,
                                   std::vector<std::vector<int>> group_members) {
  if (covariates.cols() != p)
    throw std::invalid_argument("duplicate_design: columns do not match feature count");
  build(covariates, std::move(group_members));
}

void DuplicatedDesign::build(const Eigen::MatrixXd& covariates,
                             std::vector<std::vector<int>> group_members) {
  p_ = static_cast<int>(covariates.cols());
  dim_ = 0;
  for (const auto& members : group_members) {
    if (members.empty()) throw std::invalid_argument("duplicate_design: empty group");
    for (int j : members)
      if (j < 0 || j >= p_) throw std::invalid_argument("duplicate_design: member out of range");
    dim_ += static_cast<int>(members.size());
  }
  offset_.resize(group_members.size());
  size_.resize(group_members.size());
  group_of_.resize(dim_);
  feature_of_.resize(dim_);
  expanded_.resize(covariates.rows(), dim_);
  int c = 0;
  for (size_t k = 0; k < group_members.size(); ++k) {
    offset_[k] = c;
    size_[k] = static_cast<int>(group_members[k].size());
    for (int j : group_members[k]) {
      group_of_[c] = static_cast<int>(k);
      feature_of_[c] = j;
      expanded_.col(c) = covariates.col(j);
      ++c;
    }
  }
}

Eigen::VectorXd DuplicatedDesign::collapse(const Eigen::Ref<const Eigen::VectorXd>& expanded) const {
  if (expanded.size() != dim_)
    throw std::invalid_argument("collapse: expanded length mismatch");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p_);
  for (int c = 0; c < dim_; ++c) beta[feature_of_[c]] += expanded[c];
  return beta;
}

Eigen::VectorXd DuplicatedDesign::scatter(const Eigen::Ref<const Eigen::VectorXd>& by_feature) const {
  if (by_feature.size() != p_)
    throw std::invalid_argument("scatter: feature length mismatch");
  Eigen::VectorXd out(dim_);
  for (int c = 0; c < dim_; ++c) out[c] = by_feature[feature_of_[c]];
  return out;
}

LatentDecomposition DuplicatedDesign::decomposition(
    const Eigen::Ref<const Eigen::VectorXd>& expanded) const {
  if (expanded.size() != dim_)
    throw std::invalid_argument("decomposition: expanded length mismatch");
  LatentDecomposition dec;
  dec.vectors.assign(num_groups(), Eigen::VectorXd::Zero(p_));
  for (int c = 0; c < dim_; ++c) dec.vectors[group_of_[c]][feature_of_[c]] += expanded[c];
  return dec;
}

DuplicatedDesign duplicate_design(const Eigen::MatrixXd& covariates,
                                  const PredictorGraph& graph) {
  return DuplicatedDesign(covariates, graph);
}

}  // namespace gcox
