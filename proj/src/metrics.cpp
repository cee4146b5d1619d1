#include "gcox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gcox {

namespace {

void check_inputs(const Eigen::VectorXd& scores, const Eigen::VectorXd& times,
                  const Eigen::VectorXi& status) {
  const auto n = scores.size();
  if (times.size() != n || status.size() != n)
    throw std::invalid_argument("c_index: input lengths differ");
  if (n == 0) throw std::invalid_argument("c_index: empty input");
  for (int i = 0; i < status.size(); ++i)
    if (status[i] != 0 && status[i] != 1)
      throw std::invalid_argument("c_index: status must be 0 or 1");
}

struct Fenwick {
  std::vector<long long> tree;
  explicit Fenwick(int n) : tree(n + 1, 0) {}
  void add(int i) {
    for (++i; i < static_cast<int>(tree.size()); i += i & -i) ++tree[i];
  }
  // count of inserted ranks in [0, i]
  long long prefix(int i) const {
    long long s = 0;
    for (++i; i > 0; i -= i & -i) s += tree[i];
    return s;
  }
};

}  // namespace

double c_index(const Eigen::VectorXd& scores, const Eigen::VectorXd& times,
               const Eigen::VectorXi& status) {
  check_inputs(scores, times, status);
  const int n = static_cast<int>(scores.size());

  // Compress scores to ranks.
  std::vector<double> levels(scores.data(), scores.data() + n);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<int> rank(n);
  for (int i = 0; i < n; ++i)
    rank[i] = static_cast<int>(std::lower_bound(levels.begin(), levels.end(), scores[i]) -
                               levels.begin());
  const int m = static_cast<int>(levels.size());

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return times[a] > times[b]; });

  // Walk times descending; everything inserted so far survived strictly
  // longer than the current block, so each event in the block is the short
  // side of exactly those pairs.
  Fenwick inserted(m);
  long long n_inserted = 0;
  long long comparable = 0;
  double concordant = 0.0;
  int i = 0;
  while (i < n) {
    int j = i;
    const double t = times[order[i]];
    while (j < n && times[order[j]] == t) ++j;
    for (int k = i; k < j; ++k) {
      const int idx = order[k];
      if (status[idx] != 1) continue;
      comparable += n_inserted;
      const long long le = inserted.prefix(rank[idx]);
      const long long lt = rank[idx] > 0 ? inserted.prefix(rank[idx] - 1) : 0;
      concordant += static_cast<double>(lt) + 0.5 * static_cast<double>(le - lt);
    }
    for (int k = i; k < j; ++k) {
      inserted.add(rank[order[k]]);
      ++n_inserted;
    }
    i = j;
  }
  if (comparable == 0)
    throw std::invalid_argument("c_index: no comparable pairs");
  return concordant / static_cast<double>(comparable);
}

double c_index_naive(const Eigen::VectorXd& scores, const Eigen::VectorXd& times,
                     const Eigen::VectorXi& status) {
  check_inputs(scores, times, status);
  const int n = static_cast<int>(scores.size());
  long long comparable = 0;
  double concordant = 0.0;
  for (int i = 0; i < n; ++i) {
    if (status[i] != 1) continue;
    for (int j = 0; j < n; ++j) {
      if (times[i] >= times[j]) continue;
      ++comparable;
      if (scores[i] > scores[j])
        concordant += 1.0;
      else if (scores[i] == scores[j])
        concordant += 0.5;
    }
  }
  if (comparable == 0)
    throw std::invalid_argument("c_index: no comparable pairs");
  return concordant / static_cast<double>(comparable);
}

PredictionError prediction_errors(const Eigen::VectorXd& beta_hat,
                                  const Eigen::VectorXd& beta0,
                                  const Eigen::MatrixXd& covariates) {
  if (beta_hat.size() != beta0.size())
    throw std::invalid_argument("prediction_errors: coefficient lengths differ");
  if (covariates.cols() != beta_hat.size())
    throw std::invalid_argument("prediction_errors: covariate columns mismatch");
  if (covariates.rows() == 0)
    throw std::invalid_argument("prediction_errors: empty covariate matrix");
  PredictionError e;
  const Eigen::VectorXd d = beta_hat - beta0;
  e.l2 = d.norm();
  e.rpe = (covariates * d).squaredNorm() / static_cast<double>(covariates.rows());
  return e;
}

MeanSd aggregate(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("aggregate: empty input");
  MeanSd out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / (n - 1.0));
  return out;
}

}  // namespace gcox
