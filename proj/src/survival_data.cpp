#include "gcox/survival_data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "io_util.hpp"

namespace gcox {

SurvivalDataset::SurvivalDataset(Eigen::VectorXd times, Eigen::VectorXi status,
                                 Eigen::MatrixXd covariates,
                                 std::vector<std::string> feature_names)
    : times_(std::move(times)),
      status_(std::move(status)),
      covariates_(std::move(covariates)),
      feature_names_(std::move(feature_names)) {
  const int n = static_cast<int>(times_.size());
  if (n == 0) throw std::invalid_argument("dataset: no observations");
  if (status_.size() != n)
    throw std::invalid_argument("dataset: times and status lengths differ");
  if (covariates_.rows() != n)
    throw std::invalid_argument("dataset: covariate rows do not match observations");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(times_[i]) || times_[i] <= 0.0)
      throw std::invalid_argument("dataset: times must be positive and finite");
    if (status_[i] != 0 && status_[i] != 1)
      throw std::invalid_argument("dataset: status must be 0 or 1");
  }
  if (!covariates_.allFinite())
    throw std::invalid_argument("dataset: covariates must be finite");

  const int p = static_cast<int>(covariates_.cols());
  if (feature_names_.empty()) {
    feature_names_.reserve(p);
    for (int j = 0; j < p; ++j) feature_names_.push_back("x" + std::to_string(j + 1));
  } else if (static_cast<int>(feature_names_.size()) != p) {
    throw std::invalid_argument("dataset: feature name count does not match columns");
  }

  order_.by_desc_time.resize(n);
  std::iota(order_.by_desc_time.begin(), order_.by_desc_time.end(), 0);
  std::stable_sort(order_.by_desc_time.begin(), order_.by_desc_time.end(),
                   [&](int a, int b) { return times_[a] > times_[b]; });

  // Risk-set sizes from tie blocks of the descending order: every member of a
  // block of equal times has the same risk set, everything sorted before it
  // plus the block itself.
  order_.risk_set_size.assign(n, 0);
  int i = 0;
  while (i < n) {
    int j = i;
    const double t = times_[order_.by_desc_time[i]];
    while (j < n && times_[order_.by_desc_time[j]] == t) ++j;
    for (int k = i; k < j; ++k) order_.risk_set_size[order_.by_desc_time[k]] = j;
    i = j;
  }

  // No two events may share a time; a censored copy of an event time is fine.
  std::vector<double> event_times;
  for (int k = 0; k < n; ++k) {
    if (status_[k] == 1) event_times.push_back(times_[k]);
    n_events_ += status_[k];
  }
  std::sort(event_times.begin(), event_times.end());
  if (std::adjacent_find(event_times.begin(), event_times.end()) != event_times.end())
    throw std::invalid_argument("dataset: tied event times are not supported");
}

SurvivalDataset SurvivalDataset::subset(const std::vector<int>& rows) const {
  const int m = static_cast<int>(rows.size());
  Eigen::VectorXd t(m);
  Eigen::VectorXi s(m);
  Eigen::MatrixXd x(m, covariates_.cols());
  for (int i = 0; i < m; ++i) {
    const int r = rows[i];
    if (r < 0 || r >= n_obs()) throw std::invalid_argument("subset: row index out of range");
    t[i] = times_[r];
    s[i] = status_[r];
    x.row(i) = covariates_.row(r);
  }
  return SurvivalDataset(std::move(t), std::move(s), std::move(x), feature_names_);
}

SurvivalDataset read_dataset_csv(const std::string& path) {
  auto lines = io::read_lines(path);
  if (lines.empty()) throw std::invalid_argument(path + ": empty file");
  auto header = io::split_csv(lines[0]);
  if (header.size() < 2 || io::trim(header[0]) != "time" || io::trim(header[1]) != "status")
    throw std::invalid_argument(path + ": header must start with 'time,status'");
  const int p = static_cast<int>(header.size()) - 2;
  std::vector<std::string> names;
  for (int j = 0; j < p; ++j) names.push_back(io::trim(header[2 + j]));

  std::vector<double> times;
  std::vector<int> status;
  std::vector<double> xvals;
  for (size_t li = 1; li < lines.size(); ++li) {
    if (io::trim(lines[li]).empty()) continue;
    auto fields = io::split_csv(lines[li]);
    if (static_cast<int>(fields.size()) != p + 2)
      throw std::invalid_argument(path + ": wrong field count on line " + std::to_string(li + 1));
    times.push_back(io::parse_double(fields[0], path));
    const double sv = io::parse_double(fields[1], path);
    if (sv != 0.0 && sv != 1.0)
      throw std::invalid_argument(path + ": status must be 0 or 1 on line " + std::to_string(li + 1));
    status.push_back(static_cast<int>(sv));
    for (int j = 0; j < p; ++j) xvals.push_back(io::parse_double(fields[2 + j], path));
  }
  const int n = static_cast<int>(times.size());
  if (n == 0) throw std::invalid_argument(path + ": no data rows");
  Eigen::VectorXd t(n);
  Eigen::VectorXi s(n);
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i) {
    t[i] = times[i];
    s[i] = status[i];
    for (int j = 0; j < p; ++j) x(i, j) = xvals[static_cast<size_t>(i) * p + j];
  }
  return SurvivalDataset(std::move(t), std::move(s), std::move(x), std::move(names));
}

void write_dataset_csv(const SurvivalDataset& data, const std::string& path) {
  std::ostringstream out;
  out << "time,status";
  for (const auto& name : data.feature_names()) out << "," << name;
  out << "\n";
  for (int i = 0; i < data.n_obs(); ++i) {
    out << io::format_full(data.times()[i]) << "," << data.status()[i];
    for (int j = 0; j < data.n_features(); ++j)
      out << "," << io::format_full(data.covariates()(i, j));
    out << "\n";
  }
  io::write_text(path, out.str());
}

}  // namespace gcox
