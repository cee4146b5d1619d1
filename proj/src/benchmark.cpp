#include "gcox/benchmark.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gcox/seeding.hpp"
#include "io_util.hpp"

namespace gcox {

namespace {

std::string topology_kind_name(GraphTopologySpec::Kind kind) {
  switch (kind) {
    case GraphTopologySpec::Kind::erdos_renyi: return "erdos_renyi";
    case GraphTopologySpec::Kind::ring: return "ring";
    case GraphTopologySpec::Kind::community: return "community";
  }
  return "?";
}

GraphTopologySpec topology_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "erdos_renyi")
    return GraphTopologySpec::ErdosRenyi(j.at("p").get<int>(), j.at("p0").get<double>());
  if (kind == "ring") return GraphTopologySpec::Ring(j.at("p").get<int>());
  if (kind == "community")
    return GraphTopologySpec::Community(j.at("sizes").get<std::vector<int>>(),
                                        j.at("p_in").get<double>(),
                                        j.at("p_out").get<double>());
  throw std::invalid_argument("study spec: unknown topology kind '" + kind + "'");
}

nlohmann::json topology_to_json(const GraphTopologySpec& t) {
  nlohmann::json j;
  j["kind"] = topology_kind_name(t.kind);
  switch (t.kind) {
    case GraphTopologySpec::Kind::erdos_renyi:
      j["p"] = t.p;
      j["p0"] = t.p0;
      break;
    case GraphTopologySpec::Kind::ring:
      j["p"] = t.p;
      break;
    case GraphTopologySpec::Kind::community:
      j["sizes"] = t.community_sizes;
      j["p_in"] = t.p_in;
      j["p_out"] = t.p_out;
      break;
  }
  return j;
}

void check_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw std::invalid_argument("study spec: unknown key '" + it.key() + "' in " + where);
}

}  // namespace

BetaRule StudySpec::effective_beta_rule() const {
  if (beta_rule) return *beta_rule;
  BetaRule rule;
  if (topology.kind == GraphTopologySpec::Kind::ring)
    rule.kind = BetaRule::Kind::all_ones;
  else
    rule.kind = BetaRule::Kind::top_degree;
  return rule;
}

StudySpec study_spec_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  check_keys(j,
             {"topology", "n_train", "n_test", "censor_rate", "replications", "seed",
              "lambda_grid", "tau_rule", "beta_rule", "cv_folds", "cv_criterion"},
             "top level");
  StudySpec spec;
  spec.topology = topology_from_json(j.at("topology"));
  check_keys(j.at("topology"), {"kind", "p", "p0", "sizes", "p_in", "p_out"}, "topology");
  spec.n_train = j.at("n_train").get<int>();
  spec.n_test = j.at("n_test").get<int>();
  spec.censor_rate = j.at("censor_rate").get<double>();
  spec.replications = j.at("replications").get<int>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("lambda_grid")) {
    const auto& g = j.at("lambda_grid");
    if (g.is_array()) {
      spec.lambda_grid.explicit_values = g.get<std::vector<double>>();
    } else {
      check_keys(g, {"size", "min_ratio"}, "lambda_grid");
      if (g.contains("size")) spec.lambda_grid.size = g.at("size").get<int>();
      if (g.contains("min_ratio")) spec.lambda_grid.min_ratio = g.at("min_ratio").get<double>();
    }
  }
  if (j.contains("tau_rule")) {
    const std::string r = j.at("tau_rule").get<std::string>();
    if (r == "sqrt_degree")
      spec.tau_rule = TauRule::sqrt_degree;
    else if (r == "unit")
      spec.tau_rule = TauRule::unit;
    else
      throw std::invalid_argument("study spec: unknown tau_rule '" + r + "'");
  }
  if (j.contains("beta_rule")) {
    const auto& b = j.at("beta_rule");
    check_keys(b, {"kind", "count", "value"}, "beta_rule");
    BetaRule rule;
    const std::string r = b.at("kind").get<std::string>();
    if (r == "top_degree")
      rule.kind = BetaRule::Kind::top_degree;
    else if (r == "all_ones")
      rule.kind = BetaRule::Kind::all_ones;
    else
      throw std::invalid_argument("study spec: unknown beta_rule kind '" + r + "'");
    if (b.contains("count")) rule.count = b.at("count").get<int>();
    if (b.contains("value")) rule.value = b.at("value").get<double>();
    spec.beta_rule = rule;
  }
  if (j.contains("cv_folds")) spec.cv_folds = j.at("cv_folds").get<int>();
  if (j.contains("cv_criterion")) {
    const std::string c = j.at("cv_criterion").get<std::string>();
    if (c == "partial_likelihood")
      spec.cv_criterion = CvCriterion::partial_likelihood;
    else if (c == "c_index")
      spec.cv_criterion = CvCriterion::c_index;
    else
      throw std::invalid_argument("study spec: unknown cv_criterion '" + c + "'");
  }
  if (spec.n_train <= 0 || spec.n_test <= 0)
    throw std::invalid_argument("study spec: sample sizes must be positive");
  if (spec.replications <= 0)
    throw std::invalid_argument("study spec: replications must be positive");
  if (spec.censor_rate <= 0.0 || spec.censor_rate >= 1.0)
    throw std::invalid_argument("study spec: censor_rate must lie in (0, 1)");
  return spec;
}

std::string study_spec_to_json(const StudySpec& spec) {
  nlohmann::json j;
  j["topology"] = topology_to_json(spec.topology);
  j["n_train"] = spec.n_train;
  j["n_test"] = spec.n_test;
  j["censor_rate"] = spec.censor_rate;
  j["replications"] = spec.replications;
  j["seed"] = spec.seed;
  if (!spec.lambda_grid.explicit_values.empty()) {
    j["lambda_grid"] = spec.lambda_grid.explicit_values;
  } else {
    j["lambda_grid"] = {{"size", spec.lambda_grid.size},
                        {"min_ratio", spec.lambda_grid.min_ratio}};
  }
  j["tau_rule"] = spec.tau_rule == TauRule::sqrt_degree ? "sqrt_degree" : "unit";
  if (spec.beta_rule) {
    j["beta_rule"] = {
        {"kind", spec.beta_rule->kind == BetaRule::Kind::top_degree ? "top_degree" : "all_ones"},
        {"count", spec.beta_rule->count},
        {"value", spec.beta_rule->value}};
  }
  j["cv_folds"] = spec.cv_folds;
  j["cv_criterion"] =
      spec.cv_criterion == CvCriterion::partial_likelihood ? "partial_likelihood" : "c_index";
  return j.dump(2) + "\n";
}

StudySpec read_study_spec(const std::string& path) {
  auto lines = io::read_lines(path);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  return study_spec_from_json(text);
}

ReplicationData make_replication(const StudySpec& spec, int replication) {
  if (replication < 0 || replication >= spec.replications)
    throw std::invalid_argument("make_replication: replication out of range");
  const std::uint64_t rep_seed = spec.seed + static_cast<std::uint64_t>(replication);
  PrecisionModel model = build_precision(spec.topology, derive_seed(rep_seed, stream::graph));
  Eigen::VectorXd beta0 = true_coefficients(model, spec.effective_beta_rule());
  const Eigen::MatrixXd x_train = sample_predictors(
      spec.n_train, model.omega, derive_seed(rep_seed, stream::train_predictors));
  const Eigen::MatrixXd x_test = sample_predictors(
      spec.n_test, model.omega, derive_seed(rep_seed, stream::test_predictors));
  SurvivalDataset train = simulate_survival(x_train, beta0, spec.censor_rate,
                                            derive_seed(rep_seed, stream::train_survival));
  SurvivalDataset test = simulate_survival(x_test, beta0, spec.censor_rate,
                                           derive_seed(rep_seed, stream::test_survival));
  return ReplicationData{std::move(model), std::move(beta0), std::move(train),
                         std::move(test), rep_seed};
}

ReplicationRow evaluate_model_on(const StudySpec& spec, const ReplicationData& rep,
                                 ModelSpec::Kind kind) {
  ModelSpec model;
  model.kind = kind;
  if (kind == ModelSpec::Kind::graph) {
    model.graph = rep.model.graph;
    if (spec.tau_rule == TauRule::unit)
      model.weights = NodeWeights::Unit(rep.model.graph.num_nodes());
  }

  FitConfig config;
  FitResult fit;
  if (model.needs_lambda()) {
    const ModelSpec resolved = resolve_model(model, rep.train);
    CvPlan plan;
    plan.k = spec.cv_folds;
    plan.criterion = spec.cv_criterion;
    plan.seed = rep.rep_seed;
    plan.grid = spec.lambda_grid;
    const CvResult cv = cross_validate(rep.train, resolved, plan);
    config.lambda = cv.best_lambda;
    fit = fit_model(rep.train, resolved, config);
  } else {
    fit = fit_model(rep.train, model, config);
  }

  ReplicationRow row;
  row.model = model_kind_name(kind);
  row.replication = 0;  // caller stamps the index
  row.seed = rep.rep_seed;
  row.lambda = model.needs_lambda() ? config.lambda : 0.0;
  const PredictionError pe = prediction_errors(fit.beta_hat, rep.beta0, rep.test.covariates());
  row.l2 = pe.l2;
  row.rpe = pe.rpe;
  row.cindex = c_index(rep.test.covariates() * fit.beta_hat, rep.test.times(), rep.test.status());
  row.converged = fit.converged && !fit.diverged;
  return row;
}

std::string replications_csv(const StudyReport& report) {
  std::ostringstream out;
  out << "model,replication,seed,lambda,l2,rpe,cindex,converged\n";
  for (const auto& r : report.rows) {
    out << r.model << "," << r.replication << "," << r.seed << ","
        << io::format_full(r.lambda) << "," << io::format_full(r.l2) << ","
        << io::format_full(r.rpe) << "," << io::format_full(r.cindex) << ","
        << (r.converged ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string report_csv(const StudyReport& report) {
  std::ostringstream out;
  out << "model,l2_mean,l2_sd,rpe_mean,rpe_sd,cindex_mean,cindex_sd\n";
  for (const auto& a : report.aggregates) {
    out << a.model << "," << io::format_display(a.l2.mean) << ","
        << io::format_display(a.l2.sd) << "," << io::format_display(a.rpe.mean) << ","
        << io::format_display(a.rpe.sd) << "," << io::format_display(a.cindex.mean) << ","
        << io::format_display(a.cindex.sd) << "\n";
  }
  return out.str();
}

StudyReport run_benchmark(const BenchmarkRun& run) {
  if (run.models.empty()) throw std::invalid_argument("benchmark: no models requested");
  if (run.threads < 1) throw std::invalid_argument("benchmark: threads must be >= 1");
  namespace fs = std::filesystem;
  fs::create_directories(run.out_dir);

  const int R = run.spec.replications;
  const int M = static_cast<int>(run.models.size());
  std::vector<ReplicationRow> cells(static_cast<size_t>(R) * M);
  std::vector<char> done(static_cast<size_t>(R) * M, 0);
  std::vector<std::string> errors(R);

  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int r = next.fetch_add(1);
      if (r >= R) break;
      try {
        const ReplicationData rep = make_replication(run.spec, r);
        for (int m = 0; m < M; ++m) {
          ReplicationRow row = evaluate_model_on(run.spec, rep, run.models[m]);
          row.replication = r;
          cells[static_cast<size_t>(r) * M + m] = std::move(row);
          done[static_cast<size_t>(r) * M + m] = 1;
        }
      } catch (const std::exception& e) {
        errors[r] = e.what();
      }
    }
  };

  if (run.threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < run.threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  StudyReport report;
  for (int r = 0; r < R; ++r)
    for (int m = 0; m < M; ++m)
      if (done[static_cast<size_t>(r) * M + m])
        report.rows.push_back(cells[static_cast<size_t>(r) * M + m]);

  std::string first_error;
  for (int r = 0; r < R; ++r)
    if (!errors[r].empty()) {
      first_error = "replication " + std::to_string(r) + ": " + errors[r];
      break;
    }

  if (first_error.empty()) {
    for (int m = 0; m < M; ++m) {
      std::vector<double> l2s, rpes, cis;
      for (int r = 0; r < R; ++r) {
        const auto& row = cells[static_cast<size_t>(r) * M + m];
        l2s.push_back(row.l2);
        rpes.push_back(row.rpe);
        cis.push_back(row.cindex);
      }
      AggregateRow agg;
      agg.model = model_kind_name(run.models[m]);
      agg.l2 = aggregate(l2s);
      agg.rpe = aggregate(rpes);
      agg.cindex = aggregate(cis);
      report.aggregates.push_back(std::move(agg));
    }
  }

  io::write_text((fs::path(run.out_dir) / "replications.csv").string(),
                 replications_csv(report));

  nlohmann::json manifest;
  manifest["rows_written"] = report.rows.size();
  if (first_error.empty()) {
    io::write_text((fs::path(run.out_dir) / "report.csv").string(), report_csv(report));

    nlohmann::json jr;
    jr["spec"] = nlohmann::json::parse(study_spec_to_json(run.spec));
    nlohmann::json aggs = nlohmann::json::array();
    for (const auto& a : report.aggregates) {
      aggs.push_back({{"model", a.model},
                      {"l2_mean", a.l2.mean},
                      {"l2_sd", a.l2.sd},
                      {"rpe_mean", a.rpe.mean},
                      {"rpe_sd", a.rpe.sd},
                      {"cindex_mean", a.cindex.mean},
                      {"cindex_sd", a.cindex.sd}});
    }
    jr["aggregates"] = aggs;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"model", r.model},
                      {"replication", r.replication},
                      {"seed", r.seed},
                      {"lambda", r.lambda},
                      {"l2", r.l2},
                      {"rpe", r.rpe},
                      {"cindex", r.cindex},
                      {"converged", r.converged}});
    }
    jr["replications"] = rows;
    io::write_text((fs::path(run.out_dir) / "report.json").string(), jr.dump(2) + "\n");

    manifest["status"] = "ok";
    io::write_text((fs::path(run.out_dir) / "manifest.json").string(),
                   manifest.dump(2) + "\n");
  } else {
    manifest["status"] = "error";
    manifest["message"] = first_error;
    io::write_text((fs::path(run.out_dir) / "manifest.json").string(),
                   manifest.dump(2) + "\n");
    throw std::runtime_error("benchmark failed: " + first_error);
  }
  return report;
}

}  // namespace gcox
