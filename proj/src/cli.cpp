#include "gcox/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcox/benchmark.hpp"
#include "gcox/graph.hpp"
#include "gcox/metrics.hpp"
#include "gcox/model_selection.hpp"
#include "gcox/partial_likelihood.hpp"
#include "gcox/solver.hpp"
#include "io_util.hpp"

namespace gcox {

namespace {

namespace fs = std::filesystem;

struct FitOptions {
  std::string data, penalty, graph_file, weights_file, out;
  double lambda = std::nan("");
  double enet_gamma = std::nan("");
  double scad_a = 3.7;
  int max_iter = 5000;
  double tol = 1e-7;
};

ModelSpec build_model(const FitOptions& opt, const SurvivalDataset& data) {
  ModelSpec model;
  model.kind = model_kind_from_name(opt.penalty);
  if (model.kind == ModelSpec::Kind::graph) {
    if (opt.graph_file.empty())
      throw std::invalid_argument("--penalty graph requires --graph");
    model.graph = read_graph_file(opt.graph_file, data.n_features());
    if (!opt.weights_file.empty())
      model.weights = read_weights_file(opt.weights_file, *model.graph);
  } else if (!opt.graph_file.empty()) {
    throw std::invalid_argument("--graph only applies to --penalty graph");
  }
  if (model.kind == ModelSpec::Kind::scad) model.penalty = PenaltySpec::Scad(opt.scad_a);
  return model;
}

FitConfig build_config(const FitOptions& opt, const ModelSpec& model) {
  FitConfig config;
  config.max_iter = opt.max_iter;
  config.tol = opt.tol;
  if (model.needs_lambda()) {
    if (std::isnan(opt.lambda))
      throw std::invalid_argument("--lambda is required for penalty '" + opt.penalty + "'");
    config.lambda = opt.lambda;
  }
  return config;
}

int cmd_fit(const FitOptions& opt) {
  const SurvivalDataset data = read_dataset_csv(opt.data);
  ModelSpec model = build_model(opt, data);
  const FitConfig config = build_config(opt, model);

  FitResult fit;
  if (model.kind == ModelSpec::Kind::elastic_net && !std::isnan(opt.enet_gamma)) {
    fit = fit_penalized_cox(data, PenaltySpec::ElasticNet(opt.enet_gamma), config);
  } else {
    const ModelSpec resolved = resolve_model(model, data);
    fit = fit_model(data, resolved, config);
  }
  write_fit_json(fit, opt.out);
  if (!fit.converged || fit.diverged) {
    std::cerr << "fit did not converge (" << fit.iterations << " iterations"
              << (fit.diverged ? ", diverged" : "") << ")\n";
    return 3;
  }
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out) {
  const FitResult fit = read_fit_json(model_path);
  const SurvivalDataset data = read_dataset_csv(data_path);
  if (fit.beta_hat.size() != data.n_features())
    throw std::invalid_argument("predict: model and data dimensions differ");
  io::write_vector_csv(data.covariates() * fit.beta_hat, out, "score");
  return 0;
}

int cmd_evaluate(const std::string& data_path, const std::string& scores_path,
                 const std::string& model_path, const std::string& beta0_path,
                 const std::string& out) {
  const SurvivalDataset data = read_dataset_csv(data_path);
  const Eigen::VectorXd scores = io::read_vector_csv(scores_path, "score");
  if (scores.size() != data.n_obs())
    throw std::invalid_argument("evaluate: score count does not match observations");
  nlohmann::json j;
  j["c_index"] = c_index(scores, data.times(), data.status());
  if (!model_path.empty() != !beta0_path.empty())
    throw std::invalid_argument("evaluate: --model and --beta0 go together");
  if (!model_path.empty()) {
    const FitResult fit = read_fit_json(model_path);
    const Eigen::VectorXd beta0 = io::read_vector_csv(beta0_path, "beta0");
    const PredictionError pe = prediction_errors(fit.beta_hat, beta0, data.covariates());
    j["l2"] = pe.l2;
    j["rpe"] = pe.rpe;
  }
  io::write_text(out, j.dump(2) + "\n");
  return 0;
}

int cmd_simulate(const std::string& spec_path, std::optional<std::uint64_t> seed,
                 int replication, const std::string& out_dir) {
  StudySpec spec = read_study_spec(spec_path);
  if (seed) spec.seed = *seed;
  const ReplicationData rep = make_replication(spec, replication);
  fs::create_directories(out_dir);
  write_dataset_csv(rep.train, (fs::path(out_dir) / "train.csv").string());
  write_dataset_csv(rep.test, (fs::path(out_dir) / "test.csv").string());
  write_graph_file(rep.model.graph, (fs::path(out_dir) / "graph.txt").string());
  const NodeWeights weights = spec.tau_rule == TauRule::unit
                                  ? NodeWeights::Unit(rep.model.graph.num_nodes())
                                  : NodeWeights::SqrtDegree(rep.model.graph);
  write_weights_file(weights, (fs::path(out_dir) / "weights.txt").string());
  io::write_vector_csv(rep.beta0, (fs::path(out_dir) / "beta0.csv").string(), "beta0");
  return 0;
}

struct GraphOptions {
  std::string data, topology, merge_file, out;
  double alpha = 0.05;
  int p = 0;
  double p0 = 0.0;
  std::vector<int> sizes;
  double p_in = 0.0, p_out = 0.0;
  std::uint64_t seed = 0;
};

int cmd_graph(const GraphOptions& opt) {
  std::optional<PredictorGraph> graph;
  if (!opt.data.empty()) {
    if (!opt.topology.empty())
      throw std::invalid_argument("graph: give either --data or --topology, not both");
    const SurvivalDataset data = read_dataset_csv(opt.data);
    graph = graph_from_data(data.covariates(), opt.alpha);
  } else if (!opt.topology.empty()) {
    GraphTopologySpec topo;
    if (opt.topology == "erdos_renyi" || opt.topology == "er")
      topo = GraphTopologySpec::ErdosRenyi(opt.p, opt.p0);
    else if (opt.topology == "ring")
      topo = GraphTopologySpec::Ring(opt.p);
    else if (opt.topology == "community")
      topo = GraphTopologySpec::Community(opt.sizes, opt.p_in, opt.p_out);
    else
      throw std::invalid_argument("graph: unknown topology '" + opt.topology + "'");
    graph = generate_graph(topo, opt.seed);
  } else {
    throw std::invalid_argument("graph: need --data or --topology");
  }
  if (!opt.merge_file.empty()) {
    const PredictorGraph extra = read_graph_file(opt.merge_file, graph->num_nodes());
    graph = graph->merged_with(extra.edges());
  }
  write_graph_file(*graph, opt.out);
  return 0;
}

struct CvOptions {
  FitOptions fit;
  int folds = 5;
  std::string criterion = "partial_likelihood";
  std::uint64_t seed = 0;
  int grid_size = 30;
  double min_ratio = 1e-3;
};

int cmd_cv(const CvOptions& opt) {
  const SurvivalDataset data = read_dataset_csv(opt.fit.data);
  const ModelSpec model = build_model(opt.fit, data);
  if (!model.needs_lambda())
    throw std::invalid_argument("cv: penalty '" + opt.fit.penalty + "' has no tuning parameter");
  CvPlan plan;
  plan.k = opt.folds;
  plan.seed = opt.seed;
  plan.grid.size = opt.grid_size;
  plan.grid.min_ratio = opt.min_ratio;
  if (opt.criterion == "partial_likelihood")
    plan.criterion = CvCriterion::partial_likelihood;
  else if (opt.criterion == "c_index")
    plan.criterion = CvCriterion::c_index;
  else
    throw std::invalid_argument("cv: unknown criterion '" + opt.criterion + "'");
  const CvResult res = cross_validate(data, model, plan);
  write_cv_json(res, opt.fit.out);
  return 0;
}

int cmd_benchmark(const std::string& spec_path, std::optional<std::uint64_t> seed,
                  const std::string& models_arg, const std::string& out_dir, int threads) {
  BenchmarkRun run;
  run.spec = read_study_spec(spec_path);
  if (seed) run.spec.seed = *seed;
  std::istringstream models(models_arg);
  std::string tok;
  while (std::getline(models, tok, ','))
    if (!io::trim(tok).empty()) run.models.push_back(model_kind_from_name(io::trim(tok)));
  run.out_dir = out_dir;
  run.threads = threads;
  const StudyReport report = run_benchmark(run);
  std::cout << report_csv(report);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Cox survival models with graph-coupled and classical penalties"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "write one replication of a study to CSV files");
  std::string sim_spec, sim_out;
  int sim_rep = 0;
  std::optional<std::uint64_t> sim_seed;
  sim->add_option("--spec", sim_spec, "study spec JSON")->required();
  sim->add_option("--replication", sim_rep, "replication index (default 0)");
  sim->add_option("--seed", sim_seed, "override the spec seed");
  sim->add_option("--out", sim_out, "output directory")->required();

  // graph
  auto* gr = app.add_subcommand("graph", "build a predictor graph from data or a topology");
  GraphOptions gopt;
  gr->add_option("--data", gopt.data, "dataset CSV (partial-correlation screen)");
  gr->add_option("--alpha", gopt.alpha, "screen significance level (default 0.05)");
  gr->add_option("--topology", gopt.topology, "erdos_renyi | ring | community");
  gr->add_option("--p", gopt.p, "number of nodes");
  gr->add_option("--p0", gopt.p0, "edge probability (erdos_renyi)");
  gr->add_option("--sizes", gopt.sizes, "community sizes")->delimiter(',');
  gr->add_option("--p-in", gopt.p_in, "within-community edge probability");
  gr->add_option("--p-out", gopt.p_out, "between-community edge probability");
  gr->add_option("--seed", gopt.seed, "generator seed");
  gr->add_option("--merge", gopt.merge_file, "extra edge list to union in");
  gr->add_option("--out", gopt.out, "output edge list")->required();

  // fit
  auto* ft = app.add_subcommand("fit", "fit one model at a fixed penalty scale");
  FitOptions fopt;
  ft->add_option("--data", fopt.data, "training CSV")->required();
  ft->add_option("--penalty", fopt.penalty,
                 "graph | lasso | ridge | elastic_net | scad | adaptive_lasso | none")
      ->required();
  ft->add_option("--lambda", fopt.lambda, "penalty scale");
  ft->add_option("--graph", fopt.graph_file, "edge list (graph penalty)");
  ft->add_option("--weights", fopt.weights_file, "node weights file (graph penalty)");
  ft->add_option("--enet-gamma", fopt.enet_gamma, "elastic net quadratic weight");
  ft->add_option("--scad-a", fopt.scad_a, "SCAD shape (default 3.7)");
  ft->add_option("--max-iter", fopt.max_iter, "iteration cap");
  ft->add_option("--tol", fopt.tol, "convergence tolerance");
  ft->add_option("--out", fopt.out, "fit JSON")->required();

  // predict
  auto* pr = app.add_subcommand("predict", "linear risk scores from a fit");
  std::string pr_model, pr_data, pr_out;
  pr->add_option("--model", pr_model, "fit JSON")->required();
  pr->add_option("--data", pr_data, "dataset CSV")->required();
  pr->add_option("--out", pr_out, "scores CSV")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "score predictions against outcomes");
  std::string ev_data, ev_scores, ev_model, ev_beta0, ev_out;
  ev->add_option("--data", ev_data, "dataset CSV")->required();
  ev->add_option("--scores", ev_scores, "scores CSV")->required();
  ev->add_option("--model", ev_model, "fit JSON (for coefficient errors)");
  ev->add_option("--beta0", ev_beta0, "true coefficients CSV (for coefficient errors)");
  ev->add_option("--out", ev_out, "metrics JSON")->required();

  // cv
  auto* cv = app.add_subcommand("cv", "cross-validate the penalty scale");
  CvOptions copt;
  cv->add_option("--data", copt.fit.data, "training CSV")->required();
  cv->add_option("--penalty", copt.fit.penalty, "model kind")->required();
  cv->add_option("--graph", copt.fit.graph_file, "edge list (graph penalty)");
  cv->add_option("--weights", copt.fit.weights_file, "node weights file");
  cv->add_option("--scad-a", copt.fit.scad_a, "SCAD shape");
  cv->add_option("--folds", copt.folds, "fold count (default 5)");
  cv->add_option("--criterion", copt.criterion, "partial_likelihood | c_index");
  cv->add_option("--seed", copt.seed, "fold shuffle seed");
  cv->add_option("--grid-size", copt.grid_size, "lambda grid size (default 30)");
  cv->add_option("--min-ratio", copt.min_ratio, "smallest/largest lambda (default 1e-3)");
  cv->add_option("--out", copt.fit.out, "cv JSON")->required();

  // benchmark
  auto* bm = app.add_subcommand("benchmark", "run a simulation study end to end");
  std::string bm_spec, bm_models = "graph,lasso", bm_out;
  std::optional<std::uint64_t> bm_seed;
  int bm_threads = 1;
  bm->add_option("--spec", bm_spec, "study spec JSON")->required();
  bm->add_option("--models", bm_models, "comma-separated model kinds");
  bm->add_option("--seed", bm_seed, "override the spec seed");
  bm->add_option("--out", bm_out, "output directory")->required();
  bm->add_option("--threads", bm_threads, "worker threads over replications");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_spec, sim_seed, sim_rep, sim_out);
    if (gr->parsed()) return cmd_graph(gopt);
    if (ft->parsed()) return cmd_fit(fopt);
    if (pr->parsed()) return cmd_predict(pr_model, pr_data, pr_out);
    if (ev->parsed()) return cmd_evaluate(ev_data, ev_scores, ev_model, ev_beta0, ev_out);
    if (cv->parsed()) return cmd_cv(copt);
    if (bm->parsed()) return cmd_benchmark(bm_spec, bm_seed, bm_models, bm_out, bm_threads);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace gcox
