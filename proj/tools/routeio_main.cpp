// Command-line surface for the routing inverse-optimization toolkit.
//
//   routeio train      fit per-depot zone models from a dataset directory
//   routeio predict    produce stop sequences from a trained model
//   routeio score      score proposed sequences against the actual ones
//   routeio demo       tiny capacitated-routing walk-through
//   routeio experiment synthetic-data learning experiments
//   routeio fixture    write a small self-contained example dataset

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "routeio/data.hpp"
#include "routeio/learn.hpp"
#include "routeio/pipeline.hpp"
#include "routeio/scoring.hpp"
#include "routeio/synth.hpp"

using namespace routeio;
namespace fs = std::filesystem;

namespace {

struct DatasetPaths {
  std::string routes, times, sequences;
  explicit DatasetPaths(const std::string& dir)
      : routes((fs::path(dir) / "routes.json").string()),
        times((fs::path(dir) / "travel_times.json").string()),
        sequences((fs::path(dir) / "actual_sequences.json").string()) {}
};

StepSchedule parse_step(const std::string& s) {
  if (s == "const") return StepSchedule::constant;
  if (s == "inv_t") return StepSchedule::inv_t;
  if (s == "inv_sqrt_t") return StepSchedule::inv_sqrt_t;
  throw CLI::ValidationError("--step", "expected const|inv_t|inv_sqrt_t");
}

UpdateMode parse_update(const std::string& s) {
  if (s == "exp") return UpdateMode::exponentiated;
  if (s == "std") return UpdateMode::standard;
  throw CLI::ValidationError("--update", "expected exp|std");
}

SamplingMode parse_sampling(const std::string& s) {
  if (s == "reshuffled") return SamplingMode::reshuffled;
  if (s == "uniform") return SamplingMode::uniform;
  throw CLI::ValidationError("--sampling", "expected reshuffled|uniform");
}

AggregateMode parse_aggregate(const std::string& s) {
  if (s == "last") return AggregateMode::last;
  if (s == "mean") return AggregateMode::mean;
  if (s == "weighted") return AggregateMode::weighted;
  throw CLI::ValidationError("--aggregate", "expected last|mean|weighted");
}

InitMode parse_init(const std::string& s) {
  if (s == "euclidean") return InitMode::euclidean;
  if (s == "uniform") return InitMode::uniform;
  throw CLI::ValidationError("--init", "expected euclidean|uniform");
}

SolverChoice parse_solver(const std::string& s, std::uint64_t seed) {
  SolverChoice choice;
  if (s == "exact-dp") {
    choice.kind = SolverChoice::Kind::exact_dp;
  } else if (s == "local-search") {
    choice.kind = SolverChoice::Kind::local_search;
  } else {
    throw CLI::ValidationError("--solver", "expected exact-dp|local-search");
  }
  choice.seed = seed;
  return choice;
}

ProblemKind parse_kind(const std::string& s) {
  if (s == "rtsp") return ProblemKind::rtsp;
  if (s == "scvrp") return ProblemKind::scvrp;
  if (s == "vrptw") return ProblemKind::vrptw;
  throw CLI::ValidationError("--kind", "expected rtsp|scvrp|vrptw");
}

std::string edge_list(const RouteBinary& x, const NodeUniverse& u) {
  std::string out;
  for (int e : x.edges()) {
    auto [i, j] = u.edge_ends(e);
    if (!out.empty()) out += " ";
    out += u.name(i) + "->" + u.name(j);
  }
  return out;
}

double mean_edge_error(const CostVector& theta,
                       const std::vector<SignalResponseExample>& data,
                       const NodeUniverse& u, const SolverChoice& choice) {
  PenaltyMatrix none;
  double total = 0.0;
  for (const auto& ex : data) {
    RouteBinary pred = solve_fop(theta, ex.signal, none, u, choice);
    int diff = 0;
    for (int e : pred.edges()) diff += ex.response.uses(e) ? 0 : 1;
    for (int e : ex.response.edges()) diff += pred.uses(e) ? 0 : 1;
    total += diff;
  }
  return data.empty() ? 0.0 : total / static_cast<double>(data.size());
}

int cmd_train(const std::string& dataset_dir, const std::string& depot,
              const TrainConfig& base_config, InitMode init, double fraction,
              const std::string& out, const std::string& trace_path) {
  DatasetPaths paths(dataset_dir);
  DatasetBundle bundle = load_dataset(paths.routes, paths.times, paths.sequences);
  for (const std::string& w : bundle.provenance.warnings) {
    std::cerr << "warning: " << w << "\n";
  }

  std::vector<std::string> depots;
  if (depot == "all") {
    for (const auto& [code, routes] : bundle.by_depot) depots.push_back(code);
  } else {
    if (!bundle.by_depot.count(depot)) {
      std::cerr << "error: depot " << depot << " not in dataset\n";
      return 1;
    }
    depots.push_back(depot);
  }

  std::map<std::string, ZoneGraphModel> models;
  std::ofstream trace_out;
  if (!trace_path.empty()) trace_out.open(trace_path);
  for (const std::string& code : depots) {
    ZoneTrainOptions opt;
    opt.config = base_config;
    opt.init = init;
    opt.fraction = fraction;
    std::vector<std::string> warnings;
    opt.warnings = &warnings;
    TrainTrace trace;
    models[code] = train_zone_model(bundle.by_depot.at(code), code, opt, &trace);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    if (trace_out.is_open()) export_trace(trace, trace_out);
    std::cout << code << ": " << trace.stats.size() << " epochs, final mean loss "
              << (trace.stats.empty() ? 0.0 : trace.stats.back().mean_loss) << "\n";
  }
  save_models(models, out);
  std::cout << "wrote " << models.size() << " model(s) to " << out << "\n";
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& dataset_dir,
                double R, const SolverChoice& choice, const std::string& out) {
  DatasetPaths paths(dataset_dir);
  DatasetBundle bundle = load_dataset(paths.routes, paths.times, paths.sequences);
  std::map<std::string, ZoneGraphModel> models = load_models(model_path);

  std::map<std::string, std::vector<std::string>> sequences;
  int skipped = 0;
  for (const auto& [depot, routes] : bundle.by_depot) {
    auto it = models.find(depot);
    if (it == models.end()) {
      skipped += static_cast<int>(routes.size());
      continue;
    }
    for (const RouteRecord& route : routes) {
      sequences[route.route_id] = predict_route(it->second, route, R, choice);
    }
  }
  save_sequences(sequences, out);
  std::cout << "wrote " << sequences.size() << " sequence(s) to " << out << "\n";
  if (skipped > 0) {
    std::cerr << "warning: " << skipped << " route(s) had no model for their depot\n";
  }
  return 0;
}

int cmd_score(const std::string& dataset_dir, const std::string& pred,
              const std::string& out) {
  DatasetPaths paths(dataset_dir);
  DatasetBundle bundle = load_dataset(paths.routes, paths.times, paths.sequences);
  std::map<std::string, std::vector<std::string>> proposed = load_sequences(pred);
  std::vector<ScoreReport> reports = score_bundle(bundle, proposed);

  std::ofstream file(out);
  if (!file) {
    std::cerr << "error: cannot write " << out << "\n";
    return 1;
  }
  file << "route_id,sd,erp_norm,erp_edits,score,zone_error_pct\n";
  double score_sum = 0.0;
  long long zone_errors = 0, zone_total = 0;
  for (const ScoreReport& r : reports) {
    const double pct =
        r.zone_seq_len > 0 ? 100.0 * r.zone_error_count / r.zone_seq_len : 0.0;
    file << r.route_id << "," << r.sd << "," << r.erp_norm << "," << r.erp_edits
         << "," << r.score << "," << pct << "\n";
    score_sum += r.score;
    zone_errors += r.zone_error_count;
    zone_total += r.zone_seq_len;
  }
  std::cout << "scored " << reports.size() << " route(s); mean score "
            << (reports.empty() ? 0.0 : score_sum / reports.size())
            << ", zone error "
            << (zone_total > 0 ? 100.0 * zone_errors / zone_total : 0.0)
            << "%\n";
  return 0;
}

int cmd_demo() {
  ScvrpDemo demo = make_scvrp_demo();
  const NodeUniverse& u = demo.universe;
  std::cout << "instance: 5 customers with unit demand, 2 vehicles of capacity 3\n";
  std::cout << "observed routes: " << edge_list(demo.example.response, u) << "\n\n";

  CostVector theta = CostVector::constant(u.edge_count(), 1.0);
  PenaltyMatrix none;
  SolverChoice exact;
  const double eta = 0.0002;
  for (int t = 1; t <= 5; ++t) {
    LossValue lv = eval_loss(theta, demo.example, none, u, exact);
    std::vector<int> g = subgradient_from(demo.example.response, lv.minimizer);
    std::cout << "iteration " << t << ":\n";
    std::cout << "  loss " << lv.value << "\n";
    std::cout << "  augmented-problem route: " << edge_list(lv.minimizer, u) << "\n";
    std::cout << "  subgradient +1 on:";
    for (int e = 0; e < u.edge_count(); ++e) {
      if (g[e] > 0) {
        auto [i, j] = u.edge_ends(e);
        std::cout << " " << u.name(i) << "->" << u.name(j);
      }
    }
    std::cout << "\n  subgradient -1 on:";
    for (int e = 0; e < u.edge_count(); ++e) {
      if (g[e] < 0) {
        auto [i, j] = u.edge_ends(e);
        std::cout << " " << u.name(i) << "->" << u.name(j);
      }
    }
    std::cout << "\n";
    theta = update_step(theta, g, eta, UpdateMode::exponentiated);
    std::cout << "  updated weights on observed edges:";
    for (int e : demo.example.response.edges()) {
      std::cout << " " << theta[e];
    }
    std::cout << "\n";
    RouteBinary pred = solve_fop(theta, demo.example.signal, none, u, exact);
    const bool match = pred == demo.example.response;
    std::cout << "  prediction with current weights "
              << (match ? "matches" : "differs from") << " the observed routes\n\n";
    if (match && lv.value == 0.0) break;
  }
  return 0;
}

int cmd_experiment(ProblemKind kind, int nodes, int train_count, int test_count,
                   int epochs, double step_c, const std::string& step,
                   const std::string& update, std::uint64_t seed,
                   const std::string& out_dir) {
  SynthConfig cfg;
  cfg.kind = kind;
  cfg.nodes = nodes;
  cfg.train_count = train_count;
  cfg.test_count = test_count;
  cfg.hidden = HiddenWeights::uniform_random;
  cfg.rng_seed = seed;
  if (kind != ProblemKind::rtsp) {
    cfg.nodes = std::min(nodes, kind == ProblemKind::scvrp ? 11 : 9);
    if (cfg.nodes != nodes) {
      std::cerr << "note: clamping nodes to " << cfg.nodes
                << " for exact generation\n";
    }
  }
  SynthDataset data = generate_synthetic(cfg);
  fs::create_directories(out_dir);

  SolverChoice exact;
  for (SamplingMode sampling : {SamplingMode::reshuffled, SamplingMode::uniform}) {
    TrainConfig tc;
    tc.epochs = epochs;
    tc.schedule = parse_step(step);
    tc.step_c = step_c;
    tc.update = parse_update(update);
    tc.sampling = sampling;
    tc.rng_seed = seed;
    tc.init = CostVector::constant(data.universe.edge_count(), 0.5);
    PenaltyMatrix none;

    std::vector<double> test_errors;
    TrainTrace trace =
        train(data.train, data.universe, none, tc,
              [&](const CostVector& theta, int) {
                const double err =
                    mean_edge_error(theta, data.test, data.universe, exact);
                test_errors.push_back(err);
                return err;
              });

    const std::string name =
        sampling == SamplingMode::reshuffled ? "reshuffled" : "uniform";
    std::ofstream series((fs::path(out_dir) / ("series_" + name + ".csv")).string());
    series << "epoch,mean_loss,mean_subgrad_l1,wall_seconds,test_edge_error\n";
    for (size_t i = 0; i < trace.stats.size(); ++i) {
      series << trace.stats[i].epoch << "," << trace.stats[i].mean_loss << ","
             << trace.stats[i].mean_subgrad_l1 << ","
             << trace.stats[i].wall_seconds << "," << test_errors[i] << "\n";
    }
    std::cout << name << ": final mean loss " << trace.stats.back().mean_loss
              << ", final test edge error " << test_errors.back() << "\n";
  }
  std::cout << "series written to " << out_dir << "\n";
  return 0;
}

int cmd_fixture(int route_count, std::uint64_t seed, const std::string& out_dir) {
  ZoneFixture fixture = make_zone_fixture(route_count, seed);
  fs::create_directories(out_dir);
  DatasetPaths paths(out_dir);
  save_dataset(fixture.bundle, paths.routes, paths.times, paths.sequences);
  std::cout << "wrote " << route_count << "-route dataset to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse-optimization toolkit for delivery route sequencing"};
  app.require_subcommand(1);

  // train
  std::string dataset_dir, depot = "all", out, trace_path;
  int epochs = 5;
  std::string step = "inv_t", update = "std", sampling = "reshuffled",
              aggregate = "last", init = "euclidean", solver = "exact-dp";
  double step_c = 0.0005, fraction = 1.0;
  std::uint64_t seed = 0;
  CLI::App* train_cmd = app.add_subcommand("train", "Fit per-depot zone models");
  train_cmd->add_option("--dataset", dataset_dir, "Dataset directory")->required();
  train_cmd->add_option("--depot", depot, "Depot code, or 'all'");
  train_cmd->add_option("--epochs", epochs, "Training epochs");
  train_cmd->add_option("--step", step, "Step schedule: const|inv_t|inv_sqrt_t");
  train_cmd->add_option("--step-c", step_c, "Step size constant");
  train_cmd->add_option("--update", update, "Update rule: exp|std");
  train_cmd->add_option("--sampling", sampling, "Sampling: reshuffled|uniform");
  train_cmd->add_option("--aggregate", aggregate, "Aggregation: last|mean|weighted");
  train_cmd->add_option("--init", init, "Initial weights: euclidean|uniform");
  train_cmd->add_option("--solver", solver, "Solver: exact-dp|local-search");
  train_cmd->add_option("--fraction", fraction, "Random fraction of routes per depot");
  train_cmd->add_option("--seed", seed, "RNG seed");
  train_cmd->add_option("--out", out, "Model output file")->required();
  train_cmd->add_option("--trace", trace_path, "Per-epoch NDJSON trace output");

  // predict
  std::string model_path, pred_out;
  double R = -1.0;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "Predict stop sequences for a dataset");
  predict_cmd->add_option("--model", model_path, "Model file")->required();
  predict_cmd->add_option("--dataset", dataset_dir, "Dataset directory")->required();
  predict_cmd->add_option("--out", pred_out, "Sequence output file")->required();
  predict_cmd->add_option("--R", R, "Zone-order penalization constant (default: per route)");
  predict_cmd->add_option("--solver", solver, "Solver: exact-dp|local-search");
  predict_cmd->add_option("--seed", seed, "RNG seed");

  // score
  std::string pred_in, report_out;
  CLI::App* score_cmd = app.add_subcommand("score", "Score proposed sequences");
  score_cmd->add_option("--dataset", dataset_dir, "Dataset directory")->required();
  score_cmd->add_option("--pred", pred_in, "Proposed sequence file")->required();
  score_cmd->add_option("--out", report_out, "Report CSV output")->required();

  // demo
  CLI::App* demo_cmd = app.add_subcommand("demo", "Worked walk-through");
  std::string demo_which;
  demo_cmd->add_option("what", demo_which, "Which demo (scvrp)")->required();

  // experiment
  CLI::App* exp_cmd = app.add_subcommand("experiment", "Synthetic-data experiments");
  CLI::App* synth_cmd = exp_cmd->add_subcommand("synth", "Generate, train, compare samplers");
  std::string kind = "rtsp", out_dir = "experiment_out";
  int nodes = 12, train_count = 50, test_count = 50;
  std::string exp_step = "inv_t", exp_update = "std";
  double exp_step_c = 0.1;
  int exp_epochs = 5;
  std::uint64_t exp_seed = 0;
  synth_cmd->add_option("--kind", kind, "Problem kind: rtsp|scvrp|vrptw");
  synth_cmd->add_option("--nodes", nodes, "Node count");
  synth_cmd->add_option("--train", train_count, "Training examples");
  synth_cmd->add_option("--test", test_count, "Test examples");
  synth_cmd->add_option("--epochs", exp_epochs, "Training epochs");
  synth_cmd->add_option("--step", exp_step, "Step schedule: const|inv_t|inv_sqrt_t");
  synth_cmd->add_option("--step-c", exp_step_c, "Step size constant");
  synth_cmd->add_option("--update", exp_update, "Update rule: exp|std");
  synth_cmd->add_option("--seed", exp_seed, "RNG seed");
  synth_cmd->add_option("--out-dir", out_dir, "Series output directory");

  // fixture
  CLI::App* fixture_cmd =
      app.add_subcommand("fixture", "Write a small example dataset");
  int fixture_routes = 10;
  std::uint64_t fixture_seed = 7;
  std::string fixture_dir = "fixture_out";
  fixture_cmd->add_option("--routes", fixture_routes, "Route count");
  fixture_cmd->add_option("--seed", fixture_seed, "RNG seed");
  fixture_cmd->add_option("--out", fixture_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(train_cmd)) {
      TrainConfig tc;
      tc.epochs = epochs;
      tc.schedule = parse_step(step);
      tc.step_c = step_c;
      tc.update = parse_update(update);
      tc.sampling = parse_sampling(sampling);
      tc.aggregate = parse_aggregate(aggregate);
      tc.rng_seed = seed;
      tc.solver = parse_solver(solver, seed);
      return cmd_train(dataset_dir, depot, tc, parse_init(init), fraction, out,
                       trace_path);
    }
    if (app.got_subcommand(predict_cmd)) {
      return cmd_predict(model_path, dataset_dir, R, parse_solver(solver, seed),
                         pred_out);
    }
    if (app.got_subcommand(score_cmd)) {
      return cmd_score(dataset_dir, pred_in, report_out);
    }
    if (app.got_subcommand(demo_cmd)) {
      if (demo_which != "scvrp") {
        std::cerr << "error: unknown demo '" << demo_which << "'\n";
        return 1;
      }
      return cmd_demo();
    }
    if (app.got_subcommand(exp_cmd)) {
      return cmd_experiment(parse_kind(kind), nodes, train_count, test_count,
                            exp_epochs, exp_step_c, exp_step, exp_update,
                            exp_seed, out_dir);
    }
    if (app.got_subcommand(fixture_cmd)) {
      return cmd_fixture(fixture_routes, fixture_seed, fixture_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
