#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shapodd/bench.hpp"

namespace {

using namespace shapodd;

int cmd_truth(const std::string& game_spec, const std::string& out_path,
              bool emit_values) {
  const LoadedGame game = load_game(game_spec);
  const auto start = std::chrono::steady_clock::now();
  Attribution truth = ground_truth(game);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  ResultRow row;
  row.estimator = "exact";
  row.game = game.id;
  row.d = game.d;
  row.m = truth.budget_used;
  row.seed = 0;
  row.mse = 0.0;
  row.runtime_ms = elapsed * 1e3;
  row.budget_used = truth.budget_used;
  row.phi = truth.phi;
  write_result_csv({row}, out_path, emit_values);
  std::printf("wrote exact Shapley values for %s (d=%d) to %s\n",
              game.id.c_str(), game.d, out_path.c_str());
  return 0;
}

int cmd_estimate(const std::string& game_spec, const std::string& name,
                 std::uint64_t budget, double eta, int order,
                 std::uint64_t seed, bool unpaired, bool emit_values,
                 const std::string& out_path) {
  const LoadedGame game = load_game(game_spec);
  const Attribution truth = ground_truth(game);

  ValueFunction vf = game.budgeted(budget);
  EstimatorConfig config;
  config.budget = budget;
  config.seed = seed;
  config.eta = eta;
  config.poly_order = order;
  config.paired = !unpaired;

  const EstimatorKind kind = estimator_from_name(name);
  Attribution attribution = run_estimator(kind, vf, config);

  ResultRow row;
  row.estimator = estimator_name(kind);
  row.game = game.id;
  row.d = game.d;
  row.m = budget;
  row.seed = seed;
  row.mse = mse(attribution, truth);
  row.runtime_ms = attribution.wall_time * 1e3;
  row.budget_used = attribution.budget_used;
  row.phi = attribution.phi;
  write_result_csv({row}, out_path, emit_values);
  std::printf("%s on %s: mse=%.6g budget_used=%llu -> %s\n",
              row.estimator.c_str(), game.id.c_str(), row.mse,
              static_cast<unsigned long long>(row.budget_used),
              out_path.c_str());
  return 0;
}

int cmd_bench(const std::string& config_path, std::string out_path,
              const std::string& summary_path, bool emit_values) {
  ExperimentConfig config = load_experiment_config(config_path);
  if (out_path.empty()) out_path = config.output;
  if (out_path.empty())
    throw std::invalid_argument("no output path (config or --out)");

  std::vector<ResultRow> rows = run_experiment(config);
  write_result_csv(rows, out_path, emit_values);
  std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
  if (!summary_path.empty()) {
    write_summary_csv(summarize(rows), summary_path);
    std::printf("wrote summary to %s\n", summary_path.c_str());
  }
  return 0;
}

int cmd_ablate(const std::string& config_path,
               const std::vector<std::size_t>& counts, std::string out_path) {
  ExperimentConfig config = load_experiment_config(config_path);
  if (out_path.empty()) out_path = config.output;
  if (out_path.empty())
    throw std::invalid_argument("no output path (config or --out)");

  std::vector<AblationRow> rows = ablate_interactions(config, counts);
  write_ablation_csv(rows, out_path);

  // Median ratio per count, for a quick look without the CSV.
  for (std::size_t count : counts) {
    std::vector<double> ratios;
    for (const AblationRow& row : rows)
      if (row.count == count) ratios.push_back(row.mse_ratio);
    if (!ratios.empty())
      std::printf("count=%zu median mse ratio=%.6g\n", count,
                  quantile(ratios, 0.5));
  }
  std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shapley value estimation bench"};
  app.require_subcommand(1);

  std::string game_spec, out_path, summary_path, config_path, estimator;
  std::uint64_t budget = 0, seed = 1;
  double eta = 10.0;
  int order = 1;
  bool unpaired = false, emit_values = false, no_values = false;
  std::vector<std::size_t> counts;

  auto* truth = app.add_subcommand("truth", "Exact Shapley values of a game");
  truth->add_option("--game", game_spec, "Game spec or table path")->required();
  truth->add_option("--out", out_path, "Output CSV path")->required();
  truth->add_flag("--no-values", no_values, "Omit the phi_1..phi_d columns");

  auto* estimate = app.add_subcommand("estimate", "Run one estimator once");
  estimate->add_option("--game", game_spec, "Game spec or table path")
      ->required();
  estimate
      ->add_option("--estimator", estimator,
                   "oddshap|leverageshap|polyshap|msr|permutation")
      ->required();
  estimate->add_option("--budget", budget, "Query budget m")->required();
  estimate->add_option("--eta", eta, "Regression variable factor");
  estimate->add_option("--order", order, "Polynomial order k (polyshap)");
  estimate->add_option("--seed", seed, "Run seed");
  estimate->add_flag("--unpaired", unpaired, "Disable paired sampling");
  estimate->add_flag("--emit-values", emit_values, "Append phi_1..phi_d");
  estimate->add_option("--out", out_path, "Output CSV path")->required();

  auto* bench = app.add_subcommand("bench", "Budget sweep from a JSON config");
  bench->add_option("--config", config_path, "Experiment JSON config")
      ->required();
  bench->add_option("--out", out_path, "Output CSV (overrides config)");
  bench->add_option("--summary", summary_path, "Median/IQR summary CSV");
  bench->add_flag("--emit-values", emit_values, "Append phi_1..phi_d");

  auto* ablate =
      app.add_subcommand("ablate", "Sweep the selected-interaction count");
  ablate->add_option("--config", config_path, "Experiment JSON config")
      ->required();
  ablate->add_option("--counts", counts, "Interaction counts to sweep")
      ->required()
      ->delimiter(',');
  ablate->add_option("--out", out_path, "Output CSV (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (truth->parsed()) return cmd_truth(game_spec, out_path, !no_values);
    if (estimate->parsed())
      return cmd_estimate(game_spec, estimator, budget, eta, order, seed,
                          unpaired, emit_values, out_path);
    if (bench->parsed())
      return cmd_bench(config_path, out_path, summary_path, emit_values);
    if (ablate->parsed()) return cmd_ablate(config_path, counts, out_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
