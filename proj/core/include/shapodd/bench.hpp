#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shapodd/estimators.hpp"
#include "shapodd/game.hpp"
#include "shapodd/transforms.hpp"

namespace shapodd {

// A game selected by a spec string, together with whatever exact ground truth
// it supports. Spec grammar (',' and ';' both separate parameters):
//   planted:d=30,terms=50,order=3,seed=7[,additive=0][,even=1][,scale=2.0]
//   cluster:d=12,sizes=4|4|4,curvature=2
//   random:d=10,seed=3
//   table:<path>        (bare paths also accepted)
//   spectrum:<path>     (Fourier coefficient file played as a game)
struct LoadedGame {
  std::string id;  // canonical spec string (';'-separated, CSV safe)
  int d = 1;
  ValueFunction::Evaluator eval;
  std::optional<CoefficientMap> spectrum;  // closed-form truth when present

  // Fresh value function guarded by a hard query budget.
  ValueFunction budgeted(std::uint64_t m) const;
};

LoadedGame load_game(const std::string& spec);

// Closed form from a planted spectrum when available, otherwise brute force
// over the dense table (d <= 24). Throws when neither applies.
Attribution ground_truth(const LoadedGame& game);

enum class EstimatorKind { oddshap, leverageshap, polyshap, msr, permutation };

std::string estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(const std::string& name);

Attribution run_estimator(EstimatorKind kind, ValueFunction& game,
                          const EstimatorConfig& config);

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::oddshap;
  double eta = 10.0;
  int poly_order = 1;
  bool paired = true;
};

struct ExperimentConfig {
  std::string game;
  std::vector<EstimatorSpec> estimators;
  std::vector<std::uint64_t> budgets;  // ascending
  int instances = 1;                   // seeds 1..instances
  std::string output;

  void validate() const;
};

// Parses the JSON object mirroring ExperimentConfig; unknown keys are
// rejected.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct ResultRow {
  std::string estimator;
  std::string game;
  int d = 0;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t budget_used = 0;
  std::vector<double> phi;  // written only with emit_values
};

// Mean squared error (1/d) sum_i (est_i - truth_i)^2.
double mse(const Attribution& estimate, const Attribution& truth);

// One row per (estimator, budget, seed), each against a fresh budget-guarded
// copy of the game. Rows may be computed on a worker pool; the returned order
// is canonical (estimator, budget, seed).
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

struct AblationRow {
  std::string game;
  int d = 0;
  std::uint64_t m = 0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double mse_value = 0.0;
  double baseline_mse = 0.0;  // interaction-free fit, same samples
  double mse_ratio = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t budget_used = 0;
};

// Sweeps the selected-interaction count directly: per seed, one sampling and
// screening pass, then one regression per count; count 0 is the baseline.
std::vector<AblationRow> ablate_interactions(
    const ExperimentConfig& config, const std::vector<std::size_t>& counts);

// ---- CSV ------------------------------------------------------------------

// Header: estimator,game,d,m,seed,mse,runtime_ms,budget_used[,phi_1..phi_d].
// Floats carry 17 significant digits.
void write_result_csv(const std::vector<ResultRow>& rows,
                      const std::string& path, bool emit_values);

// Header: game,d,m,count,seed,mse,baseline_mse,mse_ratio,runtime_ms,budget_used.
void write_ablation_csv(const std::vector<AblationRow>& rows,
                        const std::string& path);

std::string format_double(double v);  // %.17g

// Per-(estimator, budget) median and interquartile range across seeds.
struct SummaryRow {
  std::string estimator;
  std::string game;
  int d = 0;
  std::uint64_t m = 0;
  int instances = 0;
  double mse_median = 0.0;
  double mse_q1 = 0.0;
  double mse_q3 = 0.0;
  double runtime_ms_median = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path);

// Type-7 quantile (linear interpolation between order statistics).
double quantile(std::vector<double> values, double p);

}  // namespace shapodd
