#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "shapodd/bench.hpp"

using namespace shapodd;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Blanks the runtime_ms column (trailing wall-clock noise) for comparisons.
std::string strip_runtime(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      out << line << '\n';
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() >= 7) fields[6] = "-";
    for (std::size_t i = 0; i < fields.size(); ++i)
      out << (i ? "," : "") << fields[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("mse arithmetic") {
  Attribution truth(2);
  truth.phi = {1.5, 2.5};
  Attribution same = truth;
  CHECK(mse(same, truth) == 0.0);

  Attribution est(2);
  est.phi = {1.0, 1.0};
  CHECK(mse(est, truth) == doctest::Approx(1.25));

  Attribution scaled_est(2), scaled_truth(2);
  for (int i = 0; i < 2; ++i) {
    scaled_est.phi[i] = 3.0 * est.phi[i];
    scaled_truth.phi[i] = 3.0 * truth.phi[i];
  }
  CHECK(mse(scaled_est, scaled_truth) == doctest::Approx(9.0 * 1.25));

  Attribution wrong(3);
  CHECK_THROWS_AS(mse(wrong, truth), std::invalid_argument);
}

TEST_CASE("type-7 quantiles on hand-checkable inputs") {
  std::vector<double> v = {4, 1, 3, 2, 5};
  CHECK(quantile(v, 0.5) == doctest::Approx(3.0));
  CHECK(quantile(v, 0.25) == doctest::Approx(2.0));
  CHECK(quantile(v, 0.75) == doctest::Approx(4.0));
  CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile(v, 1.0) == doctest::Approx(5.0));

  std::vector<double> pair = {1.0, 2.0};
  CHECK(quantile(pair, 0.5) == doctest::Approx(1.5));
  CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("game specs load with canonical ids") {
  LoadedGame planted = load_game("planted:d=10,terms=4,order=3,seed=2");
  CHECK(planted.d == 10);
  CHECK(planted.spectrum.has_value());
  CHECK(planted.id ==
        "planted:d=10;terms=4;order=3;seed=2;additive=1;even=0;scale=1");

  LoadedGame cluster = load_game("cluster:d=6,sizes=3|3,curvature=2");
  CHECK(cluster.d == 6);
  CHECK_FALSE(cluster.spectrum.has_value());

  LoadedGame random_game = load_game("random:d=5,seed=4");
  CHECK(random_game.d == 5);

  CHECK_THROWS_AS(load_game("mystery:d=3"), std::invalid_argument);
  CHECK_THROWS_AS(load_game("planted:terms=4"), std::invalid_argument);
  CHECK_THROWS_AS(load_game("planted:d=10,frobs=1"), std::invalid_argument);
}

TEST_CASE("table and spectrum games load from files") {
  const std::string table_path = "/tmp/shapodd_bench_table.game";
  save_table_game(GameTable(2, {0, 1, 2, 4}), table_path);
  LoadedGame from_table = load_game(table_path);
  CHECK(from_table.d == 2);
  Attribution truth = ground_truth(from_table);
  CHECK(truth.phi[0] == doctest::Approx(1.5));
  CHECK(truth.phi[1] == doctest::Approx(2.5));

  const std::string spec_path = "/tmp/shapodd_bench_spec.coef";
  CoefficientMap map(20, Basis::fourier);
  map.set(Coalition::from_players(20, {0, 3, 11}), 0.75);
  map.set(Coalition::singleton(20, 5), -0.5);
  save_coefficient_map(map, spec_path);
  LoadedGame from_spec = load_game("spectrum:" + spec_path);
  CHECK(from_spec.d == 20);
  CHECK(from_spec.spectrum.has_value());
  Attribution spec_truth = ground_truth(from_spec);
  CHECK(spec_truth.phi[5] == doctest::Approx(1.0));  // -2 * (-0.5) / 1
  CHECK(spec_truth.phi[0] == doctest::Approx(-2.0 * 0.75 / 3));

  std::remove(table_path.c_str());
  std::remove(spec_path.c_str());
}

TEST_CASE("ground truth priority and failure") {
  // Closed form first: planted games of any dimension.
  LoadedGame wide = load_game("planted:d=40,terms=10,seed=6");
  Attribution truth = ground_truth(wide);
  CHECK(truth.d == 40);
  CHECK(truth.budget_used == 0);

  // Brute force needs d <= 24.
  CHECK_THROWS_AS(ground_truth(load_game("cluster:d=30,sizes=15|15,curvature=2")),
                  std::invalid_argument);
}

TEST_CASE("experiment config parsing rejects unknown keys") {
  const std::string good = R"({
    "game": "random:d=6,seed=1",
    "estimators": [{"name": "leverageshap"}, {"name": "polyshap", "order": 2}],
    "budgets": [16, 64],
    "instances": 3,
    "output": "out.csv"
  })";
  ExperimentConfig config = parse_experiment_config(good);
  CHECK(config.estimators.size() == 2);
  CHECK(config.estimators[1].poly_order == 2);
  CHECK(config.budgets == std::vector<std::uint64_t>{16, 64});

  CHECK_THROWS_AS(parse_experiment_config(R"({"game":"x","estimators":[],
    "budgets":[4],"instances":1,"output":"o","extra":1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config(R"({"game":"random:d=4,seed=1",
    "estimators":[{"name":"msr","typo":2}],"budgets":[4],"instances":1,
    "output":"o"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config(R"({"game":"random:d=4,seed=1",
    "estimators":[{"name":"msr"}],"budgets":[8,4],"instances":1,
    "output":"o"})"),
                  std::invalid_argument);
}

TEST_CASE("run_experiment produces one row per cell") {
  ExperimentConfig config;
  config.game = "random:d=6,seed=9";
  config.estimators = {EstimatorSpec{EstimatorKind::leverageshap},
                       EstimatorSpec{EstimatorKind::msr}};
  config.budgets = {16, 64};
  config.instances = 3;

  std::vector<ResultRow> rows = run_experiment(config);
  REQUIRE(rows.size() == 12);
  for (const ResultRow& row : rows) {
    CHECK(row.budget_used <= row.m);
    CHECK(row.mse >= 0.0);
    CHECK(row.d == 6);
  }

  // Exhaustive budget: the regression family is exact.
  for (const ResultRow& row : rows)
    if (row.estimator == "leverageshap" && row.m == 64)
      CHECK(row.mse < 1e-12);

  // Canonical ordering: estimator blocks, then budgets, then seeds.
  CHECK(rows[0].estimator == "leverageshap");
  CHECK(rows[0].m == 16);
  CHECK(rows[0].seed == 1);
  CHECK(rows[5].estimator == "leverageshap");
  CHECK(rows[5].m == 64);
  CHECK(rows[5].seed == 3);
  CHECK(rows[6].estimator == "msr");
}

TEST_CASE("experiment runs are deterministic apart from wall time") {
  ExperimentConfig config;
  config.game = "planted:d=12,terms=6,order=3,seed=5";
  config.estimators = {EstimatorSpec{EstimatorKind::oddshap},
                       EstimatorSpec{EstimatorKind::permutation}};
  config.budgets = {32, 130};
  config.instances = 2;

  const std::string path_a = "/tmp/shapodd_bench_a.csv";
  const std::string path_b = "/tmp/shapodd_bench_b.csv";
  write_result_csv(run_experiment(config), path_a, true);
  write_result_csv(run_experiment(config), path_b, true);
  CHECK(strip_runtime(read_file(path_a)) == strip_runtime(read_file(path_b)));
  std::remove(path_a.c_str());
  std::remove(path_b.c_str());
}

TEST_CASE("csv output format") {
  ResultRow row;
  row.estimator = "msr";
  row.game = "random:d=2;seed=1";
  row.d = 2;
  row.m = 8;
  row.seed = 1;
  row.mse = 1.0 / 3.0;
  row.runtime_ms = 0.5;
  row.budget_used = 8;
  row.phi = {0.1, 0.2};

  const std::string path = "/tmp/shapodd_bench_fmt.csv";
  write_result_csv({row}, path, false);
  std::string text = read_file(path);
  CHECK(text.rfind("estimator,game,d,m,seed,mse,runtime_ms,budget_used\n", 0) ==
        0);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("phi_1") == std::string::npos);

  write_result_csv({row}, path, true);
  text = read_file(path);
  CHECK(text.find("budget_used,phi_1,phi_2") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("summaries aggregate by cell with type-7 quantiles") {
  std::vector<ResultRow> rows;
  for (int seed = 1; seed <= 5; ++seed) {
    ResultRow row;
    row.estimator = "msr";
    row.game = "g";
    row.d = 4;
    row.m = 10;
    row.seed = static_cast<std::uint64_t>(seed);
    row.mse = static_cast<double>(seed);  // 1..5
    row.runtime_ms = 1.0;
    rows.push_back(row);
  }
  std::vector<SummaryRow> summary = summarize(rows);
  REQUIRE(summary.size() == 1);
  CHECK(summary[0].instances == 5);
  CHECK(summary[0].mse_median == doctest::Approx(3.0));
  CHECK(summary[0].mse_q1 == doctest::Approx(2.0));
  CHECK(summary[0].mse_q3 == doctest::Approx(4.0));
}

TEST_CASE("interaction ablation sweeps counts against one screening pass") {
  ExperimentConfig config;
  config.game = "planted:d=10,terms=8,order=3,seed=12";
  config.estimators = {EstimatorSpec{EstimatorKind::oddshap}};
  config.budgets = {200};
  config.instances = 2;

  std::vector<AblationRow> rows =
      ablate_interactions(config, {0, 4, 16});
  REQUIRE(rows.size() == 6);
  for (const AblationRow& row : rows) {
    CHECK(row.mse_ratio >= 0.0);
    CHECK(std::isfinite(row.mse_ratio));
    CHECK(row.budget_used <= row.m);
    if (row.count == 0) CHECK(row.mse_ratio == 1.0);
  }
}
