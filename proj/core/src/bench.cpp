#include "shapodd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace shapodd {

namespace {

using json = nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

// key=value pairs separated by ',' or ';'.
std::vector<std::pair<std::string, std::string>> parse_params(
    const std::string& text) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ';');
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& part : split(normalized, ';')) {
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key=value in game spec: " + part);
    out.emplace_back(part.substr(0, eq), part.substr(eq + 1));
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed integer for '" + key +
                                "': " + value);
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number for '" + key +
                                "': " + value);
  }
}

LoadedGame load_planted(const std::string& params_text) {
  PlantedGameParams params;
  bool have_d = false;
  for (const auto& [key, value] : parse_params(params_text)) {
    if (key == "d") {
      params.d = static_cast<int>(parse_int(key, value));
      have_d = true;
    } else if (key == "terms") {
      params.interaction_terms = static_cast<int>(parse_int(key, value));
    } else if (key == "order") {
      params.interaction_order = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
      params.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "additive") {
      params.additive_part = parse_int(key, value) != 0;
    } else if (key == "even") {
      params.allow_even = parse_int(key, value) != 0;
    } else if (key == "scale") {
      params.interaction_scale = parse_real(key, value);
    } else {
      throw std::invalid_argument("unknown planted parameter: " + key);
    }
  }
  if (!have_d) throw std::invalid_argument("planted game requires d=<int>");

  auto support = plant_random_spectrum(params);
  LoadedGame game;
  game.d = params.d;
  {
    std::ostringstream id;
    id << "planted:d=" << params.d << ";terms=" << params.interaction_terms
       << ";order=" << params.interaction_order << ";seed=" << params.seed
       << ";additive=" << (params.additive_part ? 1 : 0)
       << ";even=" << (params.allow_even ? 1 : 0)
       << ";scale=" << params.interaction_scale;
    game.id = id.str();
  }
  CoefficientMap spectrum(params.d, Basis::fourier);
  for (const auto& [term, beta] : support) spectrum.set(term, beta);
  game.spectrum = std::move(spectrum);
  ValueFunction vf = make_planted_fourier_game(params.d, support);
  game.eval = vf.evaluator();
  return game;
}

LoadedGame load_spectrum_file(const std::string& path) {
  CoefficientMap map = load_coefficient_map(path);
  if (map.basis != Basis::fourier)
    throw std::invalid_argument(
        "spectrum games require a fourier coefficient file");
  LoadedGame game;
  game.d = map.d;
  game.id = "spectrum:" + path;
  auto shared = std::make_shared<CoefficientMap>(map);
  game.eval = [shared](const Coalition& s) { return shared->evaluate(s); };
  game.spectrum = std::move(map);
  return game;
}

LoadedGame load_cluster(const std::string& params_text) {
  int d = 0;
  std::vector<int> sizes;
  double curvature = 1.0;
  for (const auto& [key, value] : parse_params(params_text)) {
    if (key == "d") {
      d = static_cast<int>(parse_int(key, value));
    } else if (key == "sizes") {
      for (const std::string& s : split(value, '|'))
        sizes.push_back(static_cast<int>(parse_int(key, s)));
    } else if (key == "curvature") {
      curvature = parse_real(key, value);
    } else {
      throw std::invalid_argument("unknown cluster parameter: " + key);
    }
  }
  if (d == 0) throw std::invalid_argument("cluster game requires d=<int>");
  if (sizes.empty())
    throw std::invalid_argument("cluster game requires sizes=<a|b|...>");

  ValueFunction vf = make_cluster_game(d, sizes, curvature);
  LoadedGame game;
  game.d = d;
  std::ostringstream id;
  id << "cluster:d=" << d << ";sizes=";
  for (std::size_t i = 0; i < sizes.size(); ++i)
    id << (i ? "|" : "") << sizes[i];
  id << ";curvature=" << curvature;
  game.id = id.str();
  game.eval = vf.evaluator();
  return game;
}

LoadedGame load_random(const std::string& params_text) {
  int d = 0;
  std::uint64_t seed = 1;
  for (const auto& [key, value] : parse_params(params_text)) {
    if (key == "d")
      d = static_cast<int>(parse_int(key, value));
    else if (key == "seed")
      seed = static_cast<std::uint64_t>(parse_int(key, value));
    else
      throw std::invalid_argument("unknown random parameter: " + key);
  }
  if (d == 0) throw std::invalid_argument("random game requires d=<int>");

  ValueFunction vf = table_game(random_table(d, seed));
  LoadedGame game;
  game.d = d;
  game.id = "random:d=" + std::to_string(d) + ";seed=" + std::to_string(seed);
  game.eval = vf.evaluator();
  return game;
}

LoadedGame load_table_file(const std::string& path) {
  GameTable table = load_table_game(path);
  LoadedGame game;
  game.d = table.d;
  game.id = "table:" + path;
  ValueFunction vf = table_game(std::move(table));
  game.eval = vf.evaluator();
  return game;
}

}  // namespace

ValueFunction LoadedGame::budgeted(std::uint64_t m) const {
  return ValueFunction(d, eval, m);
}

LoadedGame load_game(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string name = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (name == "planted") return load_planted(rest);
    if (name == "cluster") return load_cluster(rest);
    if (name == "random") return load_random(rest);
    if (name == "table") return load_table_file(rest);
    if (name == "spectrum") return load_spectrum_file(rest);
    throw std::invalid_argument("unknown game factory: " + name);
  }
  return load_table_file(spec);
}

Attribution ground_truth(const LoadedGame& game) {
  if (game.spectrum) {
    Attribution truth = shapley_from_fourier(*game.spectrum);
    truth.budget_used = 0;
    return truth;
  }
  if (game.d <= kMaxTableDimension) {
    const std::uint64_t n = std::uint64_t{1} << game.d;
    std::vector<double> values(n);
    for (std::uint64_t mask = 0; mask < n; ++mask)
      values[mask] = game.eval(Coalition::from_index(game.d, mask));
    return exact_shapley(GameTable(game.d, std::move(values)));
  }
  throw std::invalid_argument(
      "ground truth unavailable: no closed form and d > 24");
}

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::oddshap: return "oddshap";
    case EstimatorKind::leverageshap: return "leverageshap";
    case EstimatorKind::polyshap: return "polyshap";
    case EstimatorKind::msr: return "msr";
    case EstimatorKind::permutation: return "permutation";
  }
  throw std::logic_error("unreachable estimator kind");
}

EstimatorKind estimator_from_name(const std::string& name) {
  if (name == "oddshap") return EstimatorKind::oddshap;
  if (name == "leverageshap") return EstimatorKind::leverageshap;
  if (name == "polyshap") return EstimatorKind::polyshap;
  if (name == "msr") return EstimatorKind::msr;
  if (name == "permutation") return EstimatorKind::permutation;
  throw std::invalid_argument("unknown estimator: " + name);
}

Attribution run_estimator(EstimatorKind kind, ValueFunction& game,
                          const EstimatorConfig& config) {
  switch (kind) {
    case EstimatorKind::oddshap: return oddshap(game, config);
    case EstimatorKind::leverageshap: return leverage_shap(game, config);
    case EstimatorKind::polyshap: return polyshap(game, config);
    case EstimatorKind::msr: return msr(game, config);
    case EstimatorKind::permutation: return permutation_sampling(game, config);
  }
  throw std::logic_error("unreachable estimator kind");
}

void ExperimentConfig::validate() const {
  if (game.empty()) throw std::invalid_argument("experiment requires a game");
  if (estimators.empty())
    throw std::invalid_argument("experiment requires at least one estimator");
  if (budgets.empty())
    throw std::invalid_argument("experiment requires a budget grid");
  if (!std::is_sorted(budgets.begin(), budgets.end()))
    throw std::invalid_argument("budgets must be sorted ascending");
  if (instances < 1) throw std::invalid_argument("instances must be >= 1");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json root = json::parse(json_text);
  if (!root.is_object())
    throw std::invalid_argument("experiment config must be a JSON object");

  ExperimentConfig config;
  for (const auto& [key, value] : root.items()) {
    if (key == "game") {
      config.game = value.get<std::string>();
    } else if (key == "estimators") {
      for (const json& entry : value) {
        EstimatorSpec spec;
        bool have_name = false;
        for (const auto& [ekey, evalue] : entry.items()) {
          if (ekey == "name") {
            spec.kind = estimator_from_name(evalue.get<std::string>());
            have_name = true;
          } else if (ekey == "eta") {
            spec.eta = evalue.get<double>();
          } else if (ekey == "order") {
            spec.poly_order = evalue.get<int>();
          } else if (ekey == "paired") {
            spec.paired = evalue.get<bool>();
          } else {
            throw std::invalid_argument("unknown estimator config key: " + ekey);
          }
        }
        if (!have_name)
          throw std::invalid_argument("estimator entry requires a name");
        config.estimators.push_back(spec);
      }
    } else if (key == "budgets") {
      for (const json& b : value)
        config.budgets.push_back(b.get<std::uint64_t>());
    } else if (key == "instances") {
      config.instances = value.get<int>();
    } else if (key == "output") {
      config.output = value.get<std::string>();
    } else {
      throw std::invalid_argument("unknown experiment config key: " + key);
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

double mse(const Attribution& estimate, const Attribution& truth) {
  if (estimate.d != truth.d)
    throw std::invalid_argument("attribution dimension mismatch");
  double acc = 0.0;
  for (int i = 0; i < estimate.d; ++i) {
    const double diff = estimate.phi[static_cast<std::size_t>(i)] -
                        truth.phi[static_cast<std::size_t>(i)];
    acc += diff * diff;
  }
  return acc / estimate.d;
}

namespace {

// Runs fn(i) for i in [0, n) on a small worker pool; exceptions rethrow.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const LoadedGame game = load_game(config.game);
  const Attribution truth = ground_truth(game);

  struct Task {
    EstimatorSpec spec;
    std::uint64_t budget;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const EstimatorSpec& spec : config.estimators)
    for (std::uint64_t budget : config.budgets)
      for (int instance = 1; instance <= config.instances; ++instance)
        tasks.push_back(Task{spec, budget, static_cast<std::uint64_t>(instance)});

  std::vector<ResultRow> rows(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    ValueFunction vf = game.budgeted(task.budget);
    EstimatorConfig ecfg;
    ecfg.budget = task.budget;
    ecfg.seed = task.seed;
    ecfg.eta = task.spec.eta;
    ecfg.poly_order = task.spec.poly_order;
    ecfg.paired = task.spec.paired;

    Attribution attribution = run_estimator(task.spec.kind, vf, ecfg);

    ResultRow row;
    row.estimator = estimator_name(task.spec.kind);
    row.game = game.id;
    row.d = game.d;
    row.m = task.budget;
    row.seed = task.seed;
    row.mse = mse(attribution, truth);
    row.runtime_ms = attribution.wall_time * 1e3;
    row.budget_used = attribution.budget_used;
    row.phi = std::move(attribution.phi);
    if (row.budget_used > task.budget)
      throw std::logic_error("estimator exceeded its budget");
    rows[i] = std::move(row);
  });
  return rows;
}

std::vector<AblationRow> ablate_interactions(
    const ExperimentConfig& config, const std::vector<std::size_t>& counts) {
  config.validate();
  const LoadedGame game = load_game(config.game);
  const Attribution truth = ground_truth(game);

  EstimatorSpec spec;
  for (const EstimatorSpec& candidate : config.estimators)
    if (candidate.kind == EstimatorKind::oddshap) {
      spec = candidate;
      break;
    }

  struct Task {
    std::uint64_t budget;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::uint64_t budget : config.budgets)
    for (int instance = 1; instance <= config.instances; ++instance)
      tasks.push_back(Task{budget, static_cast<std::uint64_t>(instance)});

  std::vector<std::vector<AblationRow>> blocks(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    ValueFunction vf = game.budgeted(task.budget);
    EstimatorConfig ecfg;
    ecfg.budget = task.budget;
    ecfg.seed = task.seed;
    ecfg.eta = spec.eta;
    ecfg.paired = spec.paired;

    // One sampling + screening pass per seed; every count reuses it.
    OddshapScreen screen = oddshap_screen(vf, ecfg);
    const std::uint64_t used = vf.query_count();
    const Attribution baseline = oddshap_regress(screen, {});
    const double baseline_mse = mse(baseline, truth);

    for (std::size_t count : counts) {
      const auto start = std::chrono::steady_clock::now();
      Attribution attribution =
          count == 0 ? oddshap_regress(screen, {})
                     : oddshap_regress(screen, select_odd_interactions(
                                                   screen.proxy_spectrum, count));
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();

      AblationRow row;
      row.game = game.id;
      row.d = game.d;
      row.m = task.budget;
      row.count = count;
      row.seed = task.seed;
      row.mse_value = mse(attribution, truth);
      row.baseline_mse = baseline_mse;
      row.mse_ratio = row.mse_value / baseline_mse;
      row.runtime_ms = elapsed * 1e3;
      row.budget_used = used;
      blocks[i].push_back(row);
    }
  });

  std::vector<AblationRow> rows;
  for (const auto& block : blocks)
    rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_result_csv(const std::vector<ResultRow>& rows,
                      const std::string& path, bool emit_values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV: " + path);
  out << "estimator,game,d,m,seed,mse,runtime_ms,budget_used";
  if (emit_values && !rows.empty())
    for (int i = 1; i <= rows.front().d; ++i) out << ",phi_" << i;
  out << "\n";
  for (const ResultRow& row : rows) {
    out << row.estimator << ',' << row.game << ',' << row.d << ',' << row.m
        << ',' << row.seed << ',' << format_double(row.mse) << ','
        << format_double(row.runtime_ms) << ',' << row.budget_used;
    if (emit_values)
      for (double v : row.phi) out << ',' << format_double(v);
    out << "\n";
  }
}

void write_ablation_csv(const std::vector<AblationRow>& rows,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV: " + path);
  out << "game,d,m,count,seed,mse,baseline_mse,mse_ratio,runtime_ms,"
         "budget_used\n";
  for (const AblationRow& row : rows) {
    out << row.game << ',' << row.d << ',' << row.m << ',' << row.count << ','
        << row.seed << ',' << format_double(row.mse_value) << ','
        << format_double(row.baseline_mse) << ','
        << format_double(row.mse_ratio) << ',' << format_double(row.runtime_ms)
        << ',' << row.budget_used << "\n";
  }
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of empty set");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must be in [0, 1]");
  std::sort(values.begin(), values.end());
  // Type-7: linear interpolation at h = (n - 1) p.
  const double h = static_cast<double>(values.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  struct Key {
    std::string estimator;
    std::string game;
    int d;
    std::uint64_t m;
    bool operator==(const Key&) const = default;
  };
  std::vector<Key> order;
  std::vector<std::vector<double>> mses, runtimes;
  for (const ResultRow& row : rows) {
    Key key{row.estimator, row.game, row.d, row.m};
    std::size_t idx = 0;
    for (; idx < order.size(); ++idx)
      if (order[idx] == key) break;
    if (idx == order.size()) {
      order.push_back(key);
      mses.emplace_back();
      runtimes.emplace_back();
    }
    mses[idx].push_back(row.mse);
    runtimes[idx].push_back(row.runtime_ms);
  }

  std::vector<SummaryRow> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    SummaryRow s;
    s.estimator = order[i].estimator;
    s.game = order[i].game;
    s.d = order[i].d;
    s.m = order[i].m;
    s.instances = static_cast<int>(mses[i].size());
    s.mse_median = quantile(mses[i], 0.5);
    s.mse_q1 = quantile(mses[i], 0.25);
    s.mse_q3 = quantile(mses[i], 0.75);
    s.runtime_ms_median = quantile(runtimes[i], 0.5);
    out.push_back(std::move(s));
  }
  return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV: " + path);
  out << "estimator,game,d,m,instances,mse_median,mse_q1,mse_q3,"
         "runtime_ms_median\n";
  for (const SummaryRow& row : rows) {
    out << row.estimator << ',' << row.game << ',' << row.d << ',' << row.m
        << ',' << row.instances << ',' << format_double(row.mse_median) << ','
        << format_double(row.mse_q1) << ',' << format_double(row.mse_q3) << ','
        << format_double(row.runtime_ms_median) << "\n";
  }
}

}  // namespace shapodd
