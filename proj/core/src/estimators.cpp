#include "shapodd/estimators.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

namespace shapodd {

void EstimatorConfig::validate() const {
  if (budget < 2) throw std::invalid_argument("budget must be at least 2");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (poly_order < 1) throw std::invalid_argument("poly order must be >= 1");
}

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::uint64_t sampler_seed(const EstimatorConfig& config) {
  return SplitRng(config.seed).stream(rng_stream::sampler).next_u64();
}

RegressionProblem problem_from_parts(const SampleSet& samples,
                                     const std::vector<double>& targets,
                                     BasisSpec basis) {
  RegressionProblem problem;
  problem.samples = samples;
  problem.targets = targets;
  problem.basis = std::move(basis);
  problem.value_empty = targets[0];
  problem.value_full = targets[1];
  for (std::size_t i = samples.interior_begin(); i < samples.size(); ++i)
    problem.interior_weights.push_back(
        kernel_weight(samples.coalitions[i].size(), samples.d));
  return problem;
}

std::vector<double> evaluate_all(ValueFunction& game,
                                 const SampleSet& samples) {
  std::vector<double> targets;
  targets.reserve(samples.size());
  for (const Coalition& s : samples.coalitions)
    targets.push_back(game.evaluate(s));
  return targets;
}

}  // namespace

OddshapScreen oddshap_screen(ValueFunction& game,
                             const EstimatorConfig& config) {
  config.validate();
  OddshapScreen screen;
  screen.samples = sample_coalitions(game.dimension(), config.budget,
                                     sampler_seed(config), config.paired);
  screen.targets = evaluate_all(game, screen.samples);
  screen.proxy = fit_gbt(screen.samples, screen.targets, config.gbt);
  screen.proxy_spectrum = gbt_fourier(screen.proxy);
  return screen;
}

Attribution oddshap_regress(const OddshapScreen& screen,
                            const std::vector<Coalition>& interactions) {
  BasisSpec basis = BasisSpec::fourier_odd(screen.samples.d, interactions);
  RegressionProblem problem =
      problem_from_parts(screen.samples, screen.targets, std::move(basis));
  CoefficientMap beta = solve_constrained_wls(problem);
  Attribution out = shapley_from_fourier(beta);
  out.basis_size = problem.basis.size();
  return out;
}

Attribution oddshap(ValueFunction& game, const EstimatorConfig& config) {
  config.validate();
  const Stopwatch timer;
  const std::uint64_t queries_before = game.query_count();
  const int d = game.dimension();

  OddshapScreen screen = oddshap_screen(game, config);

  Attribution out;
  if (static_cast<double>(config.budget) < d * config.eta) {
    // Underdetermined regression: fall back to the exact Shapley values of
    // the proxy.
    out = shapley_from_fourier(screen.proxy_spectrum);
    out.basis_size = screen.proxy_spectrum.size();
  } else {
    const std::size_t k = static_cast<std::size_t>(
        std::ceil(static_cast<double>(config.budget) / config.eta));
    std::vector<Coalition> interactions =
        select_odd_interactions(screen.proxy_spectrum, k);
    out = oddshap_regress(screen, interactions);
  }
  out.budget_used = game.query_count() - queries_before;
  out.wall_time = timer.seconds();
  return out;
}

Attribution leverage_shap(ValueFunction& game, const EstimatorConfig& config) {
  config.validate();
  const Stopwatch timer;
  const std::uint64_t queries_before = game.query_count();
  const int d = game.dimension();

  SampleSet samples =
      sample_coalitions(d, config.budget, sampler_seed(config), config.paired);
  std::vector<double> targets = evaluate_all(game, samples);
  RegressionProblem problem = problem_from_parts(
      samples, targets, BasisSpec::fourier_odd(d, {}));
  CoefficientMap beta = solve_constrained_wls(problem);

  Attribution out = shapley_from_fourier(beta);
  out.basis_size = problem.basis.size();
  out.budget_used = game.query_count() - queries_before;
  out.wall_time = timer.seconds();
  return out;
}

Attribution polyshap(ValueFunction& game, const EstimatorConfig& config) {
  config.validate();
  const Stopwatch timer;
  const std::uint64_t queries_before = game.query_count();
  const int d = game.dimension();
  if (std::pow(static_cast<double>(d), config.poly_order) > 1e6)
    throw std::invalid_argument("polynomial basis too large: d^k > 1e6");

  SampleSet samples =
      sample_coalitions(d, config.budget, sampler_seed(config), config.paired);
  std::vector<double> targets = evaluate_all(game, samples);
  RegressionProblem problem = problem_from_parts(
      samples, targets,
      BasisSpec::up_to_order(Basis::mobius, d, config.poly_order));
  CoefficientMap alpha = solve_constrained_wls(problem);

  Attribution out = shapley_from_mobius(alpha);
  out.basis_size = problem.basis.size();
  out.budget_used = game.query_count() - queries_before;
  out.wall_time = timer.seconds();
  return out;
}

Attribution msr(ValueFunction& game, const EstimatorConfig& config) {
  config.validate();
  const Stopwatch timer;
  const std::uint64_t queries_before = game.query_count();
  const int d = game.dimension();

  const double value_empty = game.evaluate(Coalition::empty(d));
  const double value_full = game.evaluate(Coalition::full(d));
  // Boundary terms of the rearranged sum, identical for every player.
  const double boundary = value_full * shapley_weight_p(d - 1, d) -
                          value_empty * shapley_weight_p(0, d);

  Attribution out(d);
  for (double& v : out.phi) v = boundary;

  const std::uint64_t draws = config.budget - 2;
  if (d >= 2 && draws > 0) {
    SplitRng rng = SplitRng(config.seed).stream(rng_stream::sampler);
    std::vector<double> accum(static_cast<std::size_t>(d), 0.0);
    for (std::uint64_t it = 0; it < draws; ++it) {
      const int ell =
          1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d - 1)));
      const Coalition s = rng.next_subset(d, ell);
      const double f = game.evaluate(s);
      // Importance weight 1/q(S) with q(S) = 1 / ((d-1) C(d,|S|)).
      const double inv_q = static_cast<double>(d - 1) * binomial(d, ell);
      const double in_term = f * shapley_weight_p(ell - 1, d) * inv_q;
      const double out_term = f * shapley_weight_p(ell, d) * inv_q;
      for (int i = 0; i < d; ++i)
        accum[static_cast<std::size_t>(i)] +=
            s.contains(i) ? in_term : -out_term;
    }
    for (int i = 0; i < d; ++i)
      out.phi[static_cast<std::size_t>(i)] +=
          accum[static_cast<std::size_t>(i)] / static_cast<double>(draws);
  }

  out.budget_used = game.query_count() - queries_before;
  out.wall_time = timer.seconds();
  return out;
}

Attribution permutation_sampling(ValueFunction& game,
                                 const EstimatorConfig& config) {
  config.validate();
  const Stopwatch timer;
  const std::uint64_t queries_before = game.query_count();
  const int d = game.dimension();

  const std::uint64_t n_perms = config.budget / (static_cast<std::uint64_t>(d) + 1);
  if (n_perms == 0)
    throw std::invalid_argument(
        "budget below one permutation (need m >= d + 1)");

  SplitRng rng = SplitRng(config.seed).stream(rng_stream::sampler);
  std::vector<int> permutation(static_cast<std::size_t>(d));
  Attribution out(d);

  for (std::uint64_t p = 0; p < n_perms; ++p) {
    std::iota(permutation.begin(), permutation.end(), 0);
    rng.shuffle(permutation);
    Coalition prefix(d);
    double previous = game.evaluate(prefix);
    for (int player : permutation) {
      prefix.add(player);
      const double current = game.evaluate(prefix);
      out.phi[static_cast<std::size_t>(player)] += current - previous;
      previous = current;
    }
  }
  for (double& v : out.phi) v /= static_cast<double>(n_perms);

  out.budget_used = game.query_count() - queries_before;
  out.wall_time = timer.seconds();
  return out;
}

}  // namespace shapodd
