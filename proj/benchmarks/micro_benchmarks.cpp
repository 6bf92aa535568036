#include <benchmark/benchmark.h>

#include "shapodd/estimators.hpp"
#include "shapodd/game.hpp"
#include "shapodd/gbt.hpp"
#include "shapodd/regression.hpp"
#include "shapodd/sampling.hpp"
#include "shapodd/transforms.hpp"

using namespace shapodd;

namespace {

void BM_FourierTransform(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  GameTable table = random_table(d, 1);
  for (auto _ : state) {
    CoefficientMap beta = fourier_transform(table);
    benchmark::DoNotOptimize(beta);
  }
  state.SetComplexityN(1 << d);
}
BENCHMARK(BM_FourierTransform)->Arg(12)->Arg(16)->Arg(20);

void BM_ExactShapley(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  GameTable table = random_table(d, 2);
  for (auto _ : state) {
    Attribution phi = exact_shapley(table);
    benchmark::DoNotOptimize(phi);
  }
}
BENCHMARK(BM_ExactShapley)->Arg(12)->Arg(16)->Arg(18);

void BM_MobiusTransform(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  GameTable table = random_table(d, 3);
  for (auto _ : state) {
    CoefficientMap alpha = mobius_transform(table);
    benchmark::DoNotOptimize(alpha);
  }
}
BENCHMARK(BM_MobiusTransform)->Arg(12)->Arg(16);

void BM_PairedSampling(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const std::uint64_t m = 100 * static_cast<std::uint64_t>(d);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SampleSet set = sample_coalitions(d, m, ++seed, true);
    benchmark::DoNotOptimize(set);
  }
}
BENCHMARK(BM_PairedSampling)->Arg(30)->Arg(60)->Arg(100);

void BM_GBTFit(benchmark::State& state) {
  const int d = 30;
  const std::uint64_t m = static_cast<std::uint64_t>(state.range(0));
  PlantedGameParams params;
  params.d = d;
  params.interaction_terms = 50;
  params.interaction_order = 3;
  ValueFunction game = make_planted_fourier_game(d, plant_random_spectrum(params));
  SampleSet samples = sample_coalitions(d, m, 7, true);
  std::vector<double> targets;
  for (const Coalition& s : samples.coalitions)
    targets.push_back(game.evaluator()(s));
  for (auto _ : state) {
    GBTModel model = fit_gbt(samples, targets, GBTConfig{});
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_GBTFit)->Arg(500)->Arg(2000);

void BM_SpectrumExtraction(benchmark::State& state) {
  const int d = 30;
  PlantedGameParams params;
  params.d = d;
  params.interaction_terms = 50;
  params.interaction_order = 3;
  ValueFunction game = make_planted_fourier_game(d, plant_random_spectrum(params));
  SampleSet samples = sample_coalitions(d, 2000, 7, true);
  std::vector<double> targets;
  for (const Coalition& s : samples.coalitions)
    targets.push_back(game.evaluator()(s));
  GBTModel model = fit_gbt(samples, targets, GBTConfig{});
  for (auto _ : state) {
    CoefficientMap beta = gbt_fourier(model);
    benchmark::DoNotOptimize(beta);
  }
}
BENCHMARK(BM_SpectrumExtraction);

void BM_ConstrainedSolve(benchmark::State& state) {
  const int d = 30;
  const std::uint64_t m = static_cast<std::uint64_t>(state.range(0));
  PlantedGameParams params;
  params.d = d;
  params.interaction_terms = 50;
  params.interaction_order = 3;
  ValueFunction proto = make_planted_fourier_game(d, plant_random_spectrum(params));
  for (auto _ : state) {
    state.PauseTiming();
    ValueFunction game = proto.fresh_copy();
    EstimatorConfig config;
    config.budget = m;
    config.seed = 5;
    OddshapScreen screen = oddshap_screen(game, config);
    std::vector<Coalition> interactions = select_odd_interactions(
        screen.proxy_spectrum, static_cast<std::size_t>(m / 10));
    state.ResumeTiming();
    Attribution phi = oddshap_regress(screen, interactions);
    benchmark::DoNotOptimize(phi);
  }
}
BENCHMARK(BM_ConstrainedSolve)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_OddshapEndToEnd(benchmark::State& state) {
  const int d = 14;
  GameTable table = random_table(d, 9);
  for (auto _ : state) {
    ValueFunction game = table_game(table);
    EstimatorConfig config;
    config.budget = 100 * d;
    config.seed = 11;
    Attribution phi = oddshap(game, config);
    benchmark::DoNotOptimize(phi);
  }
}
BENCHMARK(BM_OddshapEndToEnd)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
