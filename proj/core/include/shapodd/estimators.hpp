#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shapodd/game.hpp"
#include "shapodd/gbt.hpp"
#include "shapodd/regression.hpp"
#include "shapodd/transforms.hpp"

namespace shapodd {

struct EstimatorConfig {
  std::uint64_t budget = 2;  // m
  std::uint64_t seed = 1;
  double eta = 10.0;    // regression variable factor
  int poly_order = 1;   // k, polyshap only
  bool paired = true;
  GBTConfig gbt;

  void validate() const;
};

// The full pipeline: paired sampling, GBT proxy, top-|m/eta| odd interaction
// screening, constrained weighted Fourier regression. Falls back to the exact
// Shapley values of the proxy when m < d * eta.
Attribution oddshap(ValueFunction& game, const EstimatorConfig& config);

// The interaction-free pipeline: constrained weighted Fourier regression on
// the empty set plus all singletons.
Attribution leverage_shap(ValueFunction& game, const EstimatorConfig& config);

// Mobius-basis constrained regression on all terms of cardinality <= k.
Attribution polyshap(ValueFunction& game, const EstimatorConfig& config);

// Importance-weighted Monte Carlo estimator over size-uniform interior draws
// with the boundary terms added exactly.
Attribution msr(ValueFunction& game, const EstimatorConfig& config);

// Average of prefix marginal contributions over floor(m / (d+1)) random
// player orders.
Attribution permutation_sampling(ValueFunction& game,
                                 const EstimatorConfig& config);

// ---- Pipeline stages ------------------------------------------------------
// Exposed so the harness can re-run the regression stage with a chosen
// interaction budget against one screening pass (the interaction ablation).

struct OddshapScreen {
  SampleSet samples;
  std::vector<double> targets;
  GBTModel proxy;
  CoefficientMap proxy_spectrum;
};

OddshapScreen oddshap_screen(ValueFunction& game, const EstimatorConfig& config);

// Regression stage on basis {empty} + singletons + interactions.
Attribution oddshap_regress(const OddshapScreen& screen,
                            const std::vector<Coalition>& interactions);

}  // namespace shapodd
