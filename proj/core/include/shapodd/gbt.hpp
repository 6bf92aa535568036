#pragma once

#include <vector>

#include "shapodd/sampling.hpp"
#include "shapodd/transforms.hpp"

namespace shapodd {

struct GBTConfig {
  int n_trees = 100;
  double learning_rate = 0.1;
  int max_depth = 10;
  int max_leaves = 31;
  int min_samples_leaf = 1;
};

// Regression tree on presence bits. Internal nodes test one player; a player
// never repeats along a root-to-leaf path. Absent goes left, present right.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double predict(const Coalition& s) const {
    int idx = 0;
    while (nodes[idx].feature >= 0)
      idx = s.contains(nodes[idx].feature) ? nodes[idx].right : nodes[idx].left;
    return nodes[idx].value;
  }

  int leaf_count() const;
  int depth() const;
};

struct GBTModel {
  int d = 1;
  std::vector<Tree> trees;
  double learning_rate = 0.1;
  double base_score = 0.0;

  double predict(const Coalition& s) const {
    double acc = base_score;
    for (const Tree& t : trees) acc += learning_rate * t.predict(s);
    return acc;
  }
};

// Squared-error boosting: each tree greedily fits the current residuals with
// exact variance-reduction splits; ties between features break toward the
// lowest player index, so the fit is deterministic in (inputs, config).
GBTModel fit_gbt(const SampleSet& samples, const std::vector<double>& targets,
                 const GBTConfig& config);

// Exact Fourier spectrum of the ensemble: each leaf with path constraints P
// contributes value * prod(sigma_i) / 2^{|P|} to beta_T for every T subset P,
// sigma_i = +1 when the path requires absence and -1 for presence.
CoefficientMap gbt_fourier(const GBTModel& model);

// The k odd-cardinality (>= 3, or >= 1 when include_singletons) coefficients
// of largest magnitude; ties break by larger |beta|, then smaller cardinality,
// then lexicographic bit order.
std::vector<Coalition> select_odd_interactions(const CoefficientMap& beta,
                                               std::size_t k,
                                               bool include_singletons = false);

// Exact Shapley values of the ensemble on the Boolean domain, read from its
// Fourier spectrum.
Attribution gbt_shapley(const GBTModel& model);

}  // namespace shapodd
