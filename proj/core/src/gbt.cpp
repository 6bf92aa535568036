#include "shapodd/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace shapodd {

int Tree::leaf_count() const {
  int n = 0;
  for (const TreeNode& node : nodes)
    if (node.feature < 0) ++n;
  return n;
}

int Tree::depth() const {
  // Depth of the deepest leaf; nodes are stored with children after parents.
  std::vector<int> level(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& node = nodes[i];
    if (node.feature < 0) {
      deepest = std::max(deepest, level[i]);
      continue;
    }
    level[static_cast<std::size_t>(node.left)] = level[i] + 1;
    level[static_cast<std::size_t>(node.right)] = level[i] + 1;
  }
  return deepest;
}

namespace {

struct BuildItem {
  int node = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  int depth = 0;
  Coalition used;  // features already split on along the path
};

// One boosting tree fit to the residuals with exact variance-reduction
// splits. Returns the tree and updates `prediction` in place with the raw
// (unscaled) leaf outputs.
Tree fit_tree(const SampleSet& samples, const std::vector<double>& residuals,
              const GBTConfig& config, std::vector<std::size_t>& order,
              std::vector<double>& raw_output) {
  const int d = samples.d;
  Tree tree;
  tree.nodes.push_back(TreeNode{});

  std::vector<BuildItem> queue;
  queue.push_back(BuildItem{0, 0, order.size(), 0, Coalition(d)});
  int leaves = 1;

  for (std::size_t head = 0; head < queue.size(); ++head) {
    BuildItem item = queue[head];
    const std::size_t n = item.end - item.begin;

    double node_sum = 0.0;
    for (std::size_t i = item.begin; i < item.end; ++i)
      node_sum += residuals[order[i]];

    auto finish_leaf = [&]() {
      const double value = node_sum / static_cast<double>(n);
      tree.nodes[static_cast<std::size_t>(item.node)].value = value;
      for (std::size_t i = item.begin; i < item.end; ++i)
        raw_output[order[i]] = value;
    };

    if (item.depth >= config.max_depth || leaves >= config.max_leaves ||
        n < 2 * static_cast<std::size_t>(config.min_samples_leaf)) {
      finish_leaf();
      continue;
    }

    // Best split by variance reduction; scanning features in ascending order
    // with a strict improvement test breaks ties toward the lowest index.
    const double parent_score = node_sum * node_sum / static_cast<double>(n);
    int best_feature = -1;
    double best_gain = 0.0;
    for (int j = 0; j < d; ++j) {
      if (item.used.contains(j)) continue;
      double present_sum = 0.0;
      std::size_t present_n = 0;
      for (std::size_t i = item.begin; i < item.end; ++i) {
        if (samples.coalitions[order[i]].contains(j)) {
          present_sum += residuals[order[i]];
          ++present_n;
        }
      }
      const std::size_t absent_n = n - present_n;
      if (present_n < static_cast<std::size_t>(config.min_samples_leaf) ||
          absent_n < static_cast<std::size_t>(config.min_samples_leaf))
        continue;
      const double absent_sum = node_sum - present_sum;
      const double gain = present_sum * present_sum / present_n +
                          absent_sum * absent_sum / absent_n - parent_score;
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = j;
      }
    }

    if (best_feature < 0) {
      finish_leaf();
      continue;
    }

    // Stable partition: absent samples first, original order preserved.
    std::vector<std::size_t> absent, present;
    absent.reserve(n);
    present.reserve(n);
    for (std::size_t i = item.begin; i < item.end; ++i) {
      if (samples.coalitions[order[i]].contains(best_feature))
        present.push_back(order[i]);
      else
        absent.push_back(order[i]);
    }
    std::copy(absent.begin(), absent.end(),
              order.begin() + static_cast<std::ptrdiff_t>(item.begin));
    std::copy(present.begin(), present.end(),
              order.begin() + static_cast<std::ptrdiff_t>(item.begin) +
                  static_cast<std::ptrdiff_t>(absent.size()));

    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    const int right = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    TreeNode& parent = tree.nodes[static_cast<std::size_t>(item.node)];
    parent.feature = best_feature;
    parent.left = left;
    parent.right = right;
    ++leaves;

    Coalition used = item.used.with(best_feature);
    const std::size_t split = item.begin + absent.size();
    queue.push_back(BuildItem{left, item.begin, split, item.depth + 1, used});
    queue.push_back(BuildItem{right, split, item.end, item.depth + 1, used});
  }
  return tree;
}

}  // namespace

GBTModel fit_gbt(const SampleSet& samples, const std::vector<double>& targets,
                 const GBTConfig& config) {
  const std::size_t n = samples.size();
  if (n == 0) throw std::invalid_argument("cannot fit GBT on empty input");
  if (targets.size() != n)
    throw std::invalid_argument("one target per sample required");
  for (double y : targets)
    if (!std::isfinite(y)) throw std::invalid_argument("non-finite targets");
  if (config.n_trees < 0 || config.max_depth < 1 || config.max_leaves < 2 ||
      config.min_samples_leaf < 1)
    throw std::invalid_argument("invalid GBT configuration");

  GBTModel model;
  model.d = samples.d;
  model.learning_rate = config.learning_rate;
  model.base_score =
      std::accumulate(targets.begin(), targets.end(), 0.0) /
      static_cast<double>(n);

  std::vector<double> prediction(n, model.base_score);
  std::vector<double> residuals(n);
  std::vector<double> raw_output(n);
  std::vector<std::size_t> order(n);

  model.trees.reserve(static_cast<std::size_t>(config.n_trees));
  for (int t = 0; t < config.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) residuals[i] = targets[i] - prediction[i];
    std::iota(order.begin(), order.end(), std::size_t{0});
    Tree tree = fit_tree(samples, residuals, config, order, raw_output);
    for (std::size_t i = 0; i < n; ++i)
      prediction[i] += config.learning_rate * raw_output[i];
    model.trees.push_back(std::move(tree));
  }
  return model;
}

CoefficientMap gbt_fourier(const GBTModel& model) {
  CoefficientMap out(model.d, Basis::fourier);
  auto& acc = out.entries;
  acc[Coalition::empty(model.d)] += model.base_score;

  struct Frame {
    int node;
    std::vector<std::pair<int, double>> path;  // (feature, sigma)
  };

  for (const Tree& tree : model.trees) {
    std::vector<Frame> stack;
    stack.push_back(Frame{0, {}});
    while (!stack.empty()) {
      Frame frame = std::move(stack.back());
      stack.pop_back();
      const TreeNode& node = tree.nodes[static_cast<std::size_t>(frame.node)];
      if (node.feature >= 0) {
        // sigma = +1 on the absent branch, -1 on the present branch,
        // from 1[present] = (1 - chi)/2 and 1[absent] = (1 + chi)/2.
        Frame left{node.left, frame.path};
        left.path.emplace_back(node.feature, 1.0);
        Frame right{node.right, std::move(frame.path)};
        right.path.emplace_back(node.feature, -1.0);
        stack.push_back(std::move(left));
        stack.push_back(std::move(right));
        continue;
      }
      const double scale = model.learning_rate * node.value *
                           std::ldexp(1.0, -static_cast<int>(frame.path.size()));
      const std::uint64_t picks = std::uint64_t{1} << frame.path.size();
      for (std::uint64_t pick = 0; pick < picks; ++pick) {
        Coalition term(model.d);
        double sign = 1.0;
        for (std::size_t b = 0; b < frame.path.size(); ++b) {
          if ((pick >> b) & 1u) {
            term.add(frame.path[b].first);
            sign *= frame.path[b].second;
          }
        }
        acc[term] += sign * scale;
      }
    }
  }
  out.purge();
  return out;
}

std::vector<Coalition> select_odd_interactions(const CoefficientMap& beta,
                                               std::size_t k,
                                               bool include_singletons) {
  const int min_card = include_singletons ? 1 : 3;
  std::vector<std::pair<Coalition, double>> odd;
  for (const auto& [term, value] : beta.entries) {
    const int card = term.size();
    if ((card & 1) && card >= min_card) odd.emplace_back(term, value);
  }
  std::sort(odd.begin(), odd.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a.second), mb = std::abs(b.second);
    if (ma != mb) return ma > mb;
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  if (odd.size() > k) odd.resize(k);
  std::vector<Coalition> out;
  out.reserve(odd.size());
  for (const auto& [term, value] : odd) {
    (void)value;
    out.push_back(term);
  }
  return out;
}

Attribution gbt_shapley(const GBTModel& model) {
  return shapley_from_fourier(gbt_fourier(model));
}

}  // namespace shapodd
