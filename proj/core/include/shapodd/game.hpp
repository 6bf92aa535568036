#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "shapodd/coalition.hpp"

namespace shapodd {

// Thrown when a fresh evaluation would exceed the configured query budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::uint64_t budget)
      : std::runtime_error("query budget of " + std::to_string(budget) +
                           " evaluations exhausted"),
        budget_(budget) {}
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t budget_;
};

// Value-table file errors, one class per failure kind.
class TableFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class TableParseError : public TableFormatError {
  using TableFormatError::TableFormatError;
};
class TableDimensionError : public TableFormatError {
  using TableFormatError::TableFormatError;
};
class TableDuplicateMaskError : public TableFormatError {
  using TableFormatError::TableFormatError;
};
class TableIncompleteError : public TableFormatError {
  using TableFormatError::TableFormatError;
};
class TableNonFiniteError : public TableFormatError {
  using TableFormatError::TableFormatError;
};

// Exhaustive storage of a set function, indexed by the coalition bit pattern.
// Dense enumeration is the memory bound, so construction is gated to d <= 24.
struct GameTable {
  int d = 1;
  std::vector<double> values;  // length 2^d, index = little-endian mask

  GameTable() = default;
  GameTable(int dim, std::vector<double> vals);

  std::size_t size() const { return values.size(); }
  double at(std::uint64_t index) const { return values[index]; }
  double value(const Coalition& s) const { return values[s.index()]; }
};

constexpr int kMaxTableDimension = 24;

GameTable load_table_game(const std::string& path);
void save_table_game(const GameTable& table, const std::string& path);

// Budgeted, cached access to a set function. Evaluations are memoized, so a
// repeat query never consumes budget; cache and counter updates are mutex
// protected, making concurrent evaluation safe (calls are serialized).
class ValueFunction {
 public:
  using Evaluator = std::function<double(const Coalition&)>;

  ValueFunction(int d, Evaluator evaluator,
                std::optional<std::uint64_t> budget = std::nullopt)
      : d_(d), evaluator_(std::move(evaluator)), budget_(budget) {
    if (d < 1 || d > kMaxPlayers)
      throw std::invalid_argument("player count must be in [1, 128]");
    if (!evaluator_) throw std::invalid_argument("null evaluator");
  }

  ValueFunction& operator=(const ValueFunction&) = delete;

  int dimension() const { return d_; }

  double evaluate(const Coalition& s) {
    if (s.dimension() != d_)
      throw std::invalid_argument("coalition dimension mismatch");
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    if (budget_ && query_count_ + 1 > *budget_) throw BudgetExceeded(*budget_);
    double v = evaluator_(s);
    cache_.emplace(s, v);
    ++query_count_;
    return v;
  }

  std::uint64_t query_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return query_count_;
  }

  void set_budget(std::uint64_t max_queries) { budget_ = max_queries; }
  void clear_budget() { budget_.reset(); }
  std::optional<std::uint64_t> budget() const { return budget_; }

  // Raw evaluator, bypassing budget and cache (dense oracle enumeration).
  const Evaluator& evaluator() const { return evaluator_; }

  // Copy sharing the evaluator but with empty cache and zero query count.
  ValueFunction fresh_copy() const { return ValueFunction(*this); }

 private:
  ValueFunction(const ValueFunction& other)
      : d_(other.d_), evaluator_(other.evaluator_), budget_(other.budget_) {}

  int d_;
  Evaluator evaluator_;
  std::optional<std::uint64_t> budget_;
  mutable std::mutex mutex_;
  std::unordered_map<Coalition, double> cache_;
  std::uint64_t query_count_ = 0;
};

// ---- Game factories -------------------------------------------------------

ValueFunction table_game(GameTable table);

ValueFunction additive_game(int d, std::vector<double> per_player);

// f(S) = sum over entries (T, beta) of beta * (-1)^{|S n T|}: a game whose
// Fourier spectrum is exactly the planted coefficient list.
ValueFunction make_planted_fourier_game(
    int d, const std::vector<std::pair<Coalition, double>>& support);

struct PlantedGameParams {
  int d = 1;
  int interaction_terms = 0;  // number of randomized interaction supports
  int interaction_order = 0;  // 0 = draw cardinality uniformly from the pool
  bool additive_part = true;  // include every singleton with a random value
  bool allow_even = false;    // widen the cardinality pool {1,3,5} -> {1,..,6}
  double interaction_scale = 1.0;
  std::uint64_t seed = 1;
};

// Randomized planted game; supports default to odd cardinalities so the
// ground truth lives in the subspace the estimators target. Values are drawn
// uniformly from [-1, 1] (scaled for interactions). Returns the game and its
// exact spectrum.
std::vector<std::pair<Coalition, double>> plant_random_spectrum(
    const PlantedGameParams& params);

// f(S) = sum over clusters of |S n cluster|^curvature. Additive at
// curvature = 1, within-cluster interactions otherwise.
ValueFunction make_cluster_game(int d, const std::vector<int>& cluster_sizes,
                                double curvature);

// Dense table with values drawn uniformly from [-1, 1].
GameTable random_table(int d, std::uint64_t seed);

}  // namespace shapodd
