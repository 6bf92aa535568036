#include "shapodd/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shapodd/sampling.hpp"

namespace shapodd {

GameTable::GameTable(int dim, std::vector<double> vals)
    : d(dim), values(std::move(vals)) {
  if (d < 1 || d > kMaxTableDimension)
    throw TableDimensionError("table dimension must be in [1, 24]");
  if (values.size() != (std::size_t{1} << d))
    throw std::invalid_argument("table must hold exactly 2^d values");
}

namespace {

// Splits "key=value" lines; the table header is "d=<int>".
int parse_table_header(const std::string& line) {
  if (line.rfind("d=", 0) != 0)
    throw TableParseError("expected header line 'd=<int>'");
  int d = 0;
  try {
    std::size_t pos = 0;
    d = std::stoi(line.substr(2), &pos);
    if (pos != line.size() - 2) throw std::invalid_argument("trailing junk");
  } catch (const std::exception&) {
    throw TableParseError("malformed dimension in header: " + line);
  }
  if (d < 1) throw TableDimensionError("dimension must be positive");
  if (d > kMaxTableDimension)
    throw TableDimensionError("table dimension exceeds the d <= 24 gate");
  return d;
}

}  // namespace

GameTable load_table_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableParseError("cannot open value table: " + path);

  std::string line;
  if (!std::getline(in, line)) throw TableParseError("empty value table file");
  const int d = parse_table_header(line);

  const std::size_t n = std::size_t{1} << d;
  std::vector<double> values(n, 0.0);
  std::vector<bool> seen(n, false);
  std::size_t filled = 0;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string mask_text, value_text;
    if (!(row >> mask_text >> value_text))
      throw TableParseError("malformed table row: " + line);
    std::string extra;
    if (row >> extra) throw TableParseError("trailing fields in row: " + line);

    std::uint64_t mask = 0;
    try {
      std::size_t pos = 0;
      mask = std::stoull(mask_text, &pos, 16);
      if (pos != mask_text.size()) throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      throw TableParseError("malformed coalition mask: " + mask_text);
    }
    if (mask >= n)
      throw TableParseError("coalition mask out of range for d: " + mask_text);

    double value = 0.0;
    try {
      std::size_t pos = 0;
      value = std::stod(value_text, &pos);
      if (pos != value_text.size()) throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      throw TableParseError("malformed value: " + value_text);
    }
    if (!std::isfinite(value))
      throw TableNonFiniteError("non-finite value for mask " + mask_text);

    if (seen[mask])
      throw TableDuplicateMaskError("duplicate coalition mask: " + mask_text);
    seen[mask] = true;
    values[mask] = value;
    ++filled;
  }

  if (filled != n) {
    for (std::size_t i = 0; i < n; ++i)
      if (!seen[i]) {
        std::ostringstream os;
        os << "table is missing mask " << std::hex << i;
        throw TableIncompleteError(os.str());
      }
  }
  return GameTable(d, std::move(values));
}

void save_table_game(const GameTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write value table: " + path);
  out << "d=" << table.d << "\n";
  char buf[64];
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zx %.17g", i, table.values[i]);
    out << buf << "\n";
  }
}

ValueFunction table_game(GameTable table) {
  auto shared = std::make_shared<GameTable>(std::move(table));
  int d = shared->d;
  return ValueFunction(
      d, [shared](const Coalition& s) { return shared->value(s); });
}

ValueFunction additive_game(int d, std::vector<double> per_player) {
  if (static_cast<int>(per_player.size()) != d)
    throw std::invalid_argument("additive game needs one value per player");
  auto shared = std::make_shared<std::vector<double>>(std::move(per_player));
  return ValueFunction(d, [shared](const Coalition& s) {
    double acc = 0.0;
    for (int i : s.members()) acc += (*shared)[static_cast<std::size_t>(i)];
    return acc;
  });
}

ValueFunction make_planted_fourier_game(
    int d, const std::vector<std::pair<Coalition, double>>& support) {
  auto shared =
      std::make_shared<std::vector<std::pair<Coalition, double>>>(support);
  for (std::size_t i = 0; i < shared->size(); ++i) {
    if ((*shared)[i].first.dimension() != d)
      throw std::invalid_argument("support coalition has wrong dimension");
    for (std::size_t j = i + 1; j < shared->size(); ++j)
      if ((*shared)[i].first == (*shared)[j].first)
        throw std::invalid_argument("duplicate support set in planted game");
  }
  return ValueFunction(d, [shared](const Coalition& s) {
    double acc = 0.0;
    for (const auto& [term, beta] : *shared)
      acc += (s.intersection_size(term) & 1) ? -beta : beta;
    return acc;
  });
}

std::vector<std::pair<Coalition, double>> plant_random_spectrum(
    const PlantedGameParams& params) {
  if (params.d < 1 || params.d > kMaxPlayers)
    throw std::invalid_argument("planted game dimension out of range");
  if (params.interaction_terms < 0)
    throw std::invalid_argument("negative interaction count");

  SplitRng rng = SplitRng(params.seed).stream(rng_stream::game);
  std::vector<std::pair<Coalition, double>> support;
  std::vector<Coalition> keys;
  auto already_used = [&](const Coalition& c) {
    return std::find(keys.begin(), keys.end(), c) != keys.end();
  };

  if (params.additive_part) {
    for (int i = 0; i < params.d; ++i) {
      Coalition s = Coalition::singleton(params.d, i);
      keys.push_back(s);
      support.emplace_back(s, rng.next_symmetric());
    }
  }

  std::vector<int> pool;
  if (params.interaction_order > 0) {
    pool = {params.interaction_order};
  } else if (params.allow_even) {
    pool = {1, 2, 3, 4, 5, 6};
  } else {
    pool = {1, 3, 5};
  }
  for (int card : pool)
    if (card > params.d)
      throw std::invalid_argument("interaction order exceeds dimension");

  for (int t = 0; t < params.interaction_terms; ++t) {
    Coalition s(params.d);
    int attempts = 0;
    do {
      if (++attempts > 100000)
        throw std::invalid_argument(
            "cannot draw enough distinct interaction supports");
      int card = pool[static_cast<std::size_t>(
          rng.next_below(static_cast<std::uint64_t>(pool.size())))];
      s = rng.next_subset(params.d, card);
    } while (already_used(s));
    keys.push_back(s);
    support.emplace_back(s, params.interaction_scale * rng.next_symmetric());
  }
  return support;
}

ValueFunction make_cluster_game(int d, const std::vector<int>& cluster_sizes,
                                double curvature) {
  int total = 0;
  for (int size : cluster_sizes) {
    if (size <= 0) throw std::invalid_argument("cluster sizes must be positive");
    total += size;
  }
  if (total != d)
    throw std::invalid_argument("cluster sizes must sum to the player count");
  if (!(curvature > 0.0))
    throw std::invalid_argument("curvature must be positive");

  // Consecutive player blocks, precomputed as masks.
  auto clusters = std::make_shared<std::vector<Coalition>>();
  int start = 0;
  for (int size : cluster_sizes) {
    Coalition block(d);
    for (int i = start; i < start + size; ++i) block.add(i);
    clusters->push_back(block);
    start += size;
  }
  return ValueFunction(d, [clusters, curvature](const Coalition& s) {
    double acc = 0.0;
    for (const Coalition& block : *clusters)
      acc += std::pow(static_cast<double>(s.intersection_size(block)), curvature);
    return acc;
  });
}

GameTable random_table(int d, std::uint64_t seed) {
  if (d < 1 || d > kMaxTableDimension)
    throw std::invalid_argument("random table dimension out of range");
  SplitRng rng = SplitRng(seed).stream(rng_stream::game);
  std::vector<double> values(std::size_t{1} << d);
  for (double& v : values) v = rng.next_symmetric();
  return GameTable(d, std::move(values));
}

}  // namespace shapodd
