#pragma once

// Fixtures and brute-force oracles shared by the unit, property and acceptance suites.
// The oracles deliberately avoid the library's engine and ranking code paths.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "electre/core_model.hpp"

namespace electre::testing {

// Retail-store matrix: R_1 Tesco, R_2 Mydin, R_3 Carrefour, R_4 Giant.
inline DecisionMatrix retailers() {
  std::vector<Alternative> alts{{"R_1", "Tesco"}, {"R_2", "Mydin"}, {"R_3", "Carrefour"}, {"R_4", "Giant"}};
  std::vector<CriterionSpec> crit{
      {"ATT_1", "Product", Direction::Maximize, 0.25, std::nullopt},
      {"ATT_2", "Price", Direction::Maximize, 0.25, std::nullopt},
      {"ATT_3", "Promotion", Direction::Maximize, 0.25, std::nullopt},
      {"ATT_4", "Place/Distribution", Direction::Maximize, 0.25, std::nullopt},
  };
  return DecisionMatrix(std::move(alts), std::move(crit),
                        std::vector<std::vector<double>>{{4.42, 3.94, 3.97, 3.90},
                                                         {3.91, 3.73, 3.42, 2.95},
                                                         {4.10, 3.60, 3.71, 3.70},
                                                         {3.90, 4.02, 3.76, 3.92}});
}

#ifdef ELECTRE_DATA_DIR
inline std::string data_path(const std::string& name) { return std::string(ELECTRE_DATA_DIR) + "/" + name; }

inline std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
#endif

inline std::vector<double> equal_weights(std::size_t m) { return std::vector<double>(m, 1.0 / static_cast<double>(m)); }

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;

/// Double loop over criteria, written from the textbook definitions.
inline EdgeSet brute_force_edges(const DecisionMatrix& m, const std::vector<double>& w, double c_star, double d_star) {
  EdgeSet edges;
  const auto n = m.num_alternatives();
  const auto k = m.num_criteria();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      double c = 0.0;
      double worst = 0.0;
      bool vetoed = false;
      bool opposed = false;
      for (std::size_t q = 0; q < k; ++q) {
        const bool flip = m.criteria()[q].direction == Direction::Minimize;
        const double sa = flip ? -m.score(a, q) : m.score(a, q);
        const double sb = flip ? -m.score(b, q) : m.score(b, q);
        if (sa >= sb) c += w[q];
        if (sa < sb && w[q] > 0.0) opposed = true;
        if (sb - sa > worst) worst = sb - sa;
        if (m.criteria()[q].veto && sb - sa > *m.criteria()[q].veto) vetoed = true;
      }
      if (!opposed) c = 1.0;  // unopposed claims are unanimous by definition
      if (c >= c_star && worst <= d_star && !vetoed) edges.insert({a, b});
    }
  return edges;
}

/// Level of each node = 1 + longest path (in edges) from any source. Acyclic graphs only.
inline std::vector<std::size_t> longest_path_levels(std::size_t n, const EdgeSet& edges) {
  std::vector<std::size_t> level(n, 1);
  for (std::size_t round = 0; round < n; ++round)
    for (const auto& [a, b] : edges) level[b] = std::max(level[b], level[a] + 1);
  return level;
}

struct RandomInstance {
  DecisionMatrix matrix;
  std::vector<double> weights;  // normalized
};

/// Scores on a 0.25 grid inside [1,6] so ties are common and affine maps stay exact.
inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_n = 6, std::size_t max_m = 5) {
  std::uniform_int_distribution<std::size_t> n_dist(2, max_n);
  std::uniform_int_distribution<std::size_t> m_dist(1, max_m);
  std::uniform_int_distribution<int> grid(4, 24);
  std::uniform_int_distribution<int> wdist(0, 8);
  const auto n = n_dist(rng);
  const auto k = m_dist(rng);
  std::vector<Alternative> alts;
  for (std::size_t i = 0; i < n; ++i) alts.push_back({"a" + std::to_string(i), ""});
  std::vector<CriterionSpec> crit;
  std::vector<double> raw;
  for (std::size_t q = 0; q < k; ++q) {
    raw.push_back(static_cast<double>(wdist(rng)));
    crit.push_back({"c" + std::to_string(q), "", Direction::Maximize, raw.back(), std::nullopt});
  }
  if (std::all_of(raw.begin(), raw.end(), [](double x) { return x == 0.0; })) {
    raw[0] = 1.0;
    crit[0].weight = 1.0;
  }
  std::vector<double> scores;
  for (std::size_t i = 0; i < n * k; ++i) scores.push_back(grid(rng) * 0.25);
  double total = 0.0;
  for (double x : raw) total += x;
  std::vector<double> w;
  for (double x : raw) w.push_back(x / total);
  return {DecisionMatrix(std::move(alts), std::move(crit), std::move(scores)), std::move(w)};
}

/// Random digraph over n nodes, each ordered pair present with probability p.
inline EdgeSet random_edges(std::mt19937_64& rng, std::size_t n, double p, bool acyclic) {
  std::bernoulli_distribution coin(p);
  EdgeSet e;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && (!acyclic || a < b) && coin(rng)) e.insert({a, b});
  return e;
}

}  // namespace electre::testing
