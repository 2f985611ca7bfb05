#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core_model.hpp"

namespace electre {

/// Dense n x n table over ordered alternative pairs. The diagonal is never populated.
template <typename T>
class PairTable {
 public:
  PairTable() = default;
  explicit PairTable(std::size_t n) : n_(n), cells_(n * n) {}

  std::size_t size() const noexcept { return n_; }

  const std::optional<T>& operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  std::optional<T>& operator()(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }

  // Value at an off-diagonal cell.
  const T& at(std::size_t i, std::size_t j) const { return cells_.at(i * n_ + j).value(); }

  friend bool operator==(const PairTable&, const PairTable&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::optional<T>> cells_;
};

using CriterionSet = std::vector<std::size_t>;

struct ConcordanceAnalysis {
  PairTable<CriterionSet> sets;
  PairTable<double> indices;
};

struct DiscordanceAnalysis {
  // distances[i][j] opposes "i outranks j"; diagonal is 0.
  std::vector<std::vector<double>> distances;
};

struct Provenance {
  ThresholdConfig thresholds;
  std::vector<double> weights;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

class OutrankingGraph {
 public:
  OutrankingGraph() = default;
  OutrankingGraph(std::vector<Alternative> nodes, Provenance provenance)
      : nodes_(std::move(nodes)), adjacency_(nodes_.size() * nodes_.size(), 0), provenance_(std::move(provenance)) {}

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<Alternative>& nodes() const noexcept { return nodes_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  bool has_edge(std::size_t i, std::size_t j) const { return adjacency_[i * size() + j] != 0; }

  void set_edge(std::size_t i, std::size_t j, bool on = true) {
    if (i == j) throw Error(ErrorCode::SelfComparison, "outranking graph has no self-loops");
    adjacency_.at(i * size() + j) = on ? 1 : 0;
  }

  // Edges in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j)
        if (has_edge(i, j)) out.emplace_back(i, j);
    return out;
  }

  std::size_t edge_count() const {
    return static_cast<std::size_t>(std::count(adjacency_.begin(), adjacency_.end(), 1));
  }

  friend bool operator==(const OutrankingGraph&, const OutrankingGraph&) = default;

 private:
  std::vector<Alternative> nodes_;
  std::vector<unsigned char> adjacency_;
  Provenance provenance_;
};

namespace detail {

inline void check_pair(const DecisionMatrix& m, std::size_t i, std::size_t j) {
  const auto n = m.num_alternatives();
  if (i >= n || j >= n)
    throw Error(ErrorCode::IndexOutOfRange, "alternative index out of range (" + std::to_string(i) + ", " +
                                                std::to_string(j) + ") for " + std::to_string(n) + " alternatives");
  if (i == j) throw Error(ErrorCode::SelfComparison, "an alternative is not compared with itself");
}

inline void check_weights(const DecisionMatrix& m, std::span<const double> weights) {
  if (weights.size() != m.num_criteria())
    throw Error(ErrorCode::UnnormalizedWeights, "expected " + std::to_string(m.num_criteria()) + " weights, got " +
                                                    std::to_string(weights.size()));
  if (!is_normalized(weights)) throw Error(ErrorCode::UnnormalizedWeights, "weights must be nonnegative and sum to 1");
}

}  // namespace detail

/// Criteria on which alternative i scores at least as well as j. Ties count for both sides.
inline CriterionSet concordance_set(const DecisionMatrix& m, std::size_t i, std::size_t j) {
  detail::check_pair(m, i, j);
  CriterionSet out;
  for (std::size_t k = 0; k < m.num_criteria(); ++k) {
    const auto dir = m.criteria()[k].direction;
    if (oriented(m.score(i, k), dir) >= oriented(m.score(j, k), dir)) out.push_back(k);
  }
  return out;
}

namespace detail {

// Exactly 1 when every positive-weight criterion concurs; rounding in the sum must not
// drop a dominance edge at C* = 1.
inline double concordance_sum(const CriterionSet& set, std::span<const double> weights) {
  double c = 0.0;
  std::size_t positive_in = 0;
  for (std::size_t k : set) {
    c += weights[k];
    if (weights[k] > 0.0) ++positive_in;
  }
  const auto positive = static_cast<std::size_t>(std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
  return positive_in == positive ? 1.0 : std::min(c, 1.0);
}

}  // namespace detail

inline double concordance_index(const DecisionMatrix& m, std::span<const double> weights, std::size_t i,
                                std::size_t j) {
  detail::check_pair(m, i, j);
  detail::check_weights(m, weights);
  return detail::concordance_sum(concordance_set(m, i, j), weights);
}

inline ConcordanceAnalysis concordance_matrix(const DecisionMatrix& m, std::span<const double> weights) {
  detail::check_weights(m, weights);
  const auto n = m.num_alternatives();
  ConcordanceAnalysis out{PairTable<CriterionSet>(n), PairTable<double>(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      out.sets(i, j) = concordance_set(m, i, j);
      out.indices(i, j) = detail::concordance_sum(*out.sets(i, j), weights);
    }
  return out;
}

inline bool concordance_test(double c, double c_star) noexcept { return c >= c_star; }

/// Per-criterion objection to "i outranks j": opponent score minus claimant score, unclamped.
inline std::vector<double> opposing_differences(const DecisionMatrix& m, std::size_t i, std::size_t j) {
  detail::check_pair(m, i, j);
  std::vector<double> out;
  out.reserve(m.num_criteria());
  for (std::size_t k = 0; k < m.num_criteria(); ++k) {
    const auto dir = m.criteria()[k].direction;
    out.push_back(oriented(m.score(j, k), dir) - oriented(m.score(i, k), dir));
  }
  return out;
}

/// Strongest single-criterion objection to "i outranks j", clamped below at 0.
inline double discordance_index(const DecisionMatrix& m, std::size_t i, std::size_t j) {
  double d = 0.0;
  for (double diff : opposing_differences(m, i, j)) d = std::max(d, diff);
  return d;
}

inline DiscordanceAnalysis discordance_matrix(const DecisionMatrix& m) {
  const auto n = m.num_alternatives();
  DiscordanceAnalysis out{std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) out.distances[i][j] = discordance_index(m, i, j);
  return out;
}

// Passes iff d <= d_star and, when vetoes are given, no opposing difference exceeds its veto.
inline bool discordance_test(double d, double d_star, std::span<const double> opposing = {},
                             std::span<const std::optional<double>> vetoes = {}) noexcept {
  if (!(d <= d_star)) return false;
  const auto n = std::min(opposing.size(), vetoes.size());
  for (std::size_t k = 0; k < n; ++k)
    if (vetoes[k] && opposing[k] > *vetoes[k]) return false;
  return true;
}

inline std::vector<std::optional<double>> criterion_vetoes(const DecisionMatrix& m) {
  std::vector<std::optional<double>> v;
  v.reserve(m.num_criteria());
  for (const auto& c : m.criteria()) v.push_back(c.veto);
  return v;
}

inline bool has_vetoes(const DecisionMatrix& m) {
  return std::any_of(m.criteria().begin(), m.criteria().end(), [](const auto& c) { return c.veto.has_value(); });
}

inline bool passes_discordance(const DecisionMatrix& m, std::size_t i, std::size_t j, double d_star) {
  const auto opposing = opposing_differences(m, i, j);
  double d = 0.0;
  for (double diff : opposing) d = std::max(d, diff);
  const auto vetoes = criterion_vetoes(m);
  return discordance_test(d, d_star, opposing, vetoes);
}

inline OutrankingGraph outrank(const DecisionMatrix& m, std::span<const double> weights,
                               const ThresholdConfig& thresholds) {
  require_valid(m);
  detail::check_weights(m, weights);
  if (auto r = validate_thresholds(thresholds); !r.ok())
    throw Error(ErrorCode::InvalidThresholds, r.violations.front().message);

  const auto concordance = concordance_matrix(m, weights);
  OutrankingGraph g(m.alternatives(), Provenance{thresholds, std::vector<double>(weights.begin(), weights.end())});
  const auto n = m.num_alternatives();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (concordance_test(concordance.indices.at(i, j), thresholds.c_star) &&
          passes_discordance(m, i, j, thresholds.d_star))
        g.set_edge(i, j);
    }
  return g;
}

/// Normalizes the matrix's own criterion weights first.
inline OutrankingGraph outrank(const DecisionMatrix& m, const ThresholdConfig& thresholds) {
  require_valid(m);
  const auto w = m.weights();
  return outrank(m, normalize_weights(std::span<const double>(w)), thresholds);
}

}  // namespace electre
