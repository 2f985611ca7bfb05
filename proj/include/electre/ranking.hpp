#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core_model.hpp"
#include "engine.hpp"

namespace electre {

/// Strongly connected components of an outranking graph collapsed into an acyclic graph.
struct Condensation {
  // Members of each component, ascending alternative index; components ordered by smallest member.
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> component_of;
  // successors[c] = components reached by an edge out of c, ascending, no self-loops.
  std::vector<std::vector<std::size_t>> successors;

  std::size_t size() const noexcept { return components.size(); }

  bool has_edge(std::size_t from, std::size_t to) const {
    return std::binary_search(successors[from].begin(), successors[from].end(), to);
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& s : successors) n += s.size();
    return n;
  }
};

inline Condensation condense_cycles(const OutrankingGraph& g) {
  const auto n = g.size();
  // Transitive closure; alternative counts are small.
  std::vector<unsigned char> reach(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    reach[i * n + i] = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && g.has_edge(i, j)) reach[i * n + j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k * n + j]) reach[i * n + j] = 1;

  Condensation c;
  constexpr auto unassigned = static_cast<std::size_t>(-1);
  c.component_of.assign(n, unassigned);
  for (std::size_t i = 0; i < n; ++i) {
    if (c.component_of[i] != unassigned) continue;
    const auto id = c.components.size();
    c.components.emplace_back();
    for (std::size_t j = i; j < n; ++j)
      if (reach[i * n + j] && reach[j * n + i]) {
        c.component_of[j] = id;
        c.components.back().push_back(j);
      }
  }
  c.successors.resize(c.components.size());
  for (const auto& [i, j] : g.edges()) {
    const auto a = c.component_of[i];
    const auto b = c.component_of[j];
    if (a != b) c.successors[a].push_back(b);
  }
  for (auto& s : c.successors) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return c;
}

namespace detail {

inline std::vector<std::size_t> in_degrees(const Condensation& c) {
  std::vector<std::size_t> indeg(c.size(), 0);
  for (const auto& s : c.successors)
    for (auto t : s) ++indeg[t];
  return indeg;
}

// Kahn order, smallest component first among the ready ones.
inline std::vector<std::size_t> topological_order(const Condensation& c) {
  auto indeg = in_degrees(c);
  std::vector<std::size_t> order;
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < c.size(); ++v)
    if (indeg[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end());
    const auto v = *it;
    ready.erase(it);
    order.push_back(v);
    for (auto t : c.successors[v])
      if (--indeg[t] == 0) ready.push_back(t);
  }
  return order;
}

inline std::vector<std::size_t> expand(const Condensation& c, const std::vector<std::size_t>& comps) {
  std::vector<std::size_t> out;
  for (auto comp : comps) out.insert(out.end(), c.components[comp].begin(), c.components[comp].end());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> ids_of(const OutrankingGraph& g, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(g.nodes()[i].id);
  return out;
}

}  // namespace detail

/// Kernel components of the condensed graph: no kernel component reaches another by an
/// edge, and every other component has an in-edge from the kernel. Unique because the
/// condensation is acyclic.
inline std::vector<std::size_t> kernel_components(const Condensation& c) {
  std::vector<std::vector<std::size_t>> preds(c.size());
  for (std::size_t v = 0; v < c.size(); ++v)
    for (auto t : c.successors[v]) preds[t].push_back(v);
  std::vector<char> in_kernel(c.size(), 0);
  for (auto v : detail::topological_order(c))
    in_kernel[v] = std::none_of(preds[v].begin(), preds[v].end(), [&](std::size_t p) { return in_kernel[p] != 0; });
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < c.size(); ++v)
    if (in_kernel[v]) out.push_back(v);
  return out;
}

inline std::vector<std::size_t> kernel_indices(const OutrankingGraph& g) {
  const auto c = condense_cycles(g);
  return detail::expand(c, kernel_components(c));
}

inline std::vector<std::string> kernel(const OutrankingGraph& g) { return detail::ids_of(g, kernel_indices(g)); }

/// Peels in-degree-zero components of the condensed graph, one layer per round.
inline std::vector<std::vector<std::size_t>> dominance_level_indices(const OutrankingGraph& g) {
  const auto c = condense_cycles(g);
  auto indeg = detail::in_degrees(c);
  std::vector<char> removed(c.size(), 0);
  std::vector<std::vector<std::size_t>> levels;
  std::size_t remaining = c.size();
  while (remaining > 0) {
    std::vector<std::size_t> layer;
    for (std::size_t v = 0; v < c.size(); ++v)
      if (!removed[v] && indeg[v] == 0) layer.push_back(v);
    for (auto v : layer) {
      removed[v] = 1;
      for (auto t : c.successors[v]) --indeg[t];
    }
    remaining -= layer.size();
    levels.push_back(detail::expand(c, layer));
  }
  return levels;
}

inline std::vector<std::vector<std::string>> dominance_levels(const OutrankingGraph& g) {
  std::vector<std::vector<std::string>> out;
  for (const auto& level : dominance_level_indices(g)) out.push_back(detail::ids_of(g, level));
  return out;
}

inline std::vector<std::pair<std::string, std::string>> incomparable_pairs(const OutrankingGraph& g) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (!g.has_edge(i, j) && !g.has_edge(j, i)) out.emplace_back(g.nodes()[i].id, g.nodes()[j].id);
  return out;
}

struct RankedEntry {
  std::string id;
  std::size_t rank = 0;  // competition ranking: 1, 1, 3, ...
  double score = 0.0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct PositioningColumn {
  std::string criterion_id;
  std::vector<RankedEntry> entries;

  friend bool operator==(const PositioningColumn&, const PositioningColumn&) = default;
};

inline std::vector<PositioningColumn> positioning_table(const DecisionMatrix& m) {
  std::vector<PositioningColumn> table;
  for (std::size_t k = 0; k < m.num_criteria(); ++k) {
    const auto dir = m.criteria()[k].direction;
    std::vector<std::size_t> order(m.num_alternatives());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double sa = oriented(m.score(a, k), dir);
      const double sb = oriented(m.score(b, k), dir);
      if (sa != sb) return sa > sb;
      return m.alternatives()[a].id < m.alternatives()[b].id;
    });
    PositioningColumn col{m.criteria()[k].id, {}};
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      std::size_t rank = pos + 1;
      if (pos > 0 && m.score(order[pos], k) == m.score(order[pos - 1], k)) rank = col.entries.back().rank;
      col.entries.push_back({m.alternatives()[order[pos]].id, rank, m.score(order[pos], k)});
    }
    table.push_back(std::move(col));
  }
  return table;
}

struct AverageScores {
  // Weighted mean per alternative, in matrix order.
  std::vector<double> values;
  // Alternative ids by descending mean, ties by id.
  std::vector<std::string> order;
};

inline AverageScores average_scores(const DecisionMatrix& m, std::span<const double> weights) {
  detail::check_weights(m, weights);
  AverageScores out;
  for (std::size_t i = 0; i < m.num_alternatives(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < m.num_criteria(); ++k)
      s += weights[k] * oriented(m.score(i, k), m.criteria()[k].direction);
    out.values.push_back(s);
  }
  std::vector<std::size_t> idx(m.num_alternatives());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (out.values[a] != out.values[b]) return out.values[a] > out.values[b];
    return m.alternatives()[a].id < m.alternatives()[b].id;
  });
  for (auto i : idx) out.order.push_back(m.alternatives()[i].id);
  return out;
}

struct BenchmarkColumn {
  std::string criterion_id;
  std::vector<std::string> leaders;  // all ids tied at the best score, matrix order
  std::vector<double> scores;        // raw scores, matrix order

  friend bool operator==(const BenchmarkColumn&, const BenchmarkColumn&) = default;
};

inline std::vector<BenchmarkColumn> benchmark_leaders(const DecisionMatrix& m) {
  std::vector<BenchmarkColumn> out;
  for (std::size_t k = 0; k < m.num_criteria(); ++k) {
    const auto dir = m.criteria()[k].direction;
    BenchmarkColumn col{m.criteria()[k].id, {}, m.column(k)};
    double best = oriented(col.scores.front(), dir);
    for (double s : col.scores) best = std::max(best, oriented(s, dir));
    for (std::size_t i = 0; i < m.num_alternatives(); ++i)
      if (oriented(col.scores[i], dir) == best) col.leaders.push_back(m.alternatives()[i].id);
    out.push_back(std::move(col));
  }
  return out;
}

struct RankingReport {
  std::vector<std::string> kernel;
  std::vector<std::vector<std::string>> levels;
  std::vector<std::pair<std::string, std::string>> incomparable_pairs;
  std::vector<PositioningColumn> positioning;
  std::vector<std::pair<std::string, double>> averages;
  std::vector<std::string> average_order;
  std::vector<BenchmarkColumn> benchmark_leaders;
  std::vector<std::pair<std::string, std::string>> edges;
  Provenance provenance;

  friend bool operator==(const RankingReport&, const RankingReport&) = default;
};

inline RankingReport build_report(const DecisionMatrix& m, const OutrankingGraph& g) {
  const auto& weights = g.provenance().weights;
  RankingReport r;
  r.kernel = kernel(g);
  r.levels = dominance_levels(g);
  r.incomparable_pairs = incomparable_pairs(g);
  r.positioning = positioning_table(m);
  const auto avg = average_scores(m, weights);
  for (std::size_t i = 0; i < m.num_alternatives(); ++i) r.averages.emplace_back(m.alternatives()[i].id, avg.values[i]);
  r.average_order = avg.order;
  r.benchmark_leaders = benchmark_leaders(m);
  for (const auto& [i, j] : g.edges()) r.edges.emplace_back(g.nodes()[i].id, g.nodes()[j].id);
  r.provenance = g.provenance();
  return r;
}

inline RankingReport build_report(const DecisionMatrix& m, std::span<const double> weights,
                                  const ThresholdConfig& thresholds) {
  return build_report(m, outrank(m, weights, thresholds));
}

/// Everything computed for one matrix and threshold setting.
struct Analysis {
  ConcordanceAnalysis concordance;
  DiscordanceAnalysis discordance;
  OutrankingGraph graph;
  RankingReport report;
};

inline Analysis analyze(const DecisionMatrix& m, std::span<const double> weights, const ThresholdConfig& thresholds) {
  Analysis a;
  a.graph = outrank(m, weights, thresholds);
  a.concordance = concordance_matrix(m, weights);
  a.discordance = discordance_matrix(m);
  a.report = build_report(m, a.graph);
  return a;
}

}  // namespace electre
