#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "core_model.hpp"
#include "engine.hpp"
#include "ranking.hpp"

namespace electre {

/// FNV-1a over the node count and the row-major edge list, as 16 hex digits.
inline std::string graph_fingerprint(const OutrankingGraph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint32_t v) {
    for (int b = 0; b < 4; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint32_t>(g.size()));
  for (const auto& [i, j] : g.edges()) {
    mix(static_cast<std::uint32_t>(i));
    mix(static_cast<std::uint32_t>(j));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct SweepPoint {
  double c_star = 0.0;
  std::size_t edge_count = 0;
  std::vector<std::string> kernel;
  std::vector<std::vector<std::string>> levels;
  std::string graph_fingerprint;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ascending c_star
  std::vector<double> critical_thresholds;
  Provenance provenance;  // thresholds.c_star is unused here

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

struct ExactSweep {};
using SweepGrid = std::vector<double>;
using SweepMode = std::variant<ExactSweep, SweepGrid>;

/// Concordance values at which the edge set changes: the graph includes an index-v edge for
/// c_star <= v and loses it just above v. Only values carried by a pair that also passes the
/// discordance test count.
inline std::vector<double> critical_thresholds(const DecisionMatrix& m, std::span<const double> weights,
                                               double d_star) {
  const auto conc = concordance_matrix(m, weights);
  std::vector<double> out;
  const auto n = m.num_alternatives();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double c = conc.indices.at(i, j);
      if (c > 0.0 && passes_discordance(m, i, j, d_star)) out.push_back(c);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline SweepPoint sweep_point(const DecisionMatrix& m, std::span<const double> weights, double c_star,
                              double d_star) {
  const auto g = outrank(m, weights, ThresholdConfig{c_star, d_star});
  return SweepPoint{c_star, g.edge_count(), kernel(g), dominance_levels(g), graph_fingerprint(g)};
}

inline SweepResult threshold_sweep(const DecisionMatrix& m, std::span<const double> weights, double d_star,
                                   const SweepMode& mode = ExactSweep{}) {
  require_valid(m);
  SweepResult r;
  r.critical_thresholds = critical_thresholds(m, weights, d_star);
  r.provenance = Provenance{ThresholdConfig{0.0, d_star}, std::vector<double>(weights.begin(), weights.end())};

  std::vector<double> grid;
  if (std::holds_alternative<SweepGrid>(mode)) {
    grid = std::get<SweepGrid>(mode);
    if (grid.empty()) throw Error(ErrorCode::EmptyGrid, "threshold sweep grid is empty");
    for (double c : grid)
      if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::InvalidThresholds, "sweep grid value out of [0,1]");
  } else {
    grid = r.critical_thresholds;
    grid.push_back(0.0);
    grid.push_back(1.0);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  for (double c : grid) r.points.push_back(sweep_point(m, weights, c, d_star));
  return r;
}

struct StabilitySummary {
  std::size_t samples = 0;
  std::size_t kernel_preserved = 0;
  std::size_t levels_preserved = 0;

  double kernel_fraction() const { return samples ? static_cast<double>(kernel_preserved) / samples : 1.0; }
  double levels_fraction() const { return samples ? static_cast<double>(levels_preserved) / samples : 1.0; }
};

/// Shifts each weight uniformly within [-delta, delta] (floored at 0), renormalizes, and counts
/// how often the kernel and the full level structure survive. Deterministic for a given seed.
inline StabilitySummary weight_perturbation(const DecisionMatrix& m, std::span<const double> weights,
                                            const ThresholdConfig& thresholds, double delta, std::size_t samples,
                                            std::uint64_t seed) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidThresholds, "delta must be ≥ 0");
  if (samples == 0) throw Error(ErrorCode::InvalidThresholds, "samples must be ≥ 1");
  const auto base = outrank(m, weights, thresholds);
  const auto base_kernel = kernel(base);
  const auto base_levels = dominance_levels(base);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shift(-delta, delta);
  StabilitySummary s;
  s.samples = samples;
  std::vector<double> w(weights.size());
  for (std::size_t n = 0; n < samples; ++n) {
    double total = 0.0;
    do {
      total = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] = delta > 0.0 ? std::max(0.0, weights[k] + shift(rng)) : weights[k];
        total += w[k];
      }
    } while (!(total > 0.0));
    const auto g = outrank(m, normalize_weights(std::span<const double>(w)), thresholds);
    const auto k = kernel(g);
    if (k == base_kernel) ++s.kernel_preserved;
    if (dominance_levels(g) == base_levels) ++s.levels_preserved;
  }
  return s;
}

}  // namespace electre
