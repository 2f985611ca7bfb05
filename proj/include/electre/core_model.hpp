#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace electre {

enum class ErrorCode {
  AllZeroWeights,
  UnnormalizedWeights,
  IndexOutOfRange,
  SelfComparison,
  InvalidMatrix,
  InvalidThresholds,
  MalformedHeader,
  MalformedRecord,
  EmptyStore,
  EmptyGrid,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Tolerance on |sum(w) - 1| accepted as "normalized".
inline constexpr double kWeightSumTolerance = 1e-9;

enum class Direction { Maximize, Minimize };

struct Alternative {
  std::string id;
  std::string label;

  friend bool operator==(const Alternative&, const Alternative&) = default;
};

struct CriterionSpec {
  std::string id;
  std::string label;
  Direction direction = Direction::Maximize;
  double weight = 1.0;
  // Per-criterion veto on the opposing score difference.
  std::optional<double> veto;

  friend bool operator==(const CriterionSpec&, const CriterionSpec&) = default;
};

/// Alternatives x criteria performance table, row-major.
class DecisionMatrix {
 public:
  DecisionMatrix() = default;

  DecisionMatrix(std::vector<Alternative> alternatives, std::vector<CriterionSpec> criteria,
                 std::vector<double> scores)
      : alternatives_(std::move(alternatives)),
        criteria_(std::move(criteria)),
        scores_(std::move(scores)) {}

  DecisionMatrix(std::vector<Alternative> alternatives, std::vector<CriterionSpec> criteria,
                 const std::vector<std::vector<double>>& rows)
      : alternatives_(std::move(alternatives)), criteria_(std::move(criteria)) {
    for (const auto& row : rows) {
      row_widths_.push_back(row.size());
      scores_.insert(scores_.end(), row.begin(), row.end());
    }
  }

  std::size_t num_alternatives() const noexcept { return alternatives_.size(); }
  std::size_t num_criteria() const noexcept { return criteria_.size(); }

  const std::vector<Alternative>& alternatives() const noexcept { return alternatives_; }
  const std::vector<CriterionSpec>& criteria() const noexcept { return criteria_; }
  std::vector<CriterionSpec>& criteria() noexcept { return criteria_; }
  const std::vector<double>& scores() const noexcept { return scores_; }

  double score(std::size_t alt, std::size_t crit) const { return scores_[alt * criteria_.size() + crit]; }
  double& score(std::size_t alt, std::size_t crit) { return scores_[alt * criteria_.size() + crit]; }

  std::span<const double> row(std::size_t alt) const {
    return std::span<const double>(scores_).subspan(alt * criteria_.size(), criteria_.size());
  }

  std::vector<double> column(std::size_t crit) const {
    std::vector<double> out;
    out.reserve(num_alternatives());
    for (std::size_t i = 0; i < num_alternatives(); ++i) out.push_back(score(i, crit));
    return out;
  }

  std::vector<double> weights() const {
    std::vector<double> w;
    w.reserve(criteria_.size());
    for (const auto& c : criteria_) w.push_back(c.weight);
    return w;
  }

  // Widths of the rows passed to the nested-vector constructor; empty otherwise.
  const std::vector<std::size_t>& row_widths() const noexcept { return row_widths_; }

  std::optional<std::size_t> index_of(std::string_view id) const {
    for (std::size_t i = 0; i < alternatives_.size(); ++i)
      if (alternatives_[i].id == id) return i;
    return std::nullopt;
  }

  friend bool operator==(const DecisionMatrix& a, const DecisionMatrix& b) {
    return a.alternatives_ == b.alternatives_ && a.criteria_ == b.criteria_ && a.scores_ == b.scores_;
  }

 private:
  std::vector<Alternative> alternatives_;
  std::vector<CriterionSpec> criteria_;
  std::vector<double> scores_;
  std::vector<std::size_t> row_widths_;
};

struct ThresholdConfig {
  double c_star = 0.75;
  double d_star = kUnbounded;

  friend bool operator==(const ThresholdConfig&, const ThresholdConfig&) = default;
};

struct Violation {
  std::string path;
  std::string message;
  // Cell coordinates, when the violation concerns a single score.
  std::optional<std::pair<std::size_t, std::size_t>> cell;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  explicit operator bool() const noexcept { return ok(); }
};

inline std::string cell_path(std::size_t i, std::size_t j) {
  return "scores[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

inline ValidationResult validate_matrix(const DecisionMatrix& m) {
  ValidationResult r;
  auto add = [&](std::string path, std::string msg) { r.violations.push_back({std::move(path), std::move(msg), {}}); };

  if (m.num_alternatives() < 2) add("alternatives", "need ≥ 2 alternatives");
  if (m.num_criteria() < 1) add("criteria", "need ≥ 1 criterion");

  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < m.num_alternatives(); ++i) {
    const auto& id = m.alternatives()[i].id;
    const auto path = "alternatives[" + std::to_string(i) + "].id";
    if (id.empty()) add(path, "alternative id must be nonempty");
    else if (!seen.insert(id).second) add(path, "duplicate alternative id '" + id + "'");
  }

  seen.clear();
  bool any_positive = false;
  for (std::size_t j = 0; j < m.num_criteria(); ++j) {
    const auto& c = m.criteria()[j];
    const auto base = "criteria[" + std::to_string(j) + "]";
    if (c.id.empty()) add(base + ".id", "criterion id must be nonempty");
    else if (!seen.insert(c.id).second) add(base + ".id", "duplicate criterion id '" + c.id + "'");
    if (!std::isfinite(c.weight) || c.weight < 0) add(base + ".weight", "weight must be a finite nonnegative number");
    else if (c.weight > 0) any_positive = true;
    if (c.veto && (std::isnan(*c.veto) || *c.veto < 0)) add(base + ".veto", "veto must be nonnegative");
  }
  if (m.num_criteria() > 0 && !any_positive) add("criteria", "at least one criterion weight must be > 0");

  if (!m.row_widths().empty()) {
    const auto before = r.violations.size();
    if (m.row_widths().size() != m.num_alternatives())
      add("scores", "expected " + std::to_string(m.num_alternatives()) + " rows, got " +
                        std::to_string(m.row_widths().size()));
    for (std::size_t i = 0; i < m.row_widths().size(); ++i)
      if (m.row_widths()[i] != m.num_criteria())
        add("scores[" + std::to_string(i) + "]", "row has " + std::to_string(m.row_widths()[i]) +
                                                     " scores, expected " + std::to_string(m.num_criteria()));
    if (r.violations.size() != before) return r;
  }
  if (m.scores().size() != m.num_alternatives() * m.num_criteria()) {
    add("scores", "matrix is not rectangular: " + std::to_string(m.scores().size()) + " scores for " +
                      std::to_string(m.num_alternatives()) + "x" + std::to_string(m.num_criteria()));
    return r;
  }
  for (std::size_t i = 0; i < m.num_alternatives(); ++i)
    for (std::size_t j = 0; j < m.num_criteria(); ++j)
      if (!std::isfinite(m.score(i, j)))
        r.violations.push_back({cell_path(i, j), "score at (" + std::to_string(i) + "," + std::to_string(j) +
                                                     ") is not finite",
                                std::pair{i, j}});
  return r;
}

inline ValidationResult validate_thresholds(const ThresholdConfig& t) {
  ValidationResult r;
  if (!(t.c_star >= 0.0 && t.c_star <= 1.0)) r.violations.push_back({"c_star", "c_star out of [0,1]", {}});
  if (!(t.d_star >= 0.0)) r.violations.push_back({"d_star", "d_star must be ≥ 0 or unbounded", {}});
  return r;
}

inline std::vector<double> normalize_weights(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0) throw Error(ErrorCode::InvalidMatrix, "weights must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0)) throw Error(ErrorCode::AllZeroWeights, "every criterion weight is zero");
  std::vector<double> out;
  out.reserve(weights.size());
  for (double w : weights) out.push_back(w / total);
  return out;
}

inline std::vector<CriterionSpec> normalize_weights(std::vector<CriterionSpec> criteria) {
  std::vector<double> w;
  for (const auto& c : criteria) w.push_back(c.weight);
  const auto n = normalize_weights(std::span<const double>(w));
  for (std::size_t j = 0; j < criteria.size(); ++j) criteria[j].weight = n[j];
  return criteria;
}

inline bool is_normalized(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0)) return false;
    total += w;
  }
  return std::abs(total - 1.0) <= kWeightSumTolerance;
}

/// Equivalent maximize-only matrix: minimize columns are negated.
inline DecisionMatrix apply_directions(const DecisionMatrix& m) {
  auto criteria = m.criteria();
  auto scores = m.scores();
  const auto ncrit = criteria.size();
  for (std::size_t j = 0; j < ncrit; ++j) {
    if (criteria[j].direction != Direction::Minimize) continue;
    criteria[j].direction = Direction::Maximize;
    for (std::size_t i = 0; i < m.num_alternatives(); ++i) scores[i * ncrit + j] = -scores[i * ncrit + j];
  }
  return DecisionMatrix(m.alternatives(), std::move(criteria), std::move(scores));
}

// Score as seen by a maximize-only comparison.
inline double oriented(double score, Direction d) noexcept { return d == Direction::Minimize ? -score : score; }

inline void require_valid(const DecisionMatrix& m) {
  auto r = validate_matrix(m);
  if (!r.ok()) throw Error(ErrorCode::InvalidMatrix, r.violations.front().message);
}

}  // namespace electre
