#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core_model.hpp"

namespace electre {

inline constexpr std::size_t kItemsPerAttribute = 6;
inline constexpr std::size_t kAttributes = 4;
inline constexpr std::size_t kSurveyItems = kItemsPerAttribute * kAttributes;
inline constexpr int kLikertMin = 1;
inline constexpr int kLikertMax = 6;

struct SurveyRecord {
  std::string store_id;
  std::string respondent_id;
  // Product x6, Price x6, Promotion x6, Place x6.
  std::array<int, kSurveyItems> items{};

  friend bool operator==(const SurveyRecord&, const SurveyRecord&) = default;
};

struct SurveyDataset {
  std::vector<SurveyRecord> records;
  std::vector<std::string> stores;  // first-appearance order

  std::map<std::string, std::size_t> counts() const {
    std::map<std::string, std::size_t> c;
    for (const auto& s : stores) c[s] = 0;
    for (const auto& r : records) ++c[r.store_id];
    return c;
  }
};

struct SurveyViolation {
  std::size_t line = 0;
  std::string message;
};

struct SurveyParseResult {
  SurveyDataset dataset;
  std::vector<SurveyViolation> violations;
};

struct SurveyParseOptions {
  bool strict = false;
};

/// Correctly rounded sum of doubles (Shewchuk partials). Independent of input order.
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  double value() const {
    if (partials_.empty()) return 0.0;
    auto n = partials_.size();
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // Half-way case: round correctly using the sign of the next partial.
    if (n > 0 && ((lo < 0 && partials_[n - 1] < 0) || (lo > 0 && partials_[n - 1] > 0))) {
      const double y = lo * 2;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits on '\n', dropping a UTF-8 BOM and trailing '\r'.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

inline std::string survey_item_column(std::size_t k) {
  return "p" + std::to_string(k / kItemsPerAttribute + 1) + "_" + std::to_string(k % kItemsPerAttribute + 1);
}

}  // namespace detail

inline std::string survey_header() {
  std::string h = "store,respondent";
  for (std::size_t k = 0; k < kSurveyItems; ++k) h += "," + detail::survey_item_column(k);
  return h;
}

/// Parses `store,respondent,p1_1..p4_6[,extra...]`. Throws MalformedHeader on a bad header;
/// in strict mode the first bad row throws MalformedRecord.
inline SurveyParseResult parse_survey_csv(std::string_view text, SurveyParseOptions options = {}) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::MalformedHeader, "survey CSV is empty");
  const auto header = detail::split_csv_line(lines[0]);
  if (header.size() < 2 + kSurveyItems || detail::trim(header[0]) != "store" ||
      detail::trim(header[1]) != "respondent")
    throw Error(ErrorCode::MalformedHeader, "survey header must start with store,respondent,p1_1,...,p4_6");
  for (std::size_t k = 0; k < kSurveyItems; ++k)
    if (detail::trim(header[2 + k]) != detail::survey_item_column(k))
      throw Error(ErrorCode::MalformedHeader,
                  "survey header column " + std::to_string(k + 3) + " must be " + detail::survey_item_column(k));

  SurveyParseResult result;
  auto declare = [&](const std::string& store) {
    if (std::find(result.dataset.stores.begin(), result.dataset.stores.end(), store) == result.dataset.stores.end())
      result.dataset.stores.push_back(store);
  };
  auto reject = [&](std::size_t line, std::string msg) {
    if (options.strict) throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line) + ": " + msg);
    result.violations.push_back({line, std::move(msg)});
  };

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto line_no = li + 1;
    if (detail::trim(lines[li]).empty()) continue;
    const auto cells = detail::split_csv_line(lines[li]);
    const std::string store(detail::trim(cells[0]));
    if (store.empty()) {
      reject(line_no, "missing store id");
      continue;
    }
    declare(store);
    if (cells.size() < 2 + kSurveyItems) {
      const auto got = cells.size() < 2 ? 0 : cells.size() - 2;
      reject(line_no, "expected 24 items, got " + std::to_string(got));
      continue;
    }
    if (cells.size() > header.size()) {
      reject(line_no, "expected at most " + std::to_string(header.size()) + " columns, got " +
                          std::to_string(cells.size()));
      continue;
    }
    SurveyRecord rec{store, std::string(detail::trim(cells[1])), {}};
    bool ok = true;
    for (std::size_t k = 0; k < kSurveyItems && ok; ++k) {
      const auto cell = detail::trim(cells[2 + k]);
      int v = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        reject(line_no, "item " + detail::survey_item_column(k) + " is not an integer");
        ok = false;
      } else if (v < kLikertMin || v > kLikertMax) {
        reject(line_no, "item out of range [1,6]: " + detail::survey_item_column(k) + " = " + std::to_string(v));
        ok = false;
      } else {
        rec.items[k] = v;
      }
    }
    if (ok) result.dataset.records.push_back(std::move(rec));
  }
  return result;
}

inline const std::array<CriterionSpec, kAttributes>& survey_criteria() {
  static const std::array<CriterionSpec, kAttributes> criteria{{
      {"ATT_1", "Product", Direction::Maximize, 0.25, std::nullopt},
      {"ATT_2", "Price", Direction::Maximize, 0.25, std::nullopt},
      {"ATT_3", "Promotion", Direction::Maximize, 0.25, std::nullopt},
      {"ATT_4", "Place/Distribution", Direction::Maximize, 0.25, std::nullopt},
  }};
  return criteria;
}

/// Per-store attribute means: each respondent's attribute mean, then the mean over respondents.
inline DecisionMatrix aggregate_means(const SurveyDataset& data) {
  std::vector<Alternative> alternatives;
  std::vector<double> scores;
  for (const auto& store : data.stores) {
    std::array<ExactSum, kAttributes> sums;
    std::size_t n = 0;
    for (const auto& r : data.records) {
      if (r.store_id != store) continue;
      ++n;
      for (std::size_t a = 0; a < kAttributes; ++a) {
        int s = 0;
        for (std::size_t q = 0; q < kItemsPerAttribute; ++q) s += r.items[a * kItemsPerAttribute + q];
        sums[a].add(static_cast<double>(s) / static_cast<double>(kItemsPerAttribute));
      }
    }
    if (n == 0) throw Error(ErrorCode::EmptyStore, "store '" + store + "' has no valid survey records");
    alternatives.push_back({store, store});
    for (const auto& s : sums) scores.push_back(s.value() / static_cast<double>(n));
  }
  const auto& crit = survey_criteria();
  return DecisionMatrix(std::move(alternatives), std::vector<CriterionSpec>(crit.begin(), crit.end()),
                        std::move(scores));
}

}  // namespace electre
