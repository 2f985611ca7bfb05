#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "core_model.hpp"
#include "engine.hpp"
#include "ranking.hpp"
#include "sensitivity.hpp"
#include "survey.hpp"

namespace electre {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Decision-matrix CSV

namespace detail {

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

}  // namespace detail

/// Reads `alternative,<crit...>` rows plus an optional trailing `#weights` row. Criteria
/// default to maximize with weight 1; labels default to ids.
inline DecisionMatrix parse_matrix_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::size_t first = 0;
  while (first < lines.size() && detail::trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw Error(ErrorCode::ParseError, "matrix CSV is empty");

  const auto header = detail::split_csv_line(lines[first]);
  if (detail::trim(header[0]) != "alternative")
    throw Error(ErrorCode::ParseError, "line " + std::to_string(first + 1) + ": header must start with 'alternative'");
  std::vector<CriterionSpec> criteria;
  for (std::size_t k = 1; k < header.size(); ++k) {
    const std::string id(detail::trim(header[k]));
    criteria.push_back({id, id, Direction::Maximize, 1.0, std::nullopt});
  }

  std::vector<Alternative> alternatives;
  std::vector<std::vector<double>> rows;
  bool saw_weights = false;
  for (std::size_t li = first + 1; li < lines.size(); ++li) {
    const auto line_no = std::to_string(li + 1);
    if (detail::trim(lines[li]).empty()) continue;
    if (saw_weights) throw Error(ErrorCode::ParseError, "line " + line_no + ": rows after #weights");
    const auto cells = detail::split_csv_line(lines[li]);
    const std::string id(detail::trim(cells[0]));
    std::vector<double> values;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      const auto v = detail::parse_double(cells[k]);
      if (!v)
        throw Error(ErrorCode::ParseError, "line " + line_no + ", column " + std::to_string(k + 1) +
                                               ": not a number: '" + std::string(detail::trim(cells[k])) + "'");
      values.push_back(*v);
    }
    if (id == "#weights") {
      if (values.size() != criteria.size())
        throw Error(ErrorCode::ParseError, "line " + line_no + ": #weights row has " + std::to_string(values.size()) +
                                               " values, expected " + std::to_string(criteria.size()));
      for (std::size_t k = 0; k < values.size(); ++k) criteria[k].weight = values[k];
      saw_weights = true;
      continue;
    }
    alternatives.push_back({id, id});
    rows.push_back(std::move(values));
  }
  return DecisionMatrix(std::move(alternatives), std::move(criteria), rows);
}

inline std::string write_matrix_csv(const DecisionMatrix& m) {
  std::string out = "alternative";
  for (const auto& c : m.criteria()) out += "," + c.id;
  out += "\n";
  for (std::size_t i = 0; i < m.num_alternatives(); ++i) {
    out += m.alternatives()[i].id;
    for (std::size_t k = 0; k < m.num_criteria(); ++k) out += "," + detail::format_number(m.score(i, k));
    out += "\n";
  }
  out += "#weights";
  for (const auto& c : m.criteria()) out += "," + detail::format_number(c.weight);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// JSON schemas

namespace detail {

inline void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& path,
                           std::vector<Violation>& out) {
  for (const auto& [key, _] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      out.push_back({path.empty() ? key : path + "." + key, "unknown field", {}});
}

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

}  // namespace detail

inline std::string to_string(Direction d) { return d == Direction::Minimize ? "minimize" : "maximize"; }

inline json d_star_to_json(double d) { return std::isinf(d) ? json("inf") : json(d); }

/// Accepts a nonnegative number, "inf", or null (unbounded).
inline std::optional<double> d_star_from_json(const json& j) {
  if (j.is_null()) return kUnbounded;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "unbounded") return kUnbounded;
    return std::nullopt;
  }
  if (j.is_number()) return j.get<double>();
  return std::nullopt;
}

/// `{id, label?, direction, weight, veto?}`, appending violations under `path`.
inline std::optional<CriterionSpec> criterion_from_json(const json& j, const std::string& path,
                                                        std::vector<Violation>& out) {
  const auto before = out.size();
  if (!j.is_object()) {
    out.push_back({path, "criterion must be an object", {}});
    return std::nullopt;
  }
  detail::reject_unknown(j, {"id", "label", "direction", "weight", "veto"}, path, out);
  CriterionSpec c;
  if (!j.contains("id") || !j["id"].is_string()) out.push_back({detail::join_path(path, "id"), "id must be a string", {}});
  else c.id = j["id"].get<std::string>();
  c.label = c.id;
  if (j.contains("label")) {
    if (j["label"].is_string()) c.label = j["label"].get<std::string>();
    else out.push_back({detail::join_path(path, "label"), "label must be a string", {}});
  }
  if (j.contains("direction")) {
    const auto& d = j["direction"];
    if (d == "maximize") c.direction = Direction::Maximize;
    else if (d == "minimize") c.direction = Direction::Minimize;
    else out.push_back({detail::join_path(path, "direction"), "direction must be \"maximize\" or \"minimize\"", {}});
  }
  if (!j.contains("weight") || !j["weight"].is_number())
    out.push_back({detail::join_path(path, "weight"), "weight must be a number", {}});
  else c.weight = j["weight"].get<double>();
  if (j.contains("veto") && !j["veto"].is_null()) {
    const auto v = d_star_from_json(j["veto"]);
    if (!v) out.push_back({detail::join_path(path, "veto"), "veto must be a number or \"inf\"", {}});
    else if (!std::isinf(*v)) c.veto = *v;
  }
  if (out.size() != before) return std::nullopt;
  return c;
}

inline json criterion_to_json(const CriterionSpec& c) {
  json j{{"id", c.id}, {"label", c.label}, {"direction", to_string(c.direction)}, {"weight", c.weight}};
  if (c.veto) j["veto"] = *c.veto;
  return j;
}

/// Criteria config file: a JSON array of criterion objects.
inline std::vector<CriterionSpec> parse_criteria_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("criteria JSON: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "criteria JSON must be an array");
  std::vector<Violation> violations;
  std::vector<CriterionSpec> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    if (auto c = criterion_from_json(j[k], "[" + std::to_string(k) + "]", violations)) out.push_back(*c);
  if (!violations.empty())
    throw Error(ErrorCode::ParseError, "criteria JSON " + violations.front().path + ": " + violations.front().message);
  return out;
}

/// Replaces the matrix criteria by the configured ones, matched by exact id.
inline DecisionMatrix apply_criteria(const DecisionMatrix& m, const std::vector<CriterionSpec>& config) {
  if (config.size() != m.num_criteria())
    throw Error(ErrorCode::InvalidMatrix, "criteria config has " + std::to_string(config.size()) +
                                              " entries, matrix has " + std::to_string(m.num_criteria()));
  std::vector<CriterionSpec> criteria;
  for (const auto& c : m.criteria()) {
    auto it = std::find_if(config.begin(), config.end(), [&](const CriterionSpec& x) { return x.id == c.id; });
    if (it == config.end()) throw Error(ErrorCode::InvalidMatrix, "criteria config has no entry for '" + c.id + "'");
    criteria.push_back(*it);
  }
  return DecisionMatrix(m.alternatives(), std::move(criteria), m.scores());
}

inline json matrix_to_json(const DecisionMatrix& m) {
  json alts = json::array();
  for (const auto& a : m.alternatives()) alts.push_back({{"id", a.id}, {"label", a.label}});
  json crits = json::array();
  for (const auto& c : m.criteria()) crits.push_back(criterion_to_json(c));
  json scores = json::array();
  for (std::size_t i = 0; i < m.num_alternatives(); ++i) {
    const auto row = m.row(i);
    scores.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"alternatives", alts}, {"criteria", crits}, {"scores", scores}};
}

/// Inline matrix `{alternatives, criteria, scores}`. Structural problems are reported under `path`;
/// core-model invariants are checked separately with validate_matrix.
inline std::optional<DecisionMatrix> matrix_from_json(const json& j, const std::string& path,
                                                      std::vector<Violation>& out) {
  const auto before = out.size();
  if (!j.is_object()) {
    out.push_back({path, "matrix must be an object", {}});
    return std::nullopt;
  }
  detail::reject_unknown(j, {"alternatives", "criteria", "scores"}, path, out);

  std::vector<Alternative> alternatives;
  const auto alt_path = detail::join_path(path, "alternatives");
  if (!j.contains("alternatives") || !j["alternatives"].is_array()) {
    out.push_back({alt_path, "alternatives must be an array", {}});
  } else {
    const auto& arr = j["alternatives"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto p = alt_path + "[" + std::to_string(i) + "]";
      const auto& a = arr[i];
      if (a.is_string()) {
        alternatives.push_back({a.get<std::string>(), a.get<std::string>()});
        continue;
      }
      if (!a.is_object() || !a.contains("id") || !a["id"].is_string()) {
        out.push_back({p, "alternative must be an id string or {id, label?}", {}});
        continue;
      }
      detail::reject_unknown(a, {"id", "label"}, p, out);
      Alternative alt{a["id"].get<std::string>(), a["id"].get<std::string>()};
      if (a.contains("label")) {
        if (a["label"].is_string()) alt.label = a["label"].get<std::string>();
        else out.push_back({p + ".label", "label must be a string", {}});
      }
      alternatives.push_back(std::move(alt));
    }
  }

  std::vector<CriterionSpec> criteria;
  const auto crit_path = detail::join_path(path, "criteria");
  if (!j.contains("criteria") || !j["criteria"].is_array()) {
    out.push_back({crit_path, "criteria must be an array", {}});
  } else {
    const auto& arr = j["criteria"];
    for (std::size_t k = 0; k < arr.size(); ++k)
      if (auto c = criterion_from_json(arr[k], crit_path + "[" + std::to_string(k) + "]", out)) criteria.push_back(*c);
  }

  std::vector<std::vector<double>> rows;
  const auto score_path = detail::join_path(path, "scores");
  if (!j.contains("scores") || !j["scores"].is_array()) {
    out.push_back({score_path, "scores must be an array of rows", {}});
  } else {
    const auto& arr = j["scores"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto p = score_path + "[" + std::to_string(i) + "]";
      if (!arr[i].is_array()) {
        out.push_back({p, "score row must be an array", {}});
        continue;
      }
      std::vector<double> row;
      for (std::size_t k = 0; k < arr[i].size(); ++k) {
        if (!arr[i][k].is_number()) {
          out.push_back({p + "[" + std::to_string(k) + "]", "score must be a number", {}});
          row.push_back(0.0);
        } else {
          row.push_back(arr[i][k].get<double>());
        }
      }
      rows.push_back(std::move(row));
    }
  }
  if (out.size() != before) return std::nullopt;
  return DecisionMatrix(std::move(alternatives), std::move(criteria), rows);
}

inline json provenance_to_json(const Provenance& p) {
  return {{"c_star", p.thresholds.c_star}, {"d_star", d_star_to_json(p.thresholds.d_star)}, {"weights", p.weights}};
}

inline Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.thresholds.c_star = j.at("c_star").get<double>();
  p.thresholds.d_star = d_star_from_json(j.at("d_star")).value_or(kUnbounded);
  p.weights = j.at("weights").get<std::vector<double>>();
  return p;
}

inline json report_to_json(const RankingReport& r) {
  json j;
  j["kernel"] = r.kernel;
  j["levels"] = r.levels;
  json pairs = json::array();
  for (const auto& [a, b] : r.incomparable_pairs) pairs.push_back({a, b});
  j["incomparable_pairs"] = pairs;
  json positioning = json::array();
  for (const auto& col : r.positioning) {
    json entries = json::array();
    for (const auto& e : col.entries) entries.push_back({{"id", e.id}, {"rank", e.rank}, {"score", e.score}});
    positioning.push_back({{"criterion", col.criterion_id}, {"ranking", entries}});
  }
  j["positioning"] = positioning;
  json averages = json::array();
  for (const auto& [id, v] : r.averages) averages.push_back({{"id", id}, {"average", v}});
  j["averages"] = averages;
  j["average_order"] = r.average_order;
  json leaders = json::array();
  for (const auto& col : r.benchmark_leaders)
    leaders.push_back({{"criterion", col.criterion_id}, {"leaders", col.leaders}, {"scores", col.scores}});
  j["benchmark_leaders"] = leaders;
  json edges = json::array();
  for (const auto& [a, b] : r.edges) edges.push_back({a, b});
  j["edges"] = edges;
  j["provenance"] = provenance_to_json(r.provenance);
  return j;
}

inline RankingReport report_from_json(const json& j) {
  RankingReport r;
  r.kernel = j.at("kernel").get<std::vector<std::string>>();
  r.levels = j.at("levels").get<std::vector<std::vector<std::string>>>();
  for (const auto& p : j.at("incomparable_pairs")) r.incomparable_pairs.emplace_back(p.at(0), p.at(1));
  for (const auto& col : j.at("positioning")) {
    PositioningColumn c{col.at("criterion").get<std::string>(), {}};
    for (const auto& e : col.at("ranking"))
      c.entries.push_back({e.at("id").get<std::string>(), e.at("rank").get<std::size_t>(), e.at("score").get<double>()});
    r.positioning.push_back(std::move(c));
  }
  for (const auto& a : j.at("averages")) r.averages.emplace_back(a.at("id").get<std::string>(), a.at("average").get<double>());
  r.average_order = j.at("average_order").get<std::vector<std::string>>();
  for (const auto& col : j.at("benchmark_leaders"))
    r.benchmark_leaders.push_back({col.at("criterion").get<std::string>(),
                                   col.at("leaders").get<std::vector<std::string>>(),
                                   col.at("scores").get<std::vector<double>>()});
  for (const auto& e : j.at("edges")) r.edges.emplace_back(e.at(0), e.at(1));
  r.provenance = provenance_from_json(j.at("provenance"));
  return r;
}

inline json concordance_to_json(const ConcordanceAnalysis& c) {
  json sets = json::array();
  json indices = json::array();
  for (std::size_t i = 0; i < c.indices.size(); ++i) {
    json srow = json::array();
    json irow = json::array();
    for (std::size_t j = 0; j < c.indices.size(); ++j) {
      if (i == j) {
        srow.push_back(nullptr);
        irow.push_back(nullptr);
      } else {
        srow.push_back(c.sets.at(i, j));
        irow.push_back(c.indices.at(i, j));
      }
    }
    sets.push_back(srow);
    indices.push_back(irow);
  }
  return {{"sets", sets}, {"indices", indices}};
}

inline json discordance_to_json(const DiscordanceAnalysis& d) { return {{"distances", d.distances}}; }

inline json sweep_to_json(const SweepResult& s) {
  json points = json::array();
  for (const auto& p : s.points)
    points.push_back({{"c_star", p.c_star},
                      {"edge_count", p.edge_count},
                      {"kernel", p.kernel},
                      {"levels", p.levels},
                      {"graph_fingerprint", p.graph_fingerprint}});
  return {{"points", points},
          {"critical_thresholds", s.critical_thresholds},
          {"provenance", {{"d_star", d_star_to_json(s.provenance.thresholds.d_star)}, {"weights", s.provenance.weights}}}};
}

inline json stability_to_json(const StabilitySummary& s, double delta, std::uint64_t seed) {
  return {{"delta", delta},
          {"samples", s.samples},
          {"seed", seed},
          {"kernel_preserved", s.kernel_fraction()},
          {"levels_preserved", s.levels_fraction()}};
}

// ---------------------------------------------------------------------------
// Human-readable renderings

namespace detail {

inline std::string braces(const std::vector<std::string>& ids) {
  return "{" + fmt::format("{}", fmt::join(ids, ", ")) + "}";
}

inline std::string one_based(const CriterionSet& s) {
  std::vector<std::string> parts;
  for (auto k : s) parts.push_back(std::to_string(k + 1));
  return "{" + fmt::format("{}", fmt::join(parts, ",")) + "}";
}

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Plain-text report laid out like the usual ELECTRE I tables.
inline std::string render_text(const DecisionMatrix& m, const Analysis& a) {
  const auto& r = a.report;
  const auto n = m.num_alternatives();
  std::size_t w = 6;
  for (const auto& alt : m.alternatives()) w = std::max(w, alt.id.size() + 2);
  std::size_t sw = w;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) sw = std::max(sw, detail::one_based(a.concordance.sets.at(i, j)).size() + 2);

  std::string out;
  auto line = [&out](const std::string& s) { out += s + "\n"; };
  auto header_row = [&](std::size_t width) {
    std::string row = fmt::format("{:<{}}", "", w);
    for (const auto& alt : m.alternatives()) row += fmt::format("{:<{}}", alt.id, width);
    line(row);
  };
  auto table = [&](const std::string& title, std::size_t width, auto cell) {
    line(title);
    header_row(width);
    for (std::size_t i = 0; i < n; ++i) {
      std::string row = fmt::format("{:<{}}", m.alternatives()[i].id, w);
      for (std::size_t j = 0; j < n; ++j) row += fmt::format("{:<{}}", i == j ? std::string("-") : cell(i, j), width);
      while (!row.empty() && row.back() == ' ') row.pop_back();
      line(row);
    }
    line("");
  };

  line("ELECTRE I outranking report");
  line(fmt::format("c_star: {}", detail::format_number(r.provenance.thresholds.c_star)));
  line(fmt::format("d_star: {}", detail::format_number(r.provenance.thresholds.d_star)));
  std::string crit = "criteria:";
  for (std::size_t k = 0; k < m.num_criteria(); ++k)
    crit += fmt::format(" {}={}({:.4f}{})", k + 1, m.criteria()[k].id, r.provenance.weights[k],
                        m.criteria()[k].direction == Direction::Minimize ? ", min" : "");
  line(crit);
  line("");

  table("Concordance sets", sw, [&](std::size_t i, std::size_t j) { return detail::one_based(a.concordance.sets.at(i, j)); });
  table("Concordance matrix", w, [&](std::size_t i, std::size_t j) { return fmt::format("{:.2f}", a.concordance.indices.at(i, j)); });
  table("Discordance matrix", w, [&](std::size_t i, std::size_t j) { return fmt::format("{:.2f}", a.discordance.distances[i][j]); });
  table(fmt::format("Concordance test (C >= {})", detail::format_number(r.provenance.thresholds.c_star)), w,
        [&](std::size_t i, std::size_t j) {
          return std::string(concordance_test(a.concordance.indices.at(i, j), r.provenance.thresholds.c_star) ? "1" : "0");
        });
  table("Outranking relation S", w, [&](std::size_t i, std::size_t j) { return std::string(a.graph.has_edge(i, j) ? "1" : "0"); });

  line(fmt::format("Edges ({}):", r.edges.size()));
  for (const auto& [from, to] : r.edges) line(fmt::format("  {} -> {}", from, to));
  line(fmt::format("Kernel: {}", detail::braces(r.kernel)));
  line("Levels:");
  for (std::size_t l = 0; l < r.levels.size(); ++l) line(fmt::format("  {}: {}", l + 1, detail::braces(r.levels[l])));
  std::vector<std::string> pairs;
  for (const auto& [x, y] : r.incomparable_pairs) pairs.push_back("(" + x + ", " + y + ")");
  line(fmt::format("Incomparable pairs: {}", pairs.empty() ? std::string("none") : fmt::format("{}", fmt::join(pairs, " "))));
  line("");

  line("Positioning");
  for (const auto& col : r.positioning) {
    std::vector<std::string> entries;
    for (const auto& e : col.entries) entries.push_back(fmt::format("{}. {}", e.rank, e.id));
    line(fmt::format("  {}: {}", col.criterion_id, fmt::join(entries, ", ")));
  }
  line("Averages");
  for (const auto& [id, v] : r.averages) line(fmt::format("  {}: {:.4f}", id, v));
  line(fmt::format("  order: {}", fmt::join(r.average_order, ", ")));
  line("Benchmark leaders");
  for (const auto& col : r.benchmark_leaders) line(fmt::format("  {}: {}", col.criterion_id, fmt::join(col.leaders, ", ")));
  return out;
}

/// Graphviz digraph; kernel members carry `kernel=true`, edges carry C(i,j) to 2 decimals.
inline std::string render_dot(const Analysis& a) {
  const auto& g = a.graph;
  const auto levels = dominance_level_indices(g);
  std::vector<std::size_t> level_of(g.size(), 0);
  for (std::size_t l = 0; l < levels.size(); ++l)
    for (auto i : levels[l]) level_of[i] = l + 1;
  const auto kern = kernel_indices(g);

  std::string out = "digraph outranking {\n  rankdir=TB;\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool in_kernel = std::binary_search(kern.begin(), kern.end(), i);
    const auto& node = g.nodes()[i];
    out += fmt::format("  {} [label={}, kernel={}, level={}{}];\n", detail::dot_quote(node.id),
                       detail::dot_quote(node.label.empty() ? node.id : node.label), in_kernel ? "true" : "false",
                       level_of[i], in_kernel ? ", peripheries=2" : "");
  }
  for (const auto& [i, j] : g.edges())
    out += fmt::format("  {} -> {} [label=\"{:.2f}\"];\n", detail::dot_quote(g.nodes()[i].id),
                       detail::dot_quote(g.nodes()[j].id), a.concordance.indices.at(i, j));
  out += "}\n";
  return out;
}

}  // namespace electre
