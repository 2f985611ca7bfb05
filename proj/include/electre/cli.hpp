#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "core_model.hpp"
#include "io.hpp"
#include "ranking.hpp"
#include "sensitivity.hpp"
#include "service.hpp"
#include "survey.hpp"
#include "version.hpp"

namespace electre::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

struct Config {
  std::string command;
  std::string matrix_path;
  std::string survey_path;
  std::string criteria_path;
  std::string output_path;  // empty: standard output
  std::string format = "text";
  double c_star = 0.75;
  std::string d_star = "inf";
  bool strict = false;
  std::optional<std::uint64_t> seed;
  std::vector<double> grid;
  std::optional<double> perturb_delta;
  std::size_t samples = 1000;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string static_dir;
};

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline double parse_d_star(const std::string& s) {
  if (s == "inf" || s == "unbounded") return kUnbounded;
  const auto v = electre::detail::parse_double(s);
  if (!v || *v < 0) throw UsageError("--d-star must be a nonnegative number or 'inf', got '" + s + "'");
  return *v;
}

inline DecisionMatrix load_matrix(const Config& cfg) {
  auto m = parse_matrix_csv(read_file(cfg.matrix_path));
  if (!cfg.criteria_path.empty()) m = apply_criteria(m, parse_criteria_json(read_file(cfg.criteria_path)));
  auto v = validate_matrix(m);
  if (!v.ok()) {
    std::string msg = "invalid decision matrix:";
    for (const auto& x : v.violations) msg += "\n  " + x.path + ": " + x.message;
    throw Error(ErrorCode::InvalidMatrix, msg);
  }
  return m;
}

inline std::vector<double> matrix_weights(const DecisionMatrix& m) {
  const auto w = m.weights();
  return normalize_weights(std::span<const double>(w));
}

inline std::string render_sweep_text(const SweepResult& s) {
  std::vector<std::string> crit;
  for (double c : s.critical_thresholds) crit.push_back(electre::detail::format_number(c));
  std::string out = fmt::format("Threshold sweep (d_star: {})\n",
                                electre::detail::format_number(s.provenance.thresholds.d_star));
  out += fmt::format("critical thresholds: {}\n", fmt::join(crit, ", "));
  out += fmt::format("{:<10}{:<8}{:<18}{}\n", "c_star", "edges", "fingerprint", "levels");
  for (const auto& p : s.points) {
    std::vector<std::string> levels;
    for (const auto& l : p.levels) levels.push_back(electre::detail::braces(l));
    out += fmt::format("{:<10}{:<8}{:<18}{}\n", electre::detail::format_number(p.c_star), p.edge_count,
                       p.graph_fingerprint, fmt::join(levels, " > "));
  }
  return out;
}

inline void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output_path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + cfg.output_path + "'");
  f << text;
}

inline int cmd_ingest(const Config& cfg, std::ostream& out, std::ostream& err) {
  const auto parsed = parse_survey_csv(read_file(cfg.survey_path), SurveyParseOptions{cfg.strict});
  for (const auto& v : parsed.violations) err << "warning: line " << v.line << ": " << v.message << "\n";
  const auto m = aggregate_means(parsed.dataset);
  for (const auto& [store, n] : parsed.dataset.counts()) err << "store " << store << ": " << n << " respondents\n";
  emit(cfg, cfg.format == "json" ? matrix_to_json(m).dump(2) + "\n" : write_matrix_csv(m), out);
  return kOk;
}

inline int cmd_rank(const Config& cfg, std::ostream& out) {
  const auto m = load_matrix(cfg);
  const auto w = matrix_weights(m);
  const auto a = analyze(m, w, ThresholdConfig{cfg.c_star, parse_d_star(cfg.d_star)});
  std::string text;
  if (cfg.format == "json") text = report_to_json(a.report).dump(2) + "\n";
  else if (cfg.format == "dot") text = render_dot(a);
  else text = render_text(m, a);
  emit(cfg, text, out);
  return kOk;
}

inline int cmd_sweep(const Config& cfg, std::ostream& out) {
  const auto m = load_matrix(cfg);
  const auto w = matrix_weights(m);
  const double d_star = parse_d_star(cfg.d_star);
  const auto sweep = cfg.grid.empty() ? threshold_sweep(m, w, d_star) : threshold_sweep(m, w, d_star, SweepGrid(cfg.grid));
  std::optional<StabilitySummary> stability;
  const auto seed = cfg.seed.value_or(0);
  if (cfg.perturb_delta)
    stability = weight_perturbation(m, w, ThresholdConfig{cfg.c_star, d_star}, *cfg.perturb_delta, cfg.samples, seed);

  std::string text;
  if (cfg.format == "json") {
    auto j = sweep_to_json(sweep);
    if (stability) j["stability"] = stability_to_json(*stability, *cfg.perturb_delta, seed);
    text = j.dump(2) + "\n";
  } else {
    text = render_sweep_text(sweep);
    if (stability)
      text += fmt::format("weight perturbation (delta {}, {} samples, seed {}, c_star {}): kernel preserved {:.4f}, "
                          "levels preserved {:.4f}\n",
                          electre::detail::format_number(*cfg.perturb_delta), stability->samples, seed,
                          electre::detail::format_number(cfg.c_star), stability->kernel_fraction(),
                          stability->levels_fraction());
  }
  emit(cfg, text, out);
  return kOk;
}

inline int cmd_serve(const Config& cfg, std::ostream& err) {
  httplib::Server server;
  std::optional<std::string> static_dir;
  if (!cfg.static_dir.empty()) static_dir = cfg.static_dir;
  service::install_routes(server, service::Options{}, static_dir);
  if (!server.bind_to_port(cfg.host, cfg.port)) throw UsageError("cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
  err << "electre " << kVersion << " listening on " << cfg.host << ":" << cfg.port << "\n";
  server.listen_after_bind();
  return kOk;
}

}  // namespace detail

/// Runs one command line. Exit codes: 0 success, 1 data validation failure, 2 usage or I/O error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"ELECTRE I outranking analysis"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto add_threshold_flags = [&cfg](CLI::App* sub) {
    sub->add_option("--matrix", cfg.matrix_path, "decision-matrix CSV")->required();
    sub->add_option("--criteria", cfg.criteria_path, "criteria config JSON (directions, weights, vetoes)");
    sub->add_option("--c-star", cfg.c_star, "concordance threshold C*")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--d-star", cfg.d_star, "discordance threshold D*, or 'inf'");
    sub->add_option("-o,--output", cfg.output_path, "output file (default: standard output)");
  };

  auto* ingest = app.add_subcommand("ingest", "aggregate a Likert survey CSV into a decision matrix");
  ingest->add_option("--survey", cfg.survey_path, "survey CSV")->required();
  ingest->add_flag("--strict", cfg.strict, "abort on the first malformed row");
  ingest->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  ingest->add_option("-o,--output", cfg.output_path, "output file (default: standard output)");

  auto* rank = app.add_subcommand("rank", "outrank a decision matrix and report the ranking");
  add_threshold_flags(rank);
  rank->add_option("--format", cfg.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));

  auto* dot = app.add_subcommand("export-dot", "write the outranking graph as Graphviz DOT");
  add_threshold_flags(dot);
  dot->add_option("--format", cfg.format, "ignored; always dot");

  auto* sweep = app.add_subcommand("sweep", "sweep the concordance threshold");
  add_threshold_flags(sweep);
  sweep->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  sweep->add_option("--grid", cfg.grid, "explicit c_star grid (default: exact critical values)")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--perturb-delta", cfg.perturb_delta, "also run a weight perturbation study")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--samples", cfg.samples, "perturbation samples")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", cfg.seed, "perturbation seed");

  auto* serve = app.add_subcommand("serve", "run the JSON analysis service");
  serve->add_option("--port", cfg.port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", cfg.host, "bind address");
  serve->add_option("--static", cfg.static_dir, "directory of UI assets served at /")->check(CLI::ExistingDirectory);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kOk;
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (ingest->parsed()) return detail::cmd_ingest(cfg, out, err);
    if (rank->parsed()) return detail::cmd_rank(cfg, out);
    if (dot->parsed()) {
      cfg.format = "dot";
      return detail::cmd_rank(cfg, out);
    }
    if (sweep->parsed()) return detail::cmd_sweep(cfg, out);
    if (serve->parsed()) return detail::cmd_serve(cfg, err);
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace electre::cli
