#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "core_model.hpp"
#include "io.hpp"
#include "ranking.hpp"
#include "sensitivity.hpp"
#include "version.hpp"

namespace electre::service {

struct Options {
  std::size_t max_body_bytes = 1 << 20;
};

struct Response {
  int status = 200;
  std::string body;
};

struct ParsedRequest {
  DecisionMatrix matrix;
  std::vector<double> weights;  // normalized
  ThresholdConfig thresholds;
  bool include_sweep = false;
};

inline Response violations_response(int status, const std::vector<Violation>& violations) {
  json arr = json::array();
  for (const auto& v : violations) arr.push_back({{"path", v.path}, {"message", v.message}});
  return {status, json{{"violations", arr}}.dump()};
}

namespace detail {

inline std::string prefixed(const std::string& prefix, const std::string& path) {
  return path.empty() ? prefix : prefix + "." + path;
}

// Shared by analyze and sweep; `allow_c_star` distinguishes the two schemas.
inline std::optional<ParsedRequest> parse_request(std::string_view body, bool allow_c_star,
                                                  std::vector<Violation>& out) {
  if (body.empty()) {
    out.push_back({"", "request body is empty", {}});
    return std::nullopt;
  }
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    out.push_back({"", std::string("malformed JSON: ") + e.what(), {}});
    return std::nullopt;
  }
  if (!j.is_object()) {
    out.push_back({"", "request body must be a JSON object", {}});
    return std::nullopt;
  }
  if (allow_c_star) electre::detail::reject_unknown(j, {"matrix", "c_star", "d_star", "options"}, "", out);
  else electre::detail::reject_unknown(j, {"matrix", "d_star"}, "", out);

  ParsedRequest req;
  if (!j.contains("matrix")) {
    out.push_back({"matrix", "matrix is required", {}});
  } else if (auto m = matrix_from_json(j["matrix"], "matrix", out)) {
    auto v = validate_matrix(*m);
    for (auto& violation : v.violations) {
      violation.path = prefixed("matrix", violation.path);
      out.push_back(std::move(violation));
    }
    if (v.ok()) {
      req.matrix = std::move(*m);
      const auto w = req.matrix.weights();
      req.weights = normalize_weights(std::span<const double>(w));
    }
  }

  if (allow_c_star && j.contains("c_star")) {
    if (!j["c_star"].is_number()) out.push_back({"c_star", "c_star must be a number", {}});
    else req.thresholds.c_star = j["c_star"].get<double>();
  }
  if (j.contains("d_star")) {
    if (auto d = d_star_from_json(j["d_star"])) req.thresholds.d_star = *d;
    else out.push_back({"d_star", "d_star must be a number or \"inf\"", {}});
  }
  for (auto& v : validate_thresholds(req.thresholds).violations) out.push_back(std::move(v));

  if (j.contains("options")) {
    const auto& o = j["options"];
    if (!o.is_object()) {
      out.push_back({"options", "options must be an object", {}});
    } else {
      electre::detail::reject_unknown(o, {"include_sweep"}, "options", out);
      if (o.contains("include_sweep")) {
        if (o["include_sweep"].is_boolean()) req.include_sweep = o["include_sweep"].get<bool>();
        else out.push_back({"options.include_sweep", "include_sweep must be a boolean", {}});
      }
    }
  }
  if (!out.empty()) return std::nullopt;
  return req;
}

}  // namespace detail

inline Response handle_analyze(std::string_view body, const Options& options = {}) {
  if (body.size() > options.max_body_bytes) return violations_response(413, {{"", "request body too large", {}}});
  std::vector<Violation> violations;
  auto req = detail::parse_request(body, true, violations);
  if (!req) return violations_response(400, violations);

  const auto a = analyze(req->matrix, req->weights, req->thresholds);
  json out;
  out["report"] = report_to_json(a.report);
  out["concordance"] = concordance_to_json(a.concordance);
  out["discordance"] = discordance_to_json(a.discordance);
  json alts = json::array();
  for (const auto& alt : req->matrix.alternatives()) alts.push_back(alt.id);
  out["alternatives"] = alts;
  if (req->include_sweep)
    out["sweep"] = sweep_to_json(threshold_sweep(req->matrix, req->weights, req->thresholds.d_star));
  return {200, out.dump()};
}

inline Response handle_sweep(std::string_view body, const Options& options = {}) {
  if (body.size() > options.max_body_bytes) return violations_response(413, {{"", "request body too large", {}}});
  std::vector<Violation> violations;
  auto req = detail::parse_request(body, false, violations);
  if (!req) return violations_response(400, violations);
  return {200, sweep_to_json(threshold_sweep(req->matrix, req->weights, req->thresholds.d_star)).dump()};
}

inline Response handle_health() { return {200, json{{"status", "ok"}, {"version", kVersion}}.dump()}; }

/// Registers the v1 endpoints, and the static UI bundle at `/` when a directory is given.
inline void install_routes(httplib::Server& server, const Options& options = {},
                           const std::optional<std::string>& static_dir = std::nullopt) {
  server.set_payload_max_length(options.max_body_bytes);
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Post("/api/v1/analyze", [options, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_analyze(req.body, options));
  });
  server.Post("/api/v1/sweep", [options, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_sweep(req.body, options));
  });
  // Oversized bodies are rejected by httplib before routing; give them the usual error shape.
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 413 && res.body.empty())
      res.set_content(violations_response(413, {{"", "request body too large", {}}}).body, "application/json");
  });
  server.Get("/api/v1/health", [reply](const httplib::Request&, httplib::Response& res) { reply(res, handle_health()); });
  if (static_dir) server.set_mount_point("/", *static_dir);
}

}  // namespace electre::service
