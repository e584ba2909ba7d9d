#pragma once

// JSON documents written by the command-line tool. Keys are emitted in a fixed order;
// infinite residuals are written as null and read back as +inf.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "geodeform/deform.hpp"
#include "geodeform/script.hpp"

namespace geodeform {

inline constexpr const char* kToolName = "geodeform";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

struct ClaimEntry {
  VerificationReport report;
  double wall_time_ms = 0.0;
};

struct ReportDocument {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::vector<std::string> command;
  std::uint64_t seed = 0;
  ToleranceBudget tol;
  std::vector<ClaimEntry> claims;
};

namespace detail {

inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline double read_number(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

inline Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::Theorem, Verdict::Approximate, Verdict::Refuted, Verdict::Inconclusive, Verdict::Error})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown verdict " + s);
}

}  // namespace detail

inline Json to_json(const VerificationReport& r) {
  Json j;
  j["claim"] = r.claim_id;
  j["description"] = r.description;
  j["verdict"] = std::string(to_string(r.verdict));
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["epsilons"] = r.epsilons;
  j["rel_tol"] = r.tol.rel_tol;
  j["abs_floor"] = r.tol.abs_floor;
  j["theorem_threshold"] = r.theorem_threshold;
  j["refuted_threshold"] = r.refuted_threshold;
  j["max_residual"] = detail::number(r.max_residual);
  j["mean_residual"] = detail::number(r.mean_residual);
  j["scaling_exponent"] = r.scaling_exponent ? detail::number(*r.scaling_exponent) : Json(nullptr);
  j["exponent_note"] = r.exponent_note;
  j["convention"] = r.convention ? Json(*r.convention) : Json(nullptr);
  j["failing_seed"] = r.failing_seed ? Json(*r.failing_seed) : Json(nullptr);
  j["error"] = r.error;
  Json rel = Json::array();
  for (const auto& s : r.relations)
    rel.push_back({{"relation", s.relation},
                   {"max_residual", detail::number(s.max_residual)},
                   {"mean_residual", detail::number(s.mean_residual)},
                   {"passes", s.passes}});
  j["relations"] = rel;
  Json eps = Json::array();
  for (const auto& e : r.per_epsilon)
    eps.push_back({{"epsilon", e.epsilon},
                   {"samples", e.samples},
                   {"max_residual", detail::number(e.max_residual)},
                   {"median_residual", detail::number(e.median_residual)}});
  j["per_epsilon"] = eps;
  return j;
}

inline VerificationReport report_from_json(const Json& j) {
  VerificationReport r;
  r.claim_id = j.at("claim").get<std::string>();
  r.description = j.at("description").get<std::string>();
  r.verdict = detail::verdict_from_string(j.at("verdict").get<std::string>());
  r.samples = j.at("samples").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.epsilons = j.at("epsilons").get<std::vector<double>>();
  r.tol.rel_tol = j.at("rel_tol").get<double>();
  r.tol.abs_floor = j.at("abs_floor").get<double>();
  r.theorem_threshold = j.at("theorem_threshold").get<double>();
  r.refuted_threshold = j.at("refuted_threshold").get<double>();
  r.max_residual = detail::read_number(j.at("max_residual"));
  r.mean_residual = detail::read_number(j.at("mean_residual"));
  if (!j.at("scaling_exponent").is_null()) r.scaling_exponent = j.at("scaling_exponent").get<double>();
  r.exponent_note = j.at("exponent_note").get<std::string>();
  if (!j.at("convention").is_null()) r.convention = j.at("convention").get<std::string>();
  if (!j.at("failing_seed").is_null()) r.failing_seed = j.at("failing_seed").get<std::uint64_t>();
  r.error = j.at("error").get<std::string>();
  for (const auto& s : j.at("relations"))
    r.relations.push_back({s.at("relation").get<std::string>(), detail::read_number(s.at("max_residual")),
                           detail::read_number(s.at("mean_residual")), s.at("passes").get<std::size_t>()});
  for (const auto& e : j.at("per_epsilon"))
    r.per_epsilon.push_back({e.at("epsilon").get<double>(), e.at("samples").get<std::size_t>(),
                             detail::read_number(e.at("max_residual")), detail::read_number(e.at("median_residual"))});
  return r;
}

inline Json to_json(const ReportDocument& doc) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["tool"] = doc.tool;
  j["version"] = doc.version;
  j["command"] = doc.command;
  j["seed"] = doc.seed;
  j["tolerance"] = {{"rel_tol", doc.tol.rel_tol}, {"abs_floor", doc.tol.abs_floor}};
  Json claims = Json::array();
  for (const auto& c : doc.claims) {
    Json e = to_json(c.report);
    e["wall_time_ms"] = c.wall_time_ms;
    claims.push_back(std::move(e));
  }
  j["claims"] = claims;
  return j;
}

inline ReportDocument document_from_json(const Json& j) {
  if (j.at("schema").get<int>() != kSchemaVersion) throw std::invalid_argument("unsupported report schema");
  ReportDocument doc;
  doc.tool = j.at("tool").get<std::string>();
  doc.version = j.at("version").get<std::string>();
  doc.command = j.at("command").get<std::vector<std::string>>();
  doc.seed = j.at("seed").get<std::uint64_t>();
  doc.tol.rel_tol = j.at("tolerance").at("rel_tol").get<double>();
  doc.tol.abs_floor = j.at("tolerance").at("abs_floor").get<double>();
  for (const auto& c : j.at("claims")) doc.claims.push_back({report_from_json(c), c.at("wall_time_ms").get<double>()});
  return doc;
}

/// Copy of a report with every wall_time_ms zeroed, for byte comparisons.
inline Json without_wall_time(Json j) {
  if (j.contains("claims"))
    for (auto& c : j["claims"]) c["wall_time_ms"] = 0.0;
  return j;
}

// ---------------------------------------------------------------------------
// `run` output

struct RunDocument {
  std::vector<std::string> command;
  std::string script;
  std::vector<std::pair<std::string, double>> overrides;
  ToleranceBudget tol;
  std::vector<script::AssertionResult> assertions;
  std::map<std::string, std::string> failed_points;
};

inline Json to_json(const RunDocument& doc) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = doc.command;
  j["script"] = doc.script;
  Json params = Json::object();
  for (const auto& [name, value] : doc.overrides) params[name] = value;
  j["params"] = params;
  j["tolerance"] = {{"rel_tol", doc.tol.rel_tol}, {"abs_floor", doc.tol.abs_floor}};
  bool all = true;
  Json asserts = Json::array();
  for (const auto& a : doc.assertions) {
    all = all && a.verdict.pass;
    Json flags = Json::array();
    for (auto f : a.verdict.flags) flags.push_back(std::string(to_string(f)));
    asserts.push_back({{"relation", std::string(script::relation_keyword(a.kind))},
                       {"labels", a.labels},
                       {"line", a.span.line},
                       {"pass", a.verdict.pass},
                       {"residual", detail::number(a.verdict.residual)},
                       {"flags", flags},
                       {"error", a.verdict.error}});
  }
  j["assertions"] = asserts;
  Json failed = Json::object();
  for (const auto& [label, why] : doc.failed_points) failed[label] = why;
  j["failed_points"] = failed;
  j["all_pass"] = all;
  return j;
}

}  // namespace geodeform
