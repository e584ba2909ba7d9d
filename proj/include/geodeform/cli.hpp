#pragma once

// Command-line front end. `run_cli` takes the arguments after the program name and
// writes human output to `out`, diagnostics to `err`.
//
// Exit codes: 0 all claims theorem / all assertions pass, 1 otherwise, 2 usage or input errors.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geodeform/deform.hpp"
#include "geodeform/report.hpp"
#include "geodeform/script.hpp"
#include "geodeform/svg.hpp"

namespace geodeform::cli {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

namespace detail {

inline std::string sci(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

inline bool parse_double(const std::string& text, double& value) {
  if (text.empty()) return false;
  std::size_t used = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == text.size() && std::isfinite(value);
}

inline std::optional<std::vector<double>> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    double v = 0.0;
    if (b == std::string::npos || !parse_double(item.substr(b, e - b + 1), v)) return std::nullopt;
    out.push_back(v);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

inline bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (f) f << text;
  if (!f) {
    err << path << ": cannot write file\n";
    return false;
  }
  return true;
}

// a.svg + claim -> a_claim.svg
inline std::string suffixed(const std::string& path, const std::string& tag) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "_" + tag;
  return path.substr(0, dot) + "_" + tag + path.substr(dot);
}

inline std::vector<std::string> claim_names() {
  std::vector<std::string> names;
  for (const auto& c : builtin_claims()) names.push_back(c.id);
  for (const auto& c : control_claims()) names.push_back(c.id);
  return names;
}

struct VerifyOptions {
  std::vector<std::string> claims;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double eps = 0.5;
  std::string eps_grid;
  double tol = 1e-9;
  std::string json;
  std::string svg;
  unsigned threads = 1;
};

struct RunOptions {
  std::string path;
  std::vector<std::string> params;
  double tol = 1e-9;
  std::string json;
  std::string svg;
};

struct RenderOptions {
  std::string name;
  std::string out;
  double eps = 0.5;
  std::uint64_t seed = 0;
};

inline int cmd_verify(const VerifyOptions& o, const std::vector<std::string>& command, std::ostream& out,
                      std::ostream& err) {
  std::vector<RelationClaim> claims;
  for (const auto& name : o.claims) {
    if (name == "all") {
      for (auto& c : builtin_claims()) claims.push_back(c);
    } else if (auto c = find_claim(name)) {
      claims.push_back(*c);
    } else {
      err << "unknown claim '" << name << "'; valid claims: all, " << join(claim_names(), ", ") << "\n";
      return kExitUsage;
    }
  }
  std::optional<std::vector<double>> grid;
  if (!o.eps_grid.empty()) {
    grid = parse_grid(o.eps_grid);
    if (!grid) {
      err << "--eps-grid: expected comma-separated numbers, got '" << o.eps_grid << "'\n";
      return kExitUsage;
    }
  }
  const ToleranceBudget tol{o.tol, ToleranceBudget{}.abs_floor};

  ReportDocument doc;
  doc.command = command;
  doc.seed = o.seed;
  doc.tol = tol;
  bool all_theorem = true;
  for (const auto& claim : claims) {
    const DeformationFamily family = family_by_name(claim.family);
    const auto start = std::chrono::steady_clock::now();
    VerificationReport report;
    try {
      report = grid ? scaling_probe(family, claim, *grid, o.samples, o.seed, tol, o.threads)
                    : verify(family, claim, o.samples, o.eps, o.seed, tol, o.threads);
    } catch (const GeometryError& e) {
      if (e.code() == ErrorCode::InvalidArgument) {
        err << claim.id << ": " << e.what() << "\n";
        return kExitUsage;
      }
      report.claim_id = claim.id;
      report.description = claim.description;
      report.samples = o.samples;
      report.seed = o.seed;
      report.tol = tol;
      report.verdict = Verdict::Error;
      report.error = e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    std::string line = claim.id;
    line.resize(std::max<std::size_t>(line.size() + 1, 34), ' ');
    std::string verdict(to_string(report.verdict));
    verdict.resize(13, ' ');
    line += verdict + "max_residual=" + sci(report.max_residual);
    if (report.scaling_exponent) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " exponent=%.3f", *report.scaling_exponent);
      line += buf;
    }
    if (report.convention) line += " convention=" + *report.convention;
    if (report.failing_seed) line += " failing_seed=" + std::to_string(*report.failing_seed);
    out << line << "\n";
    if (!report.error.empty()) err << claim.id << ": " << report.error << "\n";
    all_theorem = all_theorem && report.verdict == Verdict::Theorem;
    doc.claims.push_back({std::move(report), ms});
  }

  if (!o.json.empty() && !write_file(o.json, to_json(doc).dump(2) + "\n", err)) return kExitUsage;
  if (!o.svg.empty()) {
    for (const auto& claim : claims) {
      const std::string path = claims.size() == 1 ? o.svg : suffixed(o.svg, claim.id);
      try {
        const Configuration cfg = sample(family_by_name(claim.family), o.eps, o.seed, tol);
        if (!write_file(path, render_svg(cfg), err)) return kExitUsage;
      } catch (const GeometryError& e) {
        err << path << ": " << e.what() << "\n";
        return kExitUsage;
      }
    }
  }
  return all_theorem ? kExitOk : kExitFail;
}

inline int cmd_run(const RunOptions& o, const std::vector<std::string>& command, std::ostream& out,
                   std::ostream& err) {
  std::ifstream f(o.path, std::ios::binary);
  if (!f) {
    err << o.path << ": cannot read file\n";
    return kExitUsage;
  }
  const std::string source((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  script::Program program;
  try {
    program = script::parse(source);
  } catch (const script::ParseError& e) {
    err << o.path << ":" << e.line() << ":" << e.column() << ": " << e.message() << " (expected "
        << join(e.expected(), ", ") << ")\n";
    return kExitUsage;
  }

  std::map<std::string, double> overrides;
  std::vector<std::pair<std::string, double>> echo;
  for (const auto& p : o.params) {
    const auto eq = p.find('=');
    double v = 0.0;
    if (eq == std::string::npos || eq == 0 || !parse_double(p.substr(eq + 1), v)) {
      err << "--param: expected name=value, got '" << p << "'\n";
      return kExitUsage;
    }
    overrides[p.substr(0, eq)] = v;
    echo.emplace_back(p.substr(0, eq), v);
  }

  const ToleranceBudget tol{o.tol, ToleranceBudget{}.abs_floor};
  script::Evaluation ev;
  try {
    ev = script::evaluate(program, overrides, tol);
  } catch (const script::UnknownParam& e) {
    err << o.path << ": " << e.what() << "\n";
    return kExitUsage;
  }

  for (const auto& [label, why] : ev.failed_points) err << o.path << ": point " << label << " failed: " << why << "\n";
  for (const auto& a : ev.assertions) {
    out << (a.verdict.pass ? "PASS " : "FAIL ") << script::relation_keyword(a.kind) << "(" << join(a.labels, ",")
        << ") residual=" << sci(a.verdict.residual);
    for (auto flag : a.verdict.flags) out << " [" << to_string(flag) << "]";
    out << "\n";
  }

  if (!o.json.empty()) {
    RunDocument doc{command, o.path, echo, tol, ev.assertions, ev.failed_points};
    if (!write_file(o.json, to_json(doc).dump(2) + "\n", err)) return kExitUsage;
  }
  if (!o.svg.empty()) {
    try {
      if (!write_file(o.svg, render_svg(ev.configuration), err)) return kExitUsage;
    } catch (const GeometryError& e) {
      err << o.svg << ": " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return ev.all_pass() ? kExitOk : kExitFail;
}

inline int cmd_shapes(std::ostream& out) {
  for (ShapeKind k : kAllShapes) {
    const Configuration cfg = base_shape(k);
    out << to_string(k) << "  points=" << cfg.all_points().size() << " segments=" << cfg.segments().size() << "\n";
  }
  return kExitOk;
}

inline int cmd_render(const RenderOptions& o, std::ostream& out, std::ostream& err) {
  Configuration cfg;
  try {
    if (const auto shape = shape_from_string(o.name)) {
      cfg = base_shape(*shape);
    } else {
      bool known = false;
      for (const auto& f : builtin_families())
        if (f.name == o.name) known = true;
      if (!known) {
        std::vector<std::string> names;
        for (ShapeKind k : kAllShapes) names.emplace_back(to_string(k));
        for (const auto& f : builtin_families()) names.push_back(f.name);
        err << "unknown shape or family '" << o.name << "'; valid names: " << join(names, ", ") << "\n";
        return kExitUsage;
      }
      cfg = sample(family_by_name(o.name), o.eps, o.seed);
    }
  } catch (const GeometryError& e) {
    err << o.name << ": " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string svg = render_svg(cfg);
  if (o.out == "-") {
    out << svg;
    return kExitOk;
  }
  return write_file(o.out, svg, err) ? kExitOk : kExitUsage;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deformation-principle geometry checker", "geodeform"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  detail::VerifyOptions vo;
  auto* verify_cmd = app.add_subcommand("verify", "Verify built-in claims on random deformations");
  verify_cmd->add_option("claims", vo.claims, "Claim ids, or 'all'")->required();
  verify_cmd->add_option("--samples", vo.samples, "Samples per epsilon")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", vo.seed, "Seed of the first sample");
  verify_cmd->add_option("--eps", vo.eps, "Deformation magnitude")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--eps-grid", vo.eps_grid, "Comma-separated epsilons; runs a scaling probe");
  verify_cmd->add_option("--tol", vo.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--json", vo.json, "Write the JSON report here");
  verify_cmd->add_option("--svg", vo.svg, "Write a sample configuration as SVG");
  verify_cmd->add_option("--threads", vo.threads, "Worker threads")->check(CLI::Range(1u, 256u));

  detail::RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "Evaluate a .geo script");
  run_cmd->add_option("script", ro.path, "Path to the .geo file")->required();
  run_cmd->add_option("--param", ro.params, "Override a param, name=value");
  run_cmd->add_option("--tol", ro.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  run_cmd->add_option("--json", ro.json, "Write the JSON report here");
  run_cmd->add_option("--svg", ro.svg, "Write the configuration as SVG");

  auto* shapes_cmd = app.add_subcommand("shapes", "List the base shapes");

  detail::RenderOptions rn;
  auto* render_cmd = app.add_subcommand("render", "Render a base shape or a deformed family sample to SVG");
  render_cmd->add_option("name", rn.name, "Shape or family name")->required();
  render_cmd->add_option("-o,--out", rn.out, "Output path, or - for stdout")->required();
  render_cmd->add_option("--eps", rn.eps, "Deformation magnitude for families")->check(CLI::NonNegativeNumber);
  render_cmd->add_option("--seed", rn.seed, "Sample seed for families");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify_cmd) return detail::cmd_verify(vo, args, out, err);
    if (*run_cmd) return detail::cmd_run(ro, args, out, err);
    if (*shapes_cmd) return detail::cmd_shapes(out);
    if (*render_cmd) return detail::cmd_render(rn, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}

}  // namespace geodeform::cli
