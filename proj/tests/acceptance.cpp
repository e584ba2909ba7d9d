// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geodeform/cli.hpp"
#include "geodeform/deform.hpp"
#include "geodeform/report.hpp"
#include "geodeform/script.hpp"

using namespace geodeform;

namespace {

const std::filesystem::path kRoot = GEODEFORM_SOURCE_DIR;
const std::filesystem::path kWork = std::filesystem::path(GEODEFORM_BINARY_DIR) / "acceptance_work";

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli_code(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run_cli(args, out, err);
}

RelationClaim claim(const char* id) { return *find_claim(id); }

Outcome ac1_theorem1() {
  const auto fam = theorem1_family();
  const auto t0 = std::chrono::steady_clock::now();
  const auto perp = verify(fam, claim("theorem1_perp"), 1000, 0.5, 0);
  const auto eq = verify(fam, claim("theorem1_equal"), 1000, 0.5, 0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = perp.verdict == Verdict::Theorem && eq.verdict == Verdict::Theorem && perp.max_residual <= 1e-9 &&
                  eq.max_residual <= 1e-9 && perp.samples == 1000 && eq.samples == 1000 && secs <= 2.0;
  return {ok, "perp max=" + fmt("%.2e", perp.max_residual) + " equal max=" + fmt("%.2e", eq.max_residual) +
                  " time=" + fmt("%.3f", secs) + "s"};
}

Outcome ac2_square() {
  const auto cfg = build_theorem1({0, 0}, {0, 1}, {1, 1}, {1, 0});
  const auto pts = cfg.points({"O_ab", "O_bc", "O_cd", "O_da"});
  double worst = 0.0;
  for (Point p : pts)
    for (Point q : pts) worst = std::max(worst, distance(p, q));
  return {worst <= 1e-12, "max pairwise=" + fmt("%.2e", worst)};
}

Outcome ac3_bisector() {
  const auto r = verify(bisector_family(), claim("bisector_concyclic"), 1000, 0.5, 0);
  return {r.verdict == Verdict::Theorem && r.max_residual <= 1e-9, "max=" + fmt("%.2e", r.max_residual)};
}

Outcome ac4_example1() {
  const auto fam = example1_family();
  const auto eq = verify(fam, claim("example1_equilateral"), 500, 0.5, 0);
  const auto on = verify(fam, claim("example1_fermat_on_circle"), 500, 0.5, 0);
  const std::string conv = on.convention.value_or("none");
  const bool ok = eq.verdict == Verdict::Theorem && eq.max_residual <= 1e-9 && on.verdict == Verdict::Theorem &&
                  on.max_residual <= 1e-9 && (conv == "X13" || conv == "X14");
  return {ok, "sides max=" + fmt("%.2e", eq.max_residual) + " circle max=" + fmt("%.2e", on.max_residual) +
                  " convention=" + conv};
}

Outcome ac5_example2() {
  const auto fam = example2_family();
  const auto c = claim("example2_concyclic");
  const ToleranceBudget tol{1e-7, 1e-12};
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 500; ++i) {
    const double eps = 1e-3 * std::pow(400.0, i / 499.0);
    try {
      const auto s = evaluate_claim(c, sample(fam, eps, static_cast<std::uint64_t>(i)), tol);
      worst = std::max(worst, s.residual);
      if (!s.pass) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  return {failures == 0 && worst <= 1e-7, "eps 1e-3..0.4, max=" + fmt("%.2e", worst) + " failures=" +
                                              std::to_string(failures)};
}

Outcome ac6_example3() {
  const auto fam = example3_family();
  const ToleranceBudget tol{1e-8, 1e-12};
  const auto a = verify(fam, claim("example3_prime_concyclic"), 500, 0.5, 0, tol);
  const auto b = verify(fam, claim("example3_doubleprime_concyclic"), 500, 0.5, 0, tol);
  const bool ok = a.verdict == Verdict::Theorem && b.verdict == Verdict::Theorem && a.max_residual <= 1e-8 &&
                  b.max_residual <= 1e-8;
  return {ok, "prime max=" + fmt("%.2e", a.max_residual) + " double-prime max=" + fmt("%.2e", b.max_residual)};
}

double max_angle(Point a, Point b, Point c) {
  const std::array<Point, 3> v{a, b, c};
  double best = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Point u = v[(i + 1) % 3] - v[i], w = v[(i + 2) % 3] - v[i];
    best = std::max(best, std::acos(std::clamp(dot(u, w) / (norm(u) * norm(w)), -1.0, 1.0)));
  }
  return best * 180.0 / std::numbers::pi;
}

Outcome ac7_fermat_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  int done = 0;
  double worst = 0.0;
  while (done < 200) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    const double d = diameter({a, b, c});
    if (std::abs(signed_area(a, b, c)) < 1e-3 * d * d || max_angle(a, b, c) >= 120.0) continue;
    const Point x13 = triangle_center(CenterKind::X13, a, b, c);
    const auto o = fermat_oracle(a, b, c);
    worst = std::max(worst, distance(x13, o.point) / d);
    ++done;
  }
  return {worst <= 1e-6, "200 triangles, max |X13 - oracle|/diam=" + fmt("%.2e", worst)};
}

Outcome ac8_scaling() {
  const std::vector<double> grid{1e-3, 1e-2, 1e-1, 0.5};
  const auto fam = theorem1_family();
  const auto perp = scaling_probe(fam, claim("theorem1_perp"), grid, 200, 0);
  const auto ctrl = scaling_probe(fam, claim("control_theorem1_common_midpoint"), grid, 200, 0);
  const double exponent = ctrl.scaling_exponent.value_or(0.0);
  const bool ok = perp.verdict == Verdict::Theorem &&
                  (ctrl.verdict == Verdict::Approximate || ctrl.verdict == Verdict::Refuted) && exponent >= 1.0;
  return {ok, "perp " + std::string(to_string(perp.verdict)) + ", control " + std::string(to_string(ctrl.verdict)) +
                  " exponent=" + fmt("%.3f", exponent) + " (needs >= 1)"};
}

Outcome ac9_conic() {
  std::vector<Point> pts;
  for (double deg : {10.0, 80.0, 150.0, 220.0, 300.0})
    pts.push_back({2.0 * std::cos(deg * std::numbers::pi / 180), std::sin(deg * std::numbers::pi / 180)});
  const double t = 40.0 * std::numbers::pi / 180;
  const Point on{2.0 * std::cos(t), std::sin(t)};
  // Outward normal of x^2/4 + y^2 = 1 at `on`.
  Point n{on.x / 4.0, on.y};
  n = n / norm(n);
  const Conic conic = fit_conic(pts);
  const auto hit = check_on_conic(conic, on, {}, diameter(pts));
  const auto miss = check_on_conic(conic, on + 1e-3 * n, {}, diameter(pts));
  const bool ok = hit.pass && !miss.pass && miss.residual > 1e-4 && miss.residual < 1e-2;
  return {ok, "on-ellipse residual=" + fmt("%.2e", hit.residual) + " displaced residual=" + fmt("%.2e", miss.residual)};
}

std::vector<RelationSpec> detectors_for(const RelationClaim& c, const Configuration& cfg) {
  std::vector<RelationSpec> out = c.relations;
  std::vector<std::string> labels;
  for (const auto& [l, o] : cfg.entries())
    if (std::holds_alternative<Point>(o)) labels.push_back(l);
  const auto first = [&](std::size_t k) { return std::vector<std::string>(labels.begin(), labels.begin() + k); };
  using K = RelationKind;
  for (K k : {K::Collinear, K::Concyclic, K::ConcurrentLines, K::ConcurrentCircles, K::Coaxial, K::Perspective,
              K::OnConic, K::Perpendicular, K::EqualLength, K::CommonMidpoint}) {
    const std::size_t need = arity(k).min;
    if (labels.size() >= need) out.push_back({k, first(need), ""});
  }
  return out;
}

Outcome ac10_invariance() {
  std::mt19937_64 rng(2024);
  const double angle = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  std::uniform_real_distribution<double> shift(-10.0, 10.0);
  const double dx = shift(rng), dy = shift(rng);
  const double eps = std::numeric_limits<double>::epsilon();
  const ToleranceBudget tol;

  double worst_rigid = 0.0;
  std::size_t compared = 0, bit_equal = 0;
  for (const auto& c : builtin_claims()) {
    const auto fam = family_by_name(c.family);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto cfg = sample(fam, c.family == "example2" ? 0.2 : 0.5, seed);
      const auto moved = cfg.transformed(Rotate{{0, 0}, angle}).transformed(Translate{dx, dy});
      const auto scaled = cfg.transformed(Scale{{0, 0}, 1e3});
      for (const auto& spec : detectors_for(c, cfg)) {
        const auto r0 = evaluate_relation(spec, cfg, tol, cfg.defining_diameter());
        if (!std::isfinite(r0.residual)) continue;
        const auto r1 = evaluate_relation(spec, moved, tol, moved.defining_diameter());
        const auto r2 = evaluate_relation(spec, scaled, tol, scaled.defining_diameter());
        // Residuals are already normalized by the configuration size.
        worst_rigid = std::max(worst_rigid, std::abs(r1.residual - r0.residual) / std::max(r0.residual, 1.0));
        ++compared;
        if (r2.residual == r0.residual) ++bit_equal;
      }
    }
  }
  const bool ok = worst_rigid <= 10.0 * eps && bit_equal == compared;
  return {ok, "rigid max change=" + fmt("%.2e", worst_rigid) + " (limit " + fmt("%.2e", 10.0 * eps) +
                  "), x1000 bit-identical " + std::to_string(bit_equal) + "/" + std::to_string(compared)};
}

Outcome ac11_dsl() {
  std::string notes;
  bool ok = true;

  // Golden script against the builder path over criterion 1's samples.
  const auto prog = script::parse(slurp(kRoot / "scripts" / "theorem1.geo"));
  const auto fam = theorem1_family();
  const ToleranceBudget tol;
  double worst = 0.0;
  bool verdicts_match = true;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto cfg = sample(fam, 0.5, seed);
    std::map<std::string, double> in;
    for (const auto& l : cfg.defining()) {
      const std::string n(1, static_cast<char>(std::tolower(l[0])));
      in[n + "x"] = cfg.point(l).x;
      in[n + "y"] = cfg.point(l).y;
    }
    const auto ev = script::evaluate(prog, in, tol);
    int i = 0;
    for (const char* id : {"theorem1_perp", "theorem1_equal"}) {
      const auto want = evaluate_relation(claim(id).relations[0], cfg, tol, cfg.defining_diameter());
      const auto& got = ev.assertions[i++].verdict;
      verdicts_match = verdicts_match && got.pass == want.pass && want.pass;
      worst = std::max(worst, std::abs(got.residual - want.residual));
    }
  }
  ok = ok && verdicts_match && worst <= 1e-12;
  notes += "golden max diff=" + fmt("%.2e", worst);

  // Malformed corpus.
  const auto dir = kRoot / "tests" / "data" / "malformed";
  std::ifstream manifest(dir / "expected.txt");
  std::string line;
  int matched = 0, total = 0;
  while (std::getline(manifest, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string file;
    int l = 0, c = 0;
    row >> file >> l >> c;
    ++total;
    try {
      script::parse(slurp(dir / file));
    } catch (const script::ParseError& e) {
      if (e.line() == l && e.column() == c) ++matched;
    }
  }
  ok = ok && total == 10 && matched == 10;
  notes += ", malformed " + std::to_string(matched) + "/" + std::to_string(total);

  // Exit-code contract.
  const std::string geo = (kRoot / "scripts").string();
  const std::vector<std::pair<std::vector<std::string>, int>> cases{
      {{"verify", "all", "--samples", "20"}, 0},
      {{"verify", "control_theorem1_collinear", "--samples", "20"}, 1},
      {{"verify", "nosuch"}, 2},
      {{"verify", "all", "--samples", "0"}, 2},
      {{"run", geo + "/theorem1.geo"}, 0},
      {{"run", geo + "/square_collinear.geo"}, 1},
      {{"run", (dir / "01_missing_comma.geo").string()}, 2},
      {{"run", geo + "/does_not_exist.geo"}, 2},
      {{"run", geo + "/square_collinear.geo", "--param", "nope=1"}, 2},
      {{"shapes"}, 0},
      {{"render", "pentagon", "-o", "-"}, 2},
      {{}, 2},
  };
  int codes = 0;
  for (const auto& [args, want] : cases)
    if (cli_code(args) == want) ++codes;
  ok = ok && codes == static_cast<int>(cases.size());
  notes += ", exit codes " + std::to_string(codes) + "/" + std::to_string(cases.size());
  return {ok, notes};
}

Outcome ac12_determinism() {
  std::filesystem::create_directories(kWork);
  const std::string json = (kWork / "verify_all.json").string();
  const std::string svg = (kWork / "verify_all.svg").string();
  const std::vector<std::string> args{"verify", "all", "--seed", "7", "--json", json, "--svg", svg};
  std::vector<std::string> svg_files;
  for (const auto& c : builtin_claims()) svg_files.push_back(cli::detail::suffixed(svg, c.id));

  if (cli_code(args) != 0) return {false, "first run failed"};
  const auto j1 = without_wall_time(Json::parse(slurp(json))).dump();
  std::vector<std::string> s1;
  for (const auto& f : svg_files) s1.push_back(slurp(f));
  if (cli_code(args) != 0) return {false, "second run failed"};
  const auto j2 = without_wall_time(Json::parse(slurp(json))).dump();
  bool svg_same = true;
  for (std::size_t i = 0; i < svg_files.size(); ++i) svg_same = svg_same && !s1[i].empty() && slurp(svg_files[i]) == s1[i];
  return {j1 == j2 && svg_same, std::string("json ") + (j1 == j2 ? "identical" : "differs") + ", " +
                                    std::to_string(svg_files.size()) + " svg files " +
                                    (svg_same ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"theorem1 replication", ac1_theorem1},   {"square degeneracy", ac2_square},
      {"bisector variant", ac3_bisector},       {"example 1", ac4_example1},
      {"example 2", ac5_example2},              {"example 3", ac6_example3},
      {"fermat oracle cross-check", ac7_fermat_oracle},
      {"scaling probe discriminates", ac8_scaling},
      {"conic detector", ac9_conic},            {"similarity invariance", ac10_invariance},
      {"dsl", ac11_dsl},                        {"determinism", ac12_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s AC%zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
