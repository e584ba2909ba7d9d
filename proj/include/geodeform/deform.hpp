#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "geodeform/configuration.hpp"
#include "geodeform/relations.hpp"

namespace geodeform {

/// Portable seeded stream: std::mt19937_64 (sequence fixed by the standard) with explicit
/// bit-to-real conversion, so draws are identical on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in the closed unit disk, by rejection from the square.
  Point in_unit_disk() {
    for (;;) {
      const Point p{2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0};
      if (dot(p, p) <= 1.0) return p;
    }
  }

 private:
  std::mt19937_64 engine_;
};

using Builder = std::function<Configuration(std::span<const Point>, const ToleranceBudget&)>;

/// Seeded generator of deformed configurations around an undeformed base.
struct DeformationFamily {
  std::string name;
  std::vector<Point> base;  // builder inputs of the undeformed shape
  Builder build;
  double epsilon_floor = 0.0;  // smallest admissible positive epsilon
  bool admits_zero = true;
  /// Labels that coincide in the undeformed configuration.
  std::vector<std::vector<std::string>> coincident_groups;
};

constexpr int kMaxRejections = 1000;

/// Builds one deformed instance: every base input moves by a uniform-in-disk offset of
/// radius epsilon * diameter(base). Invalid draws are rejected and redrawn from the same stream.
inline Configuration sample(const DeformationFamily& family, double epsilon, std::uint64_t seed,
                            const ToleranceBudget& tol = {}) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw GeometryError(ErrorCode::InvalidArgument, "epsilon must be finite and nonnegative");
  if (epsilon == 0.0) {
    if (!family.admits_zero)
      throw GeometryError(ErrorCode::IllConditioned, family.name + " does not admit epsilon = 0");
    return family.build(family.base, tol);
  }
  if (epsilon < family.epsilon_floor)
    throw GeometryError(ErrorCode::InvalidArgument, family.name + ": epsilon below the family floor");

  Rng rng(seed);
  const double radius = epsilon * diameter(family.base);
  std::vector<Point> inputs(family.base.size());
  for (int attempt = 0; attempt <= kMaxRejections; ++attempt) {
    for (std::size_t i = 0; i < inputs.size(); ++i) inputs[i] = family.base[i] + radius * rng.in_unit_disk();
    try {
      return family.build(inputs, tol);
    } catch (const GeometryError&) {
      // rejected; continue the stream
    }
  }
  throw GeometryError(ErrorCode::RejectionBudgetExhausted,
                      family.name + ": no valid sample after " + std::to_string(kMaxRejections) + " rejections");
}

// ---------------------------------------------------------------------------
// Claims

struct RelationSpec {
  RelationKind kind;
  std::vector<std::string> labels;
  std::string name;  // alternative name for ExactlyOne claims (e.g. "X13")
};

enum class ClaimMode {
  All,         // every relation must hold
  ExactlyOne,  // exactly one alternative holds, and the same one on every sample
};

struct RelationClaim {
  std::string id;
  std::string family;
  std::string description;
  std::vector<RelationSpec> relations;
  ClaimMode mode = ClaimMode::All;
};

inline std::string describe(const RelationSpec& r) {
  std::string s(to_string(r.kind));
  s += '(';
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    if (i) s += ',';
    s += r.labels[i];
  }
  return s + ')';
}

/// Outcome of one claim on one configuration.
struct ClaimSample {
  std::vector<RelationVerdict> verdicts;  // one per relation; missing labels give an errored verdict
  double residual = 0.0;                  // claim-level residual
  bool pass = false;
  int chosen = -1;  // ExactlyOne: index of the alternative that held
};

inline RelationVerdict evaluate_relation(const RelationSpec& spec, const Configuration& cfg,
                                         const ToleranceBudget& tol, double scale) {
  try {
    const std::vector<Point> pts = cfg.points(spec.labels);
    return check_relation(spec.kind, pts, tol, scale);
  } catch (const GeometryError& e) {
    RelationVerdict v{spec.kind, kInfiniteResidual, false, {}, {VerdictFlag::EvaluationError}, e.what()};
    return v;
  }
}

inline ClaimSample evaluate_claim(const RelationClaim& claim, const Configuration& cfg, const ToleranceBudget& tol) {
  ClaimSample out;
  const double scale = cfg.defining_diameter();
  for (const auto& r : claim.relations) out.verdicts.push_back(evaluate_relation(r, cfg, tol, scale));

  if (claim.mode == ClaimMode::All) {
    out.pass = true;
    for (const auto& v : out.verdicts) {
      out.residual = std::max(out.residual, v.residual);
      out.pass = out.pass && v.pass;
    }
    return out;
  }
  int holding = 0;
  double least = kInfiniteResidual;
  for (std::size_t i = 0; i < out.verdicts.size(); ++i) {
    least = std::min(least, out.verdicts[i].residual);
    if (out.verdicts[i].pass) {
      ++holding;
      out.chosen = static_cast<int>(i);
    }
  }
  out.pass = holding == 1;
  if (holding == 1) {
    out.residual = out.verdicts[out.chosen].residual;
  } else {
    out.chosen = -1;
    out.residual = holding == 0 ? least : kInfiniteResidual;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

enum class Verdict { Theorem, Approximate, Refuted, Inconclusive, Error };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Theorem: return "theorem";
    case Verdict::Approximate: return "approximate";
    case Verdict::Refuted: return "refuted";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Error: return "error";
  }
  return "?";
}

/// Residuals above this multiple of rel_tol count as a refutation.
constexpr double kRefutedFactor = 100.0;
/// Minimum fitted exponent for an "approximate" verdict.
constexpr double kApproximateExponent = 0.5;

struct RelationStats {
  std::string relation;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  std::size_t passes = 0;
};

struct EpsilonStats {
  double epsilon = 0.0;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double median_residual = 0.0;
};

struct VerificationReport {
  std::string claim_id;
  std::string description;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> epsilons;
  ToleranceBudget tol;
  double theorem_threshold = 0.0;
  double refuted_threshold = 0.0;
  std::vector<RelationStats> relations;
  std::vector<EpsilonStats> per_epsilon;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  std::optional<double> scaling_exponent;
  std::string exponent_note;
  std::optional<std::string> convention;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<std::uint64_t> failing_seed;
  std::string error;
};

namespace detail {

struct SampleRun {
  std::vector<ClaimSample> results;
  std::optional<std::size_t> failed_index;
  std::string error;
};

inline SampleRun run_samples(const DeformationFamily& family, const RelationClaim& claim, std::size_t n,
                             double epsilon, std::uint64_t seed, const ToleranceBudget& tol, unsigned threads) {
  SampleRun run;
  run.results.resize(n);
  std::vector<std::string> errors(n);
  std::vector<char> failed(n, 0);
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        run.results[i] = evaluate_claim(claim, sample(family, epsilon, seed + i, tol), tol);
      } catch (const std::exception& e) {
        failed[i] = 1;
        errors[i] = e.what();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(n, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (failed[i]) {
      run.failed_index = i;
      run.error = errors[i];
      break;
    }
  return run;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Folds per-sample results in index order into `report`.
inline void aggregate(const RelationClaim& claim, const SampleRun& run, double epsilon, VerificationReport& report) {
  const std::size_t n = run.failed_index.value_or(run.results.size());
  if (report.relations.empty())
    for (const auto& r : claim.relations) report.relations.push_back({describe(r), 0.0, 0.0, 0});

  std::vector<double> residuals;
  residuals.reserve(n);
  std::vector<double> relation_sums(claim.relations.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const ClaimSample& s = run.results[i];
    residuals.push_back(s.residual);
    for (std::size_t r = 0; r < s.verdicts.size(); ++r) {
      auto& stats = report.relations[r];
      stats.max_residual = std::max(stats.max_residual, s.verdicts[r].residual);
      relation_sums[r] += s.verdicts[r].residual;
      stats.passes += s.verdicts[r].pass ? 1 : 0;
    }
  }
  const std::size_t before = report.samples;
  const std::size_t total = before + n;
  for (std::size_t r = 0; r < relation_sums.size(); ++r)
    if (total > 0)
      report.relations[r].mean_residual =
          (report.relations[r].mean_residual * static_cast<double>(before) + relation_sums[r]) /
          static_cast<double>(total);
  double sum = 0.0;
  double worst = 0.0;
  for (double v : residuals) {
    sum += v;
    worst = std::max(worst, v);
  }
  if (total > 0)
    report.mean_residual = (report.mean_residual * static_cast<double>(before) + sum) / static_cast<double>(total);
  report.max_residual = std::max(report.max_residual, worst);
  report.samples = total;
  report.per_epsilon.push_back({epsilon, n, worst, median(residuals)});
}

// For ExactlyOne claims: the alternative that held, if it is the same on every sample.
inline std::optional<int> common_choice(const RelationClaim& claim, const SampleRun& run, std::optional<int> prior,
                                        bool& consistent) {
  if (claim.mode != ClaimMode::ExactlyOne) return std::nullopt;
  std::optional<int> choice = prior;
  const std::size_t n = run.failed_index.value_or(run.results.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = run.results[i].chosen;
    if (c < 0) {
      consistent = false;
      continue;
    }
    if (!choice)
      choice = c;
    else if (*choice != c)
      consistent = false;
  }
  return choice;
}

inline VerificationReport start_report(const RelationClaim& claim, std::size_t n, std::uint64_t seed,
                                       const ToleranceBudget& tol) {
  VerificationReport r;
  r.claim_id = claim.id;
  r.description = claim.description;
  r.seed = seed;
  r.tol = tol;
  r.theorem_threshold = tol.rel_tol;
  r.refuted_threshold = kRefutedFactor * tol.rel_tol;
  (void)n;
  return r;
}

inline void record_failure(const SampleRun& run, std::uint64_t seed, VerificationReport& report) {
  if (!run.failed_index) return;
  report.failing_seed = seed + *run.failed_index;
  report.error = run.error;
  report.verdict = Verdict::Error;
}

}  // namespace detail

/// Evaluates `claim` on n deformed samples with seeds seed, seed+1, ..., seed+n-1.
inline VerificationReport verify(const DeformationFamily& family, const RelationClaim& claim, std::size_t n,
                                 double epsilon, std::uint64_t seed, const ToleranceBudget& tol = {},
                                 unsigned threads = 1) {
  if (n < 1) throw GeometryError(ErrorCode::InvalidArgument, "verify needs at least one sample");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon) || (epsilon == 0.0 && !family.admits_zero) ||
      (epsilon > 0.0 && epsilon < family.epsilon_floor))
    throw GeometryError(ErrorCode::InvalidArgument, family.name + ": epsilon outside the admissible range");
  VerificationReport report = detail::start_report(claim, n, seed, tol);
  report.epsilons = {epsilon};
  const auto run = detail::run_samples(family, claim, n, epsilon, seed, tol, threads);
  detail::aggregate(claim, run, epsilon, report);
  if (run.failed_index) {
    detail::record_failure(run, seed, report);
    return report;
  }
  bool consistent = true;
  const auto choice = detail::common_choice(claim, run, std::nullopt, consistent);
  if (choice) report.convention = consistent ? claim.relations[*choice].name : std::string("mixed");

  report.exponent_note = "single epsilon: no scaling fit";
  if (report.max_residual <= tol.rel_tol && consistent)
    report.verdict = Verdict::Theorem;
  else if (report.per_epsilon.back().median_residual > report.refuted_threshold)
    report.verdict = Verdict::Refuted;
  else
    report.verdict = Verdict::Inconclusive;
  return report;
}

/// Least-squares slope of log(y) against log(x); pairs with y <= 0 are skipped.
inline std::optional<double> fit_log_slope(std::span<const double> xs, std::span<const double> ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
    if (xs[i] > 0.0 && ys[i] > 0.0 && std::isfinite(ys[i])) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  if (lx.size() < 2) return std::nullopt;
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  return sxy / sxx;
}

/// Runs the claim at every epsilon and fits how the median residual scales with epsilon.
inline VerificationReport scaling_probe(const DeformationFamily& family, const RelationClaim& claim,
                                        std::vector<double> epsilons, std::size_t n_per_epsilon, std::uint64_t seed,
                                        const ToleranceBudget& tol = {}, unsigned threads = 1) {
  std::sort(epsilons.begin(), epsilons.end());
  epsilons.erase(std::unique(epsilons.begin(), epsilons.end()), epsilons.end());
  if (epsilons.size() < 3) throw GeometryError(ErrorCode::InvalidArgument, "scaling probe needs 3 distinct epsilons");
  if (!(epsilons.front() > 0.0) || epsilons.front() < family.epsilon_floor)
    throw GeometryError(ErrorCode::InvalidArgument, "scaling probe epsilons must be positive and above the floor");
  if (epsilons.back() / epsilons.front() < 100.0)
    throw GeometryError(ErrorCode::InvalidArgument, "scaling probe epsilons must span two decades");
  if (n_per_epsilon < 1) throw GeometryError(ErrorCode::InvalidArgument, "scaling probe needs samples");

  VerificationReport report = detail::start_report(claim, n_per_epsilon, seed, tol);
  report.epsilons = epsilons;
  bool consistent = true;
  std::optional<int> choice;
  for (double eps : epsilons) {
    const auto run = detail::run_samples(family, claim, n_per_epsilon, eps, seed, tol, threads);
    detail::aggregate(claim, run, eps, report);
    if (run.failed_index) {
      detail::record_failure(run, seed, report);
      return report;
    }
    choice = detail::common_choice(claim, run, choice, consistent);
  }
  if (choice) report.convention = consistent ? claim.relations[*choice].name : std::string("mixed");

  if (report.max_residual <= tol.rel_tol && consistent) {
    report.scaling_exponent = 0.0;
    report.exponent_note = "residuals below tolerance at every epsilon; exponent 0 by convention";
    report.verdict = Verdict::Theorem;
    return report;
  }
  std::vector<double> medians;
  for (const auto& e : report.per_epsilon) medians.push_back(e.median_residual);
  report.scaling_exponent = fit_log_slope(epsilons, medians);
  report.exponent_note = "least-squares slope of log median residual against log epsilon";
  const double exponent = report.scaling_exponent.value_or(0.0);

  bool holds_at_zero = false;
  if (family.admits_zero) {
    try {
      holds_at_zero = evaluate_claim(claim, sample(family, 0.0, seed, tol), tol).pass;
    } catch (const GeometryError&) {
      holds_at_zero = false;
    }
  }
  if (report.per_epsilon.front().median_residual > report.refuted_threshold && exponent > 0.0)
    report.verdict = Verdict::Refuted;
  else if (exponent >= kApproximateExponent && holds_at_zero)
    report.verdict = Verdict::Approximate;
  else
    report.verdict = Verdict::Inconclusive;
  return report;
}

// ---------------------------------------------------------------------------
// Built-in families and claims

inline std::array<Point, 4> unit_square() {
  return {Point{0.0, 0.0}, Point{0.0, 1.0}, Point{1.0, 1.0}, Point{1.0, 0.0}};
}

inline DeformationFamily theorem1_family() {
  const auto sq = unit_square();
  return {"theorem1",
          {sq.begin(), sq.end()},
          [](std::span<const Point> p, const ToleranceBudget& tol) { return build_theorem1(p[0], p[1], p[2], p[3], tol); },
          0.0,
          true,
          {{"O_ab", "O_bc", "O_cd", "O_da"}}};
}

inline DeformationFamily bisector_family() {
  const auto sq = unit_square();
  return {"bisector",
          {sq.begin(), sq.end()},
          [](std::span<const Point> p, const ToleranceBudget& tol) {
            return build_bisector_variant(p[0], p[1], p[2], p[3], tol);
          },
          0.0,
          true,
          {{"O_1", "O_2", "O_3", "O_4"}}};
}

inline DeformationFamily example1_family() {
  const auto t = unit_equilateral();
  return {"example1",
          {t.begin(), t.end()},
          [](std::span<const Point> p, const ToleranceBudget& tol) { return build_example1(p[0], p[1], p[2], tol); },
          0.0,
          true,
          {{"O_a", "O_b", "O_c", "F1"}}};
}

inline DeformationFamily example2_family() {
  const auto t = unit_equilateral();
  return {"example2",
          {t.begin(), t.end()},
          [](std::span<const Point> p, const ToleranceBudget& tol) { return build_example2(p[0], p[1], p[2], tol); },
          kExample2EquilateralFloor,
          false,
          {}};
}

inline DeformationFamily example3_family() {
  const auto t = unit_equilateral();
  const Point center = (t[0] + t[1] + t[2]) / 3.0;
  return {"example3",
          {t[0], t[1], t[2], center},
          [](std::span<const Point> p, const ToleranceBudget& tol) {
            return build_example3(p[0], p[1], p[2], p[3], tol);
          },
          0.0,
          true,
          {{"N_a'", "N_b'", "N_c'", "N", "P"}, {"N_a''", "N_b''", "N_c''", "N", "P"}}};
}

inline std::vector<DeformationFamily> builtin_families() {
  return {theorem1_family(), bisector_family(), example1_family(), example2_family(), example3_family()};
}

inline DeformationFamily family_by_name(std::string_view name) {
  for (auto& f : builtin_families())
    if (f.name == name) return f;
  throw GeometryError(ErrorCode::InvalidArgument, "unknown family " + std::string(name));
}

/// The eight claims checked by `verify all`.
inline std::vector<RelationClaim> builtin_claims() {
  using K = RelationKind;
  return {
      {"theorem1_perp", "theorem1", "O_ab O_cd is perpendicular to O_bc O_da",
       {{K::Perpendicular, {"O_ab", "O_cd", "O_bc", "O_da"}, ""}}},
      {"theorem1_equal", "theorem1", "|O_ab O_cd| = |O_bc O_da|",
       {{K::EqualLength, {"O_ab", "O_cd", "O_bc", "O_da"}, ""}}},
      {"bisector_concyclic", "bisector", "O_1, O_2, O_3, O_4 are concyclic",
       {{K::Concyclic, {"O_1", "O_2", "O_3", "O_4"}, ""}}},
      {"example1_equilateral", "example1", "O_a O_b O_c is equilateral",
       {{K::EqualLength, {"O_a", "O_b", "O_b", "O_c"}, ""}, {K::EqualLength, {"O_b", "O_c", "O_c", "O_a"}, ""}}},
      {"example1_fermat_on_circle", "example1", "exactly one Fermat point lies on the circle O_a O_b O_c",
       {{K::Concyclic, {"O_a", "O_b", "O_c", "F1"}, "X13"}, {K::Concyclic, {"O_a", "O_b", "O_c", "F2"}, "X14"}},
       ClaimMode::ExactlyOne},
      {"example2_concyclic", "example2", "F2 lies on the circle F_a F_b F_c",
       {{K::Concyclic, {"F_a", "F_b", "F_c", "F2"}, ""}}},
      {"example3_prime_concyclic", "example3", "N_a', N_b', N_c', N are concyclic",
       {{K::Concyclic, {"N_a'", "N_b'", "N_c'", "N"}, ""}}},
      {"example3_doubleprime_concyclic", "example3", "N_a'', N_b'', N_c'', N are concyclic",
       {{K::Concyclic, {"N_a''", "N_b''", "N_c''", "N"}, ""}}},
  };
}

/// Deliberately false claims that hold only in the undeformed shape; used as controls.
inline std::vector<RelationClaim> control_claims() {
  using K = RelationKind;
  return {
      {"control_theorem1_common_midpoint", "theorem1", "O_ab O_cd and O_bc O_da share a midpoint (square only)",
       {{K::CommonMidpoint, {"O_ab", "O_cd", "O_bc", "O_da"}, ""}}},
      {"control_theorem1_collinear", "theorem1", "O_ab, O_bc, O_cd are collinear (false)",
       {{K::Collinear, {"O_ab", "O_bc", "O_cd"}, ""}}},
  };
}

inline std::optional<RelationClaim> find_claim(std::string_view id) {
  for (auto& c : builtin_claims())
    if (c.id == id) return c;
  for (auto& c : control_claims())
    if (c.id == id) return c;
  return std::nullopt;
}

}  // namespace geodeform
