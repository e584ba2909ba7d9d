// Builds the quadrilateral figure, checks both relations, then runs the
// deformation verifier on the unit-square family.
#include <cstdio>

#include "geodeform/deform.hpp"

int main() {
  using namespace geodeform;
  const Configuration cfg =
      build_theorem1({0.0, 0.0}, {0.6786, 4.7750}, {5.9797, 4.8732}, {4.9136, 0.0});
  const auto pts = cfg.points({"O_ab", "O_cd", "O_bc", "O_da"});
  const auto [perp, equal] = check_perp_and_equal(pts[0], pts[1], pts[2], pts[3], {}, cfg.defining_diameter());
  std::printf("perpendicular residual %.3e (%s)\n", perp.residual, perp.pass ? "pass" : "fail");
  std::printf("equal length residual  %.3e (%s)\n", equal.residual, equal.pass ? "pass" : "fail");

  for (const char* id : {"theorem1_perp", "theorem1_equal", "control_theorem1_common_midpoint"}) {
    const RelationClaim claim = *find_claim(id);
    const VerificationReport r = verify(theorem1_family(), claim, 1000, 0.5, 0);
    std::printf("%-34s %-10s max residual %.3e\n", id, std::string(to_string(r.verdict)).c_str(), r.max_residual);
  }
  return 0;
}
