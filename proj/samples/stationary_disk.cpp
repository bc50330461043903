// Builds the stationary lift of the axis disk for the radial_h structure in two
// ways and prints the conormal diagnostics of each.
#include "acx/stationary_solver.hpp"

#include <cstdio>

int main() {
  using namespace acx;
  const auto phi = DeformationTensor::radial_h(0.1, 0.3, 0.2);
  const RhSystem S = assemble_rh(AcStructure(phi), CVec2(0.0, 1.0));

  const auto show = [](const char* name, const ConormalReport& r) {
    std::printf("%-12s lambda in [%.6f, %.6f]  |Im lambda| %.2e  holomorphy %.2e  %s\n", name, r.lambda_real_min,
                r.lambda_real_max, r.lambda_imag_max, r.holomorphy, r.pass() ? "pass" : r.failed_clause().c_str());
  };
  show("closed form", verify_conormal(assemble_stationary_lift(S, radial_h_axis_solution(phi))));

  SolveOptions opt;
  opt.degree = 36;
  const RhSolution sol = solve_rh(S, opt);
  show("polynomial", verify_conormal(assemble_stationary_lift(S, [&](cd z) { return sol.g1(z); })));
}
