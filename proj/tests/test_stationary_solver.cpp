#include "acx/stationary_solver.hpp"

#include <gtest/gtest.h>

using namespace acx;

namespace {

const std::vector<CVec2>& directions() {
  static const std::vector<CVec2> v = {CVec2(0.0, 1.0), CVec2(1.0, 0.0), CVec2(cd(0.6, 0.0), cd(0.0, 0.8)),
                                       CVec2(cd(0.6, 0.0), cd(0.48, 0.64))};
  return v;
}

double sup_error(const DiskScalar& f, const DiskScalar& g, const std::vector<cd>& grid) {
  double e = 0.0;
  for (const cd z : grid) e = std::max(e, std::abs(f(z) - g(z)));
  return e;
}

}  // namespace

TEST(RhSystem, StandardStructureHasTrivialData) {
  for (const CVec2& v : directions()) {
    const RhSystem S = assemble_rh(AcStructure(), v);
    for (const cd z : annulus_grid(3, 8, 0.2, 1.0)) {
      const RhNode n = S.node(z);
      EXPECT_LT(n.A.cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT(n.F.cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT(n.G.cwiseAbs().maxCoeff(), 1e-12);
    }
    const InvertibilityReport inv = check_invertibility(S);
    EXPECT_NEAR(inv.D_sigma_min, 1.0, 1e-12);
    EXPECT_EQ(inv.C_rank, 1);
  }
}

TEST(RhSystem, StandardSolveIsZeroAndLambdaIsOne) {
  for (const CVec2& v : directions()) {
    const RhSystem S = assemble_rh(AcStructure(), v);
    const RhSolution sol = solve_rh(S);
    EXPECT_TRUE(sol.trivial);
    EXPECT_LT(sol.g1.max_abs_coeff(), 1e-12);
    const ConormalReport r = verify_conormal(assemble_stationary_lift(S, sol.g1));
    EXPECT_TRUE(r.pass()) << r.failed_clause();
    EXPECT_NEAR(r.lambda_real_min, 1.0, 1e-12);
    EXPECT_NEAR(r.lambda_real_max, 1.0, 1e-12);
  }
}

TEST(RhSystem, RadialHAxisComponents) {
  // On the axis disk J^0_1bar = 2 i h zeta and J^0bar_1 = -2 i h conj(zeta), so G does not vanish.
  const auto phi = DeformationTensor::radial_h();
  const RhSystem S = assemble_rh(AcStructure(phi), CVec2(0.0, 1.0));
  double gmax = 0.0;
  for (const cd z : {cd(0.4, 0.0), cd(0.0, 0.4), cd(0.3, 0.3), cd(-0.2, 0.35)}) {
    const double h = phi.h(std::abs(z));
    const CMat4 K = S.components(z).K;
    EXPECT_LT(std::abs(K(0, 3) - 2.0 * kI * h * z), 1e-10);
    EXPECT_LT(std::abs(K(1, 2) + 2.0 * kI * h * std::conj(z)), 1e-10);
    gmax = std::max(gmax, S.node(z).G.cwiseAbs().maxCoeff());
  }
  for (int j = 0; j < 16; ++j) gmax = std::max(gmax, S.node(std::polar(1.0, 0.4 * j)).G.cwiseAbs().maxCoeff());
  EXPECT_GT(gmax, 1e-3);
}

TEST(RhSystem, RadialHForcingIsRadialAndReal) {
  const auto phi = DeformationTensor::radial_h();
  const RhSystem S = assemble_rh(AcStructure(phi), CVec2(0.0, 1.0));
  for (const cd z : annulus_grid(4, 12, 0.1, 0.95)) {
    const double r = std::abs(z), e = 1e-6;
    const double expected = phi.h(r) + 0.5 * r * (phi.h(r + e) - phi.h(r - e)) / (2.0 * e);
    const RhNode n = S.node(z);
    EXPECT_NEAR(n.F(0).real(), expected, 1e-8);
    EXPECT_LT(std::abs(n.F(0).imag()), 1e-12);
    EXPECT_LT(std::abs(n.F(1)), 1e-12);
  }
}

TEST(Invertibility, RadialHRankAndConditioning) {
  const RhSystem S = assemble_rh(AcStructure(DeformationTensor::radial_h()), CVec2(0.0, 1.0));
  const InvertibilityReport r = check_invertibility(S);
  EXPECT_EQ(r.C_rank, 1);
  EXPECT_LT(r.C_sigma_min, 1e-10);
  EXPECT_GT(r.C_range_sigma_min, 0.5);
  EXPECT_GT(r.D_sigma_min, 0.5);
  EXPECT_TRUE(r.pass);
}

TEST(Invertibility, StrongHorizontalDeformationWarns) {
  // For radial_h the fiber blocks of C and D do not depend on h; the horizontal
  // coefficient of radial_invariant enters D and degrades it as kappa grows.
  const CVec2 v(cd(0.6, 0.0), cd(0.0, 0.8));
  EXPECT_TRUE(check_invertibility(assemble_rh(AcStructure(DeformationTensor::radial_invariant(0.2)), v)).pass);
  const InvertibilityReport r = check_invertibility(assemble_rh(AcStructure(DeformationTensor::radial_invariant(0.8)), v));
  EXPECT_FALSE(r.pass);
  EXPECT_LT(r.D_sigma_min, 0.5);
  EXPECT_FALSE(r.warning.empty());
}

TEST(RadialH, ExactLiftIsStationary) {
  const auto phi = DeformationTensor::radial_h();
  for (const CVec2& v : {CVec2(0.0, 1.0), CVec2(1.0, 0.0), CVec2(cd(0.6, 0.0), cd(0.8, 0.0))}) {
    ASSERT_TRUE(radial_h_closed_form_applies(v));
    const RhSystem S = assemble_rh(AcStructure(phi), v);
    const ConormalReport r = verify_conormal(assemble_stationary_lift(S, radial_h_axis_solution(phi)));
    EXPECT_TRUE(r.pass()) << r.failed_clause();
    EXPECT_LT(r.reduced_row_max, 1e-5);
  }
}

TEST(RadialH, ClosedFormDomain) {
  EXPECT_TRUE(radial_h_closed_form_applies(CVec2(0.0, 1.0)));
  EXPECT_FALSE(radial_h_closed_form_applies(CVec2(kI, 0.0)));
  EXPECT_FALSE(radial_h_closed_form_applies(CVec2(cd(1.0, 0.0), kI) / std::sqrt(2.0)));
  EXPECT_THROW(radial_h_axis_solution(DeformationTensor::bump()), std::invalid_argument);
}

TEST(RadialH, ClosedFormFailsOffItsDomain) {
  const auto phi = DeformationTensor::radial_h();
  const RhSystem S = assemble_rh(AcStructure(phi), CVec2(kI, 0.0));
  EXPECT_FALSE(verify_conormal(assemble_stationary_lift(S, radial_h_axis_solution(phi))).pass());
}

TEST(RadialH, PolynomialSolveApproachesExactSolution) {
  // Known accuracy limit: the third derivative of h jumps at the plateau edges
  // and the polynomial solve converges slowly, so only improvement is asserted.
  const auto phi = DeformationTensor::radial_h();
  const RhSystem S = assemble_rh(AcStructure(phi), CVec2(0.0, 1.0));
  const DiskScalar exact = radial_h_axis_solution(phi);
  const auto grid = annulus_grid(6, 24, 0.1, 0.95);
  std::vector<double> err;
  for (int d : {24, 36}) {
    SolveOptions opt;
    opt.degree = d;
    const RhSolution sol = solve_rh(S, opt);
    EXPECT_FALSE(sol.trivial);
    EXPECT_LT(sol.boundary_residual, 1e-3);
    EXPECT_LT(sol.algebraic_residual, 1e-10);
    err.push_back(sup_error([&](cd z) { return sol.g1(z); }, exact, grid));
  }
  EXPECT_LT(err[1], err[0]);
  EXPECT_LT(err[1], 0.1);
}

TEST(SolveRadial, ZeroAndQuadraticExamples) {
  const DiskFunction zero(4);
  EXPECT_EQ(solve_radial(zero, 0.0).max_abs_coeff(), 0.0);
  const DiskFunction g = solve_radial(zero, 1.0);
  for (const cd z : {cd(0.3, 0.2), cd(-0.5, 0.1)}) EXPECT_LT(std::abs(g(z) - (z * z - 1.0)), 1e-15);
}

TEST(SolveRadial, MeanFreeForcing) {
  // dbar g = 1 - 2 |zeta|^2, g = k (zeta^2 - 1) on the circle:
  // g = conj(zeta) - zeta conj(zeta)^2 + k (zeta^2 - 1).
  const DiskFunction F = DiskFunction::from_terms({{{0, 0}, 1.0}, {{1, 1}, -2.0}});
  const DiskFunction g = solve_radial(F, 0.5);
  const auto exact = [](cd z) { return std::conj(z) - z * std::conj(z) * std::conj(z) + 0.5 * (z * z - 1.0); };
  for (const cd z : annulus_grid(3, 12, 0.1, 1.0)) EXPECT_LT(std::abs(g(z) - exact(z)), 1e-13);
}

TEST(SolveRadial, ForcingWithNonzeroMeanHasNoSolution) {
  // The zeroth boundary moment of T[F] is 2i times the mass of F, so the trace
  // has a conj(zeta) mode that no holomorphic correction removes.
  EXPECT_THROW(solve_radial(DiskFunction::monomial(1, 1), 0.5), NotMatchableError);
}

TEST(SolveRadial, RejectsNonRadialForcing) {
  EXPECT_THROW(solve_radial(DiskFunction::monomial(2, 0), 0.0), std::invalid_argument);
}

TEST(SolveRadial, TargetFormReportsNegativeModes) {
  BoundaryFunction target(2);
  target.set_mode(1, 1.0);
  target.set_mode(-1, -1.0);
  const RadialSolve s = solve_radial(DiskFunction(2), target);
  EXPECT_GT(s.negative_mass, 0.5);
  BoundaryFunction holo(2);
  holo.set_mode(2, 1.0);
  EXPECT_EQ(solve_radial(DiskFunction(2), holo).negative_mass, 0.0);
}

TEST(Conormal, WrongFiberComponentFails) {
  // g_0 = zeta instead of 1 makes lambda non-real on the circle.
  const RhSystem S = assemble_rh(AcStructure(), CVec2(0.0, 1.0));
  StationaryLift lift = assemble_stationary_lift(S, DiskScalar([](cd) { return cd(0.0); }));
  lift.g0 = [](cd z) { return z; };
  const ConormalReport r = verify_conormal(lift);
  EXPECT_FALSE(r.lambda_ok);
  EXPECT_FALSE(r.pass());
}

TEST(RhSystem, RejectsNonUnitDirection) { EXPECT_THROW(assemble_rh(AcStructure(), CVec2(0.0, 2.0)), std::invalid_argument); }
