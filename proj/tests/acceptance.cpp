// Acceptance run: one PASS/FAIL line per criterion, with the measured values
// and the wall time against its budget.  Exit status is nonzero if any
// criterion fails.

#include "acx/acx.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace acx;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const char* fmt, double value) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, value);
    notes.push_back(std::string(ok ? "" : "[x] ") + buf);
    pass = pass && ok;
  }
  void note(const char* fmt, double value) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, value);
    notes.push_back(std::string("(info) ") + buf);
  }
};

double sup_over(const std::vector<cd>& grid, const std::function<double(cd)>& f) {
  double s = 0.0;
  for (const cd z : grid) s = std::max(s, f(z));
  return s;
}

// 1. Integrable degeneration.
Outcome integrable() {
  Outcome o;
  const AcStructure J;
  Sampler s(1);
  bool exact = true;
  for (const Vec4& x : probe_points(1, 50, 0.05, 0.95)) {
    Vec8 y;
    y << x, s.gaussian4();
    exact = exact && lift_tangent(J).eval(y) == standard_tangent_structure() &&
            lift_cotangent(J).eval(y) == standard_cotangent_structure();
  }
  o.require(exact, "lifts equal the standard lifted structures coefficientwise: %.0f", exact ? 1.0 : 0.0);
  const CVec2 v(0.0, 1.0);
  const RhSystem S = assemble_rh(J, v);
  const RhSolution sol = solve_rh(S);
  const ConormalReport c = verify_conormal(assemble_stationary_lift(S, sol.g1));
  o.require(sol.g1.max_abs_coeff() < 1e-8, "sup |g_1| coefficients = %.3g", sol.g1.max_abs_coeff());
  const double lam = std::max(std::abs(c.lambda_real_min - 1.0), std::abs(c.lambda_real_max - 1.0)) + c.lambda_imag_max;
  o.require(lam < 1e-8, "sup |lambda - 1| = %.3g", lam);
  const double res = std::max({sol.interior_residual, sol.boundary_residual, sol.algebraic_residual, c.annihilation_max,
                               c.holomorphy, c.reduced_row_max});
  o.require(res < 1e-8, "max residual = %.3g", res);
  return o;
}

// 2. Cauchy calculus.
Outcome cauchy() {
  Outcome o;
  double inv = 0.0;
  for (int t = 0; t <= 23; ++t)
    for (int b = 0; b <= t; ++b) {
      const auto m = DiskFunction::monomial(t - b, b);
      const DiskFunction d = dbar(cauchy_transform(m));
      inv = std::max(inv, (d.resized(std::max(d.degree(), m.degree())) - m.resized(std::max(d.degree(), m.degree()))).max_abs_coeff());
    }
  o.require(inv < 1e-12, "dbar o T - id on degree-23 basis: %.3g", inv);
  const auto f = DiskFunction::from_terms({{{2, 1}, cd(0.5, 1.0)}, {{0, 3}, -1.0}, {{1, 0}, 2.0}, {{0, 0}, 1.0}});
  const DiskFunction tf = cauchy_transform(f);
  Sampler s(2);
  double quad = 0.0;
  for (int k = 0; k < 20; ++k) {
    const cd z = std::polar(s.uniform(0.0, 0.9), s.uniform(0.0, 2.0 * kPi));
    quad = std::max(quad, std::abs(cauchy_quadrature([&](cd w) { return f(w); }, z) - tf(z)));
  }
  o.require(quad < 1e-6, "quadrature oracle at 20 probes: %.3g", quad);
  double mom = 0.0, mom_pos = 0.0, stokes = 0.0;
  for (const auto& g : {DiskFunction::monomial(1, 1), DiskFunction::from_terms({{{0, 0}, 1.0}, {{2, 2}, -0.4}, {{3, 3}, 0.2}})}) {
    const DiskFunction t = cauchy_transform(g);
    double area = 0.0;
    for (int k = 0; 2 * k <= g.degree(); ++k) area += g.coeff(k, k).real() * kPi / (k + 1.0);
    stokes = std::max(stokes, std::abs(moment_integral(t, 0) - 2.0 * kI * area));
    for (int n = 0; n <= 5; ++n) {
      mom = std::max(mom, std::abs(moment_integral(t, n)));
      if (n > 0) mom_pos = std::max(mom_pos, std::abs(moment_integral(t, n)));
    }
  }
  o.require(mom < 1e-10, "radial moments n = 0..5: %.3g", mom);
  o.note("radial moments n = 1..5: %.3g", mom_pos);
  o.note("n = 0 moment minus 2i * integral of f over the disk: %.3g", stokes);
  return o;
}

// 3. log tau0 Hessian for radial_h.
Outcome hessian_example() {
  Outcome o;
  const auto phi = DeformationTensor::radial_h(0.1, 0.3, 0.2);
  const auto pts = probe_points(3, 20, 0.35, 0.45);
  const Example58Report r = example58_report(phi, pts);
  o.require(r.max_H_error < 2e-5, "H entries vs 1 + 2 h h_Z, h_Z: %.3g", r.max_H_error);
  o.require(r.max_eigen_error < 2e-5, "eigenvalues vs lambda_pm: %.3g", r.max_eigen_error);
  bool sign = true;
  int tested = 0;
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (std::abs(phi.h_Z(pts[k].norm())) > 1e-3) {
      ++tested;
      sign = sign && r.hessians[k].eigenvalues(0) < 0.0;
    }
  o.require(sign && tested > 0, "min eigenvalue < 0 wherever |h_Z| > 1e-3 (points: %.0f)", double(tested));
  o.note("identity rows max error %.3g", r.max_identity_error);
  const Example58Report z = example58_report(DeformationTensor::radial_h(0.0, 0.3, 0.2), pts);
  double diag = 0.0, eig = 0.0;
  for (const auto& h : z.hessians) {
    diag = std::max(diag, (h.H - Vec4(1, 1, 0, 0).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff());
    eig = std::max(eig, (h.eigenvalues - Vec4(0, 0, 1, 1)).cwiseAbs().maxCoeff());
  }
  o.require(diag < 1e-6, "epsilon = 0: H vs diag(1, 1, 0, 0): %.3g", diag);
  o.require(eig < 1e-6, "epsilon = 0: eigenvalues vs {1, 1, 0, 0}: %.3g", eig);
  return o;
}

// 4. Stationary solve on radial_h.
Outcome stationary() {
  Outcome o;
  const auto phi = DeformationTensor::radial_h();
  const RhSystem S = assemble_rh(AcStructure(phi), CVec2(0.0, 1.0));
  const DiskScalar exact = radial_h_axis_solution(phi);
  const auto grid = annulus_grid(6, 24, 0.1, 0.95);
  std::vector<RhSolution> sols;
  for (int d : {24, 36}) {
    SolveOptions opt;
    opt.degree = d;
    sols.push_back(solve_rh(S, opt));
  }
  const auto err = [&](const RhSolution& s) { return sup_over(grid, [&](cd z) { return std::abs(s.g1(z) - exact(z)); }); };
  const double e24 = err(sols[0]), e36 = err(sols[1]);
  o.require(e36 < 1e-6, "solve_rh (degree 36) vs closed-form g_1: %.3g", e36);
  const ConormalReport c = verify_conormal(assemble_stationary_lift(S, sols[1].g1));
  o.require(c.lambda_ok, "solve_rh lift: sup |Im lambda| = %.3g", c.lambda_imag_max);
  o.require(c.holomorphy < 1e-5, "solve_rh lift: cotangent holomorphy residual %.3g", c.holomorphy);
  const double ratio = sols[0].interior_residual / std::max(sols[1].interior_residual, 1e-300);
  o.require(ratio >= 10.0, "interior residual ratio degree 24 -> 36: %.3g", ratio);
  o.note("error vs closed form at degree 24: %.3g", e24);
  o.note("boundary residual at degree 36: %.3g", sols[1].boundary_residual);
  const ConormalReport x = verify_conormal(assemble_stationary_lift(S, exact));
  o.note("closed-form lift passes the conormal check: %.0f", x.pass() ? 1.0 : 0.0);
  o.note("closed-form lift holomorphy residual: %.3g", x.holomorphy);
  return o;
}

// 5. Nicety discrimination.
Outcome nicety_discrimination() {
  Outcome o;
  const auto pts = probe_points(5, 100, 0.1, 0.95);
  const CVec2 v(cd(0.6, 0.0), cd(0.0, 0.8));
  const CVec2 w = generic_tangent(v);
  struct Case {
    const char* name;
    DeformationTensor phi;
    bool very_nice;
  };
  for (const Case& k : {Case{"bump", DeformationTensor::bump(), false}, Case{"phi = 0", DeformationTensor::standard(), true},
                        Case{"radially invariant", DeformationTensor::radial_invariant(), true}}) {
    const NicetyReport n = nicety(k.phi, pts);
    const ClosureReport c = very_nice_closure_test(k.phi, v, w, pts);
    char label[128];
    std::snprintf(label, sizeof label, "%s: nice %d very nice %d, closure consistent %%.0f", k.name, int(n.nice), int(n.very_nice));
    o.require(n.nice && n.very_nice == k.very_nice && c.consistent(), label, c.consistent() ? 1.0 : 0.0);
  }
  return o;
}

// 6. dd^c identity with the Nijenhuis tensor.
Outcome nijenhuis_identity() {
  Outcome o;
  const AcStructure J(DeformationTensor::radial_h());
  const StructureField Jf = J.field();
  const Potential u = potential_log_tau0();
  Sampler s(6);
  double worst = 0.0, worst_raw = 0.0, magnitude = 0.0;
  for (const Vec4& x : probe_points(6, 20, 0.1, 0.9)) {
    const Mat4 j = J.J(x);
    for (int k = 0; k < 20; ++k) {
      const Vec4 X = s.gaussian4(), Y = s.gaussian4();
      const double lhs = richardson([&](double h) { return ddc(u, Jf, x, j * X, Y, h) + ddc(u, Jf, x, X, j * Y, h); });
      const double nu = richardson([&](double h) { return u.grad(x).dot(nijenhuis(J, X, Y, x, h)); });
      // N_{XY} normalized as -1/4 ([JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]).
      const double n = -0.25 * nu;
      worst = std::max(worst, std::abs(lhs - 4.0 * n));
      worst_raw = std::max(worst_raw, std::abs(lhs - 4.0 * nu));
      magnitude = std::max(magnitude, std::abs(lhs));
    }
  }
  o.require(worst < 2e-5, "radial_h, 400 samples: sup |lhs - 4 N(u)| = %.3g", worst);
  o.note("sup |lhs| = %.3g", magnitude);
  o.note("same with the unnormalized bracket expression for N: %.3g", worst_raw);
  const AcStructure Js;
  double nst = 0.0;
  for (const Vec4& x : probe_points(7, 20, 0.1, 0.9))
    for (int k = 0; k < 20; ++k) nst = std::max(nst, nijenhuis(Js, s.gaussian4(), s.gaussian4(), x).norm());
  o.require(nst < 1e-8, "standard: sup |N| = %.3g", nst);
  return o;
}

// 7. Monge-Ampere degeneracy of log tau0.
Outcome monge_ampere() {
  Outcome o;
  const Potential u = potential_log_tau0();
  struct Case {
    const char* name;
    AcStructure J;
    double rmin, rmax;
  };
  for (const Case& k : {Case{"standard", AcStructure(), 0.1, 0.9}, Case{"radial_h plateau", AcStructure(DeformationTensor::radial_h()), 0.6, 0.9}}) {
    const StructureField Jf = k.J.field();
    double eig = 0.0, pf = 0.0;
    bool both = true;
    for (const Vec4& x : probe_points(8, 20, k.rmin, k.rmax)) {
      const DegeneracyReport d = ma_degeneracy(u, Jf, x);
      eig = std::max(eig, d.min_abs_eigenvalue);
      pf = std::max(pf, std::abs(d.pfaffian) / (4.0 * std::max(1.0, d.max_abs_eigenvalue)));
      both = both && d.degenerate(1e-6) && d.pfaffian_degenerate(1e-6);
    }
    char label[160];
    std::snprintf(label, sizeof label, "%s: min |eigenvalue| %.3g, scaled Pfaffian %%.3g", k.name, eig);
    o.require(both, label, pf);
  }
  Sampler s(9);
  double harm = 0.0;
  for (int k = 0; k < 10; ++k) harm = std::max(harm, harmonicity_along_disk(u, to_complex(s.unit4()), annulus_grid(4, 16, 0.2, 0.9)));
  o.require(harm < 1e-9, "harmonicity along 10 disks: %.3g", harm);
  return o;
}

// 8. Variation residuals.
Outcome variation_residuals() {
  Outcome o;
  const CVec2 v(cd(0.6, 0.0), cd(0.0, 0.8));
  const CVec2 w = generic_tangent(v);
  const auto grid = variation_grid();
  double worst = 0.0, control = 1e300;
  for (const auto& phi : {DeformationTensor::standard(), DeformationTensor::radial_h(), DeformationTensor::bump(),
                          DeformationTensor::radial_invariant()}) {
    const AcStructure J(phi);
    worst = std::max(worst, variation_residual(J, coordinate_variation(v, w), grid));
    control = std::min(control, variation_residual(J, antiholomorphic_variation(v, w), grid));
  }
  o.require(worst < 1e-6, "W = zeta w on four L-structures: %.3g", worst);
  o.require(control > 1e-2, "conj(zeta) w detected, smallest residual %.3g", control);
  const auto pts = probe_points(10, 100, 0.1, 0.95);
  for (const auto& phi : {DeformationTensor::standard(), DeformationTensor::bump(), DeformationTensor::radial_invariant()}) {
    const ClosureReport c = very_nice_closure_test(phi, v, w, pts);
    char label[160];
    std::snprintf(label, sizeof label, "%s: J o W residual %.3g, very nice %d, consistent %%.0f", family_name(phi.family()).c_str(),
                  c.residual_JW, int(c.very_nice));
    o.require(c.consistent(), label, c.consistent() ? 1.0 : 0.0);
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "integrable degeneration", 5.0, integrable},
      {2, "Cauchy calculus", 30.0, cauchy},
      {3, "log tau0 Hessian for radial_h", 60.0, hessian_example},
      {4, "stationary solve consistency", 60.0, stationary},
      {5, "nicety discrimination", 30.0, nicety_discrimination},
      {6, "Nijenhuis identity", 30.0, nijenhuis_identity},
      {7, "Monge-Ampere degeneracy", 30.0, monge_ampere},
      {8, "variation residuals", 30.0, variation_residuals},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("[x] exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < c.budget;
    const bool ok = o.pass && in_time;
    failed += !ok;
    std::printf("%s %d %s (%.2f s of %.0f s)\n", ok ? "PASS" : "FAIL", c.id, c.title, dt, c.budget);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    if (!in_time) std::printf("    [x] over the time budget\n");
  }
  std::printf("%d of %zu criteria pass\n", int(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
