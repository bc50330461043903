#include "acx/acx.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

using namespace acx;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct Args {
  std::string config;
  std::string out = "acx_out";
  std::string v = "0,1";
  std::string w;
  std::string u = "log_tau0";
  std::string method = "auto";
  bool quiet = false;
};

ordered_json complex_json(cd z) { return ordered_json::array({z.real(), z.imag()}); }
ordered_json vec_json(const CVec2& v) { return ordered_json::array({complex_json(v(0)), complex_json(v(1))}); }
ordered_json mat_json(const Mat4& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 4; ++i) rows.push_back(ordered_json::array({m(i, 0), m(i, 1), m(i, 2), m(i, 3)}));
  return rows;
}

std::vector<Vec4> probes(const RunConfig& c) {
  return probe_points(c.seed, c.probes.samples, c.probes.rho_min, c.probes.rho_max);
}

CVec2 unit_direction(const std::string& s) {
  CVec2 v = parse_complex_vector(s);
  if (v.norm() < 1e-12) throw ConfigError("direction must be nonzero");
  return v.normalized();
}

// ---------------------------------------------------------------------------

void check_structure(const RunConfig& c, Report& rep) {
  const DeformationTensor phi = make_deformation(c);
  const AcStructure J(phi);
  const auto pts = probes(c);
  double j2 = 0.0;
  for (const Vec4& x : pts) {
    const double r = complex_structure_residual(J, x);
    j2 = std::max(j2, r);
    rep.row(x, "j_squared_residual", r, 1e-10, r <= 1e-10);
  }
  rep.check("j_squared_plus_identity", "J^2 = -Id", j2, 1e-10);
  const ConditionReport L = check_L_condition_i(J, pts);
  rep.check("l_condition_z_invariance", "L-condition (i): J = J_st on Z", L.zj_residual, 1e-9);
  rep.check("l_condition_z_leakage", "L-condition (i): J(Z) in Z", L.z_leakage, 1e-9);
  double bracket = 0.0;
  for (const Vec4& x : pts) bracket = std::max(bracket, frame_brackets(x).max_enforced());
  rep.check("frame_brackets", "[Z,E] = [J_st Z,E] = 0", bracket, c.tolerances.bracket);

  const NicetyReport n = nicety(phi, pts);
  rep.info("phi_HZ_sup", "nice: phi^{H,Z} = 0", n.phiHZ_sup);
  rep.info("lie_Z01_phiH_sup", "very nice: L_{Z^01} phi^H = 0", n.lie_phiH_sup);
  rep.info("lie_Z01_J_sup", "closure: L_{Z^01} J = 0", n.lie_J_sup);
  double nij = 0.0;
  Sampler s(c.seed + 17);
  for (const Vec4& x : pts) nij = std::max(nij, nijenhuis(J, s.unit4(), s.unit4(), x).norm());
  rep.info("nijenhuis_sup", "integrability: N = 0", nij);
  const Potential u = potential_log_tau0();
  const StructureField Jf = J.field();
  double ident = 0.0;
  for (const Vec4& x : pts) {
    const Vec4 X = s.gaussian4(), Y = s.gaussian4();
    const Mat4 j = J.J(x);
    const double lhs = richardson([&](double h) { return ddc(u, Jf, x, j * X, Y, h) + ddc(u, Jf, x, X, j * Y, h); });
    const double n = richardson([&](double h) { return u.grad(x).dot(nijenhuis(J, X, Y, x, h)); });
    const double r = std::abs(lhs - kNijenhuisScale * n);
    ident = std::max(ident, r);
    rep.row(x, "ddc_nijenhuis_identity", r, 2e-5, r <= 2e-5);
  }
  rep.check("ddc_nijenhuis_identity", "dd^c u(JX,Y) + dd^c u(X,JY) = 4 N_XY(u), u = log tau0", ident, 2e-5);
  rep.data()["nicety"] = {{"nice", n.nice}, {"very_nice", n.very_nice}, {"samples", n.samples}};
  rep.data()["family"] = J.family_tag();
}

void lift_verify(const RunConfig& c, Report& rep) {
  const DeformationTensor phi = make_deformation(c);
  const AcStructure J(phi);
  const auto pts = probes(c);
  const LiftedStructure LT = lift_tangent(J), LC = lift_cotangent(J);
  const JetField jet = ambient_jet(J);
  const IndexTable t;
  Sampler s(c.seed + 29);
  double sq_t = 0.0, sq_c = 0.0, complex_form = 0.0, standard_gap = 0.0;
  for (const Vec4& x : pts) {
    Vec8 y;
    y << x, s.unit4();
    const Mat8 mt = LT.eval(y), mc = LC.eval(y);
    const double et = (mt * mt + Mat8::Identity()).cwiseAbs().maxCoeff();
    const double ec = (mc * mc + Mat8::Identity()).cwiseAbs().maxCoeff();
    const double ef = (cotangent_complex_form(jet(x), y.tail<4>(), t) - mc).cwiseAbs().maxCoeff();
    sq_t = std::max(sq_t, et);
    sq_c = std::max(sq_c, ec);
    complex_form = std::max(complex_form, ef);
    rep.row(x, "tangent_lift_square", et, 1e-10, et <= 1e-10);
    rep.row(x, "cotangent_lift_square", ec, 1e-10, ec <= 1e-10);
    rep.row(x, "cotangent_complex_vs_real", ef, 1e-10, ef <= 1e-10);
    if (phi.family() == Family::standard)
      standard_gap = std::max({standard_gap, (mt - standard_tangent_structure()).cwiseAbs().maxCoeff(),
                               (mc - standard_cotangent_structure()).cwiseAbs().maxCoeff()});
  }
  rep.check("tangent_lift_square", "lifted J^2 = -Id on TM", sq_t, 1e-10);
  rep.check("cotangent_lift_square", "lifted J^2 = -Id on T*M", sq_c, 1e-10);
  rep.check("cotangent_complex_form", "cotangent lift: complex and real assembly agree", complex_form, 1e-10);
  if (phi.family() == Family::standard)
    rep.check("standard_lift_identity", "integrable case: lifts are the standard structures", standard_gap, 0.0);

  double row0 = 0.0;
  for (const cd z : annulus_grid(4, 16, 0.2, 0.9)) row0 = std::max(row0, row0_reduction_residual(J.chart_components(z, 0.0)));
  rep.check("row0_reduction", "fiber equation row 0 reduces to 2i dbar g_0 = 0", row0, 1e-10);
  const CVec2 v = CVec2(0.0, 1.0);
  const double disk = variation_lift_residual(J, coordinate_variation(v, generic_tangent(v)), variation_grid());
  rep.check("tangent_lift_disk", "tangent lift holomorphy of (zeta v, zeta w)", disk, 1e-6);
}

void solve_stationary(const RunConfig& c, const Args& a, Report& rep) {
  const DeformationTensor phi = make_deformation(c);
  const AcStructure J(phi);
  const CVec2 v = unit_direction(a.v);
  const RhSystem S = assemble_rh(J, v);
  const InvertibilityReport inv = check_invertibility(S);
  rep.data()["v"] = vec_json(v);
  rep.data()["invertibility"] = {{"C_sigma_max", inv.C_sigma_max},   {"C_sigma_min", inv.C_sigma_min},
                                 {"C_range_sigma_min", inv.C_range_sigma_min}, {"C_rank", inv.C_rank},
                                 {"D_sigma_min", inv.D_sigma_min},   {"D_cond_max", inv.D_cond_max},
                                 {"pass", inv.pass},                 {"warning", inv.warning}};

  std::string method = a.method;
  if (method == "auto")
    method = phi.family() == Family::radial_h && radial_h_closed_form_applies(v) ? "radial" : "rh";
  if (method != "rh" && method != "radial") throw ConfigError("unknown method '" + a.method + "'");
  if (method == "radial" && !(phi.family() == Family::radial_h && radial_h_closed_form_applies(v)))
    throw ConfigError("method radial needs the radial_h family and v1^2 + v2^2 > 0");
  rep.data()["method"] = method;

  DiskScalar g1;
  if (method == "rh") {
    SolveOptions opt;
    opt.degree = c.grid.degree;
    opt.radii = c.grid.radii;
    opt.angles = c.grid.angles;
    const RhSolution sol = solve_rh(S, opt);
    rep.check("interior_residual", "fiber dbar equation in the interior", sol.interior_residual, c.tolerances.interior);
    rep.check("boundary_residual", "rotated boundary values in the conormal bundle", sol.boundary_residual, c.tolerances.boundary);
    rep.check("algebraic_residual", "kernel row of the fiber system", sol.algebraic_residual, c.tolerances.interior);
    rep.data()["solver"] = {{"degree", c.grid.degree}, {"iterations", sol.iterations},
                            {"kernel_dimension", sol.kernel_dimension}, {"trivial", sol.trivial}};
    const DiskFunction g = sol.g1;
    g1 = [g](cd z) { return g(z); };
  } else {
    g1 = radial_h_axis_solution(phi);
  }
  const StationaryLift lift = assemble_stationary_lift(S, g1);
  const ConormalReport cr = verify_conormal(lift, 64, 1e-8, 1e-6, c.tolerances.interior);
  rep.check("lambda_imag", "lambda real on the circle", cr.lambda_imag_max, 1e-8);
  rep.check_at_least("lambda_abs_min", "lambda nonvanishing on the circle", cr.lambda_abs_min, 1e-8);
  rep.check("annihilation", "boundary covector annihilates the sphere", cr.annihilation_max, 1e-6);
  rep.check("cotangent_holomorphy", "lift holomorphic for the cotangent lift", cr.holomorphy, c.tolerances.interior);
  rep.info("reduced_rows", "reduced fiber equation rows 1, 1bar", cr.reduced_row_max);
  for (std::size_t k = 0; k < cr.lambda.size(); ++k) {
    const Vec4 x = disk_point(v, cr.boundary_points[k]);
    rep.row(x, "lambda_re", cr.lambda[k].real());
    rep.row(x, "lambda_im", cr.lambda[k].imag(), 1e-8, std::abs(cr.lambda[k].imag()) <= 1e-8);
  }
  for (const cd z : annulus_grid(4, 16, 0.2, 0.95)) {
    const Vec4 x = disk_point(v, z);
    rep.row(x, "g1_re", g1(z).real());
    rep.row(x, "g1_im", g1(z).imag());
  }
}

void variations(const RunConfig& c, const Args& a, Report& rep) {
  const DeformationTensor phi = make_deformation(c);
  const AcStructure J(phi);
  const CVec2 v = unit_direction(a.v);
  const CVec2 w = a.w.empty() ? generic_tangent(v) : parse_complex_vector(a.w);
  const VariationField W = coordinate_variation(v, w);
  const auto grid = variation_grid();
  const double rw = variation_residual(J, W, grid);
  const double rl = variation_lift_residual(J, W, grid);
  const VariationField anti = antiholomorphic_variation(v, w);
  const double ra = variation_residual(J, anti, grid);
  const double ral = variation_lift_residual(J, anti, grid);
  const ClosureReport cl = very_nice_closure_test(phi, v, w, probes(c));
  rep.check("coordinate_variation", "linearized J-holomorphy of zeta w", rw, 1e-6);
  rep.check("tangent_lift_agreement", "same field as a map into TM", rl, 1e-6);
  rep.check_at_least("antiholomorphic_control", "conj(zeta) w is detected", ra, 1e-2);
  rep.check_at_least("antiholomorphic_lift_control", "conj(zeta) w detected by the tangent lift", ral, 1e-2);
  const double ratio = std::max(ra, ral) / std::max(std::min(ra, ral), 1e-300);
  rep.check("engine_ratio", "residual engines agree within a factor 10", ratio, 10.0);
  rep.check("boundary_attachment", "W tangent to the sphere on the circle", boundary_attachment(W), 1e-8);
  rep.info("j_rotated_residual", "J o W residual", cl.residual_JW);
  rep.info("lie_Z01_phiH_disk", "L_{Z^01} phi^H along the disk", cl.lie_phiH_disk);
  rep.info("lie_Z01_J_disk", "L_{Z^01} J along the disk", cl.lie_J_disk);
  rep.flag("closure_consistent", "J o W passes iff very nice", cl.consistent());
  rep.data()["v"] = vec_json(v);
  rep.data()["w"] = vec_json(w);
  rep.data()["closure"] = {{"verdict_W", verdict_name(cl.verdict_W)},
                           {"verdict_JW", verdict_name(cl.verdict_JW)},
                           {"very_nice", cl.very_nice},
                           {"note", cl.note()}};
  const VariationField JW = j_rotated(J, W);
  for (const cd z : annulus_grid(3, 12, 0.2, 0.9)) {
    const Vec4 x = disk_point(v, z);
    const double d = variation_defect(J, W, z).cwiseAbs().maxCoeff();
    rep.row(x, "W_defect", d, 1e-6, d <= 1e-6);
    rep.row(x, "JW_defect", variation_defect(J, JW, z).cwiseAbs().maxCoeff());
  }
}

void ma_report(const RunConfig& c, const Args& a, Report& rep) {
  Potential u;
  if (a.u == "log_tau0") u = potential_log_tau0();
  else if (a.u == "tau0") u = potential_tau0();
  else throw ConfigError("unknown potential '" + a.u + "' (log_tau0 | tau0)");
  const DeformationTensor phi = make_deformation(c);
  const AcStructure J(phi);
  const StructureField Jf = J.field();
  const auto pts = probes(c);
  const int n = int(pts.size());
  std::vector<HessianReport> hs(static_cast<std::size_t>(n));
  std::vector<DegeneracyReport> ds(static_cast<std::size_t>(n));
  parallel_for(n, thread_hint(), [&](int i) {
    hs[std::size_t(i)] = j_hessian(u, Jf, pts[std::size_t(i)]);
    ds[std::size_t(i)] = ma_degeneracy(u, Jf, pts[std::size_t(i)]);
  });
  constexpr double kDegTol = 1e-6;
  double sym = 0.0, herm = 0.0, min_eig = 1e300, max_min_abs = 0.0, cross = 0.0;
  int disagree = 0, degenerate = 0;
  ordered_json points = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    const auto& h = hs[std::size_t(i)];
    const auto& d = ds[std::size_t(i)];
    sym = std::max(sym, h.symmetry);
    herm = std::max(herm, h.j_hermitian);
    cross = std::max(cross, h.cross_check);
    min_eig = std::min(min_eig, h.eigenvalues(0));
    max_min_abs = std::max(max_min_abs, d.min_abs_eigenvalue);
    const bool de = d.degenerate(kDegTol), dp = d.pfaffian_degenerate(kDegTol);
    degenerate += de;
    disagree += de != dp;
    const Vec4& x = pts[std::size_t(i)];
    rep.row(x, "min_eigenvalue", h.eigenvalues(0), -c.tolerances.psh, h.eigenvalues(0) >= -c.tolerances.psh);
    rep.row(x, "min_abs_eigenvalue", d.min_abs_eigenvalue, kDegTol, de);
    rep.row(x, "pfaffian", d.pfaffian, kDegTol * 4.0 * std::max(1.0, d.max_abs_eigenvalue), dp);
    rep.row(x, "determinant", d.det);
    points.push_back({{"x", ordered_json::array({x(0), x(1), x(2), x(3)})},
                      {"eigenvalues", ordered_json::array({h.eigenvalues(0), h.eigenvalues(1), h.eigenvalues(2), h.eigenvalues(3)})},
                      {"residual", h.residual}});
  }
  rep.check("hessian_symmetry", "H symmetric", sym, 1e-9);
  rep.check("hessian_j_hermitian", "H(J., J.) = H", herm, 1e-6);
  rep.check("complexified_cross_check", "polarized and complexified Hessians agree", cross, 1e-5);
  rep.check("detector_disagreements", "eigenvalue and Pfaffian degeneracy agree", double(disagree), 0.0);
  rep.check_at_least("min_eigenvalue", "plurisubharmonic: Levi form >= 0", min_eig, -c.tolerances.psh);
  rep.info("max_min_abs_eigenvalue", "Monge-Ampere degeneracy", max_min_abs);
  rep.info("degenerate_points", "Monge-Ampere degeneracy", double(degenerate));
  Sampler s(c.seed + 41);
  double harm = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Vec4 r = s.unit4();
    harm = std::max(harm, harmonicity_along_disk(u, to_complex(r), annulus_grid(4, 16, 0.2, 0.9)));
  }
  rep.info("harmonicity_along_disks", "flat Laplacian of u(zeta v)", harm);
  rep.data()["potential"] = a.u;
  rep.data()["points"] = points;
}

void green(const RunConfig& c, Report& rep) {
  const AcStructure J(make_deformation(c));
  GreenRegion g;
  g.rho_min = c.probes.rho_min;
  g.rho_max = c.probes.rho_max;
  g.samples = c.probes.samples;
  g.seed = c.seed;
  g.tol_psh = c.tolerances.psh;
  const GreenReport r = green_check(J, g);
  rep.check("boundary_values", "u -> 0 at the sphere", r.boundary_max, g.tol_boundary);
  rep.check("boundary_trend", "u -> 0 at the sphere (decay)", r.boundary_trend, g.tol_trend);
  rep.check("pole_deviation", "u - log|x|^2 bounded near the pole", r.pole_deviation, g.pole_bound);
  rep.check_at_least("psh_min_eigenvalue", "plurisubharmonic", r.psh.min_eigenvalue, -g.tol_psh);
  rep.check("ma_degeneracy", "Monge-Ampere equation", r.ma_max, g.tol_ma);
  rep.row(r.psh.argmin, "psh_argmin_eigenvalue", r.psh.min_eigenvalue, -g.tol_psh, r.psh_ok);
  rep.data()["verdicts"] = {{"boundary", r.boundary_ok}, {"pole", r.pole_ok}, {"psh", r.psh_ok}, {"ma", r.ma_ok}};
}

void example58(const RunConfig& c, Report& rep) {
  const DeformationTensor phi = make_deformation(c);
  if (phi.family() != Family::radial_h && phi.family() != Family::standard)
    throw ConfigError("example58 needs the radial_h or standard family");
  constexpr double kTol = 2e-5;
  const auto pts = probe_points(c.seed, c.probes.samples, 0.35, 0.45);
  const Example58Report r = example58_report(phi, pts);
  rep.check("identities", "auxiliary derivative identities", r.max_identity_error, kTol);
  rep.check("hessian_matrix", "H = [[1+2hh_Z,0,h_Z,0],...]", r.max_H_error, kTol);
  rep.check("eigenvalues", "lambda_pm, each double", r.max_eigen_error, kTol);
  rep.check_at_least("psh_min_eigenvalue", "plurisubharmonic iff h_Z = 0", r.min_eigenvalue, -c.tolerances.psh);
  ordered_json table = ordered_json::array();
  const std::size_t per = r.rows.size() / std::max<std::size_t>(1, r.points.size());
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    const Vec4& x = r.points[k / std::max<std::size_t>(1, per)];
    rep.row(x, row.name, row.error(), kTol, row.error() <= kTol);
    table.push_back({{"identity", row.name},
                     {"expected", complex_json(row.expected)},
                     {"computed", complex_json(row.computed)},
                     {"error", row.error()}});
  }
  for (std::size_t k = 0; k < r.points.size(); ++k) rep.row(r.points[k], "min_eigenvalue", r.hessians[k].eigenvalues(0));
  rep.data()["frame"] = "E~, JE~, Z, JZ";
  rep.data()["table"] = table;
  if (!r.hessians.empty()) {
    rep.data()["H_first_point"] = mat_json(r.hessians.front().H);
    rep.data()["H_expected_first_point"] = mat_json(r.expected_H.front());
  }
}

void print_summary(const Report& rep, bool quiet) {
  if (quiet) return;
  for (const auto& c : rep.checks()) {
    std::printf("%-28s %-5s %s", c.name.c_str(), c.informational ? "INFO" : (c.pass() ? "PASS" : "FAIL"),
                format_double(c.value).c_str());
    if (!c.informational) std::printf(" (%s %s)", c.lower_bound ? ">=" : "<=", format_double(c.tolerance).c_str());
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for almost complex structures on the ball"};
  app.require_subcommand(1);
  Args a;
  const auto common = [&](CLI::App* s) {
    s->add_option("--config", a.config, "JSON run configuration")->required();
    s->add_option("--out", a.out, "output directory for <command>.json and <command>.csv");
    s->add_flag("--quiet", a.quiet, "no summary on stdout");
  };
  auto* solve = app.add_subcommand("solve-stationary", "stationary lift of the disk zeta v");
  common(solve);
  solve->add_option("--v", a.v, "direction, two complex components e.g. \"0,1\" or \"0.6+0.2i,0.1-0.3i\"");
  solve->add_option("--method", a.method, "auto | rh | radial");
  auto* check = app.add_subcommand("check-structure", "J^2 = -Id, L-condition (i), nicety");
  common(check);
  auto* lift = app.add_subcommand("lift-verify", "canonical lifts to TM and T*M");
  common(lift);
  auto* var = app.add_subcommand("variations", "variation residuals and the closure test");
  common(var);
  var->add_option("--v", a.v, "disk direction");
  var->add_option("--w", a.w, "tangent direction at v (default: a generic one)");
  auto* ma = app.add_subcommand("ma-report", "J-Hessian, Monge-Ampere degeneracy, psh");
  common(ma);
  ma->add_option("--u", a.u, "log_tau0 | tau0");
  auto* gc = app.add_subcommand("green-check", "Green function checks for log tau0");
  common(gc);
  auto* ex = app.add_subcommand("example58", "radial_h Hessian reproduction");
  common(ex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return kExitPass;
    std::fprintf(stderr, "{\"error\": {\"kind\": \"usage\", \"message\": %s}}\n", ordered_json(e.what()).dump().c_str());
    return kExitError;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  std::optional<Report> rep;
  try {
    const RunConfig cfg = load_config(a.config);
    rep.emplace(cmd, cfg);
    if (cmd == "check-structure") check_structure(cfg, *rep);
    else if (cmd == "lift-verify") lift_verify(cfg, *rep);
    else if (cmd == "solve-stationary") solve_stationary(cfg, a, *rep);
    else if (cmd == "variations") variations(cfg, a, *rep);
    else if (cmd == "ma-report") ma_report(cfg, a, *rep);
    else if (cmd == "green-check") green(cfg, *rep);
    else if (cmd == "example58") example58(cfg, *rep);
  } catch (const std::exception& e) {
    const bool config = dynamic_cast<const ConfigError*>(&e) != nullptr;
    const std::string kind = config ? "config" : "assembly";
    if (!rep) rep.emplace(cmd, ordered_json(nullptr));
    rep->error(kind, e.what());
    std::fprintf(stderr, "{\"error\": {\"kind\": \"%s\", \"message\": %s}}\n", kind.c_str(), ordered_json(e.what()).dump().c_str());
    try {
      rep->write(a.out);
    } catch (const std::exception&) {
    }
    return kExitError;
  }
  rep->write(a.out);
  print_summary(*rep, a.quiet);
  const bool ok = rep->all_pass();
  if (!a.quiet) std::printf("status: %s\n", ok ? "pass" : "fail");
  return ok ? kExitPass : kExitFail;
}
