#pragma once

// Generalized Riemann-Hilbert system for the cotangent lift of a straight
// disk zeta -> zeta v, its solution on polynomial spaces, and the checks that
// the assembled lift is stationary.  Only n = 2 is implemented: the unknowns
// are g_1 and g_1bar = conj(g_1).

#include "acx/disk_calculus.hpp"
#include "acx/lift_lab.hpp"

#include <optional>

namespace acx {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coefficients of the system at one node, fiber indices (1, 1bar):
//   C g_{,zbar} + A g = rhs   on the disk,   D g = G   on the circle.
// rhs is the term carried by g_0 = g_0bar = 1; F = C^+ rhs.
struct RhNode {
  CMat2 C, A, D;
  CVec2 rhs, F, G;
};

class RhSystem {
 public:
  // v is a unit vector of C^2; the structure is conjugated by a unitary U
  // with U (0, 1) = v so that the disk becomes the chart axis w = 0.
  RhSystem(const AcStructure& J, const CVec2& v) : v_(v.normalized()) {
    if (std::abs(v.norm() - 1.0) > 1e-9) throw std::invalid_argument("direction must be a unit vector");
    u_ = unitary_to(v_);
    J_ = J.rotated_by(u_);
  }

  const CVec2& v() const { return v_; }
  const CMat2& rotation() const { return u_; }
  const AcStructure& chart_structure() const { return J_; }

  // Chart components at z0 = zeta, w = 0 in index order (0, 0bar, 1, 1bar).
  AcStructure::ChartComponents components(cd zeta) const { return J_.chart_components(zeta, 0.0); }

  RhNode node(cd zeta) const {
    const auto cc = components(zeta);
    const CMat4& K = cc.K;
    const CMat4& Kd = cc.K_dbar0;
    // Afull(A, B) = -(i/2)(J^B_{A,0bar} + i J^B_L J^L_{A,0bar}), all B.
    CMat4 afull;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        cd s = Kd(b, a);
        for (int l = 0; l < 4; ++l) s += kI * K(b, l) * Kd(l, a);
        afull(a, b) = -0.5 * kI * s;
      }
    RhNode n;
    for (int a = 0; a < 2; ++a) {
      const int A = a + 2;
      for (int b = 0; b < 2; ++b) {
        const int B = b + 2;
        n.C(a, b) = (a == b ? 1.0 : 0.0) - kI * K(B, A);
        n.A(a, b) = afull(A, B);
        n.D(a, b) = (a == b ? zeta.real() : 0.0) - zeta.imag() * K(B, A);
      }
      n.rhs(a) = -(afull(A, 0) + afull(A, 1));
      n.G(a) = zeta.imag() * (K(0, A) + K(1, A));
    }
    n.F = n.C.completeOrthogonalDecomposition().pseudoInverse() * n.rhs;
    return n;
  }

 private:
  CVec2 v_;
  CMat2 u_;
  AcStructure J_;
};

inline RhSystem assemble_rh(const AcStructure& J, const CVec2& v) { return RhSystem(J, v); }

struct InvertibilityReport {
  double C_sigma_max = 0.0;        // largest singular value of C over the disk grid
  double C_sigma_min = 0.0;        // smallest singular value of C (zero for L-structures)
  double C_range_sigma_min = 1e300;  // min over nodes of the nonzero singular value
  int C_rank = 0;
  double D_sigma_min = 1e300;
  double D_cond_max = 0.0;
  bool pass = false;
  std::string warning;
};

// C = I - i J on the fiber block has rank n - 1 whenever J restricted to the
// quotient by Z is a complex structure, so the report tracks the rank and the
// smallest nonzero singular value of C together with the conditioning of D.
inline InvertibilityReport check_invertibility(const RhSystem& S, int radii = 8, int angles = 32,
                                               double warn_sigma = 0.5) {
  InvertibilityReport r;
  r.C_sigma_min = 1e300;
  int rank = -1;
  for (const cd z : polar_grid(radii, angles)) {
    const RhNode n = S.node(z);
    const Eigen::JacobiSVD<CMat2> svd(n.C);
    const auto s = svd.singularValues();
    r.C_sigma_max = std::max(r.C_sigma_max, s(0));
    r.C_sigma_min = std::min(r.C_sigma_min, s(1));
    const int k = (s(1) > 1e-8 * s(0)) ? 2 : (s(0) > 1e-8 ? 1 : 0);
    if (rank < 0) rank = k;
    if (k != rank) r.warning = "rank of C changes across the disk";
    r.C_range_sigma_min = std::min(r.C_range_sigma_min, s(k > 0 ? k - 1 : 0));
  }
  r.C_rank = std::max(rank, 0);
  for (int j = 0; j < angles; ++j) {
    const cd z = std::polar(1.0, 2.0 * kPi * j / angles);
    const auto s = Eigen::JacobiSVD<CMat2>(S.node(z).D).singularValues();
    r.D_sigma_min = std::min(r.D_sigma_min, s(1));
    r.D_cond_max = std::max(r.D_cond_max, s(0) / s(1));
  }
  r.pass = r.D_sigma_min > warn_sigma && r.C_range_sigma_min > warn_sigma;
  if (!r.pass && r.warning.empty()) r.warning = "near-singular boundary or interior matrix";
  return r;
}

struct SolveOptions {
  int degree = 24;
  int radii = 32;
  int angles = 0;  // 0: 2 * degree + 9
  int max_iterations = 200;
  double damping = 0.5;
  double step_tol = 1e-13;
};

struct RhSolution {
  DiskFunction g1;               // g_1; g_1bar = conj(g_1)
  double interior_residual = 0;  // sup |e^H (C g_zbar + A g - rhs)| over collocation nodes, e the range row of C
  double algebraic_residual = 0; // same for the kernel row of C
  double boundary_residual = 0;  // sup |D g - G| over boundary nodes
  int iterations = 0;
  int kernel_dimension = 0;      // real dimension of the boundary least-squares kernel
  bool trivial = false;
};

namespace detail {

// Row of C with unit weight along its range: e^H C with e the top left
// singular vector, and the companion kernel row.
struct RowSplit {
  CVec2 range, kernel;
};
inline RowSplit row_split(const CMat2& c) {
  const Eigen::JacobiSVD<CMat2> svd(c, Eigen::ComputeFullU);
  return {svd.matrixU().col(0), svd.matrixU().col(1)};
}

// e^H (C g_zbar + A g - rhs) with g = (g1, conj g1) at a point.
inline cd row_residual(const RhNode& n, const CVec2& e, const DiskFunction& g1, const DiskFunction& dbar_g1,
                       const DiskFunction& d_g1, cd z) {
  const cd v = g1(z);
  const CVec2 g(v, std::conj(v));
  const CVec2 gz(dbar_g1(z), std::conj(d_g1(z)));
  return e.dot(n.C * gz + n.A * g - n.rhs);
}

}  // namespace detail

// Interior and boundary residuals of a candidate g_1.
inline void evaluate_residuals(const RhSystem& S, RhSolution& sol, int radii, int angles) {
  const DiskFunction db = dbar(sol.g1), dz = d_dzeta(sol.g1);
  sol.interior_residual = sol.algebraic_residual = sol.boundary_residual = 0.0;
  for (const cd z : polar_grid(radii, angles)) {
    const RhNode n = S.node(z);
    const auto split = detail::row_split(n.C);
    sol.interior_residual = std::max(sol.interior_residual, std::abs(detail::row_residual(n, split.range, sol.g1, db, dz, z)));
    sol.algebraic_residual = std::max(sol.algebraic_residual, std::abs(detail::row_residual(n, split.kernel, sol.g1, db, dz, z)));
  }
  for (int j = 0; j < angles; ++j) {
    const cd z = std::polar(1.0, 2.0 * kPi * j / angles);
    const RhNode n = S.node(z);
    const cd v = sol.g1(z);
    sol.boundary_residual = std::max(sol.boundary_residual, (n.D * CVec2(v, std::conj(v)) - n.G).cwiseAbs().maxCoeff());
  }
}

namespace detail {

// Holomorphic P of degree d minimizing sum |D (u + P, conj(u + P)) - G|^2 over
// boundary nodes.  Real-linear in the coefficients of P; minimal-norm solution.
inline DiskFunction boundary_match(const RhSystem& S, const DiskFunction& u, int degree, int angles, int* kernel) {
  const int nc = degree + 1;
  Eigen::MatrixXd a(4 * angles, 2 * nc);
  Eigen::VectorXd y(4 * angles);
  for (int j = 0; j < angles; ++j) {
    const cd z = std::polar(1.0, 2.0 * kPi * j / angles);
    const RhNode n = S.node(z);
    const cd uv = u(z);
    const CVec2 res = n.G - n.D * CVec2(uv, std::conj(uv));
    for (int row = 0; row < 2; ++row) {
      y(4 * j + 2 * row) = res(row).real();
      y(4 * j + 2 * row + 1) = res(row).imag();
      for (int k = 0; k < nc; ++k) {
        const cd zk = std::pow(z, k);
        // d/d(Re p_k) and d/d(Im p_k) of D (P, conj P).
        const cd dre = n.D(row, 0) * zk + n.D(row, 1) * std::conj(zk);
        const cd dim = n.D(row, 0) * kI * zk - n.D(row, 1) * kI * std::conj(zk);
        a(4 * j + 2 * row, 2 * k) = dre.real();
        a(4 * j + 2 * row + 1, 2 * k) = dre.imag();
        a(4 * j + 2 * row, 2 * k + 1) = dim.real();
        a(4 * j + 2 * row + 1, 2 * k + 1) = dim.imag();
      }
    }
  }
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  int k = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) < 1e-8 * s(0)) ++k;
  if (kernel) *kernel = k;
  Eigen::BDCSVD<Eigen::MatrixXd> solver = svd;
  solver.setThreshold(1e-8);
  const Eigen::VectorXd x = solver.solve(y);
  DiskFunction p(degree);
  for (int i = 0; i < nc; ++i) p.set(i, 0, cd(x(2 * i), x(2 * i + 1)));
  return p;
}

}  // namespace detail

// Fixed point g_1 <- T[F_eff(g)] + P with F_eff from the range row of C and P
// holomorphic fitted to the boundary condition in least squares.
inline RhSolution solve_rh(const RhSystem& S, const SolveOptions& opt = {}) {
  if (opt.degree < 8) throw std::invalid_argument("degree must be at least 8");
  const int angles = opt.angles > 0 ? std::max(opt.angles, 2 * opt.degree + 9) : 2 * opt.degree + 9;
  const auto pts = polar_grid(opt.radii, angles);
  std::vector<RhNode> nodes;
  std::vector<detail::RowSplit> rows;
  nodes.reserve(pts.size());
  bool zero_data = true;
  for (const cd z : pts) {
    nodes.push_back(S.node(z));
    rows.push_back(detail::row_split(nodes.back().C));
    if (nodes.back().rhs.cwiseAbs().maxCoeff() > 1e-14) zero_data = false;
  }
  for (int j = 0; j < angles && zero_data; ++j)
    if (S.node(std::polar(1.0, 2.0 * kPi * j / angles)).G.cwiseAbs().maxCoeff() > 1e-14) zero_data = false;

  RhSolution sol;
  sol.g1 = DiskFunction(opt.degree);
  if (zero_data) {
    sol.trivial = true;
    evaluate_residuals(S, sol, opt.radii, angles);
    return sol;
  }

  double last_step = 1e300;
  double damping = 1.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const DiskFunction dz = d_dzeta(sol.g1);
    std::vector<cd> samples;
    samples.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const RhNode& n = nodes[i];
      const CVec2& e = rows[i].range;
      const CVec2 ec = n.C.adjoint() * e;  // e^H C = ec^H
      const cd alpha = std::conj(ec(0)), beta = std::conj(ec(1));
      const cd v = sol.g1(pts[i]);
      const CVec2 ea = n.A.adjoint() * e;
      const cd lower = std::conj(ea(0)) * v + std::conj(ea(1)) * std::conj(v);
      const cd f = (e.dot(n.rhs) - beta * std::conj(dz(pts[i])) - lower) / alpha;
      samples.push_back(f);
    }
    const DiskFunction t = cauchy_transform(fit_polar(samples, opt.degree - 1, opt.radii, angles).f);
    const DiskFunction p = detail::boundary_match(S, t, opt.degree, angles, &sol.kernel_dimension);
    DiskFunction next = (t + p).resized(opt.degree);
    if (damping < 1.0) next = damping * next + (1.0 - damping) * sol.g1;
    const double step = (next - sol.g1).max_abs_coeff();
    sol.g1 = next;
    sol.iterations = it;
    if (step < opt.step_tol * std::max(1.0, sol.g1.max_abs_coeff())) break;
    if (step > 0.9 * last_step && damping == 1.0) damping = opt.damping;
    last_step = step;
    if (it == opt.max_iterations) throw SolverError("fixed-point iteration did not converge");
  }
  evaluate_residuals(S, sol, opt.radii, angles);
  return sol;
}

// g_1 = T[F1] - holomorphic_match(trace T[F1]) + k (zeta^2 - 1).
inline DiskFunction solve_radial(const DiskFunction& F1, double k, double radial_tol = 1e-10) {
  for (int t = 0; t <= F1.degree(); ++t)
    for (int b = 0; b <= t; ++b)
      if (t - b != b && std::abs(F1.coeff(t - b, b)) > radial_tol)
        throw std::invalid_argument("solve_radial expects a radial right-hand side");
  const DiskFunction tf = cauchy_transform(F1);
  DiskFunction g = tf - holomorphic_match(boundary_trace(tf));
  g.set(2, 0, g.coeff(2, 0) + k);
  g.set(0, 0, g.coeff(0, 0) - k);
  return g;
}

struct RadialSolve {
  DiskFunction g;
  double negative_mass = 0.0;  // l2 mass of the unmatchable negative modes
};

// General form: dbar g = F1 with boundary values `target`.  The negative modes
// of target - trace T[F1] cannot be met by a holomorphic correction; they are
// dropped and reported.
inline RadialSolve solve_radial(const DiskFunction& F1, const BoundaryFunction& target) {
  const DiskFunction tf = cauchy_transform(F1);
  const BoundaryFunction gap = target - boundary_trace(tf);
  RadialSolve out;
  out.negative_mass = gap.negative_mass();
  DiskFunction h(std::max(gap.max_mode(), 0));
  for (int k = 0; k <= gap.max_mode(); ++k) h.set(k, 0, gap.mode(k));
  out.g = tf + h;
  return out;
}

// ---------------------------------------------------------------------------
// Assembled lift and conormal verification

using DiskScalar = std::function<cd(cd)>;

struct StationaryLift {
  CVec2 v;
  CMat2 rotation;
  AcStructure chart_structure;  // J conjugated by the rotation
  DiskScalar g0;                // 1 for a genuine stationary lift
  DiskScalar g1;                // g_1bar = conj(g_1), g_0bar = conj(g_0)

  // Complex fiber components (g_0, g_0bar, g_1, g_1bar) at zeta.
  CVec4 fiber(cd zeta) const {
    const cd a = g0(zeta), b = g1(zeta);
    return CVec4(a, std::conj(a), b, std::conj(b));
  }
  // The lift as a point of T*(chart): (Re z0, Im z0, Re w, Im w, real p).
  Vec8 point(cd zeta, const IndexTable& t = {}) const {
    Vec8 y;
    y << zeta.real(), zeta.imag(), 0.0, 0.0, t.covector_to_real(fiber(zeta));
    return y;
  }
};

inline StationaryLift assemble_stationary_lift(const RhSystem& S, const DiskScalar& g1) {
  return {S.v(), S.rotation(), S.chart_structure(), [](cd) { return cd(1.0); }, g1};
}
inline StationaryLift assemble_stationary_lift(const RhSystem& S, const DiskFunction& g1) {
  return assemble_stationary_lift(S, DiskScalar([g1](cd z) { return g1(z); }));
}

// Exact solution for the radial_h family on disks with v1^2 + v2^2 > 0 (the
// frame phase is 1 along the whole disk): the data are F_1 = h + rho h'/2 and
// g_1 = -eps (zeta - conj zeta) on the circle, solved by
//   g_1 = conj(zeta) h(|zeta|) - h(1) zeta.
inline bool radial_h_closed_form_applies(const CVec2& v, double tol = 1e-12) {
  const cd p = v(0) * v(0) + v(1) * v(1);
  return std::abs(p.imag()) <= tol && p.real() > tol;
}
inline DiskScalar radial_h_axis_solution(const DeformationTensor& phi) {
  if (phi.family() != Family::radial_h) throw std::invalid_argument("closed form exists for the radial_h family only");
  const double h1 = phi.h(1.0);
  return [phi, h1](cd z) { return std::conj(z) * phi.h(std::abs(z)) - h1 * z; };
}

// Wirtinger derivatives by central differences.
inline std::pair<cd, cd> wirtinger(const DiskScalar& f, cd z, double h = 1e-6) {
  const cd fx = (f(z + h) - f(z - h)) / (2.0 * h);
  const cd fy = (f(z + kI * h) - f(z - kI * h)) / (2.0 * h);
  return {0.5 * (fx - kI * fy), 0.5 * (fx + kI * fy)};  // (d/dzeta, d/dzbar)
}

struct ConormalReport {
  double lambda_imag_max = 0.0;   // sup |Im lambda| on the circle
  double lambda_abs_min = 1e300;  // inf |lambda|
  double lambda_real_min = 1e300;
  double lambda_real_max = -1e300;
  double annihilation_max = 0.0;  // sup |zeta^{-1} . f~ (X)| over a basis X of T(sphere)
  double holomorphy = 0.0;        // cotangent holomorphy residual on an annulus
  double reduced_row_max = 0.0;   // sup of the reduced fiber equation, rows 1 and 1bar
  bool lambda_ok = false, annihilation_ok = false, holomorphy_ok = false;
  std::vector<cd> boundary_points;  // zeta on the circle
  std::vector<cd> lambda;           // lambda(zeta) at those points
  bool pass() const { return lambda_ok && annihilation_ok && holomorphy_ok; }
  std::string failed_clause() const {
    if (!lambda_ok) return "lambda not real or vanishing";
    if (!annihilation_ok) return "boundary covector does not annihilate the sphere";
    if (!holomorphy_ok) return "lift is not holomorphic for the cotangent lift";
    return "";
  }
};

// c . alpha = Re(c) alpha - Im(c) J^* alpha with J^* alpha (X) = -alpha(J X),
// applied in chart coordinates to a real covector.
inline Vec4 act_on_covector(cd c, const Mat4& J, const Vec4& p) { return c.real() * p + c.imag() * (J.transpose() * p); }

inline ConormalReport verify_conormal(const StationaryLift& lift, int angles = 64, double tol_lambda = 1e-8,
                                      double tol_ann = 1e-6, double tol_holo = 1e-5) {
  ConormalReport r;
  const IndexTable t;
  const JetField jet = chart_jet(lift.chart_structure);
  for (int j = 0; j < angles; ++j) {
    const cd z = std::polar(1.0, 2.0 * kPi * j / angles);
    const Vec8 y = lift.point(z, t);
    const Vec4 c = y.head<4>();
    const Mat4 Jc = jet(c).J;
    const Vec4 rotated = act_on_covector(1.0 / z, Jc, y.tail<4>());
    const CVec4 rc = t.covector_to_complex(rotated);
    const cd lambda = z * rc(0);
    r.boundary_points.push_back(z);
    r.lambda.push_back(lambda);
    r.lambda_imag_max = std::max(r.lambda_imag_max, std::abs(lambda.imag()));
    r.lambda_abs_min = std::min(r.lambda_abs_min, std::abs(lambda));
    r.lambda_real_min = std::min(r.lambda_real_min, lambda.real());
    r.lambda_real_max = std::max(r.lambda_real_max, lambda.real());
    // Tangent space of the unit sphere in chart coordinates: kernel of d(tau0 o chart).
    const std::array<double, 4> ca = {c(0), c(1), c(2), c(3)};
    const auto dm = detail::chart_jacobian(ca);
    const auto xp = detail::chart_point(ca);
    Mat4 d;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) d(a, b) = dm[std::size_t(a)][std::size_t(b)];
    const Vec4 grad = d.transpose() * (2.0 * Vec4(xp[0], xp[1], xp[2], xp[3]));
    const Eigen::FullPivLU<Eigen::Matrix<double, 1, 4>> lu(grad.transpose());
    const Eigen::MatrixXd basis = lu.kernel();
    for (Eigen::Index k = 0; k < basis.cols(); ++k)
      r.annihilation_max = std::max(r.annihilation_max, std::abs(rotated.dot(basis.col(k).normalized())));
  }
  const LiftedStructure L = lift_cotangent(jet);
  r.holomorphy = holomorphy_residual([&](cd z) { return lift.point(z, t); }, L, annulus_grid(6, 24, 0.2, 0.95));
  for (const cd z : annulus_grid(6, 24, 0.2, 0.95)) {
    const auto cc = lift.chart_structure.chart_components(z, 0.0);
    const CVec4 g = lift.fiber(z);
    const auto [e0, d0] = wirtinger(lift.g0, z);
    const auto [e1, d1] = wirtinger(lift.g1, z);
    const CVec4 gz(d0, std::conj(e0), d1, std::conj(e1));
    for (int A = 2; A < 4; ++A) {
      const LiftRow row = lift_row(cc, A);
      r.reduced_row_max = std::max(r.reduced_row_max, std::abs(row.dbar_coeff.cwiseProduct(gz).sum() + row.g_coeff.cwiseProduct(g).sum()));
    }
  }
  r.lambda_ok = r.lambda_imag_max < tol_lambda && r.lambda_abs_min > tol_lambda;
  r.annihilation_ok = r.annihilation_max < tol_ann;
  r.holomorphy_ok = r.holomorphy < tol_holo;
  return r;
}

}  // namespace acx
