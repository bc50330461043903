#pragma once

// Levi form, J-Hessian, Monge-Ampere degeneracy, plurisubharmonicity and
// Green-function checks for potentials on B^2 \ {0}, and the term-by-term
// reproduction of the log tau0 computation for the radial_h family.

#include "acx/acs_core.hpp"
#include "acx/disk_calculus.hpp"

#include <Eigen/Eigenvalues>

#include <string>
#include <vector>

namespace acx {

inline double levi_form(const Potential& u, const StructureField& J, const Vec4& x, const Vec4& X,
                        double h = kBracketStep) {
  return ddc(u, J, x, X, J(x) * X, h);
}

struct HessianReport {
  Vec4 point;
  std::string frame;
  Mat4 H;                    // H(i, j) = Hess(e_i, e_j)
  Vec4 eigenvalues;          // ascending
  double residual = 0.0;     // Richardson estimate of the finite-difference error
  double cross_check = 0.0;  // max |polarized - complexified|
  double symmetry = 0.0;     // max |H - H^T| before symmetrization
  double j_hermitian = 0.0;  // max |Hess(J e_i, J e_j) - Hess(e_i, e_j)|, orthonormal frames only
};

namespace detail {

inline Mat4 polarized_hessian(const Potential& u, const StructureField& J, const Vec4& x,
                              const std::array<Vec4, 4>& e, double h) {
  const Mat4 j = J(x);
  Mat4 H;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Vec4 &ea = e[std::size_t(a)], &eb = e[std::size_t(b)];
      H(a, b) = 0.5 * (ddc(u, J, x, ea, j * eb, h) + ddc(u, J, x, eb, j * ea, h));
    }
  return H;
}

// 1/2 Im (i X10(Y01(u)) + i Y01(X10(u)) + J[X10, Y01](u)) with X, Y extended
// as constant fields, X10 = X - iJX, Y01 = Y + iJY.
inline double complexified_hessian(const Potential& u, const StructureField& J, const Vec4& x, const Vec4& X,
                                   const Vec4& Y, double h) {
  const auto y01u = [&](const Vec4& p) { return cd(u.grad(p).dot(Y), u.grad(p).dot(J(p) * Y)); };
  const auto x10u = [&](const Vec4& p) { return cd(u.grad(p).dot(X), -u.grad(p).dot(J(p) * X)); };
  const Mat4 j = J(x);
  const auto along = [&](const auto& g, const Vec4& d) { return (g(x + h * d) - g(x - h * d)) / (2.0 * h); };
  const cd x10_y01u = along(y01u, X) - kI * along(y01u, Vec4(j * X));
  const cd y01_x10u = along(x10u, Y) + kI * along(x10u, Vec4(j * Y));
  const VectorField fx = [&](const Vec4&) { return X; };
  const VectorField fy = [&](const Vec4&) { return Y; };
  const VectorField jx = [&](const Vec4& p) { return Vec4(J(p) * X); };
  const VectorField jy = [&](const Vec4& p) { return Vec4(J(p) * Y); };
  // [X - iJX, Y + iJY] = [X,Y] + [JX,JY] + i([X,JY] - [JX,Y]).
  const Vec4 re = lie_bracket(fx, fy, x, h) + lie_bracket(jx, jy, x, h);
  const Vec4 im = lie_bracket(fx, jy, x, h) - lie_bracket(jx, fy, x, h);
  const Vec4 g = u.grad(x);
  const cd jbr(g.dot(j * re), g.dot(j * im));
  return 0.5 * std::imag(kI * x10_y01u + kI * y01_x10u + jbr);
}

}  // namespace detail

inline std::array<Vec4, 4> coordinate_frame() {
  return {Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0), Vec4(0, 0, 1, 0), Vec4(0, 0, 0, 1)};
}

inline HessianReport j_hessian(const Potential& u, const StructureField& J, const Vec4& x,
                               const std::array<Vec4, 4>& frame, const std::string& label = "coordinate",
                               double h = kBracketStep) {
  Mat4 fm;
  for (int k = 0; k < 4; ++k) fm.col(k) = frame[std::size_t(k)];
  const double vol = std::abs(fm.determinant()) / fm.colwise().norm().prod();
  if (!(vol > 1e-8)) throw FrameDegenerateError("frame is degenerate at the point");
  HessianReport r;
  r.point = x;
  r.frame = label;
  // Richardson extrapolation of the second-order stencil.
  const Mat4 coarse = detail::polarized_hessian(u, J, x, frame, h);
  const Mat4 fine = detail::polarized_hessian(u, J, x, frame, 0.5 * h);
  const Mat4 raw = (4.0 * fine - coarse) / 3.0;
  r.symmetry = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  r.H = 0.5 * (raw + raw.transpose());
  r.residual = (fine - coarse).cwiseAbs().maxCoeff() / 3.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      const double c = richardson(
          [&](double hh) { return detail::complexified_hessian(u, J, x, frame[std::size_t(a)], frame[std::size_t(b)], hh); }, h);
      r.cross_check = std::max(r.cross_check, std::abs(c - r.H(a, b)));
    }
  r.eigenvalues = Eigen::SelfAdjointEigenSolver<Mat4>(r.H).eigenvalues();
  if ((fm.transpose() * fm - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12) {
    // Components of Hess(J., J.) in an orthonormal frame: M^T H M, M = F^T J F.
    const Mat4 m = fm.transpose() * J(x) * fm;
    r.j_hermitian = (m.transpose() * r.H * m - r.H).cwiseAbs().maxCoeff();
  }
  return r;
}

inline HessianReport j_hessian(const Potential& u, const StructureField& J, const Vec4& x, double h = kBracketStep) {
  return j_hessian(u, J, x, coordinate_frame(), "coordinate", h);
}

// Pfaffian of the 2-form dd^c u + J^*(dd^c u) in the coordinate frame; its
// square is the coefficient of the top power.
inline double ma_pfaffian(const Potential& u, const StructureField& J, const Vec4& x, double h = kBracketStep) {
  const auto e = coordinate_frame();
  const Mat4 j = J(x);
  const auto form = [&](double step) {
    Mat4 w;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const Vec4 &ea = e[std::size_t(a)], &eb = e[std::size_t(b)];
        w(a, b) = ddc(u, J, x, ea, eb, step) + ddc(u, J, x, j * ea, j * eb, step);
      }
    return w;
  };
  const Mat4 w = (4.0 * form(0.5 * h) - form(h)) / 3.0;
  return w(0, 1) * w(2, 3) - w(0, 2) * w(1, 3) + w(0, 3) * w(1, 2);
}

struct DegeneracyReport {
  double min_abs_eigenvalue = 0.0;
  double max_abs_eigenvalue = 0.0;
  double det = 0.0;
  double pfaffian = 0.0;
  bool degenerate(double tol) const { return min_abs_eigenvalue < tol; }
  // Same verdict from the top-form coefficient.  Eigenvalues of a J-Hermitian
  // form come in pairs (l1, l1, l2, l2) and |Pf| = 4 l1 l2, so the scale is 4 l2.
  bool pfaffian_degenerate(double tol) const { return std::abs(pfaffian) < tol * 4.0 * std::max(1.0, max_abs_eigenvalue); }
};

inline DegeneracyReport ma_degeneracy(const Potential& u, const StructureField& J, const Vec4& x,
                                      double h = kBracketStep) {
  const HessianReport hr = j_hessian(u, J, x, h);
  DegeneracyReport d;
  d.min_abs_eigenvalue = hr.eigenvalues.cwiseAbs().minCoeff();
  d.max_abs_eigenvalue = hr.eigenvalues.cwiseAbs().maxCoeff();
  d.det = hr.H.determinant();
  d.pfaffian = ma_pfaffian(u, J, x, h);
  return d;
}

// ---------------------------------------------------------------------------
// The frame (E~, JE~, Z, JZ) built from the deformation tensor:
// E~^10 = E^10 + conj(c) E^01 + conj(b) Z^01, E~ = Re E~^10, JE~ = Re(i E~^10).

struct ComplexField {
  CVec2 xi, eta;  // xi d/dz + eta d/dzbar
  Vec4 re() const { return to_real(0.5 * (xi + eta.conjugate())); }
  Vec4 im() const { return to_real(-0.5 * kI * (xi - eta.conjugate())); }
  ComplexField conjugate() const { return {eta.conjugate(), xi.conjugate()}; }
};

inline ComplexField field_Z10(const Vec4& x) { return {to_complex(x), CVec2::Zero()}; }
inline ComplexField field_Z01(const Vec4& x) { return field_Z10(x).conjugate(); }
inline ComplexField field_E10(const Vec4& x) {
  const CVec2 z = to_complex(x);
  return {frame_phase(x) * CVec2(-std::conj(z(1)), std::conj(z(0))), CVec2::Zero()};
}
inline ComplexField field_Et10(const DeformationTensor& phi, const Vec4& x) {
  const auto k = phi.coefficients<double>({x(0), x(1), x(2), x(3)});
  const cd b(k.b.re, k.b.im), c(k.c.re, k.c.im);
  const ComplexField e = field_E10(x), z = field_Z01(x);
  return {e.xi, std::conj(c) * e.xi.conjugate() + std::conj(b) * z.eta};
}

inline std::array<Vec4, 4> example_frame(const DeformationTensor& phi, const Vec4& x) {
  const ComplexField e = field_Et10(phi, x);
  return {e.re(), -e.im(), field_Z(x), field_JZ(x)};
}

// Apply a complex field to a complex-valued function by central differences.
template <class G>
cd apply_field(const ComplexField& X, const G& g, const Vec4& x, double h) {
  const Vec4 r = X.re(), i = X.im();
  const cd dr = (g(Vec4(x + h * r)) - g(Vec4(x - h * r))) / (2.0 * h);
  const cd di = (g(Vec4(x + h * i)) - g(Vec4(x - h * i))) / (2.0 * h);
  return dr + kI * di;
}

// [X, Y] for complex fields given as functions of the point.
template <class FX, class FY>
ComplexField complex_bracket(const FX& X, const FY& Y, const Vec4& x, double h) {
  const VectorField xr = [&](const Vec4& p) { return X(p).re(); };
  const VectorField xi = [&](const Vec4& p) { return X(p).im(); };
  const VectorField yr = [&](const Vec4& p) { return Y(p).re(); };
  const VectorField yi = [&](const Vec4& p) { return Y(p).im(); };
  const Vec4 re = lie_bracket(xr, yr, x, h) - lie_bracket(xi, yi, x, h);
  const Vec4 im = lie_bracket(xr, yi, x, h) + lie_bracket(xi, yr, x, h);
  // Complex vector re + i im as (xi, eta): xi = chi_re + i chi_im, eta = conj(chi_re) + i conj(chi_im).
  const CVec2 a = to_complex(re), b = to_complex(im);
  return {a + kI * b, a.conjugate() + kI * b.conjugate()};
}

// du(J V) for a complex field V and a real structure matrix.
inline cd du_J(const Potential& u, const Mat4& j, const ComplexField& v, const Vec4& x) {
  const Vec4 g = u.grad(x);
  return cd(g.dot(j * v.re()), g.dot(j * v.im()));
}

struct IdentityRow {
  std::string name;
  cd expected;
  cd computed;
  double error() const { return std::abs(expected - computed); }
};

struct Example58Report {
  std::vector<Vec4> points;
  std::vector<IdentityRow> rows;          // all identities at all points
  std::vector<HessianReport> hessians;    // frame (E~, JE~, Z, JZ)
  std::vector<Mat4> expected_H;
  double max_identity_error = 0.0;
  double max_H_error = 0.0;
  double max_eigen_error = 0.0;
  double min_eigenvalue = 0.0;
  bool psh = true;
};

inline Mat4 example58_matrix(double h, double hz) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = 1.0 + 2.0 * h * hz;
  m(0, 2) = m(2, 0) = m(1, 3) = m(3, 1) = hz;
  return m;
}
inline std::pair<double, double> example58_eigenvalues(double h, double hz) {
  const double a = 1.0 + 2.0 * h * hz, s = std::sqrt(a * a + 4.0 * hz * hz);
  return {(a - s) / 2.0, (a + s) / 2.0};
}

inline Example58Report example58_report(const DeformationTensor& phi, const std::vector<Vec4>& pts,
                                        double h = kBracketStep) {
  if (phi.family() != Family::radial_h && phi.family() != Family::standard)
    throw std::invalid_argument("the log tau0 reproduction is defined for the radial_h family");
  const AcStructure J(phi);
  const StructureField Jf = J.field();
  const Potential u = potential_log_tau0();
  Example58Report rep;
  rep.points = pts;
  rep.min_eigenvalue = 1e300;
  const auto ufun = [&](const Vec4& p) { return cd(u.value(p), 0.0); };
  for (const Vec4& x : pts) {
    const double rho = x.norm();
    const double hv = phi.family() == Family::radial_h ? phi.h(rho) : 0.0;
    const double hz = phi.family() == Family::radial_h ? phi.h_Z(rho) : 0.0;
    const auto et10 = [&](const Vec4& p) { return field_Et10(phi, p); };
    const auto et01 = [&](const Vec4& p) { return field_Et10(phi, p).conjugate(); };
    const auto et10u = [&](const Vec4& p) { return apply_field(et10(p), ufun, p, h); };
    const auto et01u = [&](const Vec4& p) { return apply_field(et01(p), ufun, p, h); };
    const Mat4 j = J.J(x);
    auto add = [&](const std::string& n, cd e, cd c) { rep.rows.push_back({n, e, c}); };
    add("Z10(u)", 1.0, apply_field(field_Z10(x), ufun, x, h));
    add("Z01(u)", 1.0, apply_field(field_Z01(x), ufun, x, h));
    add("E10(u)", 0.0, apply_field(field_E10(x), ufun, x, h));
    add("Et10(u)", hv, et10u(x));
    add("Et01(u)", hv, et01u(x));
    add("Et10(Et01(u))", hv * hz, apply_field(et10(x), et01u, x, h));
    add("Et01(Et10(u))", hv * hz, apply_field(et01(x), et10u, x, h));
    add("J[Et10,Et01](u)", 2.0 * kI * (1.0 + hv * hz), du_J(u, j, complex_bracket(et10, et01, x, h), x));
    add("J[Et10,Z01](u)", kI * hz, du_J(u, j, complex_bracket(et10, field_Z01, x, h), x));

    const auto frame = example_frame(phi, x);
    HessianReport hr = j_hessian(u, Jf, x, frame, "E~,JE~,Z,JZ", h);
    const Mat4 expect = example58_matrix(hv, hz);
    const auto [lm, lp] = example58_eigenvalues(hv, hz);
    const Vec4 ev(lm, lm, lp, lp);
    Vec4 ev_sorted = ev;
    std::sort(ev_sorted.data(), ev_sorted.data() + 4);
    rep.max_H_error = std::max(rep.max_H_error, (hr.H - expect).cwiseAbs().maxCoeff());
    rep.max_eigen_error = std::max(rep.max_eigen_error, (hr.eigenvalues - ev_sorted).cwiseAbs().maxCoeff());
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, hr.eigenvalues.minCoeff());
    rep.hessians.push_back(hr);
    rep.expected_H.push_back(expect);
  }
  for (const auto& r : rep.rows) rep.max_identity_error = std::max(rep.max_identity_error, r.error());
  rep.psh = rep.min_eigenvalue >= -1e-7;
  return rep;
}

// ---------------------------------------------------------------------------
// Sweeps

struct PshReport {
  double min_eigenvalue = 1e300;
  Vec4 argmin = Vec4::Zero();
  int samples = 0;
  bool psh = false;
  double margin = 0.0;
};

// Minimum J-Hessian eigenvalue over the points.  Frame eigenvalues depend on
// the frame but their signs do not; `frame` selects coordinate or example.
inline PshReport psh_check(const Potential& u, const AcStructure& J, const std::vector<Vec4>& pts, bool example_basis = false,
                           double tol = 1e-7) {
  PshReport r;
  const StructureField Jf = J.field();
  for (const Vec4& x : pts) {
    const HessianReport hr = example_basis ? j_hessian(u, Jf, x, example_frame(J.deformation(), x), "E~,JE~,Z,JZ")
                                           : j_hessian(u, Jf, x);
    if (hr.eigenvalues(0) < r.min_eigenvalue) {
      r.min_eigenvalue = hr.eigenvalues(0);
      r.argmin = x;
    }
    ++r.samples;
  }
  r.psh = r.min_eigenvalue >= -tol;
  r.margin = r.min_eigenvalue + tol;
  return r;
}

// Flat Laplacian of zeta -> u(zeta v) with a fourth-order stencil on the
// gradient: Delta = D_a (du . a) + D_b (du . b), a = v, b = i v.
inline double harmonicity_along_disk(const Potential& u, const CVec2& v, const std::vector<cd>& grid, double h = 5e-4) {
  const Vec4 a = to_real(v), b = to_real(kI * v);
  double sup = 0.0;
  const auto d4 = [&](const Vec4& x, const Vec4& d) {
    const auto g = [&](double t) { return u.grad(Vec4(x + t * d)).dot(d); };
    return (-g(2 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2 * h)) / (12.0 * h);
  };
  for (const cd z : grid) {
    const Vec4 x = to_real(z * v);
    sup = std::max(sup, std::abs(d4(x, a) + d4(x, b)));
  }
  return sup;
}

struct GreenReport {
  double boundary_max = 0.0;     // sup |u| on shells approaching the sphere, at the outermost shell
  double boundary_trend = 0.0;   // ratio of |u| between outermost and innermost boundary shells
  double pole_deviation = 0.0;   // sup |u - log |x|^2| on near-pole shells
  PshReport psh;
  double ma_max = 0.0;           // sup min |eigenvalue| over samples
  bool boundary_ok = false, pole_ok = false, psh_ok = false, ma_ok = false;
  bool pass() const { return boundary_ok && pole_ok && psh_ok && ma_ok; }
};

struct GreenRegion {
  double rho_min = 0.1, rho_max = 0.9;
  int samples = 40;
  std::uint64_t seed = 1;
  double tol_psh = 1e-7;
  double tol_ma = 1e-6;
  double tol_boundary = 1e-4;
  double tol_trend = 1e-2;
  double pole_bound = 1.0;
};

inline GreenReport green_check(const AcStructure& J, const GreenRegion& g = {}) {
  const Potential u = potential_log_tau0();
  GreenReport r;
  Sampler s(g.seed);
  const std::vector<double> edges = {1e-2, 1e-3, 1e-4, 1e-5};
  double first = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    double m = 0.0;
    for (int i = 0; i < 8; ++i) m = std::max(m, std::abs(u.value(Vec4((1.0 - edges[k]) * s.unit4()))));
    if (k == 0) first = m;
    r.boundary_max = m;
  }
  r.boundary_trend = r.boundary_max / first;
  for (double rho : {1e-1, 3e-2, 1e-2})
    for (int i = 0; i < 8; ++i) {
      const Vec4 x = rho * s.unit4();
      r.pole_deviation = std::max(r.pole_deviation, std::abs(u.value(x) - std::log(x.squaredNorm())));
    }
  const auto pts = probe_points(g.seed, g.samples, g.rho_min, g.rho_max);
  r.psh = psh_check(u, J, pts, false, g.tol_psh);
  const StructureField Jf = J.field();
  for (const Vec4& x : pts) r.ma_max = std::max(r.ma_max, ma_degeneracy(u, Jf, x).min_abs_eigenvalue);
  r.boundary_ok = r.boundary_max < g.tol_boundary && r.boundary_trend < g.tol_trend;
  r.pole_ok = r.pole_deviation < g.pole_bound;
  r.psh_ok = r.psh.psh;
  r.ma_ok = r.ma_max < g.tol_ma;
  return r;
}

}  // namespace acx
