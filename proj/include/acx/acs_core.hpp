#pragma once

// Almost complex structures on B^2 \ {0} built from deformation tensors, with
// analytic first derivatives for the builtin families, complex components in
// the blow-up chart, structural checks and the Nijenhuis tensor.

#include "acx/ball_geometry.hpp"
#include "acx/jet.hpp"

#include <memory>
#include <string>
#include <type_traits>
#include <vector>

namespace acx {

class NotComplexStructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Family { standard, radial_h, bump, radial_invariant, custom };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::standard: return "standard";
    case Family::radial_h: return "radial_h";
    case Family::bump: return "bump";
    case Family::radial_invariant: return "radial_invariant";
    case Family::custom: return "custom";
  }
  return "unknown";
}

// Deformation coefficients sampled on a uniform grid over (Re z0, Im z0) in
// [-1, 1]^2, interpolated with Catmull-Rom bicubics.
struct CoefficientGrid {
  int n = 0;
  std::vector<cd> c;  // phi^H coefficient, row-major over (Im z0, Re z0)
  std::vector<cd> b;  // phi^{H,Z} coefficient

  static double node(int i, int n) { return -1.0 + 2.0 * double(i) / double(n - 1); }

  // Bicubic Catmull-Rom interpolant, C^1, over double or Jet arguments.
  template <class T>
  Cx<T> sample(const std::vector<cd>& v, const T& re, const T& im) const {
    const double h = 2.0 / double(n - 1);
    const T fx = (re + 1.0) / h, fy = (im + 1.0) / h;
    const int ix = std::clamp(int(std::floor(value_of(fx))), 0, n - 2);
    const int iy = std::clamp(int(std::floor(value_of(fy))), 0, n - 2);
    const T tx = fx - double(ix), ty = fy - double(iy);
    const auto at = [&](int i, int j) {
      return v[std::size_t(std::clamp(j, 0, n - 1)) * std::size_t(n) + std::size_t(std::clamp(i, 0, n - 1))];
    };
    const auto cr = [](const auto& p0, const auto& p1, const auto& p2, const auto& p3, const T& t) -> T {
      return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
    };
    std::array<T, 4> rr, ri;
    for (int k = 0; k < 4; ++k) {
      const int j = iy - 1 + k;
      const cd a = at(ix - 1, j), b = at(ix, j), c = at(ix + 1, j), d = at(ix + 2, j);
      rr[std::size_t(k)] = cr(a.real(), b.real(), c.real(), d.real(), tx);
      ri[std::size_t(k)] = cr(a.imag(), b.imag(), c.imag(), d.imag(), tx);
    }
    return {cr(rr[0], rr[1], rr[2], rr[3], ty), cr(ri[0], ri[1], ri[2], ri[3], ty)};
  }
  cd sample(const std::vector<cd>& v, cd z0) const {
    const Cx<double> r = sample<double>(v, z0.real(), z0.imag());
    return {r.re, r.im};
  }
};

struct FamilyParams {
  double epsilon = 0.1, rho0 = 0.3, delta = 0.2;           // radial_h
  double kappa = 0.2, rho_in = 0.3, rho_out = 0.7;         // bump, radial_invariant
  cd inject_a = 0.0;                                       // phi^{Z,H}, zero for L-structures
  std::shared_ptr<const CoefficientGrid> grid;             // custom
};

template <class T>
struct Coeffs {
  Cx<T> a, b, c;
};

// C^2 quintic smoothstep: 0 for t <= 0, 1 for t >= 1.
template <class T>
T smoothstep(const T& t) {
  if (value_of(t) <= 0.0) return T(0.0);
  if (value_of(t) >= 1.0) return T(1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
inline double smoothstep_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

// Deformation tensor phi = phi^H + phi^{H,Z} (plus the phi^{Z,H} slot that
// structures satisfying condition (i) leave empty), stored as three scalar coefficients:
//   phi^H(E^01) = c E^10,  phi^{H,Z}(E^01) = b Z^10,  phi^{Z,H}(Z^01) = a E^10.
class DeformationTensor {
 public:
  DeformationTensor() = default;
  DeformationTensor(Family f, FamilyParams p) : family_(f), p_(std::move(p)) {
    if (family_ == Family::custom && !p_.grid) throw std::invalid_argument("custom family needs a coefficient grid");
  }

  static DeformationTensor standard() { return {}; }
  static DeformationTensor radial_h(double eps = 0.1, double rho0 = 0.3, double delta = 0.2) {
    FamilyParams p;
    p.epsilon = eps;
    p.rho0 = rho0;
    p.delta = delta;
    return {Family::radial_h, p};
  }
  static DeformationTensor bump(double kappa = 0.2, double rho_in = 0.3, double rho_out = 0.7) {
    FamilyParams p;
    p.kappa = kappa;
    p.rho_in = rho_in;
    p.rho_out = rho_out;
    return {Family::bump, p};
  }
  static DeformationTensor radial_invariant(double kappa = 0.2) {
    FamilyParams p;
    p.kappa = kappa;
    return {Family::radial_invariant, p};
  }

  Family family() const { return family_; }
  const FamilyParams& params() const { return p_; }
  DeformationTensor with_injected_a(cd a) const {
    DeformationTensor d = *this;
    d.p_.inject_a = a;
    return d;
  }

  double h(double rho) const { return p_.epsilon * smoothstep((rho - p_.rho0) / p_.delta); }
  // h_Z = Z(h) = (rho/2) h'(rho).
  double h_Z(double rho) const { return 0.5 * rho * p_.epsilon * smoothstep_prime((rho - p_.rho0) / p_.delta) / p_.delta; }

  template <class T>
  Coeffs<T> coefficients(const std::array<T, 4>& x) const {
    Coeffs<T> out;
    out.a = Cx<T>(T(p_.inject_a.real()), T(p_.inject_a.imag()));
    out.b = Cx<T>(T(0.0));
    out.c = Cx<T>(T(0.0));
    const T r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    switch (family_) {
      case Family::standard:
        break;
      case Family::radial_h: {
        const T rho = sqrt(r2);
        out.b = Cx<T>(p_.epsilon * smoothstep((rho - p_.rho0) / p_.delta));
        break;
      }
      case Family::bump: {
        const T t = (sqrt(r2) - p_.rho_in) / (p_.rho_out - p_.rho_in);
        if (value_of(t) > 0.0 && value_of(t) < 1.0) {
          const T q = t * (1.0 - t);
          out.c = Cx<T>(p_.kappa * 64.0 * q * q * q);
        }
        break;
      }
      case Family::radial_invariant: {
        // kappa z1 conj(z2) / |z|^2, invariant under z -> lambda z.
        const Cx<T> z1(x[0], x[1]), z2(x[2], x[3]);
        const Cx<T> m = z1 * conj(z2);
        out.c = Cx<T>(p_.kappa * m.re / r2, p_.kappa * m.im / r2);
        break;
      }
      case Family::custom: {
        // Chart coordinate z0 = |x| z2 / |z2|.
        const T r = sqrt(r2), a = sqrt(x[2] * x[2] + x[3] * x[3]);
        const T re = value_of(a) > 0.0 ? r * x[2] / a : r;
        const T im = value_of(a) > 0.0 ? r * x[3] / a : T(0.0);
        out.c = p_.grid->sample(p_.grid->c, re, im);
        out.b = p_.grid->sample(p_.grid->b, re, im);
        break;
      }
    }
    return out;
  }


 private:
  Family family_ = Family::standard;
  FamilyParams p_;
};

namespace detail {

template <class T>
using M4 = std::array<std::array<T, 4>, 4>;

template <class T>
M4<T> matmul(const M4<T>& a, const M4<T>& b) {
  M4<T> r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      T s(0.0);
      for (int k = 0; k < 4; ++k) s = s + a[std::size_t(i)][std::size_t(k)] * b[std::size_t(k)][std::size_t(j)];
      r[std::size_t(i)][std::size_t(j)] = s;
    }
  return r;
}

// J from the +i eigenspace spanned by
//   V1 = Z^10 + conj(a) E^01,  V2 = E^10 + conj(c) E^01 + conj(b) Z^01.
// A complexified vector xi d/dz + eta d/dzbar has real part (xi + conj(eta))/2
// and imaginary part (xi - conj(eta))/(2i), both written as C^2 vectors.
template <class T>
M4<T> structure_matrix(const std::array<T, 4>& x, const Coeffs<T>& k) {
  const Cx<T> z1(x[0], x[1]), z2(x[2], x[3]);
  const Cx<T> p = z1 * z1 + z2 * z2;
  const T ap = sqrt(norm2(p));
  if (value_of(ap) < 1e-12 * value_of(norm2(z1) + norm2(z2)))
    throw FrameDegenerateError("frame E undefined where z1^2 + z2^2 = 0");
  const Cx<T> mu(p.re / ap, p.im / ap);
  // E^10 = mu (-conj z2, conj z1); E^01 has eta = conj of that.
  const std::array<Cx<T>, 2> e10 = {mu * (-conj(z2)), mu * conj(z1)};
  const std::array<Cx<T>, 2> z10 = {z1, z2};

  // V = (xi, eta)
  std::array<Cx<T>, 2> xi1, eta1, xi2, eta2;
  const Cx<T> ab = conj(k.a), bb = conj(k.b), cb = conj(k.c);
  for (int i = 0; i < 2; ++i) {
    const std::size_t s = std::size_t(i);
    xi1[s] = z10[s];
    eta1[s] = ab * conj(e10[s]);
    xi2[s] = e10[s];
    eta2[s] = cb * conj(e10[s]) + bb * conj(z10[s]);
  }
  const auto re_part = [](const std::array<Cx<T>, 2>& xi, const std::array<Cx<T>, 2>& eta) {
    std::array<T, 4> v;
    for (int i = 0; i < 2; ++i) {
      const Cx<T> w = xi[std::size_t(i)] + conj(eta[std::size_t(i)]);
      v[std::size_t(2 * i)] = 0.5 * w.re;
      v[std::size_t(2 * i + 1)] = 0.5 * w.im;
    }
    return v;
  };
  // -Im part, i.e. -(xi - conj eta)/(2i) = i (xi - conj eta) / 2.
  const auto neg_im_part = [](const std::array<Cx<T>, 2>& xi, const std::array<Cx<T>, 2>& eta) {
    std::array<T, 4> v;
    for (int i = 0; i < 2; ++i) {
      const Cx<T> w = xi[std::size_t(i)] - conj(eta[std::size_t(i)]);
      v[std::size_t(2 * i)] = -0.5 * w.im;
      v[std::size_t(2 * i + 1)] = 0.5 * w.re;
    }
    return v;
  };
  const auto X1 = re_part(xi1, eta1), Y1 = neg_im_part(xi1, eta1);
  const auto X2 = re_part(xi2, eta2), Y2 = neg_im_part(xi2, eta2);
  // J X_k = Y_k and J Y_k = -X_k.
  M4<T> src{}, dst{};
  for (int r = 0; r < 4; ++r) {
    const std::size_t s = std::size_t(r);
    src[s] = {X1[s], Y1[s], X2[s], Y2[s]};
    dst[s] = {Y1[s], -X1[s], Y2[s], -X2[s]};
  }
  // Columns of src must be independent; Hadamard ratio test on the values.
  Mat4 sv;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) sv(r, c) = value_of(src[std::size_t(r)][std::size_t(c)]);
  const double hadamard = std::abs(sv.determinant()) / sv.colwise().norm().prod();
  if (!(hadamard > 1e-8)) throw NotComplexStructureError("eigenspace assembly is degenerate (deformation too large)");
  return matmul(dst, inverse<T, 4>(src));
}

}  // namespace detail

// The structure J defined by a deformation tensor, optionally conjugated by a
// unitary map U (J_U(x) = U^{-1} J(U x) U), which moves a direction v to the
// chart axis without changing the geometry.
class AcStructure {
 public:
  AcStructure() : AcStructure(DeformationTensor::standard()) {}
  explicit AcStructure(DeformationTensor phi) : phi_(std::move(phi)) {}

  const DeformationTensor& deformation() const { return phi_; }
  std::string family_tag() const { return family_name(phi_.family()); }
  bool rotated() const { return rotated_; }

  AcStructure rotated_by(const CMat2& u) const {
    AcStructure s = *this;
    const Mat4 r = realify(u);
    s.rot_ = rotated_ ? Mat4(rot_ * r) : r;
    s.rotated_ = true;
    return s;
  }

  template <class T>
  detail::M4<T> eval_t(const std::array<T, 4>& x) const {
    if (!rotated_) return detail::structure_matrix(x, phi_.coefficients(x));
    std::array<T, 4> y;
    for (int i = 0; i < 4; ++i) {
      T s(0.0);
      for (int k = 0; k < 4; ++k) s = s + rot_(i, k) * x[std::size_t(k)];
      y[std::size_t(i)] = s;
    }
    const auto j = detail::structure_matrix(y, phi_.coefficients(y));
    // R^T J R (R orthogonal).
    detail::M4<T> out{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        T s(0.0);
        for (int i = 0; i < 4; ++i)
          for (int k = 0; k < 4; ++k) s = s + rot_(i, a) * j[std::size_t(i)][std::size_t(k)] * rot_(k, b);
        out[std::size_t(a)][std::size_t(b)] = s;
      }
    return out;
  }

  Mat4 J(const Vec4& x) const {
    if (phi_.family() == Family::standard && phi_.params().inject_a == 0.0) return j_standard();
    const auto m = eval_t<double>({x(0), x(1), x(2), x(3)});
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r(i, j) = m[std::size_t(i)][std::size_t(j)];
    return r;
  }
  Mat4 operator()(const Vec4& x) const { return J(x); }

  // dJ[k] = dJ/dx^k by forward differentiation.
  std::array<Mat4, 4> dJ(const Vec4& x) const {
    std::array<Mat4, 4> out;
    if (phi_.family() == Family::standard && phi_.params().inject_a == 0.0) {
      for (auto& m : out) m.setZero();
      return out;
    }
    std::array<Jet<4>, 4> xj;
    for (int k = 0; k < 4; ++k) xj[std::size_t(k)] = Jet<4>::variable(x(k), std::size_t(k));
    const auto m = eval_t<Jet<4>>(xj);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[std::size_t(k)](i, j) = m[std::size_t(i)][std::size_t(j)].d[std::size_t(k)];
    return out;
  }

  StructureField field() const {
    return [s = *this](const Vec4& x) { return s.J(x); };
  }

  // Complex components K(B, A) = J^B_A in the chart basis
  // (d/dz0, d/dz0bar, d/dw, d/dwbar) at chart point (z0, w), and their
  // derivative along d/dz0bar.
  struct ChartComponents {
    CMat4 K;
    CMat4 K_dbar0;
  };
  ChartComponents chart_components(cd z0, cd w) const;

 private:
  DeformationTensor phi_;
  bool rotated_ = false;
  Mat4 rot_ = Mat4::Identity();
};

namespace detail {

// Real Jacobian of the chart map (a0, b0, aw, bw) -> (x1, y1, x2, y2).
template <class T>
M4<T> chart_jacobian(const std::array<T, 4>& c) {
  const Cx<T> z0(c[0], c[1]), w(c[2], c[3]);
  const T s = sqrt(1.0 - norm2(w));
  const Cx<T> i(T(0.0), T(1.0));
  // Complex columns d z / d(real chart coordinate).
  const std::array<std::array<Cx<T>, 2>, 4> col = {{
      {w, Cx<T>(s)},
      {i * w, i * Cx<T>(s)},
      {z0, z0 * Cx<T>(-c[2] / s)},
      {i * z0, z0 * Cx<T>(-c[3] / s)},
  }};
  M4<T> d{};
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 2; ++a) {
      d[std::size_t(2 * a)][std::size_t(k)] = col[std::size_t(k)][std::size_t(a)].re;
      d[std::size_t(2 * a + 1)][std::size_t(k)] = col[std::size_t(k)][std::size_t(a)].im;
    }
  return d;
}

template <class T>
std::array<T, 4> chart_point(const std::array<T, 4>& c) {
  const Cx<T> z0(c[0], c[1]), w(c[2], c[3]);
  const T s = sqrt(1.0 - norm2(w));
  const Cx<T> z1 = z0 * w, z2 = z0 * Cx<T>(s);
  return {z1.re, z1.im, z2.re, z2.im};
}

}  // namespace detail

inline AcStructure::ChartComponents AcStructure::chart_components(cd z0, cd w) const {
  if (std::norm(w) >= 1.0) throw ChartDomainError("|w| >= 1");
  const CMat4 p = complex_frame();
  const CMat4 pinv = p.inverse();
  ChartComponents out;
  using J2 = Jet<2>;
  const std::array<J2, 4> c = {J2::variable(z0.real(), 0), J2::variable(z0.imag(), 1), J2(w.real()), J2(w.imag())};
  const auto d = detail::chart_jacobian(c);
  const auto m = detail::matmul(inverse<J2, 4>(d), detail::matmul(eval_t<J2>(detail::chart_point(c)), d));
  Mat4 v, da, db;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      v(i, j) = m[std::size_t(i)][std::size_t(j)].v;
      da(i, j) = m[std::size_t(i)][std::size_t(j)].d[0];
      db(i, j) = m[std::size_t(i)][std::size_t(j)].d[1];
    }
  out.K = pinv * v.cast<cd>() * p;
  out.K_dbar0 = pinv * (0.5 * (da.cast<cd>() + kI * db.cast<cd>())) * p;
  return out;
}

// ---------------------------------------------------------------------------
// Checks

struct ConditionReport {
  double zj_residual = 0.0;  // sup |(J - J_st) on Z| relative to |Z|
  double z_leakage = 0.0;    // sup |H-part of J(Z), J(J_st Z)| relative to |Z|
  bool pass = false;
  int samples = 0;
};

inline ConditionReport check_L_condition_i(const AcStructure& J, const std::vector<Vec4>& pts, double tol = 1e-9) {
  ConditionReport r;
  for (const Vec4& x : pts) {
    const Mat4 j = J.J(x);
    const double s = field_Z(x).norm();
    for (const Vec4& v : {field_Z(x), field_JZ(x)}) {
      const Vec4 jv = j * v;
      r.zj_residual = std::max(r.zj_residual, (jv - j_standard() * v).norm() / s);
      r.z_leakage = std::max(r.z_leakage, split_ZH(x, jv).second.norm() / s);
    }
    ++r.samples;
  }
  r.pass = r.zj_residual < tol && r.z_leakage < tol;
  return r;
}

inline double complex_structure_residual(const AcStructure& J, const Vec4& x) {
  const Mat4 j = J.J(x);
  return (j * j + Mat4::Identity()).cwiseAbs().maxCoeff();
}

// Nijenhuis tensor with X, Y extended as constant fields:
//   N(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] - [X, Y].
inline Vec4 nijenhuis(const AcStructure& J, const Vec4& X, const Vec4& Y, const Vec4& x, double h = kBracketStep) {
  const VectorField fx = [&](const Vec4&) { return X; };
  const VectorField fy = [&](const Vec4&) { return Y; };
  const VectorField jx = [&](const Vec4& p) { return Vec4(J.J(p) * X); };
  const VectorField jy = [&](const Vec4& p) { return Vec4(J.J(p) * Y); };
  const Mat4 j = J.J(x);
  return lie_bracket(jx, jy, x, h) - j * lie_bracket(jx, fy, x, h) - j * lie_bracket(fx, jy, x, h) -
         lie_bracket(fx, fy, x, h);
}

// dd^c u(JX, Y) + dd^c u(X, JY) = kNijenhuisScale * du(N(X, Y)) for the bracket
// expression N above.  With N normalized as -N/4 the right side is 4 N(u).
// The tests re-derive the constant by least squares on random data.
inline constexpr double kNijenhuisScale = -1.0;

inline double nijenhuis_u(const AcStructure& J, const Potential& u, const Vec4& X, const Vec4& Y, const Vec4& x) {
  return u.grad(x).dot(nijenhuis(J, X, Y, x));
}

// ---------------------------------------------------------------------------
// Nicety

namespace detail {

// Columns Z^10, Z^01, E^10, E^01 in (d/dz1, d/dz2, d/dzbar1, d/dzbar2).
inline CMat4 complex_basis(const Vec4& x) {
  const CVec2 z = to_complex(x);
  const cd mu = frame_phase(x);
  const CVec2 e10 = mu * CVec2(-std::conj(z(1)), std::conj(z(0)));
  CMat4 b = CMat4::Zero();
  b.block<2, 1>(0, 0) = z;
  b.block<2, 1>(2, 1) = z.conjugate();
  b.block<2, 1>(0, 2) = e10;
  b.block<2, 1>(2, 3) = e10.conjugate();
  return b;
}

// phi^H = c E^10 (x) (E^01)^* as a complex endomorphism of the complexified
// tangent space.
inline CMat4 phiH_tensor(const DeformationTensor& phi, const Vec4& x) {
  const auto k = phi.coefficients<double>({x(0), x(1), x(2), x(3)});
  const CMat4 b = complex_basis(x);
  CMat4 m = CMat4::Zero();
  m(2, 3) = cd(k.c.re, k.c.im);
  return b * m * b.inverse();
}

// Complexification of a real endomorphism.
inline CMat4 complexify(const Mat4& j) {
  // (xi, eta) -> real vector chi = xi with eta = conj(xi) on real vectors; the
  // complex-linear extension acts by P^{-1} J P in the (dz, dzbar) basis.
  const CMat4 p = complex_frame();
  CMat4 perm = CMat4::Zero();  // reorder (z1, zb1, z2, zb2) -> (z1, z2, zb1, zb2)
  perm(0, 0) = perm(1, 2) = perm(2, 1) = perm(3, 3) = 1.0;
  return perm * p.inverse() * j.cast<cd>() * p * perm.transpose();
}

// Linear flows in the (dz, dzbar) coordinates: Z flow scales by e^{t/2},
// J_st Z flow rotates dz by e^{it/2} and dzbar by e^{-it/2}.
inline CVec4 flow_diag(bool rotation, double t) {
  if (!rotation) return CVec4::Constant(std::exp(0.5 * t));
  const cd a = std::exp(0.5 * kI * t);
  return CVec4(a, a, std::conj(a), std::conj(a));
}
inline Vec4 flow_point(bool rotation, double t, const Vec4& x) {
  if (!rotation) return std::exp(0.5 * t) * x;
  return to_real(std::exp(0.5 * kI * t) * to_complex(x));
}

// L_X T = d/dt [A_t^{-1} T(A_t x) A_t] at t = 0 by a central difference.
template <class F>
CMat4 lie_derivative(const F& tensor, bool rotation, const Vec4& x, double dt) {
  const auto pulled = [&](double t) {
    const CVec4 a = flow_diag(rotation, t);
    CMat4 m = tensor(flow_point(rotation, t, x));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) *= a(j) / a(i);
    return m;
  };
  return (pulled(dt) - pulled(-dt)) / (2.0 * dt);
}

}  // namespace detail

inline constexpr double kFlowStep = 1e-3;

// L_{Z^01} = L_Z + i L_{J_st Z} applied to phi^H and to J.
inline CMat4 lie_Z01_phiH(const DeformationTensor& phi, const Vec4& x, double dt = kFlowStep) {
  const auto t = [&](const Vec4& p) { return detail::phiH_tensor(phi, p); };
  return detail::lie_derivative(t, false, x, dt) + kI * detail::lie_derivative(t, true, x, dt);
}
inline CMat4 lie_Z01_J(const AcStructure& J, const Vec4& x, double dt = kFlowStep) {
  const auto t = [&](const Vec4& p) { return detail::complexify(J.J(p)); };
  return detail::lie_derivative(t, false, x, dt) + kI * detail::lie_derivative(t, true, x, dt);
}

struct NicetyReport {
  bool nice = false;
  bool very_nice = false;
  double phiHZ_sup = 0.0;     // sup |phi^{H,Z}|
  double phiZH_sup = 0.0;     // sup |phi^{Z,H}|, structurally zero slot
  double lie_phiH_sup = 0.0;  // sup |L_{Z^01} phi^H|
  double lie_J_sup = 0.0;     // sup |L_{Z^01} J|
  int samples = 0;
};

inline NicetyReport nicety(const DeformationTensor& phi, const std::vector<Vec4>& pts, double tol_nice = 1e-9,
                           double tol_very = 1e-6) {
  NicetyReport r;
  const AcStructure J(phi);
  for (const Vec4& x : pts) {
    const auto k = phi.coefficients<double>({x(0), x(1), x(2), x(3)});
    r.phiHZ_sup = std::max(r.phiHZ_sup, std::sqrt(norm2(k.b)));
    r.phiZH_sup = std::max(r.phiZH_sup, std::sqrt(norm2(k.a)));
    r.lie_phiH_sup = std::max(r.lie_phiH_sup, lie_Z01_phiH(phi, x).cwiseAbs().maxCoeff());
    r.lie_J_sup = std::max(r.lie_J_sup, lie_Z01_J(J, x).cwiseAbs().maxCoeff());
    ++r.samples;
  }
  r.nice = r.phiHZ_sup < tol_nice;
  r.very_nice = r.nice && r.lie_phiH_sup < tol_very;
  return r;
}

// Probe points in rho_min <= |x| <= rho_max away from the frame singularity
// z1^2 + z2^2 = 0 and the chart edge z2 = 0.
inline std::vector<Vec4> probe_points(std::uint64_t seed, int count, double rho_min, double rho_max,
                                      double min_regularity = 0.2) {
  Sampler s(seed);
  std::vector<Vec4> pts;
  while (int(pts.size()) < count) {
    const Vec4 x = s.shell_point(rho_min, rho_max);
    if (frame_regularity(x) < min_regularity) continue;
    if (std::hypot(x(2), x(3)) < 0.2 * x.norm()) continue;
    pts.push_back(x);
  }
  return pts;
}

}  // namespace acx
