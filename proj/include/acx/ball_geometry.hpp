#pragma once

// Geometry of the punctured ball in C^2: the blow-up chart, the radial
// distribution Z = span(Z, J_st Z), its complement H, the frame (Z, JZ, E, JE)
// and finite-difference Lie brackets and dd^c.

#include "acx/linalg.hpp"

#include <functional>
#include <string>

namespace acx {

using VectorField = std::function<Vec4(const Vec4&)>;
using StructureField = std::function<Mat4(const Vec4&)>;

class ChartDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class PoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class FrameDegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kRhoMin = 0.05;
inline constexpr double kBracketStep = 1e-4;

// Chart (z0, w) -> z0 * (w, sqrt(1 - |w|^2)).
inline CVec2 chart_to_ball(cd z0, cd w) {
  if (std::abs(z0) > 1.0 + 1e-14) throw ChartDomainError("|z0| > 1");
  if (std::norm(w) >= 1.0) throw ChartDomainError("|w| >= 1");
  return CVec2(z0 * w, z0 * std::sqrt(1.0 - std::norm(w)));
}

inline std::pair<cd, cd> ball_to_chart(const CVec2& z) {
  const double r = z.norm();
  if (r == 0.0) throw ChartDomainError("origin has no chart coordinates");
  if (std::abs(z(1)) < 1e-300) throw ChartDomainError("last homogeneous coordinate vanishes");
  const cd z0 = r * z(1) / std::abs(z(1));
  return {z0, z(0) / z0};
}

inline double tau0(const Vec4& x) { return x.squaredNorm(); }
inline double u_log(const Vec4& x) {
  const double t = x.squaredNorm();
  if (t == 0.0) throw PoleError("log tau0 has a pole at the origin");
  return std::log(t);
}

// Z = Re(z^i d/dz^i) is x/2 in real coordinates.
inline Vec4 field_Z(const Vec4& x) { return 0.5 * x; }
inline Vec4 field_JZ(const Vec4& x) { return 0.5 * j_standard() * x; }

// A smooth real basis of H at x: the real parts of L and iL with
// L = -conj(z2) d/dz1 + conj(z1) d/dz2.
inline std::array<Vec4, 2> distribution_H(const Vec4& x) {
  const CVec2 z = to_complex(x);
  const Vec4 h1 = to_real(0.5 * CVec2(-std::conj(z(1)), std::conj(z(0))));
  return {h1, j_standard() * h1};
}
inline std::array<Vec4, 2> distribution_Z(const Vec4& x) { return {field_Z(x), field_JZ(x)}; }

// Orthogonal split V = V_Z + V_H.  Both distributions are J_st-invariant and
// Euclidean-orthogonal.
inline std::pair<Vec4, Vec4> split_ZH(const Vec4& x, const Vec4& v) {
  const double r2 = x.squaredNorm();
  const Vec4 jx = j_standard() * x;
  const Vec4 vz = (v.dot(x) / r2) * x + (v.dot(jx) / r2) * jx;
  return {vz, v - vz};
}

// Phase mu = p/|p| with p = z1^2 + z2^2.  The frame E is singular on p = 0.
inline cd frame_phase(const Vec4& x, double min_ratio = 1e-6) {
  const CVec2 z = to_complex(x);
  const cd p = z(0) * z(0) + z(1) * z(1);
  if (std::abs(p) < min_ratio * x.squaredNorm()) throw FrameDegenerateError("frame E undefined where z1^2 + z2^2 = 0");
  return p / std::abs(p);
}
inline double frame_regularity(const Vec4& x) {
  const CVec2 z = to_complex(x);
  return std::abs(z(0) * z(0) + z(1) * z(1)) / x.squaredNorm();
}

// E = Re(mu L); homogeneous of degree one, so [Z, E] = [J_st Z, E] = 0.
inline Vec4 field_E(const Vec4& x) {
  const CVec2 z = to_complex(x);
  return to_real(0.5 * frame_phase(x) * CVec2(-std::conj(z(1)), std::conj(z(0))));
}
inline Vec4 field_JE(const Vec4& x) { return j_standard() * field_E(x); }

// [A, B](x) = DB(x) A(x) - DA(x) B(x), each directional derivative by a
// central difference of step h along the field direction.
inline Vec4 lie_bracket(const VectorField& a, const VectorField& b, const Vec4& x, double h = kBracketStep) {
  const Vec4 ax = a(x), bx = b(x);
  const Vec4 db = (b(x + h * ax) - b(x - h * ax)) / (2.0 * h);
  const Vec4 da = (a(x + h * bx) - a(x - h * bx)) / (2.0 * h);
  return db - da;
}

// Analytic H-part of [E, J_st E] + J_st Z.
inline Vec4 frame_bracket_defect(const Vec4& x) {
  const CVec2 z = to_complex(x);
  const cd p = z(0) * z(0) + z(1) * z(1);
  const double im = std::imag(z(0) * std::conj(z(1)));
  return to_real((im / std::conj(p)) * CVec2(-std::conj(z(1)), std::conj(z(0))));
}

struct Frame {
  Vec4 Z, JZ, E, JE;
  Mat4 matrix() const {
    Mat4 m;
    m << Z, JZ, E, JE;
    return m;
  }
};

// Bracket residual norms, divided by |x| so shells are comparable.
struct BracketReport {
  double z_e = 0.0;         // |[Z, E]|
  double jz_e = 0.0;        // |[J_st Z, E]|
  double e_je_zpart = 0.0;  // |Z-part of [E, J_st E] + J_st Z|
  double e_je_hpart = 0.0;  // |H-part of [E, J_st E] + J_st Z|
  double hpart_vs_formula = 0.0;
  double max_enforced() const { return std::max({z_e, jz_e, e_je_zpart}); }
};

inline BracketReport frame_brackets(const Vec4& x, double h = kBracketStep) {
  BracketReport r;
  const double s = x.norm();
  r.z_e = lie_bracket(field_Z, field_E, x, h).norm() / s;
  r.jz_e = lie_bracket(field_JZ, field_E, x, h).norm() / s;
  const Vec4 c = lie_bracket(field_E, field_JE, x, h) + field_JZ(x);
  const auto [cz, ch] = split_ZH(x, c);
  r.e_je_zpart = cz.norm() / s;
  r.e_je_hpart = ch.norm() / s;
  r.hpart_vs_formula = (ch - frame_bracket_defect(x)).norm() / s;
  return r;
}

// (Z, J_st Z, E, J_st E) at x.  Throws when the enforceable bracket
// relations fail beyond tol; the H-part of [E, J_st E] + J_st Z is a
// curvature term that no choice of E removes and is reported by
// frame_brackets instead.
inline Frame frame_E(const Vec4& x, double tol = 1e-6) {
  if (x.norm() == 0.0) throw PoleError("frame at the origin");
  const BracketReport br = frame_brackets(x);
  if (br.max_enforced() > tol) throw FrameDegenerateError("frame bracket residual " + std::to_string(br.max_enforced()));
  return {field_Z(x), field_JZ(x), field_E(x), field_JE(x)};
}

// Scalar potential with an optional exact gradient.
struct Potential {
  std::function<double(const Vec4&)> value;
  std::function<Vec4(const Vec4&)> gradient;

  Vec4 grad(const Vec4& x, double h = 1e-6) const {
    if (gradient) return gradient(x);
    Vec4 g;
    for (int k = 0; k < 4; ++k) {
      Vec4 e = Vec4::Zero();
      e(k) = h;
      g(k) = (value(x + e) - value(x - e)) / (2.0 * h);
    }
    return g;
  }
};

inline Potential potential_tau0() {
  return {[](const Vec4& x) { return tau0(x); }, [](const Vec4& x) -> Vec4 { return 2.0 * x; }};
}
inline Potential potential_log_tau0() {
  return {[](const Vec4& x) { return u_log(x); }, [](const Vec4& x) -> Vec4 { return 2.0 * x / x.squaredNorm(); }};
}
inline Potential potential_constant(double c) {
  return {[c](const Vec4&) { return c; }, [](const Vec4&) -> Vec4 { return Vec4::Zero(); }};
}
inline Potential potential_re_z1() {
  return {[](const Vec4& x) { return x(0); }, [](const Vec4&) -> Vec4 { return Vec4(1, 0, 0, 0); }};
}

// d^c u(X) = -du(JX).
inline double dc(const Potential& u, const StructureField& J, const Vec4& x, const Vec4& X) {
  return -u.grad(x).dot(J(x) * X);
}

// dd^c u(X, Y) = X(d^c u(Y)) - Y(d^c u(X)) with X, Y extended as constant
// coordinate fields, so the bracket term drops out.
inline double ddc(const Potential& u, const StructureField& J, const Vec4& x, const Vec4& X, const Vec4& Y,
                  double h = kBracketStep) {
  const auto dcy = [&](const Vec4& p) { return dc(u, J, p, Y); };
  const auto dcx = [&](const Vec4& p) { return dc(u, J, p, X); };
  const double xy = (dcy(x + h * X) - dcy(x - h * X)) / (2.0 * h);
  const double yx = (dcx(x + h * Y) - dcx(x - h * Y)) / (2.0 * h);
  return xy - yx;
}

// One Richardson step for a second-order central difference: (4 f(h/2) - f(h)) / 3.
template <class F>
auto richardson(const F& f, double h = kBracketStep) {
  return (4.0 * f(0.5 * h) - f(h)) / 3.0;
}

inline StructureField structure_standard() {
  return [](const Vec4&) { return j_standard(); };
}

inline double ddc_standard(const Potential& u, const Vec4& x, const Vec4& X, const Vec4& Y, double h = kBracketStep) {
  return ddc(u, structure_standard(), x, X, Y, h);
}

// Ambient image of Re(z0 d/dz0) from the chart, for comparison with field_Z.
inline Vec4 chart_Z_pushforward(cd z0, cd w) {
  // d/dz0 of z0 (w, s) is (w, s); multiply by z0 and take the real vector.
  const CVec2 col(w, std::sqrt(1.0 - std::norm(w)));
  return to_real(0.5 * z0 * col);
}

}  // namespace acx
