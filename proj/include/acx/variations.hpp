#pragma once

// Infinitesimal variations of the straight disks zeta -> zeta v: the linearized
// J-holomorphy residual, the coordinate variations W(zeta) = zeta w and the
// closure test for J o W.

#include "acx/acs_core.hpp"
#include "acx/disk_calculus.hpp"
#include "acx/lift_lab.hpp"

#include <functional>
#include <stdexcept>
#include <string>

namespace acx {

using DiskVectorField = std::function<Vec4(cd)>;

struct VariationField {
  CVec2 v;  // base disk direction, unit
  DiskVectorField W;
  std::string label;
  Vec4 operator()(cd z) const { return W(z); }
};

// Real point of the base disk, f(zeta) = zeta v.
inline Vec4 disk_point(const CVec2& v, cd z) { return to_real(CVec2(z * v)); }

inline void require_unit(const CVec2& v) {
  if (std::abs(v.norm() - 1.0) > 1e-9) throw std::invalid_argument("disk direction must be a unit vector");
}

// W(zeta) = zeta w with complex scalar multiplication, the derivative of the
// family of straight disks zeta (v + s w).
inline VariationField coordinate_variation(const CVec2& v, const CVec2& w, double tangency_tol = 1e-9) {
  require_unit(v);
  if (std::abs(std::real(v.dot(w))) > tangency_tol) throw std::invalid_argument("w is not tangent to the sphere at v");
  return {v, [w](cd z) { return to_real(CVec2(z * w)); }, "coordinate"};
}

// Negative control: zeta-bar w is not a variation of any holomorphic family.
inline VariationField antiholomorphic_variation(const CVec2& v, const CVec2& w) {
  require_unit(v);
  return {v, [w](cd z) { return to_real(CVec2(std::conj(z) * w)); }, "antiholomorphic"};
}

// J o W, evaluated at the disk point.
inline VariationField j_rotated(const AcStructure& J, const VariationField& W) {
  const CVec2 v = W.v;
  const DiskVectorField base = W.W;
  return {v, [J, v, base](cd z) { return Vec4(J.J(disk_point(v, z)) * base(z)); }, "J o " + W.label};
}

inline VariationField superpose(const VariationField& a, const VariationField& b, double s = 1.0, double t = 1.0) {
  const DiskVectorField fa = a.W, fb = b.W;
  return {a.v, [fa, fb, s, t](cd z) { return Vec4(s * fa(z) + t * fb(z)); }, a.label + "+" + b.label};
}

inline std::vector<cd> variation_grid() { return annulus_grid(8, 32, 0.15, 0.95); }

// Left side of the linearized equation at zeta = s + i t:
//   dW/ds + J(f) dW/dt + (W^k dJ/dx^k)(f) df/dt.
inline Vec4 variation_defect(const AcStructure& J, const VariationField& W, cd z, double h = 1e-5) {
  const Vec4 f = disk_point(W.v, z);
  const Vec4 ft = to_real(CVec2(kI * W.v));
  const Vec4 ws = (W(z + h) - W(z - h)) / (2.0 * h);
  const Vec4 wt = (W(z + kI * h) - W(z - kI * h)) / (2.0 * h);
  const Vec4 w = W(z);
  const auto dj = J.dJ(f);
  Mat4 dw = Mat4::Zero();
  for (int k = 0; k < 4; ++k) dw += w(k) * dj[std::size_t(k)];
  return ws + J.J(f) * wt + dw * ft;
}

inline double variation_residual(const AcStructure& J, const VariationField& W, const std::vector<cd>& grid) {
  double sup = 0.0;
  for (const cd z : grid) sup = std::max(sup, variation_defect(J, W, z).cwiseAbs().maxCoeff());
  return sup;
}
inline double variation_residual(const AcStructure& J, const VariationField& W) {
  return variation_residual(J, W, variation_grid());
}

// Same field seen as a map into TM, checked against the tangent lift.
inline double variation_lift_residual(const AcStructure& J, const VariationField& W, const std::vector<cd>& grid) {
  const DiskMap8 F = [&](cd z) {
    Vec8 y;
    y << disk_point(W.v, z), W(z);
    return y;
  };
  return holomorphy_residual(F, lift_tangent(J), grid);
}

// Real pairing of W with the conormal generator d|x|^2 / 2 on the unit circle.
inline double boundary_attachment(const VariationField& W, int samples = 64) {
  double sup = 0.0;
  for (int k = 0; k < samples; ++k) {
    const cd z = std::polar(1.0, 2.0 * kPi * k / samples);
    sup = std::max(sup, std::abs(disk_point(W.v, z).dot(W(z))));
  }
  return sup;
}

enum class Verdict { pass, fail, inconclusive };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct VerdictBands {
  double pass = 1e-5;
  double fail = 1e-3;
  Verdict classify(double r) const { return r < pass ? Verdict::pass : (r > fail ? Verdict::fail : Verdict::inconclusive); }
};

struct ClosureReport {
  double residual_W = 0.0;
  double residual_JW = 0.0;
  Verdict verdict_W = Verdict::inconclusive;
  Verdict verdict_JW = Verdict::inconclusive;
  bool very_nice = false;
  double lie_phiH_disk = 0.0;  // sup |L_{Z^01} phi^H| along the disk
  double lie_J_disk = 0.0;     // sup |L_{Z^01} J| along the disk
  // J o W passes exactly when the structure is very nice.
  bool consistent() const {
    return verdict_W == Verdict::pass && (very_nice ? verdict_JW == Verdict::pass : verdict_JW == Verdict::fail);
  }
  std::string note() const {
    if (verdict_JW == Verdict::inconclusive || verdict_W == Verdict::inconclusive)
      return "residual between bands; refine the grid or the step";
    return "";
  }
};

// The very_nice flag comes from nicety on the given sample points.
inline ClosureReport very_nice_closure_test(const DeformationTensor& phi, const CVec2& v, const CVec2& w,
                                            const std::vector<Vec4>& nicety_points, VerdictBands bands = {}) {
  const AcStructure J(phi);
  const auto grid = variation_grid();
  const VariationField W = coordinate_variation(v, w);
  ClosureReport r;
  r.residual_W = variation_residual(J, W, grid);
  r.residual_JW = variation_residual(J, j_rotated(J, W), grid);
  r.verdict_W = bands.classify(r.residual_W);
  r.verdict_JW = bands.classify(r.residual_JW);
  r.very_nice = nicety(phi, nicety_points).very_nice;
  for (const cd z : annulus_grid(4, 16, 0.2, 0.9)) {
    const Vec4 x = disk_point(v, z);
    r.lie_phiH_disk = std::max(r.lie_phiH_disk, lie_Z01_phiH(phi, x).cwiseAbs().maxCoeff());
    r.lie_J_disk = std::max(r.lie_J_disk, lie_Z01_J(J, x).cwiseAbs().maxCoeff());
  }
  return r;
}

// A unit tangent direction at v: i v rotated out of the complex line of v.
inline CVec2 generic_tangent(const CVec2& v) {
  const CVec2 perp(-std::conj(v(1)), std::conj(v(0)));
  return (perp * cd(0.8, 0.3) + kI * v * 0.5).normalized();
}

}  // namespace acx
