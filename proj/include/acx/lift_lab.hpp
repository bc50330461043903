#pragma once

// Canonical lifts of an almost complex structure to TM and T*M, the index
// table between real and complex coordinates, and holomorphy residuals of maps
// from the disk into the lifted spaces.

#include "acx/acs_core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace acx {

// J and its first partial derivatives dJ[k] = dJ/dx^k in some coordinates.
struct StructureJet {
  Mat4 J;
  std::array<Mat4, 4> dJ;
};
using JetField = std::function<StructureJet(const Vec4&)>;

// Ambient coordinates (x1, y1, x2, y2).
inline JetField ambient_jet(const AcStructure& s) {
  return [s](const Vec4& x) { return StructureJet{s.J(x), s.dJ(x)}; };
}

// Blow-up chart coordinates (Re z0, Im z0, Re w, Im w):
// J_chart = D^{-1} J(chart(c)) D with D the chart Jacobian.
inline JetField chart_jet(const AcStructure& s) {
  return [s](const Vec4& c) {
    StructureJet out;
    std::array<Jet<4>, 4> cj;
    for (int k = 0; k < 4; ++k) cj[std::size_t(k)] = Jet<4>::variable(c(k), std::size_t(k));
    const auto d = detail::chart_jacobian(cj);
    const auto m = detail::matmul(inverse<Jet<4>, 4>(d), detail::matmul(s.eval_t(detail::chart_point(cj)), d));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const auto& e = m[std::size_t(i)][std::size_t(j)];
        out.J(i, j) = e.v;
        for (int k = 0; k < 4; ++k) out.dJ[std::size_t(k)](i, j) = e.d[std::size_t(k)];
      }
    return out;
  };
}

// Real index i <-> complex capital index A, with the complex basis
// d/dz^A = sum_k P(k, A) d/dx^k, A in (1, 1bar, 2, 2bar) order.
//   vectors:    V^A = (P^{-1} v)^A
//   covectors:  p_A = (P^T p)_A
//   endomorphisms: K = P^{-1} M P
//   derivatives: d/dz^B = sum_k P(k, B) d/dx^k
struct IndexTable {
  CMat4 P = complex_frame();
  CMat4 Pinv = complex_frame().inverse();

  CVec4 vector_to_complex(const Vec4& v) const { return Pinv * v.cast<cd>(); }
  Vec4 vector_to_real(const CVec4& V) const { return (P * V).real(); }
  CVec4 covector_to_complex(const Vec4& p) const { return P.transpose() * p.cast<cd>(); }
  Vec4 covector_to_real(const CVec4& q) const { return (Pinv.transpose() * q).real(); }
  CMat4 endo_to_complex(const Mat4& m) const { return Pinv * m.cast<cd>() * P; }
  Mat4 endo_to_real(const CMat4& k) const { return (P * k * Pinv).real(); }
  std::array<CMat4, 4> derivatives_to_complex(const std::array<Mat4, 4>& dJ) const {
    std::array<CMat4, 4> out;
    for (int b = 0; b < 4; ++b) {
      out[std::size_t(b)].setZero();
      for (int k = 0; k < 4; ++k) out[std::size_t(b)] += P(k, b) * endo_to_complex(dJ[std::size_t(k)]);
    }
    return out;
  }
};

enum class LiftSpace { tangent, cotangent };

// Fiber-linear correction blocks.
//   tangent:   C(a, i) = q^b dJ^a_i / dx^b
//   cotangent: M(j, i) = 1/2 p_a (-J^a_{i,j} + J^a_{j,i} + J^a_l (J^l_{i,m} J^m_j - J^l_{j,m} J^m_i))
// where J^a_{i,j} = dJ^a_i / dx^j.  Both are exact in the fiber variable.
inline Mat4 tangent_correction(const StructureJet& s, const Vec4& q) {
  Mat4 c = Mat4::Zero();
  for (int b = 0; b < 4; ++b) c += q(b) * s.dJ[std::size_t(b)];
  return c;
}

template <class Scalar, class MatJ, class ArrD, class VecP>
Eigen::Matrix<Scalar, 4, 4> cotangent_correction_generic(const MatJ& J, const ArrD& dJ, const VecP& p) {
  Eigen::Matrix<Scalar, 4, 4> m = Eigen::Matrix<Scalar, 4, 4>::Zero();
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) {
      Scalar s(0.0);
      for (int a = 0; a < 4; ++a) {
        Scalar t = -dJ[std::size_t(j)](a, i) + dJ[std::size_t(i)](a, j);
        for (int l = 0; l < 4; ++l) {
          Scalar u(0.0);
          for (int mm = 0; mm < 4; ++mm)
            u += dJ[std::size_t(mm)](l, i) * J(mm, j) - dJ[std::size_t(mm)](l, j) * J(mm, i);
          t += J(a, l) * u;
        }
        s += p(a) * t;
      }
      m(j, i) = 0.5 * s;
    }
  return m;
}

inline Mat4 cotangent_correction(const StructureJet& s, const Vec4& p) {
  return cotangent_correction_generic<double>(s.J, s.dJ, p);
}

class LiftedStructure {
 public:
  LiftedStructure(JetField base, LiftSpace space, std::string label = "")
      : base_(std::move(base)), space_(space), label_(std::move(label)) {}

  LiftSpace space() const { return space_; }
  const std::string& label() const { return label_; }
  StructureJet base_at(const Vec4& x) const { return base_(x); }

  // y = (x, fiber) with fiber q (tangent) or p (cotangent) in real components.
  Mat8 eval(const Vec8& y) const {
    const Vec4 x = y.head<4>(), f = y.tail<4>();
    const StructureJet s = base_(x);
    Mat8 m = Mat8::Zero();
    m.topLeftCorner<4, 4>() = s.J;
    if (space_ == LiftSpace::tangent) {
      m.bottomRightCorner<4, 4>() = s.J;
      m.bottomLeftCorner<4, 4>() = tangent_correction(s, f);
    } else {
      m.bottomRightCorner<4, 4>() = s.J.transpose();
      m.bottomLeftCorner<4, 4>() = cotangent_correction(s, f);
    }
    return m;
  }
  Mat8 operator()(const Vec8& y) const { return eval(y); }

 private:
  JetField base_;
  LiftSpace space_;
  std::string label_;
};

inline LiftedStructure lift_tangent(const JetField& base) { return {base, LiftSpace::tangent, "tangent"}; }
inline LiftedStructure lift_cotangent(const JetField& base) { return {base, LiftSpace::cotangent, "cotangent"}; }
inline LiftedStructure lift_tangent(const AcStructure& J) { return lift_tangent(ambient_jet(J)); }
inline LiftedStructure lift_cotangent(const AcStructure& J) { return lift_cotangent(ambient_jet(J)); }

inline Mat8 standard_tangent_structure() {
  Mat8 m = Mat8::Zero();
  m.topLeftCorner<4, 4>() = j_standard();
  m.bottomRightCorner<4, 4>() = j_standard();
  return m;
}
inline Mat8 standard_cotangent_structure() {
  Mat8 m = Mat8::Zero();
  m.topLeftCorner<4, 4>() = j_standard();
  m.bottomRightCorner<4, 4>() = j_standard().transpose();
  return m;
}

// The cotangent lift assembled from complex components in the basis
// (d/dz^A, d/dp_A):
//   J^B_A (d/dz^B (x) dz^A + d/dp_A (x) dp_B)
//   + 1/2 p_C (-J^C_{A,B} + J^C_{B,A} + J^C_L (J^L_{A,M} J^M_B - J^L_{B,M} J^M_A)) d/dp_B (x) dz^A
// and returned as a real 8x8 matrix.  Independent of the real-index assembly
// except for the underlying J and dJ.
inline Mat8 cotangent_complex_form(const StructureJet& s, const Vec4& p, const IndexTable& t = {}) {
  const CMat4 k = t.endo_to_complex(s.J);
  const auto dk = t.derivatives_to_complex(s.dJ);
  const CVec4 pc = t.covector_to_complex(p);
  Eigen::Matrix<cd, 8, 8> m = Eigen::Matrix<cd, 8, 8>::Zero();
  m.topLeftCorner<4, 4>() = k;
  m.bottomRightCorner<4, 4>() = k.transpose();
  m.bottomLeftCorner<4, 4>() = cotangent_correction_generic<cd>(k, dk, pc);
  Eigen::Matrix<cd, 8, 8> tr = Eigen::Matrix<cd, 8, 8>::Zero();
  tr.topLeftCorner<4, 4>() = t.Pinv;
  tr.bottomRightCorner<4, 4>() = t.P.transpose();
  const Eigen::Matrix<cd, 8, 8> real = tr.inverse() * m * tr;
  return real.real();
}

// A smooth map from the closed disk into a lifted space, y = F(zeta).
using DiskMap8 = std::function<Vec8(cd)>;

// sup over the grid of |dF/dt - L(F) dF/ds|, zeta = s + i t, i.e.
// F_* J_st = L F_* on the real tangent vector d/ds.
inline double holomorphy_residual(const DiskMap8& F, const LiftedStructure& L, const std::vector<cd>& grid,
                                  double h = 1e-5) {
  double sup = 0.0;
  for (const cd z : grid) {
    const Vec8 ds = (F(z + h) - F(z - h)) / (2.0 * h);
    const Vec8 dt = (F(z + kI * h) - F(z - kI * h)) / (2.0 * h);
    sup = std::max(sup, (dt - L.eval(F(z)) * ds).cwiseAbs().maxCoeff());
  }
  return sup;
}

// Row A of the fiber equation of the lift along a straight chart disk
// zeta -> (z0 = zeta, w fixed):
//   -i g_{A,zbar} - J^B_A g_{B,zbar} - 1/2 g_B (J^B_{A,0bar} + i J^B_L J^L_{A,0bar}) = 0.
// Returns (coefficients of g_{B,zbar}, coefficients of g_B) in chart index
// order (0, 0bar, 1, 1bar).
struct LiftRow {
  CVec4 dbar_coeff;
  CVec4 g_coeff;
};
inline LiftRow lift_row(const AcStructure::ChartComponents& cc, int A) {
  LiftRow r;
  for (int b = 0; b < 4; ++b) {
    r.dbar_coeff(b) = (b == A ? -kI : cd(0.0)) - cc.K(b, A);
    cd s = cc.K_dbar0(b, A);
    for (int l = 0; l < 4; ++l) s += kI * cc.K(b, l) * cc.K_dbar0(l, A);
    r.g_coeff(b) = -0.5 * s;
  }
  return r;
}

// Residual of the reduction of row A = 0 to 2i g_{0,zbar} = 0: the distance of
// the assembled row from (-2i, 0, 0, 0 | 0, 0, 0, 0).
inline double row0_reduction_residual(const AcStructure::ChartComponents& cc) {
  const LiftRow r = lift_row(cc, 0);
  CVec4 target = CVec4::Zero();
  target(0) = -2.0 * kI;
  return std::max((r.dbar_coeff - target).cwiseAbs().maxCoeff(), r.g_coeff.cwiseAbs().maxCoeff());
}

}  // namespace acx
