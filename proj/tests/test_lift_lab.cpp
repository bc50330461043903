#include "acx/disk_calculus.hpp"
#include "acx/lift_lab.hpp"

#include <gtest/gtest.h>

using namespace acx;

namespace {

std::vector<Vec8> lifted_points(std::uint64_t seed, int n) {
  Sampler s(seed);
  std::vector<Vec8> ys;
  for (const Vec4& x : probe_points(seed, n, 0.1, 0.95)) {
    Vec8 y;
    y << x, s.gaussian4();
    ys.push_back(y);
  }
  return ys;
}

double square_defect(const Mat8& m) { return (m * m + Mat8::Identity()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(IndexTable, RoundTrips) {
  const IndexTable t;
  Sampler s(1);
  const Vec4 v = s.gaussian4();
  Mat4 m;
  for (int i = 0; i < 4; ++i) m.col(i) = s.gaussian4();
  EXPECT_LT((t.vector_to_real(t.vector_to_complex(v)) - v).norm(), 1e-15);
  EXPECT_LT((t.covector_to_real(t.covector_to_complex(v)) - v).norm(), 1e-15);
  EXPECT_LT((t.endo_to_real(t.endo_to_complex(m)) - m).cwiseAbs().maxCoeff(), 1e-14);
  // Pairing is basis independent.
  const Vec4 p = s.gaussian4();
  EXPECT_NEAR(std::abs(t.covector_to_complex(p).transpose().dot(t.vector_to_complex(v).conjugate())), std::abs(p.dot(v)), 1e-14);
  // The standard structure is diag(i, -i, i, -i) in complex indices.
  const CMat4 k = t.endo_to_complex(j_standard());
  EXPECT_LT((k - CVec4(kI, -kI, kI, -kI).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Lift, StandardStructureGivesStandardLiftsExactly) {
  const AcStructure J;
  for (const Vec8& y : lifted_points(2, 20)) {
    EXPECT_EQ(lift_tangent(J).eval(y), standard_tangent_structure());
    EXPECT_EQ(lift_cotangent(J).eval(y), standard_cotangent_structure());
  }
}

TEST(Lift, SquaresToMinusIdentity) {
  for (const auto& phi : {DeformationTensor::radial_h(), DeformationTensor::bump(), DeformationTensor::radial_invariant()}) {
    const AcStructure J(phi);
    for (const Vec8& y : lifted_points(3, 50)) {
      EXPECT_LT(square_defect(lift_tangent(J).eval(y)), 1e-9);
      EXPECT_LT(square_defect(lift_cotangent(J).eval(y)), 1e-9);
    }
  }
}

TEST(Lift, ProjectionIsHolomorphic) {
  const AcStructure J(DeformationTensor::radial_h());
  for (const Vec8& y : lifted_points(4, 10))
    for (const auto& L : {lift_tangent(J), lift_cotangent(J)}) {
      const Mat8 m = L.eval(y);
      EXPECT_EQ((m.topRightCorner<4, 4>()), Mat4::Zero());
      EXPECT_EQ((m.topLeftCorner<4, 4>()), J.J(y.head<4>()));
    }
}

TEST(Lift, CotangentComplexFormAgrees) {
  const AcStructure J(DeformationTensor::radial_h());
  const JetField jet = ambient_jet(J);
  for (const Vec8& y : lifted_points(5, 30))
    EXPECT_LT((cotangent_complex_form(jet(y.head<4>()), y.tail<4>()) - lift_cotangent(J).eval(y)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Lift, CorrectionBlocksAreLinearInFiber) {
  const AcStructure J(DeformationTensor::bump());
  const StructureJet jet = ambient_jet(J)(Vec4(0.3, 0.1, 0.2, 0.2));
  Sampler r(6);
  const Vec4 p = r.gaussian4(), q = r.gaussian4();
  EXPECT_LT((cotangent_correction(jet, Vec4(2.0 * p + q)) - 2.0 * cotangent_correction(jet, p) - cotangent_correction(jet, q))
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
  EXPECT_LT((tangent_correction(jet, Vec4(2.0 * p + q)) - 2.0 * tangent_correction(jet, p) - tangent_correction(jet, q)).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(Holomorphy, StraightDiskWithConstantCovector) {
  const AcStructure J;
  const CVec2 v = CVec2(cd(0.6, 0.0), cd(0.0, 0.8));
  const Vec4 p(0.3, -0.2, 0.5, 0.1);
  const DiskMap8 F = [&](cd z) {
    Vec8 y;
    y << to_real(CVec2(z * v)), p;
    return y;
  };
  EXPECT_LT(holomorphy_residual(F, lift_cotangent(J), polar_grid(6, 16)), 1e-8);
}

TEST(Holomorphy, DetectsAntiholomorphicFiberPerturbation) {
  const AcStructure J;
  const CVec2 v(0.0, 1.0);
  const DiskMap8 F = [&](cd z) {
    Vec8 y;
    const cd g = 0.01 * std::conj(z);
    y << to_real(CVec2(z * v)), g.real(), g.imag(), 0.0, 0.0;
    return y;
  };
  EXPECT_GT(holomorphy_residual(F, lift_tangent(J), polar_grid(6, 16)), 1e-3);
}

TEST(Holomorphy, TangentDerivativeOfHolomorphicFamily) {
  // (zeta v, zeta w) is the derivative of the family of straight disks, which
  // are J-holomorphic for every structure built here.
  const AcStructure J(DeformationTensor::radial_h());
  const CVec2 v(0.0, 1.0), w(cd(0.6, 0.2), 0.0);
  const DiskMap8 F = [&](cd z) {
    Vec8 y;
    y << to_real(CVec2(z * v)), to_real(CVec2(z * w));
    return y;
  };
  EXPECT_LT(holomorphy_residual(F, lift_tangent(J), annulus_grid(6, 16, 0.15, 0.95)), 1e-8);
}

TEST(FiberEquation, RowZeroReducesToHolomorphyOfG0) {
  for (const auto& phi : {DeformationTensor::standard(), DeformationTensor::radial_h(), DeformationTensor::bump(),
                          DeformationTensor::radial_invariant()}) {
    const AcStructure J(phi);
    for (const cd z : annulus_grid(4, 12, 0.1, 0.95)) EXPECT_LT(row0_reduction_residual(J.chart_components(z, 0.0)), 1e-10);
  }
}

TEST(ChartJet, AnalyticAgreesWithDifferences) {
  const AcStructure J(DeformationTensor::radial_h());
  const JetField jet = chart_jet(J);
  const Vec4 c(0.4, 0.2, 0.1, -0.15);
  const StructureJet s = jet(c);
  for (int k = 0; k < 4; ++k) {
    Vec4 e = Vec4::Zero();
    e(k) = 1e-6;
    EXPECT_LT(((jet(c + e).J - jet(c - e).J) / 2e-6 - s.dJ[std::size_t(k)]).cwiseAbs().maxCoeff(), 1e-6);
  }
}
