// Levi form eigenvalues of log tau0 along a ray, for the standard and radial_h
// structures.
#include "acx/ma_lab.hpp"

#include <cstdio>

int main() {
  using namespace acx;
  const Potential u = potential_log_tau0();
  const AcStructure standard, deformed(DeformationTensor::radial_h());
  for (double r : {0.2, 0.35, 0.5, 0.65, 0.8}) {
    const Vec4 x(0.0, 0.0, r, 0.0);
    const Vec4 a = j_hessian(u, standard.field(), x).eigenvalues;
    const Vec4 b = j_hessian(u, deformed.field(), x).eigenvalues;
    std::printf("r = %.2f  standard min %+.6f  radial_h min %+.6f max %+.6f\n", r, a.minCoeff(), b.minCoeff(),
                b.maxCoeff());
  }
}
