#pragma once

// Shared small-matrix types and real/complex coordinate bookkeeping for the
// complex surface C^2 = R^4 with real coordinates (x1, y1, x2, y2).

#include "acx/jet.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cmath>
#include <random>
#include <stdexcept>

namespace acx {

using cd = std::complex<double>;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using CVec2 = Eigen::Vector2cd;
using CVec4 = Eigen::Vector4cd;
using CMat2 = Eigen::Matrix2cd;
using CMat4 = Eigen::Matrix4cd;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec8 = Eigen::Matrix<double, 8, 1>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cd kI{0.0, 1.0};

inline Vec4 to_real(const CVec2& z) { return Vec4(z(0).real(), z(0).imag(), z(1).real(), z(1).imag()); }
inline CVec2 to_complex(const Vec4& x) { return CVec2(cd(x(0), x(1)), cd(x(2), x(3))); }

// Multiplication by i on C^2, as a real 4x4 matrix.
inline Mat4 j_standard() {
  Mat4 j = Mat4::Zero();
  j(1, 0) = 1.0;
  j(0, 1) = -1.0;
  j(3, 2) = 1.0;
  j(2, 3) = -1.0;
  return j;
}

// Real 4x4 matrix of a complex-linear map of C^2.
inline Mat4 realify(const CMat2& m) {
  Mat4 r;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      r(2 * a, 2 * b) = m(a, b).real();
      r(2 * a, 2 * b + 1) = -m(a, b).imag();
      r(2 * a + 1, 2 * b) = m(a, b).imag();
      r(2 * a + 1, 2 * b + 1) = m(a, b).real();
    }
  return r;
}

// Columns are d/dz1, d/dz1bar, d/dz2, d/dz2bar written in the real basis.
// Complex components of a real endomorphism M are P^{-1} M P.
inline CMat4 complex_frame() {
  CMat4 p = CMat4::Zero();
  for (int a = 0; a < 2; ++a) {
    p(2 * a, 2 * a) = 0.5;
    p(2 * a + 1, 2 * a) = -0.5 * kI;
    p(2 * a, 2 * a + 1) = 0.5;
    p(2 * a + 1, 2 * a + 1) = 0.5 * kI;
  }
  return p;
}

// Unitary map of C^2 sending (0, 1) to the unit vector v.
inline CMat2 unitary_to(const CVec2& v) {
  CMat2 u;
  u << std::conj(v(1)), v(0), -std::conj(v(0)), v(1);
  return u;
}

// Solve a small dense system over an arbitrary scalar (used with Jet types).
template <class T, std::size_t N>
std::array<std::array<T, N>, N> inverse(std::array<std::array<T, N>, N> a) {
  std::array<std::array<T, N>, N> inv{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) inv[i][j] = T(i == j ? 1.0 : 0.0);
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    double best = std::abs(value_of(a[c][c]));
    for (std::size_t r = c + 1; r < N; ++r)
      if (std::abs(value_of(a[r][c])) > best) {
        best = std::abs(value_of(a[r][c]));
        piv = r;
      }
    if (best < 1e-300) throw std::runtime_error("singular frame matrix");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const T p = a[c][c];
    for (std::size_t j = 0; j < N; ++j) {
      a[c][j] = a[c][j] / p;
      inv[c][j] = inv[c][j] / p;
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == c) continue;
      const T f = a[r][c];
      for (std::size_t j = 0; j < N; ++j) {
        a[r][j] = a[r][j] - f * a[c][j];
        inv[r][j] = inv[r][j] - f * inv[c][j];
      }
    }
  }
  return inv;
}

// Deterministic random helpers for probe points.
struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }

  Vec4 gaussian4() { return Vec4(normal(), normal(), normal(), normal()); }
  Vec4 unit4() { return gaussian4().normalized(); }

  // Point with |x| uniform in [rmin, rmax] and direction uniform on S^3.
  Vec4 shell_point(double rmin, double rmax) { return uniform(rmin, rmax) * unit4(); }
};

}  // namespace acx
