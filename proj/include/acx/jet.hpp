#pragma once

// Forward-mode dual numbers and a minimal complex type that works over them.
// Builtin structures are written once as templates and evaluated either on
// double (values) or on Jet<N> (values plus first partials).

#include <array>
#include <cmath>
#include <cstddef>

namespace acx {

template <std::size_t N>
struct Jet {
  double v = 0.0;
  std::array<double, N> d{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: implicit promotion from constants

  static Jet variable(double value, std::size_t k) {
    Jet j(value);
    j.d[k] = 1.0;
    return j;
  }
};

template <std::size_t N>
inline Jet<N> operator+(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r(a.v + b.v);
  for (std::size_t k = 0; k < N; ++k) r.d[k] = a.d[k] + b.d[k];
  return r;
}
template <std::size_t N>
inline Jet<N> operator-(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r(a.v - b.v);
  for (std::size_t k = 0; k < N; ++k) r.d[k] = a.d[k] - b.d[k];
  return r;
}
template <std::size_t N>
inline Jet<N> operator-(const Jet<N>& a) {
  Jet<N> r(-a.v);
  for (std::size_t k = 0; k < N; ++k) r.d[k] = -a.d[k];
  return r;
}
template <std::size_t N>
inline Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r(a.v * b.v);
  for (std::size_t k = 0; k < N; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
  return r;
}
template <std::size_t N>
inline Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r(a.v / b.v);
  const double inv2 = 1.0 / (b.v * b.v);
  for (std::size_t k = 0; k < N; ++k) r.d[k] = (a.d[k] * b.v - a.v * b.d[k]) * inv2;
  return r;
}
template <std::size_t N> inline Jet<N> operator+(const Jet<N>& a, double b) { return a + Jet<N>(b); }
template <std::size_t N> inline Jet<N> operator+(double a, const Jet<N>& b) { return Jet<N>(a) + b; }
template <std::size_t N> inline Jet<N> operator-(const Jet<N>& a, double b) { return a - Jet<N>(b); }
template <std::size_t N> inline Jet<N> operator-(double a, const Jet<N>& b) { return Jet<N>(a) - b; }
template <std::size_t N> inline Jet<N> operator*(const Jet<N>& a, double b) { return a * Jet<N>(b); }
template <std::size_t N> inline Jet<N> operator*(double a, const Jet<N>& b) { return Jet<N>(a) * b; }
template <std::size_t N> inline Jet<N> operator/(const Jet<N>& a, double b) { return a / Jet<N>(b); }
template <std::size_t N> inline Jet<N> operator/(double a, const Jet<N>& b) { return Jet<N>(a) / b; }

template <std::size_t N>
inline Jet<N> sqrt(const Jet<N>& a) {
  const double s = std::sqrt(a.v);
  Jet<N> r(s);
  for (std::size_t k = 0; k < N; ++k) r.d[k] = a.d[k] / (2.0 * s);
  return r;
}
template <std::size_t N>
inline Jet<N> log(const Jet<N>& a) {
  Jet<N> r(std::log(a.v));
  for (std::size_t k = 0; k < N; ++k) r.d[k] = a.d[k] / a.v;
  return r;
}

using std::log;
using std::sqrt;

inline double value_of(double x) { return x; }
template <std::size_t N> inline double value_of(const Jet<N>& x) { return x.v; }

// Complex numbers over an arbitrary real scalar (std::complex is only
// specified for the builtin floating types).
template <class T>
struct Cx {
  T re{};
  T im{};
  Cx() = default;
  Cx(T r) : re(r), im(0.0) {}  // NOLINT
  Cx(T r, T i) : re(r), im(i) {}
};

template <class T> inline Cx<T> operator+(const Cx<T>& a, const Cx<T>& b) { return {a.re + b.re, a.im + b.im}; }
template <class T> inline Cx<T> operator-(const Cx<T>& a, const Cx<T>& b) { return {a.re - b.re, a.im - b.im}; }
template <class T> inline Cx<T> operator-(const Cx<T>& a) { return {-a.re, -a.im}; }
template <class T> inline Cx<T> operator*(const Cx<T>& a, const Cx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T> inline Cx<T> operator*(const T& s, const Cx<T>& a) { return {s * a.re, s * a.im}; }
template <class T> inline Cx<T> conj(const Cx<T>& a) { return {a.re, -a.im}; }
template <class T> inline T norm2(const Cx<T>& a) { return a.re * a.re + a.im * a.im; }

}  // namespace acx
