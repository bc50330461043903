#pragma once

// Functions on the closed unit disk as truncated polynomials in zeta and
// conj(zeta), with exact dbar, Cauchy transform and boundary Fourier data.

#include "acx/linalg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace acx {

class DegenerateGridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotMatchableError : public std::runtime_error {
 public:
  NotMatchableError(double mass, double tol)
      : std::runtime_error("boundary data has negative Fourier mass " + std::to_string(mass) +
                           " above tolerance " + std::to_string(tol)),
        negative_mass(mass) {}
  double negative_mass;
};

// Sum of c_{a,b} zeta^a conj(zeta)^b over a + b <= degree.  Coefficients are
// stored by total degree, so lowering the degree is a prefix truncation.
class DiskFunction {
 public:
  DiskFunction() : DiskFunction(0) {}
  explicit DiskFunction(int degree) : degree_(std::max(degree, 0)), c_(count(degree_), cd(0.0)) {}

  static DiskFunction constant(cd value) {
    DiskFunction f(0);
    f.c_[0] = value;
    return f;
  }
  static DiskFunction monomial(int a, int b, cd value = 1.0) {
    DiskFunction f(a + b);
    f.c_[index(a, b)] = value;
    return f;
  }
  // zeta^a conj(zeta)^b with a, b given per term.
  static DiskFunction from_terms(const std::map<std::pair<int, int>, cd>& terms) {
    int d = 0;
    for (const auto& [ab, v] : terms) d = std::max(d, ab.first + ab.second);
    DiskFunction f(d);
    for (const auto& [ab, v] : terms) f.c_[index(ab.first, ab.second)] += v;
    return f;
  }

  static std::size_t count(int degree) { return std::size_t(degree + 1) * std::size_t(degree + 2) / 2; }
  static std::size_t index(int a, int b) {
    const std::size_t s = std::size_t(a + b);
    return s * (s + 1) / 2 + std::size_t(b);
  }

  int degree() const { return degree_; }
  cd coeff(int a, int b) const {
    if (a < 0 || b < 0 || a + b > degree_) return 0.0;
    return c_[index(a, b)];
  }
  void set(int a, int b, cd value) {
    if (a < 0 || b < 0) throw std::invalid_argument("negative monomial exponent");
    if (a + b > degree_) *this = resized(a + b);
    c_[index(a, b)] = value;
  }
  const std::vector<cd>& coeffs() const { return c_; }

  DiskFunction resized(int degree) const {
    DiskFunction r(degree);
    const std::size_t n = std::min(c_.size(), r.c_.size());
    std::copy(c_.begin(), c_.begin() + std::ptrdiff_t(n), r.c_.begin());
    return r;
  }

  cd operator()(cd zeta) const {
    std::vector<cd> zp(std::size_t(degree_) + 1), zbp(std::size_t(degree_) + 1);
    zp[0] = zbp[0] = 1.0;
    for (int k = 1; k <= degree_; ++k) {
      zp[std::size_t(k)] = zp[std::size_t(k - 1)] * zeta;
      zbp[std::size_t(k)] = zbp[std::size_t(k - 1)] * std::conj(zeta);
    }
    cd s = 0.0;
    for (int t = 0; t <= degree_; ++t)
      for (int b = 0; b <= t; ++b) s += c_[index(t - b, b)] * zp[std::size_t(t - b)] * zbp[std::size_t(b)];
    return s;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const cd& v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  DiskFunction& operator+=(const DiskFunction& o) {
    if (o.degree_ > degree_) *this = resized(o.degree_);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  DiskFunction& operator-=(const DiskFunction& o) {
    if (o.degree_ > degree_) *this = resized(o.degree_);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  DiskFunction& operator*=(cd s) {
    for (cd& v : c_) v *= s;
    return *this;
  }

 private:
  int degree_;
  std::vector<cd> c_;
};

inline DiskFunction operator+(DiskFunction a, const DiskFunction& b) { return a += b; }
inline DiskFunction operator-(DiskFunction a, const DiskFunction& b) { return a -= b; }
inline DiskFunction operator*(cd s, DiskFunction a) { return a *= s; }
inline DiskFunction operator*(double s, DiskFunction a) { return a *= cd(s); }

inline DiskFunction operator*(const DiskFunction& f, const DiskFunction& g) {
  DiskFunction r(f.degree() + g.degree());
  for (int s = 0; s <= f.degree(); ++s)
    for (int b = 0; b <= s; ++b) {
      const cd x = f.coeff(s - b, b);
      if (x == 0.0) continue;
      for (int t = 0; t <= g.degree(); ++t)
        for (int d = 0; d <= t; ++d) {
          const int a = s - b + t - d, bb = b + d;
          r.set(a, bb, r.coeff(a, bb) + x * g.coeff(t - d, d));
        }
    }
  return r;
}

// conj(f(zeta)) as a disk function.
inline DiskFunction conj(const DiskFunction& f) {
  DiskFunction r(f.degree());
  for (int t = 0; t <= f.degree(); ++t)
    for (int b = 0; b <= t; ++b) r.set(t - b, b, std::conj(f.coeff(b, t - b)));
  return r;
}

inline DiskFunction dbar(const DiskFunction& f) {
  DiskFunction r(std::max(f.degree() - 1, 0));
  for (int t = 1; t <= f.degree(); ++t)
    for (int b = 1; b <= t; ++b) r.set(t - b, b - 1, double(b) * f.coeff(t - b, b));
  return r;
}

inline DiskFunction d_dzeta(const DiskFunction& f) {
  DiskFunction r(std::max(f.degree() - 1, 0));
  for (int t = 1; t <= f.degree(); ++t)
    for (int a = 1; a <= t; ++a) r.set(a - 1, t - a, double(a) * f.coeff(a, t - a));
  return r;
}

// T[f](zeta) = (1/pi) * integral over the disk of f(w) / (zeta - w) dA(w).
// On monomials: zeta^a zb^(b+1)/(b+1), minus zeta^(a-b-1)/(b+1) when a > b,
// the subtraction making the exterior continuation decay at infinity.
inline DiskFunction cauchy_transform(const DiskFunction& f) {
  DiskFunction r(f.degree() + 1);
  for (int t = 0; t <= f.degree(); ++t)
    for (int b = 0; b <= t; ++b) {
      const int a = t - b;
      const cd c = f.coeff(a, b) / double(b + 1);
      if (c == 0.0) continue;
      r.set(a, b + 1, r.coeff(a, b + 1) + c);
      if (a >= b + 1) r.set(a - b - 1, 0, r.coeff(a - b - 1, 0) - c);
    }
  return r;
}

// Fourier series on the unit circle, modes -m..m.
class BoundaryFunction {
 public:
  BoundaryFunction() : BoundaryFunction(0) {}
  explicit BoundaryFunction(int m) : m_(std::max(m, 0)), c_(std::size_t(2 * m_ + 1), cd(0.0)) {}

  int max_mode() const { return m_; }
  cd mode(int k) const { return (k < -m_ || k > m_) ? cd(0.0) : c_[std::size_t(k + m_)]; }
  void set_mode(int k, cd v) {
    if (std::abs(k) > m_) {
      BoundaryFunction g(std::abs(k));
      for (int j = -m_; j <= m_; ++j) g.c_[std::size_t(j + g.m_)] = mode(j);
      *this = g;
    }
    c_[std::size_t(k + m_)] = v;
  }

  cd operator()(double theta) const {
    cd s = 0.0;
    for (int k = -m_; k <= m_; ++k) s += mode(k) * std::exp(kI * (double(k) * theta));
    return s;
  }

  double l2_mass() const {
    double s = 0.0;
    for (const cd& v : c_) s += std::norm(v);
    return std::sqrt(s);
  }
  double negative_mass() const {
    double s = 0.0;
    for (int k = -m_; k < 0; ++k) s += std::norm(mode(k));
    return std::sqrt(s);
  }
  // Conjugate symmetry c_{-k} = conj(c_k) up to tol, i.e. real-valued trace.
  bool is_real(double tol = 1e-12) const {
    for (int k = 0; k <= m_; ++k)
      if (std::abs(mode(-k) - std::conj(mode(k))) > tol) return false;
    return true;
  }

  // Fourier coefficients from values at theta_j = 2 pi j / N.
  static BoundaryFunction from_samples(const std::vector<cd>& values, int m) {
    const std::size_t n = values.size();
    if (n < std::size_t(2 * m + 1)) throw DegenerateGridError("too few boundary samples for the requested modes");
    BoundaryFunction g(m);
    for (int k = -m; k <= m; ++k) {
      cd s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += values[j] * std::exp(-kI * (double(k) * 2.0 * kPi * double(j) / double(n)));
      g.c_[std::size_t(k + m)] = s / double(n);
    }
    return g;
  }

  BoundaryFunction& operator+=(const BoundaryFunction& o) {
    for (int k = -o.m_; k <= o.m_; ++k) set_mode(k, mode(k) + o.mode(k));
    return *this;
  }
  BoundaryFunction& operator-=(const BoundaryFunction& o) {
    for (int k = -o.m_; k <= o.m_; ++k) set_mode(k, mode(k) - o.mode(k));
    return *this;
  }

 private:
  int m_;
  std::vector<cd> c_;
};

inline BoundaryFunction operator-(BoundaryFunction a, const BoundaryFunction& b) { return a -= b; }
inline BoundaryFunction operator+(BoundaryFunction a, const BoundaryFunction& b) { return a += b; }

// On |zeta| = 1 the monomial zeta^a zb^b is e^{i(a-b)theta}.
inline BoundaryFunction boundary_trace(const DiskFunction& f) {
  BoundaryFunction g(f.degree());
  for (int t = 0; t <= f.degree(); ++t)
    for (int b = 0; b <= t; ++b) g.set_mode(t - 2 * b, g.mode(t - 2 * b) + f.coeff(t - b, b));
  return g;
}

// Holomorphic polynomial with the given boundary values.  rel_tol bounds the
// negative-mode mass relative to the total mass.
inline DiskFunction holomorphic_match(const BoundaryFunction& g, double rel_tol = 1e-8) {
  const double total = g.l2_mass();
  const double neg = g.negative_mass();
  if (total > 0.0 && neg > rel_tol * total) throw NotMatchableError(neg, rel_tol * total);
  DiskFunction h(g.max_mode());
  for (int k = 0; k <= g.max_mode(); ++k) h.set(k, 0, g.mode(k));
  return h;
}

// Contour integral of f(zeta) zeta^n dzeta over the unit circle.
inline cd moment_integral(const DiskFunction& f, int n) {
  if (n < 0) throw std::invalid_argument("moment order must be nonnegative");
  return 2.0 * kPi * kI * boundary_trace(f).mode(-(n + 1));
}

// Chebyshev-spaced radii in (0, 1], outermost radius exactly 1.
inline std::vector<double> chebyshev_radii(int n) {
  std::vector<double> r(std::size_t(std::max(n, 0)));
  for (int i = 0; i < n; ++i) r[std::size_t(i)] = std::cos(kPi * double(i) / double(2 * n));
  return r;
}

inline std::vector<cd> polar_grid(int radii, int angles) {
  std::vector<cd> pts;
  pts.reserve(std::size_t(radii) * std::size_t(angles));
  for (double r : chebyshev_radii(radii))
    for (int j = 0; j < angles; ++j) pts.push_back(std::polar(r, 2.0 * kPi * double(j) / double(angles)));
  return pts;
}

// Annular polar grid with radii evenly spaced in [r_min, r_max].
inline std::vector<cd> annulus_grid(int radii, int angles, double r_min, double r_max) {
  std::vector<cd> g;
  for (int i = 0; i < radii; ++i) {
    const double r = radii == 1 ? r_min : r_min + (r_max - r_min) * double(i) / double(radii - 1);
    for (int j = 0; j < angles; ++j) g.push_back(std::polar(r, 2.0 * kPi * double(j) / double(angles)));
  }
  return g;
}

struct FitResult {
  DiskFunction f;
  double max_residual = 0.0;
  int rank = 0;
};

// Least-squares fit over polynomials of the given degree.  The solve runs in
// the Zernike basis e^{ik theta} R_n^|k|(r), which stays well conditioned on
// polar grids at high degree, and the result is expanded into monomials.
namespace detail {

struct ZernikeTerm {
  int k = 0;
  int n = 0;
  std::vector<std::pair<int, long double>> powers;  // (power of r, coefficient)
};

inline std::vector<ZernikeTerm> zernike_terms(int degree) {
  std::vector<ZernikeTerm> out;
  for (int k = -degree; k <= degree; ++k) {
    const int m = std::abs(k);
    for (int n = m; n <= degree; n += 2) {
      ZernikeTerm t{k, n, {}};
      for (int s = 0; s <= (n - m) / 2; ++s) {
        const long double c = std::exp(std::lgamma((long double)(n - s + 1)) - std::lgamma((long double)(s + 1)) -
                                       std::lgamma((long double)((n + m) / 2 - s + 1)) -
                                       std::lgamma((long double)((n - m) / 2 - s + 1)));
        t.powers.emplace_back(n - 2 * s, (s % 2 ? -1.0L : 1.0L) * std::round(c));
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace detail

inline FitResult fit(const std::vector<std::pair<cd, cd>>& samples, int degree) {
  const std::size_t nb = DiskFunction::count(degree);
  if (samples.size() < nb) throw DegenerateGridError("fewer samples than monomials");
  const auto terms = detail::zernike_terms(degree);
  Eigen::MatrixXcd a(samples.size(), terms.size());
  Eigen::VectorXcd y(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const cd z = samples[i].first;
    const long double r = std::abs(z);
    const double th = std::arg(z);
    y(Eigen::Index(i)) = samples[i].second;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      long double radial = 0.0L;
      for (const auto& [p, c] : terms[j].powers) radial += c * std::pow(r, (long double)p);
      a(Eigen::Index(i), Eigen::Index(j)) = double(radial) * std::polar(1.0, double(terms[j].k) * th);
    }
  }
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (scale(j) == 0.0) throw DegenerateGridError("basis function vanishes on every sample");
    a.col(j) /= scale(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < Eigen::Index(nb))
    throw DegenerateGridError("rank-deficient fit: rank " + std::to_string(qr.rank()) + " of " + std::to_string(nb));
  const Eigen::VectorXcd x = qr.solve(y);
  FitResult out{DiskFunction(degree), 0.0, int(qr.rank())};
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const cd xj = x(Eigen::Index(j)) / scale(Eigen::Index(j));
    for (const auto& [p, c] : terms[j].powers) {
      const int ai = (p + terms[j].k) / 2, bi = (p - terms[j].k) / 2;
      out.f.set(ai, bi, out.f.coeff(ai, bi) + xj * double(c));
    }
  }
  for (const auto& [z, v] : samples) out.max_residual = std::max(out.max_residual, std::abs(out.f(z) - v));
  return out;
}

// Same least-squares problem on a polar grid (values in polar_grid order).
// With angles > 2 * degree the discrete Fourier modes of each ring are
// orthogonal, so the fit splits into one small radial problem per mode k.
inline FitResult fit_polar(const std::vector<cd>& values, int degree, int radii, int angles) {
  if (angles <= 2 * degree) throw DegenerateGridError("polar fit needs more than 2 * degree angles");
  if (radii < degree / 2 + 1) throw DegenerateGridError("polar fit needs at least degree / 2 + 1 radii");
  if (values.size() != std::size_t(radii) * std::size_t(angles)) throw std::invalid_argument("value count does not match the grid");
  const auto r = chebyshev_radii(radii);
  // Ring DFTs: modes(i, k + degree).
  Eigen::MatrixXcd modes(radii, 2 * degree + 1);
  for (int i = 0; i < radii; ++i)
    for (int k = -degree; k <= degree; ++k) {
      cd s = 0.0;
      for (int j = 0; j < angles; ++j)
        s += values[std::size_t(i) * std::size_t(angles) + std::size_t(j)] * std::polar(1.0, -2.0 * kPi * double(k) * j / angles);
      modes(i, k + degree) = s / double(angles);
    }
  const auto terms = detail::zernike_terms(degree);
  FitResult out{DiskFunction(degree), 0.0, 0};
  for (int k = -degree; k <= degree; ++k) {
    std::vector<const detail::ZernikeTerm*> cols;
    for (const auto& t : terms)
      if (t.k == k) cols.push_back(&t);
    Eigen::MatrixXd a(radii, Eigen::Index(cols.size()));
    for (int i = 0; i < radii; ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) {
        long double v = 0.0L;
        for (const auto& [pw, c] : cols[j]->powers) v += c * std::pow((long double)r[std::size_t(i)], (long double)pw);
        a(i, Eigen::Index(j)) = double(v);
      }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-12);
    if (qr.rank() < a.cols()) throw DegenerateGridError("rank-deficient radial fit for mode " + std::to_string(k));
    out.rank += int(qr.rank());
    const Eigen::VectorXd re = qr.solve(modes.col(k + degree).real());
    const Eigen::VectorXd im = qr.solve(modes.col(k + degree).imag());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const cd x(re(Eigen::Index(j)), im(Eigen::Index(j)));
      for (const auto& [pw, c] : cols[j]->powers) {
        const int ai = (pw + k) / 2, bi = (pw - k) / 2;
        out.f.set(ai, bi, out.f.coeff(ai, bi) + x * double(c));
      }
    }
  }
  const auto pts = polar_grid(radii, angles);
  for (std::size_t i = 0; i < pts.size(); ++i) out.max_residual = std::max(out.max_residual, std::abs(out.f(pts[i]) - values[i]));
  return out;
}

// angles = 0 picks max(64, 2 * degree + 9).
inline FitResult fit_function(const std::function<cd(cd)>& f, int degree, int radii = 32, int angles = 0) {
  if (angles <= 0) angles = std::max(64, 2 * degree + 9);
  std::vector<cd> v;
  for (const cd& z : polar_grid(radii, angles)) v.push_back(f(z));
  return fit_polar(v, degree, radii, angles);
}

// Gauss-Legendre nodes and weights on [-1, 1] from the Jacobi matrix.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) t(k, k - 1) = t(k - 1, k) = double(k) / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    x[std::size_t(k)] = es.eigenvalues()(k);
    w[std::size_t(k)] = 2.0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
  }
  return {x, w};
}

// Quadrature of (1/pi) * integral f(w)/(zeta - w) dA(w) in polar coordinates
// centered at zeta, which removes the kernel singularity.
inline cd cauchy_quadrature(const std::function<cd(cd)>& f, cd zeta, int radial = 64, int angular = 128) {
  const auto [x, w] = gauss_legendre(radial);
  cd total = 0.0;
  for (int j = 0; j < angular; ++j) {
    const double phi = 2.0 * kPi * double(j) / double(angular);
    const cd dir = std::polar(1.0, phi);
    const double p = std::real(std::conj(zeta) * dir);
    const double reach = -p + std::sqrt(p * p + 1.0 - std::norm(zeta));
    cd ray = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double s = 0.5 * reach * (x[k] + 1.0);
      ray += w[k] * f(zeta + s * dir);
    }
    // 1/(zeta - w) dA = -conj(dir)/s * s ds dphi
    total += -std::conj(dir) * ray * (0.5 * reach);
  }
  return total * (2.0 * kPi / double(angular)) / kPi;
}

}  // namespace acx
