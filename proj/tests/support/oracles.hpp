#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qslab/grid.hpp"

// Reference computations that share no code with the library: explicit sums
// and textbook quadrature.
namespace oracle {

using qslab::Complex;
using qslab::Grid;
using qslab::GridFunction;
using qslab::Point;

inline constexpr double kPi = std::numbers::pi;

inline double coordinate(const Grid& g, int i) { return -g.half_width() + i * 2.0 * g.half_width() / g.points_per_axis(); }

inline double frequency(const Grid& g, int k) {
  const int n = g.points_per_axis();
  const int w = k < n / 2 ? k : k - n;
  return w * kPi / g.half_width();
}

/// f^(xi_k) = (2 pi)^{-1/2} sum_j e^{-i x_j xi_k} f_j dx, 1D, FFT-ordered k.
inline std::vector<Complex> dft(const Grid& g, const std::vector<Complex>& f) {
  const int n = g.points_per_axis();
  const double dx = 2.0 * g.half_width() / n;
  std::vector<Complex> out(n);
  for (int k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) acc += std::exp(Complex(0.0, -coordinate(g, j) * frequency(g, k))) * f[j];
    out[k] = acc * dx / std::sqrt(2.0 * kPi);
  }
  return out;
}

/// Dense matrix of f -> sum_k a(x_j, xi_k) f^(xi_k) e^{i x_j xi_k} dxi (2 pi)^{-1/2}, 1D.
inline Eigen::MatrixXcd quantize(const Grid& g, const std::function<Complex(double, double)>& a) {
  const int n = g.points_per_axis();
  const double dx = 2.0 * g.half_width() / n, dxi = kPi / g.half_width();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k) {
        const double xi = frequency(g, k);
        acc += a(coordinate(g, j), xi) * std::exp(Complex(0.0, (coordinate(g, j) - coordinate(g, l)) * xi));
      }
      m(j, l) = acc * dx * dxi / (2.0 * kPi);
    }
  return m;
}

/// Largest singular value via the full SVD.
inline double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

/// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 40) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
        const double mid = 0.5 * (lo + hi);
        const double l = 0.5 * (lo + mid), r = 0.5 * (mid + hi);
        const double fl = f(l), fr = f(r);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, fl, fmid, left, eps / 2, d - 1) + rec(mid, hi, fmid, fr, fhi, right, eps / 2, d - 1);
      };
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

/// Complex Gaussian samples with a smooth spectral envelope, 1D.
inline GridFunction random_smooth(const Grid& g, std::uint64_t seed, double decay = 0.2) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  const int n = g.points_per_axis();
  std::vector<Complex> c(n);
  for (int k = 0; k < n; ++k) c[k] = Complex(n01(rng), n01(rng)) * std::exp(-decay * std::abs(frequency(g, k)));
  std::vector<Complex> v(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) v[j] += c[k] * std::exp(Complex(0.0, coordinate(g, j) * frequency(g, k)));
  return GridFunction(g, v);
}

inline double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
