#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qslab {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 2;

/// A point of R^n for n <= 2. Coordinates beyond the active dimension are zero.
using Point = std::array<double, kMaxDim>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A computation produced non-finite values or failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline double dot(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

inline double euclidean_norm(const Point& a, int dim) { return std::sqrt(dot(a, a, dim)); }

/// Japanese bracket <r> = (1 + r^2)^{1/2}.
inline double japanese(double r) { return std::sqrt(1.0 + r * r); }

inline double japanese(const Point& a, int dim) { return std::sqrt(1.0 + dot(a, a, dim)); }

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace qslab
