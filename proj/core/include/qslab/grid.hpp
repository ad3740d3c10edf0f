#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "qslab/types.hpp"

namespace qslab {

/// Periodic lattice on [-L, L)^dim with N points per axis and its discrete
/// frequency dual xi_k = (pi / L) k, k in {-N/2, ..., N/2 - 1}.
///
/// Flat indices are row-major with the last axis fastest. Frequencies are
/// stored in FFT order: k = 0, 1, ..., N/2 - 1, -N/2, ..., -1.
class Grid {
 public:
  Grid(int dim, double half_width, int points_per_axis);

  int dim() const noexcept { return dim_; }
  double half_width() const noexcept { return half_width_; }
  int points_per_axis() const noexcept { return points_; }
  std::size_t size() const noexcept { return size_; }

  double dx() const noexcept { return 2.0 * half_width_ / points_; }
  /// Frequency spacing pi / L.
  double dxi() const noexcept;
  double cell_volume() const noexcept;
  double frequency_cell() const noexcept;
  /// |xi| of the Nyquist mode, pi N / (2L).
  double max_frequency() const noexcept;

  double coordinate(int i) const noexcept { return -half_width_ + i * dx(); }
  int wavenumber(int i) const noexcept { return i < points_ / 2 ? i : i - points_; }
  double frequency(int i) const noexcept { return wavenumber(i) * dxi(); }

  Point point(std::size_t flat) const noexcept;
  Point wavevector(std::size_t flat) const noexcept;
  std::array<int, kMaxDim> axis_indices(std::size_t flat) const noexcept;
  /// True when any axis sits on the unpaired -N/2 mode.
  bool is_nyquist(std::size_t flat) const noexcept;

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  double half_width_;
  int points_;
  std::size_t size_;
};

Grid make_grid(int dim, double half_width, int points_per_axis);

/// Samples of a complex field on a grid.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<Complex> values, bool diverged = false);

  static GridFunction zeros(const Grid& grid);
  static GridFunction sample(const Grid& grid, const std::function<Complex(const Point&)>& fn);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  const std::vector<Complex>& data() const noexcept { return values_; }
  Complex operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  bool diverged() const noexcept { return diverged_; }

 private:
  Grid grid_;
  std::vector<Complex> values_;
  bool diverged_ = false;
};

/// Fourier coefficients with the unitary convention
///   f^(xi) = (2 pi)^{-n/2} int e^{-i x.xi} f(x) dx,
/// so that Plancherel reads sum |f^|^2 dxi^n = sum |f|^2 dx^n.
class SpectralField {
 public:
  SpectralField(Grid grid, std::vector<Complex> coeffs);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  const std::vector<Complex>& data() const noexcept { return coeffs_; }
  Complex operator[](std::size_t i) const noexcept { return coeffs_[i]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField to_spectrum(const GridFunction& f);
GridFunction from_spectrum(const SpectralField& f);

// Raw-buffer variants used by the time steppers.
void to_spectrum(const Grid& grid, std::span<const Complex> values, std::span<Complex> coeffs);
void from_spectrum(const Grid& grid, std::span<const Complex> coeffs, std::span<Complex> values);

enum class Nyquist { keep, zero };

/// f -> F^{-1}[ m(xi) f^(xi) ].
GridFunction apply_multiplier(const GridFunction& f, const std::function<Complex(const Point&)>& multiplier,
                              Nyquist nyquist = Nyquist::keep);

double l2_norm(const GridFunction& f);
double sup_norm(const GridFunction& f);
/// (sum (1 + |xi|^2)^s |f^|^2 dxi^n)^{1/2}
double hs_norm(const GridFunction& f, double s);
double hs_norm(const SpectralField& f, double s);
/// (sum |f(x_j)|^2 <x_j>^{-m} dx^n)^{1/2}
double weighted_l2(const GridFunction& f, double m);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(Complex c, const GridFunction& a);
/// Pointwise product.
GridFunction pointwise(const GridFunction& a, const GridFunction& b);

/// CSV with header `x,re,im` (or `x1,x2,re,im`), 17 significant digits.
void write_csv(std::ostream& out, const GridFunction& f);
GridFunction read_csv(std::istream& in, const Grid& grid);

}  // namespace qslab
