#include "qslab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "qslab/fft.hpp"

namespace qslab {

Grid::Grid(int dim, double half_width, int points_per_axis)
    : dim_(dim), half_width_(half_width), points_(points_per_axis) {
  if (dim != 1 && dim != 2) throw PreconditionError("grid: dim must be 1 or 2");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw PreconditionError("grid: half width must be positive");
  if (points_per_axis < 8 || !std::has_single_bit(static_cast<unsigned>(points_per_axis)))
    throw PreconditionError("grid: points per axis must be a power of two >= 8");
  size_ = dim == 1 ? static_cast<std::size_t>(points_) : static_cast<std::size_t>(points_) * points_;
}

double Grid::dxi() const noexcept { return std::numbers::pi / half_width_; }

double Grid::cell_volume() const noexcept { return std::pow(dx(), dim_); }

double Grid::frequency_cell() const noexcept { return std::pow(dxi(), dim_); }

double Grid::max_frequency() const noexcept { return std::numbers::pi * points_ / (2.0 * half_width_); }

std::array<int, kMaxDim> Grid::axis_indices(std::size_t flat) const noexcept {
  if (dim_ == 1) return {static_cast<int>(flat), 0};
  return {static_cast<int>(flat / points_), static_cast<int>(flat % points_)};
}

Point Grid::point(std::size_t flat) const noexcept {
  auto idx = axis_indices(flat);
  Point p{};
  for (int a = 0; a < dim_; ++a) p[a] = coordinate(idx[a]);
  return p;
}

Point Grid::wavevector(std::size_t flat) const noexcept {
  auto idx = axis_indices(flat);
  Point p{};
  for (int a = 0; a < dim_; ++a) p[a] = frequency(idx[a]);
  return p;
}

bool Grid::is_nyquist(std::size_t flat) const noexcept {
  auto idx = axis_indices(flat);
  for (int a = 0; a < dim_; ++a)
    if (idx[a] == points_ / 2) return true;
  return false;
}

Grid make_grid(int dim, double half_width, int points_per_axis) { return Grid(dim, half_width, points_per_axis); }

GridFunction::GridFunction(Grid grid, std::vector<Complex> values, bool diverged)
    : grid_(grid), values_(std::move(values)), diverged_(diverged) {
  if (values_.size() != grid_.size()) throw PreconditionError("grid function: length does not match grid");
  if (!diverged_ && !std::all_of(values_.begin(), values_.end(), [](Complex z) { return is_finite(z); }))
    throw NumericalError("grid function: non-finite value");
}

GridFunction GridFunction::zeros(const Grid& grid) { return GridFunction(grid, std::vector<Complex>(grid.size())); }

GridFunction GridFunction::sample(const Grid& grid, const std::function<Complex(const Point&)>& fn) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.point(i));
  return GridFunction(grid, std::move(v));
}

SpectralField::SpectralField(Grid grid, std::vector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) throw PreconditionError("spectral field: length does not match grid");
}

namespace {

// (-1)^(k1 + k2) from the shift x_j = -L + j dx.
double parity(const Grid& grid, std::size_t flat) {
  auto idx = grid.axis_indices(flat);
  int k = 0;
  for (int a = 0; a < grid.dim(); ++a) k += grid.wavenumber(idx[a]);
  return (k % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

void to_spectrum(const Grid& grid, std::span<const Complex> values, std::span<Complex> coeffs) {
  fft::forward(grid.dim(), grid.points_per_axis(), values, coeffs);
  const double scale = std::pow(grid.dx() / std::sqrt(2.0 * std::numbers::pi), grid.dim());
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= scale * parity(grid, k);
}

void from_spectrum(const Grid& grid, std::span<const Complex> coeffs, std::span<Complex> values) {
  const double scale = std::pow(grid.dxi() / std::sqrt(2.0 * std::numbers::pi), grid.dim());
  for (std::size_t k = 0; k < coeffs.size(); ++k) values[k] = coeffs[k] * (scale * parity(grid, k));
  fft::backward(grid.dim(), grid.points_per_axis(), values, values);
}

SpectralField to_spectrum(const GridFunction& f) {
  std::vector<Complex> c(f.size());
  to_spectrum(f.grid(), f.values(), c);
  return SpectralField(f.grid(), std::move(c));
}

GridFunction from_spectrum(const SpectralField& f) {
  std::vector<Complex> v(f.size());
  from_spectrum(f.grid(), f.coeffs(), v);
  return GridFunction(f.grid(), std::move(v));
}

GridFunction apply_multiplier(const GridFunction& f, const std::function<Complex(const Point&)>& multiplier,
                              Nyquist nyquist) {
  const Grid& g = f.grid();
  std::vector<Complex> c(f.size());
  to_spectrum(g, f.values(), c);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (nyquist == Nyquist::zero && g.is_nyquist(k))
      c[k] = 0.0;
    else
      c[k] *= multiplier(g.wavevector(k));
  }
  std::vector<Complex> v(f.size());
  from_spectrum(g, c, v);
  return GridFunction(g, std::move(v));
}

double l2_norm(const GridFunction& f) {
  double s = 0.0;
  for (Complex z : f.values()) s += std::norm(z);
  return std::sqrt(s * f.grid().cell_volume());
}

double sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (Complex z : f.values()) m = std::max(m, std::abs(z));
  return m;
}

double hs_norm(const SpectralField& f, double s) {
  const Grid& g = f.grid();
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    Point xi = g.wavevector(k);
    acc += std::pow(1.0 + dot(xi, xi, g.dim()), s) * std::norm(f[k]);
  }
  return std::sqrt(acc * g.frequency_cell());
}

double hs_norm(const GridFunction& f, double s) { return hs_norm(to_spectrum(f), s); }

double weighted_l2(const GridFunction& f, double m) {
  const Grid& g = f.grid();
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    Point x = g.point(j);
    acc += std::norm(f[j]) * std::pow(1.0 + dot(x, x, g.dim()), -0.5 * m);
  }
  return std::sqrt(acc * g.cell_volume());
}

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid())) throw PreconditionError("grid functions live on different grids");
}

}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator*(Complex c, const GridFunction& a) {
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * a[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction pointwise(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return GridFunction(a.grid(), std::move(v));
}

void write_csv(std::ostream& out, const GridFunction& f) {
  const Grid& g = f.grid();
  out << (g.dim() == 1 ? "x,re,im\n" : "x1,x2,re,im\n");
  char buf[128];
  for (std::size_t j = 0; j < f.size(); ++j) {
    Point x = g.point(j);
    if (g.dim() == 1)
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[0], f[j].real(), f[j].imag());
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", x[0], x[1], f[j].real(), f[j].imag());
    out << buf;
  }
}

GridFunction read_csv(std::istream& in, const Grid& grid) {
  std::string line;
  if (!std::getline(in, line)) throw PreconditionError("csv: missing header");
  const std::string expected = grid.dim() == 1 ? "x,re,im" : "x1,x2,re,im";
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) throw PreconditionError("csv: header must be '" + expected + "'");
  std::vector<Complex> v;
  v.reserve(grid.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cols;
    while (std::getline(ss, cell, ',')) cols.push_back(std::stod(cell));
    if (cols.size() != static_cast<std::size_t>(grid.dim() + 2)) throw PreconditionError("csv: wrong column count");
    v.emplace_back(cols[grid.dim()], cols[grid.dim() + 1]);
  }
  return GridFunction(grid, std::move(v));
}

}  // namespace qslab
