#pragma once

#include <iosfwd>
#include <vector>

#include "qslab/grid.hpp"
#include "qslab/linalg.hpp"
#include "qslab/symbol.hpp"

namespace qslab {

/// Dense matrix acting on grid values.
class DenseOperator {
 public:
  DenseOperator(Grid grid, linalg::Matrix matrix);

  static DenseOperator identity(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  const linalg::Matrix& matrix() const noexcept { return matrix_; }

  GridFunction apply(const GridFunction& f) const;
  DenseOperator adjoint() const;
  /// Largest singular value (power iteration).
  double norm(const linalg::PowerOptions& options = {}) const;

 private:
  Grid grid_;
  linalg::Matrix matrix_;
};

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);
DenseOperator operator-(const DenseOperator& a, const DenseOperator& b);
DenseOperator operator*(Complex c, const DenseOperator& a);

/// (Psi_a f)(x_j) = sum_k a(x_j, xi_k) f^(xi_k) e^{i x_j xi_k} dxi^n (2 pi)^{-n/2}.
DenseOperator quantize(const Symbol& a, const Grid& grid);

/// Fourier multiplier m(xi) as a dense matrix.
DenseOperator multiplier_operator(const Grid& grid, const std::function<Complex(const Point&)>& m);

/// Orthogonal projector onto lo <= |xi| <= hi.
DenseOperator band_projector(const Grid& grid, double lo, double hi);

/// ||P A P|| with P the band projector; the upper edge keeps products away
/// from the aliased wrap at the Nyquist frequency.
double band_norm(const DenseOperator& a, double lo, double hi, const linalg::PowerOptions& options = {});

/// K-term composition sum_{|alpha| < K} i^{-|alpha|} / alpha! d_xi^alpha a d_x^alpha b.
Symbol compose(const Symbol& a, const Symbol& b, int terms);
/// K-term adjoint sum_{|alpha| < K} i^{-|alpha|} / alpha! d_xi^alpha d_x^alpha conj(a).
Symbol adjoint_symbol(const Symbol& a, int terms);
/// sum_j (d_xi_j c d_x_j a - d_xi_j a d_x_j c), principal symbol of i[Psi_c, Psi_a].
Symbol principal_commutator(const Symbol& a, const Symbol& c);
/// H_h(phi) = sum_j (d_xi_j h d_x_j phi - d_x_j h d_xi_j phi).
Symbol poisson_bracket(const Symbol& h, const Symbol& phi);

/// Left parametrix b_0 + ... + b_{terms-1} of an elliptic symbol, with
/// b_0 = theta_{R/2} / a. Psi_b Psi_a - I is small on |xi| >= R.
Symbol parametrix(const Symbol& a, double R, int terms);

struct GardingResult {
  /// Smallest eigenvalue of Re<Psi_a f, f> relative to ||f||^2_{H^{(m-1)/2}}.
  double defect = 0.0;
  GridFunction witness;
};

/// Checks Re a >= 0 on |xi| >= far_band over the grid first.
GardingResult garding_defect(const Symbol& a, const Grid& grid, double far_band);

struct NeumannResult {
  DenseOperator inverse;
  double operator_norm = 0.0;
  /// ||(I - Psi_a) S_k - I|| for the partial sums S_k = I + Psi_a + ... + Psi_a^{k+1}, k = 0..K.
  std::vector<double> residuals;
  /// Symbol partial sums 1 + sigma(Psi_a) + ... + sigma(Psi_a^{k+1}).
  std::vector<Symbol> symbols;
};

/// Refuses when ||Psi_a|| >= 1/2.
NeumannResult neumann_invert(const Symbol& a, const Grid& grid, int terms, int composition_terms = 3);

/// exp(sign M theta_R(xi) p(x, xi)).
Symbol gauge_symbol(const Symbol& p, double M, double R, int sign);

/// Row-major CSV, one `re,im` pair per entry.
void write_csv(std::ostream& out, const DenseOperator& op);

}  // namespace qslab
