#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qslab/evolve.hpp"
#include "qslab/grid.hpp"
#include "qslab/hamflow.hpp"

namespace qslab {

/// True when 2L is an integer, so unit cubes anchored at -L tile the box.
bool tiles_unit_cubes(const Grid& grid);

struct CubeNorms {
  /// sup_mu ||f||_{L^2(Q_mu)}
  double sup = 0.0;
  /// sum_mu ||f||_{L^2(Q_mu)}
  double sum = 0.0;
};

/// Unit cubes Q_mu = -L + offset + mu + [0,1)^n (wrapping periodically).
CubeNorms cube_norms(const GridFunction& f, double offset = 0.0);
/// Space-time version over the record's saved states (trapezoid in t).
CubeNorms cube_norms(const EvolutionRecord& record);

/// (int_0^T ||J^gain u(t)||^2_{L^2(lambda_m dx)} dt)^{1/2}, trapezoid over the saved states.
double smoothing_functional(const EvolutionRecord& record, double m, double gain = 0.5);

/// max_x (int_0^T |D^order S(t) u0 (x)|^2 dt)^{1/2} / ||u0||, 1D, trapezoid with `steps` intervals.
double kato_half_derivative(const GridFunction& u0, double T, int steps, double order = 0.5);

/// (sum_mu sup_{Q_mu x [0,T]} |u|^2)^{1/2} over the saved states.
double maximal_norm(const EvolutionRecord& record);

using VectorField = std::function<std::array<Complex, kMaxDim>(const Point&)>;

/// sup_{0 <= t <= t_max} |Im int_0^t b1(x + s w) . w ds| with adaptive Gauss-Kronrod
/// on `pieces` subintervals.
double mizohata_integral(const VectorField& b1, int dim, const Point& x, const Point& omega, double t_max,
                         int pieces = 200);

struct IchinoseTrace {
  /// (t, Im int_0^t b1(X) . Xi ds)
  std::vector<std::pair<double, double>> values;
  EscapeStatus escape = EscapeStatus::inconclusive;
  double final_value() const { return values.empty() ? 0.0 : values.back().second; }
  /// Largest |I(t) - I(0.8 t0)| over the last 20% of the window.
  double tail_increment() const;
  /// Least-squares slope of I(t) over the second half of the window.
  double slope() const;
};

/// Im int_0^t0 b1(X(s)) . Xi(s) ds along the RK4 flow of h (Simpson per step pair).
IchinoseTrace ichinose_integral(const VectorField& b1, const Symbol& h, const PhasePoint& seed, double t0,
                                double ds = 1e-2, double mu = 0.0);

struct SymmetrizerReport {
  Eigen::Matrix2cd S;
  Eigen::Matrix2cd M;
  double lambda_plus = 0.0;
  double det_S = 0.0;
  /// ||S M - diag(l+, -l+) S||_F / (||S||_F ||M||_F)
  double residual = 0.0;
};

/// a real symmetric, b complex symmetric (n x n blocks of a 2x2 array), at frequency xi.
SymmetrizerReport symmetrizer(const std::array<std::array<double, kMaxDim>, kMaxDim>& a,
                              const std::array<std::array<Complex, kMaxDim>, kMaxDim>& b, const Point& xi, int dim,
                              double gamma);

/// ||second Picard iterate at t||_{H^s} / ||u0||^2_{H^s} for the resonant two-block data.
double mst_witness(double alpha, double n_freq, double s, double t, int nodes_per_block = 200);

/// ||J^s(fg) - f J^s g|| / (||g||_inf ||J^s f||).
double commutator_ratio(const GridFunction& f, const GridFunction& g, double s);

/// Fourier multiplier J^s = <xi>^s (Nyquist zeroed for non-integer s).
GridFunction bessel_potential(const GridFunction& f, double s);

}  // namespace qslab
