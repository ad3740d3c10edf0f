#include "qslab/cutoffs.hpp"

#include <cmath>

namespace qslab {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double g0 = std::exp(-1.0 / t);
  const double g1 = std::exp(-1.0 / (1.0 - t));
  return g0 / (g0 + g1);
}

Jet smooth_step(const Jet& t) {
  const double t0 = t.value().real();
  if (t0 <= 0.0) return Jet(t.layout(), 0.0);
  if (t0 >= 1.0) return Jet(t.layout(), 1.0);
  Jet g0 = exp(-reciprocal(t));
  Jet g1 = exp(-reciprocal(1.0 - t));
  return g0 / (g0 + g1);
}

double radial_step(double r, double lo, double hi) { return smooth_step((r - lo) / (hi - lo)); }

Jet squared_norm(const std::array<Jet, kMaxDim>& v, int dim) {
  Jet s = v[0] * v[0];
  for (int a = 1; a < dim; ++a) s += v[a] * v[a];
  return s;
}

Jet japanese(const std::array<Jet, kMaxDim>& v, int dim) { return sqrt(squared_norm(v, dim) + 1.0); }

Jet radial_step(const std::array<Jet, kMaxDim>& v, int dim, double lo, double hi) {
  double r2 = 0.0;
  for (int a = 0; a < dim; ++a) r2 += std::norm(v[a].value());
  const double r = std::sqrt(r2);
  if (r <= lo) return Jet(v[0].layout(), 0.0);
  if (r >= hi) return Jet(v[0].layout(), 1.0);
  return smooth_step((sqrt(squared_norm(v, dim)) - lo) / (hi - lo));
}

Jet square_step(const std::array<Jet, kMaxDim>& v, int dim, double lo, double hi) {
  return smooth_step((squared_norm(v, dim) - lo) / (hi - lo));
}

Jet theta(double R, const std::array<Jet, kMaxDim>& xi, int dim) { return radial_step(xi, dim, R, 2.0 * R); }

}  // namespace qslab
