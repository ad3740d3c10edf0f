#pragma once

#include <array>

#include "qslab/jet.hpp"
#include "qslab/types.hpp"

namespace qslab {

/// C-infinity step: 0 for t <= 0, 1 for t >= 1, g(t) / (g(t) + g(1 - t)) with g(t) = exp(-1/t).
double smooth_step(double t);
Jet smooth_step(const Jet& t);

/// S((r - lo) / (hi - lo)) with r = |v|. Constant outside (lo, hi), so r = 0 is harmless.
double radial_step(double r, double lo, double hi);
Jet radial_step(const std::array<Jet, kMaxDim>& v, int dim, double lo, double hi);

/// S((|v|^2 - lo) / (hi - lo)).
Jet square_step(const std::array<Jet, kMaxDim>& v, int dim, double lo, double hi);

/// Bump Phi(y): 1 for |y| <= 1, 0 for |y| >= 2.
inline double bump(double r) { return 1.0 - radial_step(r, 1.0, 2.0); }

/// theta_R(xi) = 1 - Phi(xi / R): 0 for |xi| <= R, 1 for |xi| >= 2R.
inline double theta(double R, double r) { return radial_step(r, R, 2.0 * R); }
Jet theta(double R, const std::array<Jet, kMaxDim>& xi, int dim);

Jet squared_norm(const std::array<Jet, kMaxDim>& v, int dim);
Jet japanese(const std::array<Jet, kMaxDim>& v, int dim);

}  // namespace qslab
