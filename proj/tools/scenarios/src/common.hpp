#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "qslab/grid.hpp"
#include "qslab/scenarios.hpp"

namespace qslab::scenarios::detail {

/// Random data with spectrum ~ N(0,1) <xi>^{-decay} on |xi| <= band, scaled to unit L^2 norm.
inline GridFunction random_data(const Grid& g, std::mt19937_64& rng, double decay, double band) {
  std::normal_distribution<double> nd;
  std::vector<Complex> c(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point xi = g.wavevector(k);
    const double r2 = dot(xi, xi, g.dim());
    const double a = nd(rng), b = nd(rng);
    if (g.is_nyquist(k) || r2 > band * band) continue;
    c[k] = Complex(a, b) * std::pow(1.0 + r2, -0.5 * decay);
  }
  std::vector<Complex> v(g.size());
  from_spectrum(g, c, v);
  GridFunction f(g, std::move(v));
  return (1.0 / l2_norm(f)) * f;
}

/// Unit-norm Gaussian packet exp(-(x - x0)^2 / (2 width^2)) e^{i carrier x} (1D).
inline GridFunction packet(const Grid& g, double x0, double width, double carrier) {
  GridFunction f = GridFunction::sample(g, [=](const Point& x) {
    const double y = (x[0] - x0) / width;
    return std::exp(-0.5 * y * y) * std::polar(1.0, carrier * x[0]);
  });
  return (1.0 / l2_norm(f)) * f;
}

/// (max - min) / min of positive values.
inline double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / *lo;
}

inline double max_relative_deviation(const std::vector<double>& v, double ref) {
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - ref) / std::abs(ref));
  return d;
}

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Writes a CSV with the given header and numeric rows.
inline void write_table(OutputDir& out, const std::string& name, const std::string& header,
                        const std::vector<std::vector<double>>& rows) {
  out.write(name, [&](std::ostream& o) {
    o << header << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << fmt(row[i]);
      o << '\n';
    }
  });
}

inline Grid grid_1d(const Context& ctx, const char* L, const char* N) {
  try {
    return make_grid(1, ctx.num(L), ctx.integer(N));
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace qslab::scenarios::detail
