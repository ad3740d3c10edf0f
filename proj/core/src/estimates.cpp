#include "qslab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qslab {

namespace {

int cubes_per_axis(const Grid& g) { return static_cast<int>(std::lround(2.0 * g.half_width())); }

void require_tiling(const Grid& g, const char* who) {
  if (!tiles_unit_cubes(g)) throw PreconditionError(std::string(who) + ": 2L must be an integer");
}

/// Flat cube index of each grid point.
std::vector<int> cube_index(const Grid& g, double offset) {
  const int nc = cubes_per_axis(g);
  std::vector<int> idx(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Point x = g.point(j);
    int flat = 0;
    for (int a = 0; a < g.dim(); ++a) {
      const double u = x[a] + g.half_width() - offset;
      int c = static_cast<int>(std::floor(u + 1e-9));
      c = ((c % nc) + nc) % nc;
      flat = flat * nc + c;
    }
    idx[j] = flat;
  }
  return idx;
}

std::size_t cube_count(const Grid& g) {
  std::size_t n = 1;
  for (int a = 0; a < g.dim(); ++a) n *= static_cast<std::size_t>(cubes_per_axis(g));
  return n;
}

std::vector<double> cube_squares(const GridFunction& f, const std::vector<int>& idx, std::size_t count) {
  std::vector<double> acc(count, 0.0);
  for (std::size_t j = 0; j < f.size(); ++j) acc[idx[j]] += std::norm(f[j]);
  for (double& v : acc) v *= f.grid().cell_volume();
  return acc;
}

CubeNorms summarize(const std::vector<double>& squares) {
  CubeNorms c;
  for (double v : squares) {
    const double r = std::sqrt(v);
    c.sup = std::max(c.sup, r);
    c.sum += r;
  }
  return c;
}

template <class F>
double trapezoid(const std::vector<double>& t, F&& value) {
  double acc = 0.0;
  for (std::size_t n = 1; n < t.size(); ++n) acc += 0.5 * (t[n] - t[n - 1]) * (value(n - 1) + value(n));
  return acc;
}

void require_dense_states(const EvolutionRecord& r, const char* who) {
  if (r.state_times.size() < 2) throw PreconditionError(std::string(who) + ": need at least two saved states");
  const double T = r.state_times.back() - r.state_times.front();
  for (std::size_t n = 1; n < r.state_times.size(); ++n)
    if (r.state_times[n] - r.state_times[n - 1] > T / 200.0 * (1.0 + 1e-9))
      throw PreconditionError(std::string(who) + ": saved states must be spaced at most T/200");
}

}  // namespace

bool tiles_unit_cubes(const Grid& grid) {
  const double twice = 2.0 * grid.half_width();
  return std::abs(twice - std::round(twice)) < 1e-9 && std::round(twice) >= 1.0;
}

CubeNorms cube_norms(const GridFunction& f, double offset) {
  require_tiling(f.grid(), "cube_norms");
  return summarize(cube_squares(f, cube_index(f.grid(), offset), cube_count(f.grid())));
}

CubeNorms cube_norms(const EvolutionRecord& record) {
  require_tiling(record.grid, "cube_norms");
  if (record.states.empty()) throw PreconditionError("cube_norms: empty record");
  const auto idx = cube_index(record.grid, 0.0);
  const std::size_t nc = cube_count(record.grid);
  std::vector<std::vector<double>> per_state;
  per_state.reserve(record.states.size());
  for (const auto& u : record.states) per_state.push_back(cube_squares(u, idx, nc));
  std::vector<double> acc(nc, 0.0);
  for (std::size_t q = 0; q < nc; ++q)
    acc[q] = trapezoid(record.state_times, [&](std::size_t n) { return per_state[n][q]; });
  return summarize(acc);
}

GridFunction bessel_potential(const GridFunction& f, double s) {
  const bool integer = std::abs(s - std::round(s)) < 1e-12;
  const int dim = f.grid().dim();
  return apply_multiplier(f, [=](const Point& xi) { return Complex(std::pow(1.0 + dot(xi, xi, dim), 0.5 * s)); },
                          integer ? Nyquist::keep : Nyquist::zero);
}

double smoothing_functional(const EvolutionRecord& record, double m, double gain) {
  require_dense_states(record, "smoothing_functional");
  std::vector<double> sq;
  sq.reserve(record.states.size());
  for (const auto& u : record.states) {
    const double w = weighted_l2(bessel_potential(u, gain), m);
    sq.push_back(w * w);
  }
  return std::sqrt(trapezoid(record.state_times, [&](std::size_t n) { return sq[n]; }));
}

double kato_half_derivative(const GridFunction& u0, double T, int steps, double order) {
  const Grid& g = u0.grid();
  if (g.dim() != 1) throw PreconditionError("kato_half_derivative: one dimension only");
  if (steps < 1 || !(T > 0.0)) throw PreconditionError("kato_half_derivative: T and steps must be positive");
  const double norm = l2_norm(u0);
  if (!(norm > 0.0)) throw PreconditionError("kato_half_derivative: zero data");
  std::vector<Complex> c0(g.size()), c(g.size()), v(g.size());
  to_spectrum(g, u0.data(), c0);
  std::vector<double> weight(g.size()), xi2(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double xi = g.wavevector(k)[0];
    weight[k] = g.is_nyquist(k) ? 0.0 : std::pow(std::abs(xi), order);
    xi2[k] = xi * xi;
  }
  std::vector<double> acc(g.size(), 0.0);
  const double dt = T / steps;
  for (int n = 0; n <= steps; ++n) {
    const double t = n * dt;
    for (std::size_t k = 0; k < g.size(); ++k) c[k] = c0[k] * weight[k] * std::polar(1.0, -t * xi2[k]);
    from_spectrum(g, c, v);
    const double w = (n == 0 || n == steps) ? 0.5 * dt : dt;
    for (std::size_t j = 0; j < g.size(); ++j) acc[j] += w * std::norm(v[j]);
  }
  return std::sqrt(*std::max_element(acc.begin(), acc.end())) / norm;
}

double maximal_norm(const EvolutionRecord& record) {
  require_tiling(record.grid, "maximal_norm");
  if (record.states.empty()) throw PreconditionError("maximal_norm: empty record");
  const auto idx = cube_index(record.grid, 0.0);
  std::vector<double> sup(cube_count(record.grid), 0.0);
  for (const auto& u : record.states)
    for (std::size_t j = 0; j < u.size(); ++j) sup[idx[j]] = std::max(sup[idx[j]], std::norm(u[j]));
  double acc = 0.0;
  for (double v : sup) acc += v;
  return std::sqrt(acc);
}

double mizohata_integral(const VectorField& b1, int dim, const Point& x, const Point& omega, double t_max, int pieces) {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("mizohata_integral: dimension out of range");
  if (!(t_max > 0.0) || pieces < 1) throw PreconditionError("mizohata_integral: t_max and pieces must be positive");
  auto integrand = [&](double s) {
    Point y{};
    for (int a = 0; a < dim; ++a) y[a] = x[a] + s * omega[a];
    const auto b = b1(y);
    Complex acc = 0.0;
    for (int a = 0; a < dim; ++a) acc += b[a] * omega[a];
    return acc.imag();
  };
  using boost::math::quadrature::gauss_kronrod;
  double partial = 0.0, worst = 0.0;
  const double h = t_max / pieces;
  for (int p = 0; p < pieces; ++p) {
    partial += gauss_kronrod<double, 15>::integrate(integrand, p * h, (p + 1) * h, 10, 1e-12);
    worst = std::max(worst, std::abs(partial));
  }
  return worst;
}

double IchinoseTrace::tail_increment() const {
  if (values.size() < 2) return 0.0;
  const double t0 = values.back().first;
  auto it = std::lower_bound(values.begin(), values.end(), 0.8 * t0,
                             [](const auto& v, double t) { return v.first < t; });
  const double ref = it->second;
  double worst = 0.0;
  for (; it != values.end(); ++it) worst = std::max(worst, std::abs(it->second - ref));
  return worst;
}

double IchinoseTrace::slope() const {
  if (values.size() < 4) return 0.0;
  const std::size_t start = values.size() / 2;
  double st = 0, sv = 0, stt = 0, stv = 0;
  const double n = static_cast<double>(values.size() - start);
  for (std::size_t i = start; i < values.size(); ++i) {
    st += values[i].first;
    sv += values[i].second;
    stt += values[i].first * values[i].first;
    stv += values[i].first * values[i].second;
  }
  const double den = n * stt - st * st;
  return den == 0.0 ? 0.0 : (n * stv - st * sv) / den;
}

IchinoseTrace ichinose_integral(const VectorField& b1, const Symbol& h, const PhasePoint& seed, double t0, double ds,
                                double mu) {
  if (!(t0 > 0.0) || !(ds > 0.0)) throw PreconditionError("ichinose_integral: t0 and ds must be positive");
  const int dim = h.dim();
  const PhaseTrajectory traj = integrate_flow(h, seed, t0, ds);
  auto g = [&](const PhaseSample& z) {
    const auto b = b1(z.x);
    Complex acc = 0.0;
    for (int a = 0; a < dim; ++a) acc += b[a] * z.xi[a];
    return acc.imag();
  };
  IchinoseTrace out;
  const auto& S = traj.samples;
  if (S.empty()) return out;
  out.values.emplace_back(S[0].s, 0.0);
  double even = 0.0;
  for (std::size_t i = 1; i < S.size(); ++i) {
    if (i % 2 == 1) {
      out.values.emplace_back(S[i].s, even + 0.5 * (S[i].s - S[i - 1].s) * (g(S[i - 1]) + g(S[i])));
    } else {
      even += (S[i].s - S[i - 2].s) / 6.0 * (g(S[i - 2]) + 4.0 * g(S[i - 1]) + g(S[i]));
      out.values.emplace_back(S[i].s, even);
    }
  }
  if (mu > 0.0) {
    EscapeOptions opt;
    opt.s_cap = t0;
    opt.ds = ds;
    out.escape = escape_time(h, seed, mu, opt).status;
  }
  return out;
}

SymmetrizerReport symmetrizer(const std::array<std::array<double, kMaxDim>, kMaxDim>& a,
                              const std::array<std::array<Complex, kMaxDim>, kMaxDim>& b, const Point& xi, int dim,
                              double gamma) {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("symmetrizer: dimension out of range");
  if (!(gamma > 0.0)) throw PreconditionError("symmetrizer: gamma must be positive");
  const double r2 = dot(xi, xi, dim);
  if (!(r2 > 0.0)) throw PreconditionError("symmetrizer: xi must be nonzero");
  double A = 0.0;
  Complex B = 0.0;
  for (int l = 0; l < dim; ++l)
    for (int k = 0; k < dim; ++k) {
      A += a[l][k] * xi[l] * xi[k];
      B += b[l][k] * xi[l] * xi[k];
    }
  if (!(A - std::abs(B) >= gamma * r2 * (1.0 - 1e-12)))
    throw PreconditionError("symmetrizer: ellipticity margin below gamma at this frequency");
  SymmetrizerReport r;
  const double lambda = std::sqrt(A * A - std::norm(B));
  r.lambda_plus = lambda;
  r.M << -A, -B, std::conj(B), A;
  const double c = 1.0 / (gamma * r2);
  r.S << c * std::conj(B), c * (lambda + A), -c * (lambda + A), -c * B;
  r.det_S = r.S.determinant().real();
  Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
  D(0, 0) = lambda;
  D(1, 1) = -lambda;
  r.residual = (r.S * r.M - D * r.S).norm() / (r.S.norm() * r.M.norm());
  return r;
}

double mst_witness(double alpha, double n_freq, double s, double t, int nodes_per_block) {
  if (!(alpha > 0.0) || !(t >= 0.0)) throw PreconditionError("mst_witness: need alpha > 0 and t >= 0");
  if (!(n_freq > 2.0 * alpha)) throw PreconditionError("mst_witness: blocks must be separated");
  if (nodes_per_block < 20) throw PreconditionError("mst_witness: need at least 20 nodes per block");
  if (t == 0.0) return 0.0;
  struct Block {
    double lo, hi, amp;
  };
  const std::array<Block, 2> blocks{Block{0.5 * alpha, alpha, 1.0 / std::sqrt(alpha)},
                                    Block{n_freq, n_freq + alpha, std::pow(n_freq, -s) / std::sqrt(alpha)}};
  using Gauss = boost::math::quadrature::gauss<double, 20>;
  constexpr int kInnerPanels = 4;
  // int_0^t exp(-2 i tau xi1 (xi - xi1)) dtau
  auto kernel = [t](double p) {
    const double w = 2.0 * p;
    if (std::abs(w * t) < 1e-8) return Complex(t, -0.5 * w * t * t);
    return (std::polar(1.0, -w * t) - 1.0) / Complex(0.0, -w);
  };
  auto inner = [&](double xi) {
    Complex acc = 0.0;
    for (const auto& p : blocks)
      for (const auto& q : blocks) {
        const double lo = std::max(p.lo, xi - q.hi);
        const double hi = std::min(p.hi, xi - q.lo);
        if (!(hi > lo)) continue;
        const double h = (hi - lo) / kInnerPanels;
        for (int k = 0; k < kInnerPanels; ++k) {
          const double a = lo + k * h;
          const double re = Gauss::integrate([&](double x1) { return kernel(x1 * (xi - x1)).real(); }, a, a + h);
          const double im = Gauss::integrate([&](double x1) { return kernel(x1 * (xi - x1)).imag(); }, a, a + h);
          acc += p.amp * q.amp * Complex(re, im);
        }
      }
    return std::pow(1.0 + xi * xi, 0.5 * s) * xi * acc;
  };
  std::vector<double> breaks;
  for (const auto& p : blocks)
    for (const auto& q : blocks)
      for (double u : {p.lo, p.hi})
        for (double v : {q.lo, q.hi}) breaks.push_back(u + v);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double u, double v) { return std::abs(u - v) < 1e-14 * (1 + std::abs(u)); }),
               breaks.end());
  const int panels = std::max(1, nodes_per_block / 20);
  double outer = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double lo = breaks[i - 1], hi = breaks[i];
    if (hi - lo > 0.5 * n_freq) continue;  // gap between output clusters carries no mass
    const double h = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k)
      outer += Gauss::integrate([&](double xi) { return std::norm(inner(xi)); }, lo + k * h, lo + (k + 1) * h);
  }
  double u0 = 0.0;
  for (const auto& p : blocks)
    u0 += p.amp * p.amp * Gauss::integrate([&](double xi) { return std::pow(1.0 + xi * xi, s); }, p.lo, p.hi);
  return std::sqrt(outer) / u0;
}

double commutator_ratio(const GridFunction& f, const GridFunction& g, double s) {
  const GridFunction lhs = bessel_potential(pointwise(f, g), s) - pointwise(f, bessel_potential(g, s));
  const double den = sup_norm(g) * l2_norm(bessel_potential(f, s));
  if (!(den > 0.0)) throw PreconditionError("commutator_ratio: degenerate denominator");
  return l2_norm(lhs) / den;
}

}  // namespace qslab
