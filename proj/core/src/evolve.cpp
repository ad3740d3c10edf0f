#include "qslab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "qslab/cutoffs.hpp"
#include "qslab/estimates.hpp"

namespace qslab {

namespace {

double xi_square(const Grid& g, std::size_t k) {
  const Point xi = g.wavevector(k);
  return dot(xi, xi, g.dim());
}

std::vector<Complex> spectrum(const Grid& g, std::span<const Complex> v) {
  std::vector<Complex> c(g.size());
  to_spectrum(g, v, c);
  return c;
}

std::vector<Complex> values(const Grid& g, std::span<const Complex> c) {
  std::vector<Complex> v(g.size());
  from_spectrum(g, c, v);
  return v;
}

double spectral_l2(const Grid& g, std::span<const Complex> c) {
  double s = 0.0;
  for (Complex z : c) s += std::norm(z);
  return std::sqrt(s * g.frequency_cell());
}

double spectral_hs(const Grid& g, std::span<const Complex> c, double s) {
  double acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) acc += std::pow(1.0 + xi_square(g, k), s) * std::norm(c[k]);
  return std::sqrt(acc * g.frequency_cell());
}

bool all_finite(std::span<const Complex> v) {
  return std::all_of(v.begin(), v.end(), [](Complex z) { return is_finite(z); });
}

}  // namespace

GridFunction free_evolve(const GridFunction& u0, double t) {
  return apply_multiplier(u0, [t, dim = u0.grid().dim()](const Point& xi) { return std::polar(1.0, -t * dot(xi, xi, dim)); });
}

GridFunction viscous_evolve(const GridFunction& u0, double eps, double t) {
  if (eps < 0.0 || t < 0.0) throw PreconditionError("viscous_evolve: eps and t must be nonnegative");
  return apply_multiplier(u0, [=, dim = u0.grid().dim()](const Point& xi) {
    const double r2 = dot(xi, xi, dim);
    return Complex(std::exp(-eps * t * r2 * r2));
  });
}

GridFunction bona_smith(const GridFunction& u0, double delta) {
  if (!(delta > 0.0)) throw PreconditionError("bona_smith: delta must be positive");
  return apply_multiplier(u0, [=, dim = u0.grid().dim()](const Point& xi) {
    return Complex(bump(delta * euclidean_norm(xi, dim)));
  });
}

GridFunction derivative(const GridFunction& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) throw PreconditionError("derivative: axis out of range");
  return apply_multiplier(f, [axis](const Point& xi) { return Complex(0.0, xi[axis]); }, Nyquist::zero);
}

GridFunction laplacian(const GridFunction& f) {
  return apply_multiplier(f, [dim = f.grid().dim()](const Point& xi) { return Complex(-dot(xi, xi, dim)); });
}

Complex Polynomial::operator()(Complex u) const {
  Complex s = 0.0;
  const Complex ub = std::conj(u);
  for (const auto& t : terms) {
    Complex m = t.c;
    for (int i = 0; i < t.p; ++i) m *= u;
    for (int i = 0; i < t.q; ++i) m *= ub;
    s += m;
  }
  return s;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.p + t.q);
  return d;
}

Polynomial Polynomial::cubic() { return Polynomial{{{1.0, 2, 1}}}; }

NormRow norm_row(const GridFunction& u, double t, double s) {
  NormRow r;
  r.t = t;
  r.l2 = l2_norm(u);
  r.hs = hs_norm(u, s);
  r.weighted_l2_m2 = weighted_l2(u, 2.0);
  if (tiles_unit_cubes(u.grid())) r.cube_sup = cube_norms(u).sup;
  return r;
}

EvolutionRecord free_record(const GridFunction& u0, double T, int steps, double s, int save_every) {
  if (steps < 1 || save_every < 1) throw PreconditionError("free_record: steps and save_every must be positive");
  const Grid& g = u0.grid();
  EvolutionRecord rec{.grid = g, .s = s};
  const auto c0 = spectrum(g, u0.values());
  std::vector<Complex> c(g.size());
  for (int n = 0; n <= steps; ++n) {
    const double t = T * n / steps;
    for (std::size_t k = 0; k < g.size(); ++k) c[k] = c0[k] * std::polar(1.0, -t * xi_square(g, k));
    GridFunction u(g, values(g, c));
    rec.times.push_back(t);
    rec.ledger.push_back(norm_row(u, t, s));
    if (n % save_every == 0 || n == steps) {
      rec.state_times.push_back(t);
      rec.states.push_back(std::move(u));
    }
  }
  rec.metadata = {{"solver", "free"}, {"T", T}, {"steps", steps}};
  return rec;
}

namespace {

using Nonlinearity = std::function<std::vector<Complex>(double t, const std::vector<Complex>& w)>;

struct WindowResult {
  std::vector<std::vector<Complex>> states;  // spectral, n + 1 entries
  std::vector<double> differences;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  double diverged_at = 0.0;
  double residual = 0.0;
  double max_factor = 0.0;
};

class PicardSolver {
 public:
  PicardSolver(const Grid& grid, Nonlinearity F, const PicardOptions& opt,
               std::function<bool(double, const std::vector<Complex>&)> admissible)
      : g_(grid), F_(std::move(F)), opt_(opt), admissible_(std::move(admissible)) {
    e_dt_.resize(g_.size());
    phi_.resize(g_.size());
    for (std::size_t k = 0; k < g_.size(); ++k) {
      const double q = opt_.eps * xi_square(g_, k) * xi_square(g_, k);
      e_dt_[k] = std::exp(-q * opt_.dt);
      phi_[k] = q == 0.0 ? opt_.dt : -std::expm1(-q * opt_.dt) / q;
    }
  }

  WindowResult solve(const std::vector<Complex>& start, double t0, int steps, std::uint64_t salt) const {
    WindowResult r;
    std::vector<std::vector<Complex>> w(steps + 1, std::vector<Complex>(g_.size()));
    w[0] = start;
    for (int n = 1; n <= steps; ++n)
      for (std::size_t k = 0; k < g_.size(); ++k) w[n][k] = w[n - 1][k] * e_dt_[k];
    if (opt_.perturbation > 0.0) {
      std::mt19937_64 rng(opt_.seed ^ (salt * 0x9e3779b97f4a7c15ULL));
      std::normal_distribution<double> nd;
      for (int n = 1; n <= steps; ++n)
        for (std::size_t k = 0; k < g_.size(); ++k)
          if (start[k] != Complex{}) w[n][k] += opt_.perturbation * std::abs(start[k]) * Complex(nd(rng), nd(rng));
    }
    double prev = 0.0;
    for (int it = 1; it <= opt_.max_iterations; ++it) {
      std::vector<std::vector<Complex>> fh(steps + 1);
      for (int n = 0; n <= steps; ++n) {
        const double t = t0 + n * opt_.dt;
        std::vector<Complex> v = values(g_, w[n]);
        if (!all_finite(v) || spectral_hs(g_, w[n], opt_.s) > kDivergence || !admissible_(t, v)) {
          r.diverged = true;
          r.diverged_at = t;
          r.iterations = it;
          r.states = std::move(w);
          return r;
        }
        fh[n] = spectrum(g_, F_(t, v));
      }
      std::vector<std::vector<Complex>> next(steps + 1, std::vector<Complex>(g_.size()));
      next[0] = start;
      for (int n = 0; n < steps; ++n)
        for (std::size_t k = 0; k < g_.size(); ++k)
          next[n + 1][k] = e_dt_[k] * next[n][k] + phi_[k] * 0.5 * (fh[n][k] + fh[n + 1][k]);
      double d = 0.0;
      std::vector<Complex> diff(g_.size());
      for (int n = 0; n <= steps; ++n) {
        for (std::size_t k = 0; k < g_.size(); ++k) diff[k] = next[n][k] - w[n][k];
        d = std::max(d, spectral_l2(g_, diff));
      }
      if (!std::isfinite(d)) {
        r.diverged = true;
        r.diverged_at = t0;
        r.iterations = it;
        r.states = std::move(w);
        return r;
      }
      r.differences.push_back(d);
      if (it >= 3 && prev > 0.0) r.max_factor = std::max(r.max_factor, d / prev);
      prev = d;
      w = std::move(next);
      r.iterations = it;
      if (d < opt_.tol) {
        r.converged = true;
        r.residual = d;
        break;
      }
    }
    r.states = std::move(w);
    return r;
  }

  static constexpr double kDivergence = 1e6;

 private:
  const Grid& g_;
  Nonlinearity F_;
  PicardOptions opt_;
  std::function<bool(double, const std::vector<Complex>&)> admissible_;
  std::vector<double> e_dt_;
  std::vector<double> phi_;
};

EvolutionRecord run_picard(const GridFunction& u0, const Nonlinearity& F, const PicardOptions& opt,
                           const std::function<bool(double, const std::vector<Complex>&)>& admissible,
                           const std::string& solver) {
  if (!(opt.eps > 0.0)) throw PreconditionError(solver + ": eps must be positive");
  if (!(opt.dt > 0.0) || !(opt.T > 0.0)) throw PreconditionError(solver + ": dt and T must be positive");
  if (opt.save_every < 1) throw PreconditionError(solver + ": save_every must be positive");
  const Grid& g = u0.grid();
  PicardSolver solver_impl(g, F, opt, admissible);
  EvolutionRecord rec{.grid = g, .s = opt.s};
  const int total = static_cast<int>(std::llround(opt.T / opt.dt));
  if (total < 1) throw PreconditionError(solver + ": T shorter than dt");
  int window = std::max(1, static_cast<int>(std::llround(opt.window_factor * opt.eps / opt.dt)));
  std::vector<Complex> start = spectrum(g, u0.values());
  auto push = [&](int n, const std::vector<Complex>& c) {
    const double t = n * opt.dt;
    GridFunction u(g, values(g, c), false);
    rec.times.push_back(t);
    rec.ledger.push_back(norm_row(u, t, opt.s));
    if (n % opt.save_every == 0 || n == total) {
      rec.state_times.push_back(t);
      rec.states.push_back(std::move(u));
    }
  };
  push(0, start);
  nlohmann::json windows = nlohmann::json::array();
  double residual = 0.0, worst_factor = 0.0;
  int n = 0, halvings = 0;
  std::uint64_t salt = 0;
  while (n < total) {
    const int steps = std::min(window, total - n);
    WindowResult wr = solver_impl.solve(start, n * opt.dt, steps, ++salt);
    if (wr.diverged || !wr.converged) {
      if (window > 1 && !wr.diverged) {
        window /= 2;
        ++halvings;
        continue;
      }
      rec.status = RunStatus::diverged;
      rec.diverged_at = wr.diverged ? wr.diverged_at : n * opt.dt;
      rec.message = wr.diverged ? "divergence (non-finite, H^s growth or ellipticity loss)" : "iteration cap";
      break;
    }
    if (wr.max_factor > opt.contraction_target && window > 1) {
      window /= 2;
      ++halvings;
      continue;
    }
    windows.push_back({{"t_start", n * opt.dt},
                       {"steps", steps},
                       {"iterations", wr.iterations},
                       {"max_factor", wr.max_factor},
                       {"differences", wr.differences}});
    residual = std::max(residual, wr.residual);
    worst_factor = std::max(worst_factor, wr.max_factor);
    for (int j = 1; j <= steps; ++j) push(n + j, wr.states[j]);
    start = wr.states[steps];
    n += steps;
  }
  rec.metadata = {{"solver", solver},
                  {"eps", opt.eps},
                  {"dt", opt.dt},
                  {"T", opt.T},
                  {"tol", opt.tol},
                  {"window", window * opt.dt},
                  {"window_halvings", halvings},
                  {"max_contraction_factor", worst_factor},
                  {"residual", residual},
                  {"windows", windows}};
  return rec;
}

}  // namespace

EvolutionRecord picard_semilinear(const GridFunction& u0, const Polynomial& G, const PicardOptions& options) {
  for (const auto& t : G.terms)
    if (t.p + t.q == 0 && t.c != Complex{}) throw PreconditionError("picard_semilinear: G(0,0) must vanish");
  const Grid g = u0.grid();
  Nonlinearity F = [g, G](double, const std::vector<Complex>& w) {
    std::vector<Complex> c = spectrum(g, w);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= Complex(0.0, -xi_square(g, k));
    std::vector<Complex> out = values(g, c);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += G(w[j]);
    return out;
  };
  auto ok = [](double, const std::vector<Complex>&) { return true; };
  EvolutionRecord rec = run_picard(u0, F, options, ok, "picard-semilinear");
  rec.metadata["G_degree"] = G.degree();
  return rec;
}

CoefficientSet CoefficientSet::laplacian() {
  CoefficientSet c;
  c.a = [](const CoefficientArgs&, int l, int k) { return l == k ? 1.0 : 0.0; };
  return c;
}

CoefficientSet CoefficientSet::quasilinear_1d(double kappa) {
  CoefficientSet c;
  c.a = [kappa](const CoefficientArgs& z, int, int) { return 1.0 + kappa * std::norm(z.u); };
  c.depends_on_u = true;
  return c;
}

namespace {

struct Derivatives {
  std::array<std::vector<Complex>, kMaxDim> grad;
  std::array<std::array<std::vector<Complex>, kMaxDim>, kMaxDim> hess;
};

Derivatives spectral_derivatives(const Grid& g, const std::vector<Complex>& w) {
  Derivatives d;
  const int dim = g.dim();
  const std::vector<Complex> c = spectrum(g, w);
  std::vector<Complex> tmp(g.size());
  for (int l = 0; l < dim; ++l) {
    for (std::size_t k = 0; k < g.size(); ++k)
      tmp[k] = g.is_nyquist(k) ? Complex{} : c[k] * Complex(0.0, g.wavevector(k)[l]);
    d.grad[l] = values(g, tmp);
    for (int m = 0; m < dim; ++m) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        const Point xi = g.wavevector(k);
        tmp[k] = (l != m && g.is_nyquist(k)) ? Complex{} : -c[k] * xi[l] * xi[m];
      }
      d.hess[l][m] = values(g, tmp);
    }
  }
  return d;
}

CoefficientArgs args_at(const Grid& g, std::size_t j, double t, const std::vector<Complex>& w, const Derivatives& d) {
  CoefficientArgs a;
  a.x = g.point(j);
  a.t = t;
  a.u = w[j];
  for (int l = 0; l < g.dim(); ++l) a.grad_u[l] = d.grad[l][j];
  return a;
}

double margin_at(const CoefficientSet& c, const CoefficientArgs& z, int dim) {
  // min over unit xi of <a xi, xi> - |<b xi, xi>|
  const int dirs = dim == 1 ? 1 : 32;
  double worst = 1e300;
  for (int i = 0; i < dirs; ++i) {
    const double ang = dim == 1 ? 0.0 : 3.141592653589793 * i / dirs;
    const Point xi{std::cos(ang), std::sin(ang)};
    double axx = 0.0;
    Complex bxx = 0.0;
    for (int l = 0; l < dim; ++l)
      for (int k = 0; k < dim; ++k) {
        axx += c.a(z, l, k) * xi[l] * xi[k];
        if (c.b) bxx += c.b(z, l, k) * xi[l] * xi[k];
      }
    worst = std::min(worst, axx - std::abs(bxx));
  }
  return worst;
}

}  // namespace

double ellipticity_margin(const CoefficientSet& c, const GridFunction& u, double t) {
  if (!c.a) throw PreconditionError("ellipticity_margin: coefficient a is required");
  const Grid& g = u.grid();
  Derivatives d = spectral_derivatives(g, u.data());
  double worst = 1e300;
  for (std::size_t j = 0; j < g.size(); ++j) worst = std::min(worst, margin_at(c, args_at(g, j, t, u.data(), d), g.dim()));
  return worst;
}

namespace {

std::vector<Complex> qlcp_values(const CoefficientSet& c, const Grid& g, const std::vector<Complex>& w, double t) {
  const int dim = g.dim();
  Derivatives d = spectral_derivatives(g, w);
  std::vector<Complex> out(g.size());
  const Complex I(0.0, 1.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const CoefficientArgs z = args_at(g, j, t, w, d);
    Complex s = 0.0;
    for (int l = 0; l < dim; ++l) {
      for (int k = 0; k < dim; ++k) {
        s += I * c.a(z, l, k) * d.hess[l][k][j];
        if (c.b) s += I * c.b(z, l, k) * std::conj(d.hess[l][k][j]);
      }
      if (c.b1) s += c.b1(z, l) * d.grad[l][j];
      if (c.b2) s += c.b2(z, l) * std::conj(d.grad[l][j]);
    }
    if (c.c1) s += c.c1(z) * w[j];
    if (c.c2) s += c.c2(z) * std::conj(w[j]);
    if (c.f) s += c.f(z);
    out[j] = s;
  }
  return out;
}

}  // namespace

GridFunction apply_qlcp(const CoefficientSet& c, const GridFunction& w, double t) {
  if (!c.a) throw PreconditionError("apply_qlcp: coefficient a is required");
  return GridFunction(w.grid(), qlcp_values(c, w.grid(), w.data(), t));
}

EvolutionRecord qlcp_solve(const GridFunction& u0, const CoefficientSet& coeffs, const PicardOptions& options) {
  if (!coeffs.a) throw PreconditionError("qlcp_solve: coefficient a is required");
  const double margin0 = ellipticity_margin(coeffs, u0, 0.0);
  if (!(margin0 > 0.0)) throw PreconditionError("qlcp_solve: ellipticity fails on the initial data");
  const Grid g = u0.grid();
  Nonlinearity F = [g, coeffs](double t, const std::vector<Complex>& w) { return qlcp_values(coeffs, g, w, t); };
  auto admissible = [g, coeffs](double t, const std::vector<Complex>& w) {
    if (!coeffs.depends_on_u && !coeffs.depends_on_gradient) return true;
    return ellipticity_margin(coeffs, GridFunction(g, w, true), t) > 0.0;
  };
  EvolutionRecord rec = run_picard(u0, F, options, admissible, "qlcp");
  rec.metadata["ellipticity_margin_t0"] = margin0;
  return rec;
}

EvolutionRecord drift_evolve(const GridFunction& u0, const std::function<Complex(const Point&, int)>& b1, double T,
                             int steps, int save_every) {
  if (steps < 1 || save_every < 1) throw PreconditionError("drift_evolve: steps and save_every must be positive");
  const Grid g = u0.grid();
  const int dim = g.dim();
  const double h = T / steps;
  std::vector<std::array<Complex, kMaxDim>> field(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    for (int a = 0; a < dim; ++a) field[j][a] = b1(g.point(j), a);
  std::vector<Complex> half(g.size()), full(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    half[k] = std::polar(1.0, -0.5 * h * xi_square(g, k));
    full[k] = half[k] * half[k];
  }
  // B(c) = b1 . grad u, in and out of spectral space
  auto B = [&](const std::vector<Complex>& c) {
    std::vector<Complex> acc(g.size());
    std::vector<Complex> tmp(g.size());
    for (int a = 0; a < dim; ++a) {
      for (std::size_t k = 0; k < g.size(); ++k)
        tmp[k] = g.is_nyquist(k) ? Complex{} : c[k] * Complex(0.0, g.wavevector(k)[a]);
      std::vector<Complex> d = values(g, tmp);
      for (std::size_t j = 0; j < g.size(); ++j) acc[j] += field[j][a] * d[j];
    }
    return spectrum(g, acc);
  };
  auto mul = [](const std::vector<Complex>& m, const std::vector<Complex>& c) {
    std::vector<Complex> r(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) r[k] = m[k] * c[k];
    return r;
  };
  auto axpy = [](const std::vector<Complex>& x, double a, const std::vector<Complex>& y) {
    std::vector<Complex> r(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) r[k] = x[k] + a * y[k];
    return r;
  };
  EvolutionRecord rec{.grid = g, .s = 0.0};
  std::vector<Complex> c = spectrum(g, u0.values());
  auto push = [&](int n) {
    const double t = n * h;
    GridFunction u(g, values(g, c), true);
    rec.times.push_back(t);
    rec.ledger.push_back(norm_row(u, t, 0.0));
    if (n % save_every == 0 || n == steps) {
      rec.state_times.push_back(t);
      rec.states.push_back(std::move(u));
    }
  };
  push(0);
  for (int n = 1; n <= steps; ++n) {
    const auto k1 = B(c);
    const auto eh_c = mul(half, c);
    const auto k2 = B(axpy(eh_c, 0.5 * h, mul(half, k1)));
    const auto k3 = B(axpy(eh_c, 0.5 * h, k2));
    const auto k4 = B(axpy(mul(full, c), h, mul(half, k3)));
    std::vector<Complex> next = mul(full, c);
    for (std::size_t k = 0; k < c.size(); ++k)
      next[k] += h / 6.0 * (full[k] * k1[k] + 2.0 * half[k] * (k2[k] + k3[k]) + k4[k]);
    c = std::move(next);
    if (!all_finite(c) || spectral_l2(g, c) > PicardSolver::kDivergence) {
      rec.status = RunStatus::diverged;
      rec.diverged_at = n * h;
      rec.message = "divergence (non-finite or L^2 growth)";
      break;
    }
    push(n);
  }
  rec.metadata = {{"solver", "drift-if-rk4"}, {"T", T}, {"steps", steps}};
  return rec;
}

double sup_difference(const EvolutionRecord& a, const EvolutionRecord& b) {
  if (!(a.grid == b.grid)) throw PreconditionError("sup_difference: grid mismatch");
  double worst = 0.0;
  std::size_t j = 0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < a.state_times.size(); ++i) {
    while (j < b.state_times.size() && b.state_times[j] < a.state_times[i] - 1e-12) ++j;
    if (j == b.state_times.size()) break;
    if (std::abs(b.state_times[j] - a.state_times[i]) > 1e-12) continue;
    worst = std::max(worst, l2_norm(a.states[i] - b.states[j]));
    ++matched;
  }
  if (matched == 0) throw PreconditionError("sup_difference: no common times");
  return worst;
}

double energy_time(double C, double alpha, double u0_norm) {
  if (!(C > 0.0)) throw PreconditionError("energy_time: C must be positive");
  return std::min(1.0 / (2.0 * C), 1.0 / (C * std::pow(4.0, alpha) * std::pow(u0_norm, 2.0 * alpha - 2.0)));
}

double fit_energy_constant(const EvolutionRecord& record, const Polynomial& G) {
  double c = 0.0;
  for (const auto& u : record.states) {
    std::vector<Complex> gv(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) gv[j] = G(u[j]);
    const double gn = hs_norm(GridFunction(u.grid(), gv), record.s);
    const double un = hs_norm(u, record.s);
    if (un > 0.0) c = std::max(c, gn / (un * un * un + un));
  }
  return 2.0 * c;
}

EnergyBudget energy_budget(const EvolutionRecord& record, const Polynomial& G, double C) {
  if (record.ledger.empty()) throw PreconditionError("energy_budget: empty record");
  EnergyBudget e;
  e.C = C;
  e.alpha = 0.5 * (G.degree() + 1);
  const double u0 = record.ledger.front().hs;
  e.T0 = energy_time(C, e.alpha, u0);
  e.partial = record.times.back() < e.T0 - 1e-12 || record.status != RunStatus::ok;
  double f1 = 0.0;
  e.holds = true;
  for (const auto& row : record.ledger) {
    if (row.t > e.T0 + 1e-12) break;
    f1 = std::max(f1, row.hs * row.hs);
    e.f1.emplace_back(row.t, f1);
    if (f1 > 4.0 * u0 * u0) e.holds = false;
  }
  return e;
}

void write_norms_csv(std::ostream& out, const EvolutionRecord& record) {
  out << "t,l2,hs,weighted_l2_m2,cube_sup\n";
  char buf[160];
  for (const auto& r : record.ledger) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,", r.t, r.l2, r.hs, r.weighted_l2_m2);
    out << buf;
    if (r.cube_sup) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.cube_sup);
      out << buf;
    }
    out << '\n';
  }
}

nlohmann::json to_json(const EvolutionRecord& record) {
  nlohmann::json j = record.metadata;
  j["status"] = record.status == RunStatus::ok ? "ok" : "diverged";
  if (record.status == RunStatus::diverged) {
    j["diverged_at"] = record.diverged_at;
    j["message"] = record.message;
  }
  j["grid"] = {{"dim", record.grid.dim()},
               {"half_width", record.grid.half_width()},
               {"points_per_axis", record.grid.points_per_axis()}};
  j["s"] = record.s;
  j["samples"] = record.times.size();
  return j;
}

}  // namespace qslab
