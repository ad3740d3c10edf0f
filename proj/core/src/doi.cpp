#include "qslab/doi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>

#include "qslab/cutoffs.hpp"
#include "qslab/psido.hpp"

namespace qslab::doi {

SampleSet phase_lattice(int dim, double x_extent, int nx, double xi_min, double xi_max, int nxi) {
  if (dim != 1 && dim != 2) throw PreconditionError("phase_lattice: dim must be 1 or 2");
  if (nx < 2 || nxi < 2) throw PreconditionError("phase_lattice: need at least two points per axis");
  if (!(xi_max > xi_min) || !(xi_min > 0.0)) throw PreconditionError("phase_lattice: need 0 < xi_min < xi_max");
  SampleSet s;
  s.dim = dim;
  auto coord = [&](int i) { return -x_extent + 2.0 * x_extent * i / (nx - 1); };
  if (dim == 1) {
    for (int i = 0; i < nx; ++i) s.xs.push_back({coord(i), 0.0});
    const int half = nxi / 2;
    for (int i = 0; i < half; ++i) {
      const double m = half == 1 ? xi_min : xi_min + (xi_max - xi_min) * i / (half - 1);
      s.xis.push_back({-m, 0.0});
      s.xis.push_back({m, 0.0});
    }
  } else {
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nx; ++j) s.xs.push_back({coord(i), coord(j)});
    const int dirs = 8, mags = std::max(2, nxi / dirs);
    for (int a = 0; a < dirs; ++a) {
      const double ang = 2.0 * std::numbers::pi * (a + 0.5) / dirs;
      for (int i = 0; i < mags; ++i) {
        const double m = xi_min + (xi_max - xi_min) * i / (mags - 1);
        s.xis.push_back({m * std::cos(ang), m * std::sin(ang)});
      }
    }
  }
  return s;
}

TransportWeight lambda2_weight() {
  return {"lambda2", [](const Jet& r) { return reciprocal(r * r + 1.0); }, [](const Jet& t) { return atan(t); }};
}

Symbol transport_p(int dim, const TransportWeight& weight) {
  SymbolTraits t{.real_valued = true};
  return Symbol(
      dim, 0.0, "transport-p",
      [dim, weight](const Point& x, const Point& xi, const JetLayout& l) {
        PhaseJet v = phase_variables(l, dim, x, xi);
        Jet s(l);
        for (int a = 0; a < dim; ++a) s += weight.primitive(v.x[a]) * v.xi[a];
        return s / japanese(v.xi, dim);
      },
      {{"weight", weight.name}}, t);
}

BoundCheck check_transport_bound(const Symbol& p, const TransportWeight& weight, const SampleSet& samples) {
  const int dim = p.dim();
  const JetLayout& l0 = JetLayout::get(1, 0);
  auto lambda = [&](double r) { return weight.lambda(Jet(l0, r)).value().real(); };
  std::vector<double> radii;
  for (const Point& x : samples.xs) radii.push_back(euclidean_norm(x, dim));
  std::sort(radii.begin(), radii.end());
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (lambda(radii[i]) > lambda(radii[i - 1]) + 1e-15)
      throw PreconditionError("transport_p: weight is not decreasing on the samples");
  BoundCheck c;
  c.worst_slack = 1e300;
  for (const Point& x : samples.xs) {
    const double lam = lambda(euclidean_norm(x, dim));
    for (const Point& xi : samples.xis) {
      Jet j = p.jet(x, xi, 1);
      double lhs = 0.0;
      for (int a = 0; a < dim; ++a) {
        Monomial m{};
        m[x_var(a)] = 1;
        lhs += 2.0 * xi[a] * j.coeff(m).real();
      }
      const double rhs = 2.0 * lam * dot(xi, xi, dim) / japanese(xi, dim);
      const double slack = lhs - rhs;
      ++c.samples;
      if (slack < -1e-12 * std::max(1.0, std::abs(rhs))) ++c.violations;
      if (slack < c.worst_slack) {
        c.worst_slack = slack;
        c.worst_x = x;
        c.worst_xi = xi;
      }
    }
  }
  return c;
}

double flow_derivative(const Symbol& h, const std::function<double(const Point&, const Point&)>& f, const Point& x,
                       const Point& xi, double delta) {
  const PhasePoint z{x, xi};
  const PhasePoint zp = rk4_step(h, z, delta);
  const PhasePoint zm = rk4_step(h, z, -delta);
  return (f(zp.x, zp.xi) - f(zm.x, zm.xi)) / (2.0 * delta);
}

Symbol build_q1(const Symbol& h, double M) {
  if (!(M > 0.0)) throw PreconditionError("build_q1: M must be positive");
  if (!h.traits().elliptic) throw PreconditionError("build_q1: h must be elliptic");
  if (!h.traits().asymptotically_flat) throw PreconditionError("build_q1: h must be asymptotically flat");
  const int dim = h.dim();
  SymbolTraits t{.real_valued = true};
  return Symbol(
      dim, 0.0, "q1",
      [h, dim, M](const Point& x, const Point& xi, const JetLayout& l) {
        PhaseJet v = phase_variables(l, dim, x, xi);
        const double m2 = M * M, m12 = (M + 1.0) * (M + 1.0);
        Jet psi = square_step(v.x, dim, m2, m12);
        if (psi.is_constant() && psi.value() == Complex{}) return Jet(l);
        // H_h(|x|^2) = 2 x . d_xi h
        Jet jh = h.jet(x, xi, l.order() + 1);
        Jet hx(l);
        for (int a = 0; a < dim; ++a) hx += v.x[a] * jh.differentiate(xi_var(dim, a)) * 2.0;
        return psi * hx / japanese(v.xi, dim);
      },
      {{"M", M}}, t, h.max_depth() - 1);
}

Q1Report check_q1(const Symbol& h, double M, const SampleSet& samples) {
  Symbol q1 = build_q1(h, M);
  Symbol bracket = poisson_bracket(h, q1);
  const int dim = h.dim();
  Q1Report r{q1, 1e300, 0, {}, {}};
  for (const Point& x : samples.xs) {
    const double psi = smooth_step((dot(x, x, dim) - M * M) / ((M + 1.0) * (M + 1.0) - M * M));
    for (const Point& xi : samples.xis) {
      const double g = bracket(x, xi).real();
      if (psi == 0.0) {
        if (g < -1e-12) ++r.violations;
        continue;
      }
      const double ratio = g * japanese(xi, dim) / (psi * dot(xi, xi, dim));
      if (ratio <= 0.0) ++r.violations;
      if (ratio < r.c_fit) {
        r.c_fit = ratio;
        r.worst_x = x;
        r.worst_xi = xi;
      }
    }
  }
  if (r.c_fit == 1e300) r.c_fit = 0.0;
  return r;
}

double phi1(const Point& x, int dim, double M) { return 1.0 - radial_step(euclidean_norm(x, dim), M + 1.0, M + 2.0); }

double phi2(const Point& xi, int dim) { return radial_step(euclidean_norm(xi, dim), 1.0, 2.0); }

namespace {

// phi_1(X(s)) and |Xi(s)|^2 along a unit-speed trajectory, trimmed after the
// last sample with phi_1 > 0.
struct UnitFlow {
  double ds = 0.0;
  std::vector<double> phi;
  std::vector<double> xi2;
};

class Q2Evaluator {
 public:
  Q2Evaluator(Symbol h, double M, Q2Options options) : h_(std::move(h)), M_(M), options_(std::move(options)) {}

  double value(const Point& x, const Point& xi) {
    const int dim = h_.dim();
    const double r = euclidean_norm(xi, dim);
    if (r == 0.0) throw PreconditionError("q2: xi must be nonzero");
    Point unit{};
    for (int a = 0; a < dim; ++a) unit[a] = xi[a] / r;
    const UnitFlow& f = flow(x, unit);
    if (f.phi.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < f.phi.size(); ++i) {
      const double w = (i == 0 || i + 1 == f.phi.size()) ? 0.5 : 1.0;
      acc += w * f.phi[i] * std::sqrt(1.0 + r * r * f.xi2[i]);
    }
    return -acc * f.ds / r;
  }

 private:
  const UnitFlow& flow(const Point& x, const Point& unit) {
    const std::array<double, 4> key{x[0], x[1], unit[0], unit[1]};
    {
      std::lock_guard lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    UnitFlow f = integrate(x, unit);
    std::lock_guard lock(mutex_);
    return cache_.emplace(key, std::move(f)).first->second;
  }

  UnitFlow integrate(const Point& x, const Point& unit) const {
    const int dim = h_.dim();
    UnitFlow f;
    f.ds = options_.ds;
    PhasePoint z{x, unit};
    const auto steps = static_cast<std::size_t>(std::ceil(options_.s_cap / options_.ds));
    const auto window = static_cast<std::size_t>(std::ceil(options_.trailing_window / options_.ds));
    std::size_t last_active = 0, outside_run = 0;
    std::vector<double> phi, xi2;
    for (std::size_t n = 0; n <= steps; ++n) {
      if (n > 0) z = rk4_step(h_, z, options_.ds);
      const double p = phi1(z.x, dim, M_);
      phi.push_back(p);
      xi2.push_back(dot(z.xi, z.xi, dim));
      if (p > 0.0) last_active = n;
      outside_run = euclidean_norm(z.x, dim) > M_ + 2.0 ? outside_run + 1 : 0;
      if (outside_run > window) {
        phi.resize(last_active + 2 <= phi.size() ? last_active + 2 : phi.size());
        xi2.resize(phi.size());
        f.phi = std::move(phi);
        f.xi2 = std::move(xi2);
        if (f.phi.size() == 1 && f.phi[0] == 0.0) f.phi.clear();
        return f;
      }
    }
    throw Refusal("q2: trajectory undecided at s_cap (non-trapping unverified)", x, unit);
  }

  Symbol h_;
  double M_;
  Q2Options options_;
  std::mutex mutex_;
  std::map<std::array<double, 4>, UnitFlow> cache_;
};

}  // namespace

Symbol build_q2(const Symbol& h, double M, const Q2Options& options) {
  if (!(M > 0.0)) throw PreconditionError("build_q2: M must be positive");
  const int dim = h.dim();
  std::vector<PhasePoint> seeds = options.seeds.empty() ? seed_set(dim, M + 2.0, 32) : options.seeds;
  EscapeOptions eo{options.s_cap, options.ds, 1e3};
  ScanReport scan = nontrap_scan(h, seeds, M + 3.0, eo);
  if (scan.overall != EscapeStatus::escaped) {
    for (const auto& e : scan.seeds)
      if (e.status != EscapeStatus::escaped)
        throw Refusal("q2: non-trapping scan " + to_string(scan.overall) + " (" + std::to_string(scan.trapped) +
                          " trapped, " + std::to_string(scan.inconclusive) + " inconclusive)",
                      e.seed.x, e.seed.xi);
  }
  auto eval = std::make_shared<Q2Evaluator>(h, M, options);
  SymbolTraits t{.real_valued = true};
  return Symbol(
      dim, 0.0, "q2",
      [eval](const Point& x, const Point& xi, const JetLayout& l) { return Jet(l, eval->value(x, xi)); },
      {{"M", M}, {"s_cap", options.s_cap}, {"ds", options.ds}}, t, 0);
}

namespace {

Symbol assemble_q(const Symbol& q1, const Symbol& q2, double N, double M) {
  const int dim = q1.dim();
  SymbolTraits t{.real_valued = true};
  return Symbol(
      dim, 1.0, "q",
      [q1, q2, N, M, dim](const Point& x, const Point& xi, const JetLayout& l) {
        double v = N * q1(x, xi).real();
        const double c = phi1(x, dim, M) * phi2(xi, dim);
        if (c != 0.0) v += c * q2(x, xi).real();
        return Jet(l, v);
      },
      {{"N", N}, {"M", M}}, t, 0);
}

}  // namespace

QReport build_q(const Symbol& h, double M, const SampleSet& samples, const std::vector<double>& n_scales,
                const Q2Options& options) {
  if (n_scales.empty()) throw PreconditionError("build_q: empty N scan");
  const int dim = h.dim();
  Symbol q1 = build_q1(h, M);
  Symbol q2 = build_q2(h, M, options);
  QReport best{q1, 0.0, -1e300, 0.0, 0.0, {}, {}};
  for (double N : n_scales) {
    Symbol q = assemble_q(q1, q2, N, M);
    auto fq = [&q](const Point& x, const Point& xi) { return q(x, xi).real(); };
    std::vector<std::pair<double, double>> gs;  // (|xi|, H_h q)
    double c = 1e300, growth = 0.0;
    Point wx{}, wxi{};
    for (const Point& x : samples.xs)
      for (const Point& xi : samples.xis) {
        const double r = euclidean_norm(xi, dim);
        const double g = flow_derivative(h, fq, x, xi);
        gs.emplace_back(r, g);
        growth = std::max(growth, std::abs(fq(x, xi)) / japanese(x, dim));
        if (r >= 2.0 && g / r < c) {
          c = g / r;
          wx = x;
          wxi = xi;
        }
      }
    c = c == 1e300 ? 0.0 : 0.5 * c;
    double d = 0.0;
    for (auto [r, g] : gs) d = std::max(d, c * r - g);
    QReport rep{q, N, c, d, growth, wx, wxi};
    if (c > 0.0) return rep;
    if (c > best.c) best = rep;
  }
  throw Refusal("build_q: no N in the scan gives c > 0 (best c = " + std::to_string(best.c) + ")", best.worst_x,
                best.worst_xi);
}

Symbol build_p_symbol(const Symbol& q, double eps, double K) {
  if (!(eps > 0.0)) throw PreconditionError("build_p: eps must be positive");
  if (!(K >= 1.0)) throw PreconditionError("build_p: K must be at least 1");
  const int dim = q.dim();
  SymbolTraits t{.real_valued = true};
  return Symbol(
      dim, 0.0, "p",
      [q, eps, K, dim](const Point& x, const Point& xi, const JetLayout& l) {
        const double qv = q(x, xi).real();
        const double ratio = qv / japanese(x, dim);
        // phi(t) = S(t - 1); phi_+(t) = phi(t / eps), phi_-(t) = phi_+(-t)
        const double plus = smooth_step(ratio / eps - 1.0);
        const double minus = smooth_step(-ratio / eps - 1.0);
        const double zero = 1.0 - plus - minus;
        const double f = 2.0 * K * K * std::atan(std::abs(qv));
        return Jet(l, ratio * zero + (f + 2.0 * eps) * (plus - minus));
      },
      {{"eps", eps}, {"K", K}}, t, 0);
}

EscapeFunction build_p(const Symbol& h, const Symbol& q, double eps, const SampleSet& samples, double b_floor) {
  const int dim = h.dim();
  double K = 1.0;
  for (const Point& x : samples.xs)
    for (const Point& xi : samples.xis) K = std::max(K, std::abs(q(x, xi).real()) / japanese(x, dim));
  Symbol p = build_p_symbol(q, eps, K);
  auto fp = [&p](const Point& x, const Point& xi) { return p(x, xi).real(); };
  EscapeFunction e{p, {{"construction", "doi"}, {"eps", eps}, {"K", K}}, 1e300, 0, {}, {}, 0.0};
  for (const Point& x : samples.xs)
    for (const Point& xi : samples.xis) {
      const double g = flow_derivative(h, fp, x, xi);
      const double w = euclidean_norm(xi, dim) / (1.0 + dot(x, x, dim));
      e.sup_p = std::max(e.sup_p, std::abs(fp(x, xi)));
      double b;
      if (w > 0.0)
        b = (g + std::sqrt(g * g + 4.0 * w)) / (2.0 * w);
      else
        b = g < 0.0 ? -1.0 / g : 1e300;
      if (g < b_floor * w - 1.0 / b_floor) ++e.violations;
      if (b < e.B_fit) {
        e.B_fit = b;
        e.worst_x = x;
        e.worst_xi = xi;
      }
    }
  e.provenance["b_floor"] = b_floor;
  e.provenance["B_fit"] = e.B_fit;
  return e;
}

EscapeFunction escape_function(const Symbol& h, const QReport& q, const SampleSet& samples,
                               const std::vector<double>& eps_values, double b_floor) {
  if (eps_values.empty()) throw PreconditionError("escape_function: empty eps scan");
  std::optional<EscapeFunction> best;
  for (double eps : eps_values) {
    EscapeFunction e = build_p(h, q.q, eps, samples, b_floor);
    e.provenance["N_scale"] = q.N_scale;
    e.provenance["M"] = q.q.params().value("M", 0.0);
    e.provenance["c"] = q.c;
    e.provenance["d"] = q.d;
    if (e.violations == 0) return e;
    if (!best || e.violations < best->violations) best = e;
  }
  return *best;
}

nlohmann::json to_json(const EscapeFunction& e, int dim) {
  nlohmann::json wx = nlohmann::json::array(), wxi = nlohmann::json::array();
  for (int a = 0; a < dim; ++a) {
    wx.push_back(e.worst_x[a]);
    wxi.push_back(e.worst_xi[a]);
  }
  return {{"B_fit", e.B_fit},       {"violations", e.violations}, {"worst_x", wx},
          {"worst_xi", wxi},        {"sup_p", e.sup_p},           {"provenance", e.provenance}};
}

}  // namespace qslab::doi
