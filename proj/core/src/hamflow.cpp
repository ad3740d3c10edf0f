#include "qslab/hamflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace qslab {

namespace {

struct Field {
  Point dx{};
  Point dxi{};
};

Field hamilton_field(const Symbol& h, const PhasePoint& z, double sign) {
  const int dim = h.dim();
  Jet j = h.jet(z.x, z.xi, 1);
  Field f;
  for (int a = 0; a < dim; ++a) {
    Monomial mx{}, mxi{};
    mx[x_var(a)] = 1;
    mxi[xi_var(dim, a)] = 1;
    const Complex hx = j.coeff(mx);
    const Complex hxi = j.coeff(mxi);
    if (!is_finite(hx) || !is_finite(hxi)) throw NumericalError("hamflow: non-finite derivative");
    f.dx[a] = sign * hxi.real();
    f.dxi[a] = -sign * hx.real();
  }
  return f;
}

PhasePoint shifted(const PhasePoint& z, const Field& f, double step, int dim) {
  PhasePoint out = z;
  for (int a = 0; a < dim; ++a) {
    out.x[a] += step * f.dx[a];
    out.xi[a] += step * f.dxi[a];
  }
  return out;
}

PhasePoint rk4(const Symbol& h, const PhasePoint& z, double ds, double sign) {
  const int dim = h.dim();
  Field k1 = hamilton_field(h, z, sign);
  Field k2 = hamilton_field(h, shifted(z, k1, 0.5 * ds, dim), sign);
  Field k3 = hamilton_field(h, shifted(z, k2, 0.5 * ds, dim), sign);
  Field k4 = hamilton_field(h, shifted(z, k3, ds, dim), sign);
  PhasePoint out = z;
  for (int a = 0; a < dim; ++a) {
    out.x[a] += ds / 6.0 * (k1.dx[a] + 2.0 * k2.dx[a] + 2.0 * k3.dx[a] + k4.dx[a]);
    out.xi[a] += ds / 6.0 * (k1.dxi[a] + 2.0 * k2.dxi[a] + 2.0 * k3.dxi[a] + k4.dxi[a]);
  }
  return out;
}

void require_flow_symbol(const Symbol& h) {
  if (!h.traits().real_valued) throw PreconditionError("hamflow: symbol must be real-valued");
  if (h.max_depth() < 1) throw PreconditionError("hamflow: symbol needs first derivatives");
}

}  // namespace

PhasePoint rk4_step(const Symbol& h, const PhasePoint& z, double ds) { return rk4(h, z, ds, 1.0); }

PhaseTrajectory integrate_flow(const Symbol& h, const PhasePoint& seed, double s_max, double ds,
                               const FlowOptions& options) {
  require_flow_symbol(h);
  if (!(ds > 0.0)) throw PreconditionError("integrate_flow: ds must be positive");
  if (!(s_max >= 0.0)) throw PreconditionError("integrate_flow: s_max must be nonnegative");
  if (options.record_every < 1) throw PreconditionError("integrate_flow: record_every must be positive");
  const int dim = h.dim();
  const double sign = options.reverse ? -1.0 : 1.0;
  PhaseTrajectory traj;
  traj.dim = dim;
  traj.seed = seed;
  traj.ds = ds;
  traj.samples.push_back({0.0, seed.x, seed.xi});
  const auto steps = static_cast<std::size_t>(std::llround(s_max / ds));
  if (steps > options.max_steps) {
    traj.status = FlowStatus::step_limit;
    return traj;
  }
  PhasePoint z = seed;
  for (std::size_t n = 1; n <= steps; ++n) {
    z = rk4(h, z, ds, sign);
    const double s = static_cast<double>(n) * ds;
    const double r = euclidean_norm(z.x, dim);
    if (!std::isfinite(r) || !std::isfinite(euclidean_norm(z.xi, dim)))
      throw NumericalError("integrate_flow: non-finite state");
    if (n % options.record_every == 0 || n == steps || r > options.box_radius) traj.samples.push_back({s, z.x, z.xi});
    if (r > options.box_radius) {
      traj.status = FlowStatus::escaped;
      traj.escape_radius = r;
      traj.s_escape = s;
      return traj;
    }
  }
  return traj;
}

double conservation_error(const PhaseTrajectory& traj, const Symbol& h) {
  if (traj.samples.empty()) throw PreconditionError("conservation_error: empty trajectory");
  const double h0 = h(traj.seed.x, traj.seed.xi).real();
  if (h0 == 0.0) throw PreconditionError("conservation_error: h vanishes at the seed");
  double worst = 0.0;
  for (const auto& p : traj.samples) worst = std::max(worst, std::abs(h(p.x, p.xi).real() - h0));
  return worst / std::abs(h0);
}

double homogeneity_error(const Symbol& h, const PhasePoint& seed, double r, double s_max, double ds) {
  if (!h.traits().homogeneous_degree2) throw PreconditionError("homogeneity_error: symbol is not homogeneous of degree 2");
  if (!(r > 0.0)) throw PreconditionError("homogeneity_error: r must be positive");
  const int dim = h.dim();
  PhasePoint scaled = seed;
  for (int a = 0; a < dim; ++a) scaled.xi[a] *= r;
  PhaseTrajectory a = integrate_flow(h, scaled, s_max, ds);
  PhaseTrajectory b = integrate_flow(h, seed, r * s_max, r * ds);
  const std::size_t n = std::min(a.samples.size(), b.samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < dim; ++k) {
      worst = std::max(worst, std::abs(a.samples[i].x[k] - b.samples[i].x[k]));
      worst = std::max(worst, std::abs(a.samples[i].xi[k] - r * b.samples[i].xi[k]));
    }
  return worst;
}

double pinch_violation(const PhaseTrajectory& traj, double lambda) {
  const double n0 = dot(traj.seed.xi, traj.seed.xi, traj.dim);
  const double lo = n0 / (lambda * lambda), hi = n0 * lambda * lambda;
  double worst = 0.0;
  for (const auto& p : traj.samples) {
    const double n = dot(p.xi, p.xi, traj.dim);
    worst = std::max({worst, lo - n, n - hi});
  }
  return worst;
}

EscapeReport escape_time(const Symbol& h, const PhasePoint& seed, double mu, const EscapeOptions& options) {
  require_flow_symbol(h);
  const int dim = h.dim();
  if (euclidean_norm(seed.xi, dim) == 0.0) throw PreconditionError("escape_time: xi must be nonzero");
  if (!(mu > 0.0)) throw PreconditionError("escape_time: mu must be positive");
  EscapeReport rep;
  rep.seed = seed;
  PhasePoint z = seed;
  double r_prev = euclidean_norm(z.x, dim);
  rep.max_radius = r_prev;
  bool ever_outside = r_prev >= mu;
  double last_entry = 0.0;
  const auto steps = static_cast<std::size_t>(std::ceil(options.s_cap / options.ds));
  for (std::size_t n = 1; n <= steps; ++n) {
    z = rk4(h, z, options.ds, 1.0);
    const double r = euclidean_norm(z.x, dim);
    if (!std::isfinite(r)) throw NumericalError("escape_time: non-finite state");
    const double s = static_cast<double>(n) * options.ds;
    if (r >= mu && r_prev < mu) {
      last_entry = s - options.ds + options.ds * (mu - r_prev) / (r - r_prev);
      ever_outside = true;
    }
    rep.max_radius = std::max(rep.max_radius, r);
    r_prev = r;
    if (r > options.box_radius) break;
  }
  rep.final_radius = r_prev;
  if (r_prev >= mu) {
    rep.status = EscapeStatus::escaped;
    rep.s0 = last_entry;
  } else {
    rep.status = ever_outside ? EscapeStatus::inconclusive : EscapeStatus::trapped;
  }
  return rep;
}

ScanReport nontrap_scan(const Symbol& h, const std::vector<PhasePoint>& seeds, double mu, const EscapeOptions& options) {
  if (seeds.empty()) throw PreconditionError("nontrap_scan: empty seed set");
  ScanReport rep;
  for (const auto& seed : seeds) {
    if (euclidean_norm(seed.x, h.dim()) >= mu) throw PreconditionError("nontrap_scan: seed outside the mu-ball");
    EscapeReport e = escape_time(h, seed, mu, options);
    if (e.status == EscapeStatus::trapped) ++rep.trapped;
    if (e.status == EscapeStatus::inconclusive) ++rep.inconclusive;
    if (e.status == EscapeStatus::escaped) rep.sup_s0 = std::max(rep.sup_s0, e.s0);
    rep.seeds.push_back(e);
  }
  rep.overall = rep.trapped > 0        ? EscapeStatus::trapped
                : rep.inconclusive > 0 ? EscapeStatus::inconclusive
                                       : EscapeStatus::escaped;
  return rep;
}

std::vector<PhasePoint> seed_set(int dim, double r0, int count) {
  if (count < 2) throw PreconditionError("seed_set: need at least two seeds");
  std::vector<PhasePoint> seeds;
  if (dim == 1) {
    const int half = count / 2;
    for (int i = 0; i < half; ++i) {
      const double x = half == 1 ? 0.0 : -r0 + 2.0 * r0 * i / (half - 1);
      seeds.push_back({{x, 0.0}, {1.0, 0.0}});
      seeds.push_back({{x, 0.0}, {-1.0, 0.0}});
    }
    return seeds;
  }
  // Positions on a few rings, directions rotating with the seed index.
  const int rings = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(count)) / 2));
  for (int i = 0; i < count; ++i) {
    const int ring = i % (rings + 1);
    const double rad = r0 * ring / rings;
    const double ang = 2.0 * std::numbers::pi * i / count;
    const double dir = 2.0 * std::numbers::pi * ((i * 7) % count) / count;
    seeds.push_back({{rad * std::cos(ang), rad * std::sin(ang)}, {std::cos(dir), std::sin(dir)}});
  }
  return seeds;
}

std::string to_string(EscapeStatus s) {
  switch (s) {
    case EscapeStatus::escaped:
      return "escaped";
    case EscapeStatus::trapped:
      return "trapped";
    case EscapeStatus::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

nlohmann::json to_json(const ScanReport& r, int dim) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& e : r.seeds) {
    nlohmann::json x = nlohmann::json::array(), xi = nlohmann::json::array();
    for (int a = 0; a < dim; ++a) {
      x.push_back(e.seed.x[a]);
      xi.push_back(e.seed.xi[a]);
    }
    nlohmann::json j = {{"x", x}, {"xi", xi}, {"status", to_string(e.status)}, {"max_radius", e.max_radius}};
    if (e.status == EscapeStatus::escaped) j["s0"] = e.s0;
    seeds.push_back(j);
  }
  return {{"overall", to_string(r.overall)},
          {"sup_s0", r.sup_s0},
          {"trapped", r.trapped},
          {"inconclusive", r.inconclusive},
          {"seeds", seeds}};
}

void write_csv(std::ostream& out, const PhaseTrajectory& traj) {
  out << (traj.dim == 1 ? "s,x,xi\n" : "s,x1,x2,xi1,xi2\n");
  char buf[160];
  for (const auto& p : traj.samples) {
    if (traj.dim == 1)
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.s, p.x[0], p.xi[0]);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.s, p.x[0], p.x[1], p.xi[0], p.xi[1]);
    out << buf;
  }
}

}  // namespace qslab
