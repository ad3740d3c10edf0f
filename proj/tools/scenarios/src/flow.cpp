#include <cmath>
#include <sstream>

#include "common.hpp"
#include "qslab/cutoffs.hpp"
#include "qslab/doi.hpp"
#include "qslab/estimates.hpp"
#include "qslab/hamflow.hpp"
#include "qslab/psido.hpp"
#include "qslab/symbol_library.hpp"

namespace qslab::scenarios {

using namespace detail;

namespace {

double distance(const PhaseSample& a, const PhaseSample& b, int dim) {
  double d = 0.0;
  for (int i = 0; i < dim; ++i) d = std::max({d, std::abs(a.x[i] - b.x[i]), std::abs(a.xi[i] - b.xi[i])});
  return d;
}

Symbol doi_symbol(const std::string& name) {
  if (name == "free") return symbols::isotropic(1);
  if (name == "variable-1d") return symbols::variable_1d(0.5);
  if (name == "annular-well") return symbols::annular_well();
  throw ConfigError("doi-pipeline: unknown symbol '" + name + "'");
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

struct DoiRun {
  doi::QReport q;
  doi::EscapeFunction p;
  doi::BoundCheck transport;
};

DoiRun run_doi(const Context& ctx, const Symbol& h) {
  const int n = ctx.integer("n");
  const SampleSet samples =
      doi::phase_lattice(h.dim(), ctx.num("extent"), n, ctx.num("xi_min"), ctx.num("xi_max"), n);
  doi::QReport q = doi::build_q(h, ctx.num("M"), samples);
  doi::EscapeFunction p = doi::escape_function(h, q, samples, {0.05, 0.1, 0.2}, ctx.num("b_floor"));
  const doi::BoundCheck transport = doi::check_transport_bound(doi::transport_p(h.dim(), doi::lambda2_weight()),
                                                               doi::lambda2_weight(), samples);
  return DoiRun{std::move(q), std::move(p), transport};
}

VectorField constant_drift(Complex c) {
  return [c](const Point&) { return std::array<Complex, kMaxDim>{c, c}; };
}

}  // namespace

void flow_conservation(Context& ctx) {
  const double ds = ctx.num("ds"), s_max = ctx.num("s_max"), amp = ctx.num("amplitude");
  struct Case {
    Symbol h;
    double lambda;
  };
  const std::vector<Case> cases = {{symbols::variable_1d(amp), std::sqrt(1.0 + amp)},
                                   {symbols::annular_well(4.0, 3.0), std::sqrt(5.0)}};
  double cons = 0.0, pinch = 0.0, homog = 0.0;
  std::vector<std::vector<double>> rows;
  for (const auto& c : cases) {
    for (const auto& seed : seed_set(c.h.dim(), 3.0, ctx.integer("seeds"))) {
      const PhaseTrajectory traj = integrate_flow(c.h, seed, s_max, ds);
      cons = std::max(cons, conservation_error(traj, c.h));
      pinch = std::max(pinch, pinch_violation(traj, c.lambda));
      for (double r : {0.5, 2.0}) homog = std::max(homog, homogeneity_error(c.h, seed, r, 1.0, ds));
    }
  }
  const Symbol h = cases[0].h;
  const PhasePoint seed{{-1.0, 0.0}, {1.0, 0.0}};
  const double s_end = 2.0, coarse = 0.1;
  const auto end = [&](double step) { return integrate_flow(h, seed, s_end, step).samples.back(); };
  const PhaseSample ref = end(coarse / 64);
  const double e1 = distance(end(coarse), ref, 1), e2 = distance(end(coarse / 2), ref, 1);
  const double order = std::log2(e1 / e2);
  const PhaseTrajectory shown = integrate_flow(h, seed, s_max, ds, {.record_every = 100});
  ctx.out().write("trajectory.csv", [&](std::ostream& o) { write_csv(o, shown); });
  rows.push_back({coarse, e1});
  rows.push_back({coarse / 2, e2});
  write_table(ctx.out(), "rk4_order.csv", "ds,endpoint_error", rows);
  ctx.summary() = {{"conservation", cons}, {"pinch", pinch}, {"homogeneity", homog}, {"order", order}};
  ctx.check("conservation", 10, "|h(X, Xi) - h(x0, xi0)| <= 1e-8 along the flow", cons <= 1e-8, cons, 1e-8);
  ctx.check("pinch", 10, "lambda^{-2} <= |Xi|^2 / |xi0|^2 <= lambda^2 at every sample", pinch == 0.0, pinch, 0.0);
  ctx.check("homogeneity", 10, "X(s; x0, r xi0) = X(rs; x0, xi0) and Xi scaling <= 1e-7", homog <= 1e-7, homog, 1e-7);
  ctx.check("rk4-order", 10, "observed RK4 order within 4 +- 30%", std::abs(order - 4.0) <= 1.2, order, 4.0);
}

void nontrap_scan(Context& ctx) {
  const double mu = ctx.num("mu");
  EscapeOptions opt;
  opt.s_cap = ctx.num("s_cap");
  opt.ds = ctx.num("ds");
  const int count = ctx.integer("seeds");
  const double r0 = ctx.num("r0");
  std::vector<std::vector<double>> rows;
  auto record = [&](double family, const ScanReport& scan) {
    for (const auto& s : scan.seeds)
      rows.push_back({family, s.seed.x[0], s.seed.x[1], s.seed.xi[0], s.seed.xi[1],
                      static_cast<double>(static_cast<int>(s.status)), s.s0, s.max_radius});
  };
  int escaped_flat = 0, total_flat = 0;
  for (double amp : {0.25, 0.5, 1.0}) {
    const ScanReport scan = qslab::nontrap_scan(symbols::variable_1d(amp), seed_set(1, r0, count), mu, opt);
    record(1.0, scan);
    for (const auto& s : scan.seeds) escaped_flat += s.status == EscapeStatus::escaped;
    total_flat += static_cast<int>(scan.seeds.size());
  }
  std::vector<PhasePoint> well_seeds = seed_set(2, r0, count);
  for (double r : {3.0, 3.25, 3.5}) well_seeds.push_back({{r, 0.0}, {0.0, 1.0}});
  const ScanReport well = qslab::nontrap_scan(symbols::annular_well(), well_seeds, mu, opt);
  record(2.0, well);
  double free_err = 0.0;
  const std::vector<PhasePoint> free_seeds = {{{0.0, 0.0}, {1.0, 0.0}}, {{0.0, 0.0}, {-2.0, 0.0}},
                                              {{0.0, 0.0}, {0.5, 0.0}}};
  const ScanReport free = qslab::nontrap_scan(symbols::isotropic(1), free_seeds, mu, opt);
  record(3.0, free);
  for (const auto& s : free.seeds) free_err = std::max(free_err, std::abs(s.s0 - mu / (2.0 * std::abs(s.seed.xi[0]))));
  write_table(ctx.out(), "escape.csv", "family,x1,x2,xi1,xi2,status,s0,max_radius", rows);
  ctx.out().write_json("scan_well.json", to_json(well, 2));
  ctx.summary() = {{"flat_escaped", escaped_flat}, {"flat_total", total_flat}, {"well_trapped", well.trapped},
                   {"free_s0_error", free_err}};
  ctx.check("flat-escape", 11, "all seeds escape for the 1D elliptic flat family", escaped_flat == total_flat,
            escaped_flat, total_flat);
  ctx.check("well-trapped", 11, "annular well has at least one trapped seed", well.trapped >= 1, well.trapped, 1.0);
  ctx.check("free-escape-time", 11, "free metric s0 = mu / (2 |xi0|) within ds", free_err <= opt.ds, free_err, opt.ds);
}

void doi_pipeline(Context& ctx) {
  nlohmann::json summary = nlohmann::json::object();
  for (const auto& name : split(ctx.text("symbols"))) {
    const Symbol h = doi_symbol(name);
    const DoiRun r = run_doi(ctx, h);
    std::vector<std::vector<double>> rows;
    const int n = ctx.integer("n");
    const SampleSet grid = doi::phase_lattice(h.dim(), ctx.num("extent"), n, ctx.num("xi_min"), ctx.num("xi_max"), n);
    for (std::size_t i = 0; i < grid.xs.size(); i += 7) rows.push_back({grid.xs[i][0], grid.xis[i][0], r.p.p(grid.xs[i], grid.xis[i]).real()});
    write_table(ctx.out(), "escape_" + name + ".csv", "x,xi,p", rows);
    summary[name] = to_json(r.p, h.dim());
    summary[name]["q"] = {{"N", r.q.N_scale}, {"c", r.q.c}, {"d", r.q.d}, {"growth", r.q.growth}};
    summary[name]["transport_violations"] = r.transport.violations;
    ctx.check(name + "-p", 12, name + ": H_h p >= B|xi|/<x>^2 - 1/B with zero violations", r.p.violations == 0,
              r.p.violations, 0.0, {{"B_fit", r.p.B_fit}});
    ctx.check(name + "-B", 12, name + ": fitted B > 0", r.p.B_fit > 0.0, r.p.B_fit, 0.0);
    ctx.check(name + "-transport", 12, name + ": transport p satisfies its bound", r.transport.violations == 0,
              r.transport.violations, 0.0, {{"worst_slack", r.transport.worst_slack}});
  }
  ctx.summary() = summary;
}

void gauge_invertibility(Context& ctx) {
  const Grid g = grid_1d(ctx, "L", "N");
  const Symbol h = symbols::variable_1d(0.5);
  const SampleSet samples = doi::phase_lattice(1, 8.0, 64, 1.0, 8.0, 64);
  const doi::QReport q = doi::build_q(h, 4.0, samples);
  const doi::EscapeFunction e = doi::escape_function(h, q, samples);
  const double w = ctx.num("window");
  if (!(w > 2.0 && w < g.half_width())) throw ConfigError("gauge-invertibility: window must lie in (2, L)");
  const Symbol window = symbols::multiplication(
      1, [w](const std::array<Jet, kMaxDim>& x) { return 1.0 - radial_step(x, 1, w - 2.0, w); }, "window");
  const Symbol p = ((1.0 / e.sup_p) * (window * e.p)).with_order(0.0);
  const double hi = g.max_frequency() / 2;
  linalg::PowerOptions opt;
  opt.tolerance = 1e-9;
  opt.max_iterations = 4000;
  const DenseOperator id = DenseOperator::identity(g);
  std::vector<double> defects;
  std::vector<std::vector<double>> rows;
  const auto Rs = ctx.list("R_values");
  for (double R : Rs) {
    const DenseOperator c = quantize(gauge_symbol(p, 1.0, R, -1), g);
    const DenseOperator cp = quantize(gauge_symbol(p, 1.0, R, +1), g);
    defects.push_back(band_norm(c * cp - id, 0.0, hi, opt));
    rows.push_back({R, defects.back()});
  }
  write_table(ctx.out(), "gauge.csv", "R,defect", rows);
  ctx.summary() = {{"defects", defects}, {"sup_p", e.sup_p}, {"violations", e.violations}};
  ctx.check("p-valid", 0, "escape function has zero violations", e.violations == 0, e.violations, 0.0);
  ctx.check("inverse-defect", 13, "||Psi_c Psi_c+ - I|| at the largest R <= half its value at the smallest",
            defects.back() <= 0.5 * defects.front(), defects.back() / defects.front(), 0.5);
}

void ichinose(Context& ctx) {
  const double t0 = ctx.num("t0"), ds = ctx.num("ds");
  const IchinoseTrace free = ichinose_integral(constant_drift({0.0, 1.0}), symbols::isotropic(1), {{0.0, 0.0}, {1.0, 0.0}},
                                               t0, ds);
  const VectorField decaying = [](const Point& x) {
    return std::array<Complex, kMaxDim>{Complex(0.0, std::exp(-x[0] * x[0])), 0.0};
  };
  const IchinoseTrace finite = ichinose_integral(decaying, symbols::isotropic(1), {{0.0, 0.0}, {1.0, 0.0}}, t0, ds, 5.0);
  const VectorField swirl = [](const Point& x) {
    const double w = std::exp(-(x[0] * x[0] + x[1] * x[1]) / 50.0);
    return std::array<Complex, kMaxDim>{Complex(0.0, -x[1] * w), Complex(0.0, x[0] * w)};
  };
  const IchinoseTrace trapped = ichinose_integral(swirl, symbols::annular_well(), {{3.25, 0.0}, {0.0, 1.0}},
                                                  ctx.num("trapped_t0"), 10 * ds, 10.0);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < trapped.values.size(); i += 100) rows.push_back({trapped.values[i].first, trapped.values[i].second});
  write_table(ctx.out(), "ichinose_trapped.csv", "t,integral", rows);
  ctx.summary() = {{"free_slope", free.slope()},
                   {"decaying_limit", finite.final_value()},
                   {"decaying_tail", finite.tail_increment()},
                   {"trapped_slope", trapped.slope()}};
  ctx.check("ichinose-constant", 15, "b1 = i along the free flow grows with slope 1 +- 1e-6",
            std::abs(free.slope() - 1.0) <= 1e-6, free.slope(), 1.0);
  ctx.check("ichinose-decaying", 15, "decaying imaginary drift: escape and tail increment < 1e-8",
            finite.escape == EscapeStatus::escaped && finite.tail_increment() < 1e-8, finite.tail_increment(), 1e-8);
  ctx.check("ichinose-trapped", 15, "trapped well: Ichinose integral slope > 0",
            trapped.escape == EscapeStatus::trapped && trapped.slope() > 0.0, trapped.slope(), 0.0);
}

void mizohata(Context& ctx) {
  const double t_max = ctx.num("t_max");
  const int lines = ctx.integer("lines");
  auto rng = ctx.rng();
  std::uniform_real_distribution<double> u(-3.0, 3.0), a(0.0, 2.0 * 3.141592653589793);
  const VectorField real_field = [](const Point& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return std::array<Complex, kMaxDim>{std::exp(-r2) * (1.0 + x[1]), std::sin(x[0]) / (1.0 + r2)};
  };
  const VectorField decaying = [](const Point& x) {
    return std::array<Complex, kMaxDim>{Complex(0.0, std::exp(-(x[0] * x[0] + x[1] * x[1]))), 0.0};
  };
  double real_max = 0.0, tail = 0.0;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < lines; ++i) {
    const Point x{u(rng), u(rng)};
    const double ang = a(rng);
    const Point w{std::cos(ang), std::sin(ang)};
    real_max = std::max(real_max, mizohata_integral(real_field, 2, x, w, t_max));
    const double d1 = mizohata_integral(decaying, 2, x, w, t_max), d2 = mizohata_integral(decaying, 2, x, w, 2 * t_max);
    tail = std::max(tail, std::abs(d2 - d1));
    rows.push_back({x[0], x[1], w[0], w[1], d1});
  }
  write_table(ctx.out(), "mizohata.csv", "x1,x2,w1,w2,sup_integral", rows);
  const double slope = mizohata_integral(constant_drift({0.0, 1.0}), 1, {0.0, 0.0}, {1.0, 0.0}, t_max) / t_max;
  ctx.summary() = {{"real_max", real_max}, {"constant_slope", slope}, {"decaying_tail", tail}};
  ctx.check("mizohata-real", 15, "real b1: integral vanishes to 1e-14", real_max <= 1e-14, real_max, 1e-14);
  ctx.check("mizohata-constant", 15, "b1 = i: linear growth with slope 1 +- 1e-6", std::abs(slope - 1.0) <= 1e-6, slope,
            1.0);
  ctx.check("mizohata-decaying", 15, "decaying imaginary drift: sup over [0,2T] equals sup over [0,T] to 1e-8",
            tail < 1e-8, tail, 1e-8);
}

}  // namespace qslab::scenarios
