#include <cmath>

#include "common.hpp"
#include "qslab/estimates.hpp"
#include "qslab/evolve.hpp"

namespace qslab::scenarios {

using namespace detail;

void smoothing_sweep(Context& ctx) {
  const Grid g = grid_1d(ctx, "L", "N");
  const double T = ctx.num("T");
  const int steps = ctx.integer("steps");
  const auto carriers = ctx.list("carriers");
  if (carriers.size() < 2) throw ConfigError("smoothing-sweep: need at least two carriers");
  std::vector<double> half, one;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < carriers.size(); ++i) {
    const GridFunction u0 = packet(g, ctx.num("x0"), ctx.num("width"), carriers[i]);
    const EvolutionRecord rec = free_record(u0, T, steps, 0.0, 1);
    if (i == 0) ctx.out().write_record(rec);
    half.push_back(smoothing_functional(rec, 2.0, 0.5));
    one.push_back(smoothing_functional(rec, 2.0, 1.0));
    rows.push_back({carriers[i], half.back(), one.back()});
  }
  write_table(ctx.out(), "sweep.csv", "carrier,half_derivative,one_derivative", rows);
  const double flat = spread(half), growth = one.back() / one.front();
  ctx.summary() = {{"half", half}, {"one", one}, {"spread", flat}, {"control_growth", growth}};
  ctx.check("half-flat", 14, "||J^{1/2} u||_{L^2(lambda_2 dx dt)} varies <= tolerance across carriers",
            flat <= ctx.num("flat_tolerance"), flat, ctx.num("flat_tolerance"));
  ctx.check("one-grows", 14, "J^1 control grows by >= factor from the lowest to the highest carrier",
            growth >= ctx.num("control_growth"), growth, ctx.num("control_growth"));
}

void kato_half(Context& ctx) {
  const Grid g = grid_1d(ctx, "L", "N");
  std::vector<double> ratios;
  std::vector<std::vector<double>> rows;
  for (double c : ctx.list("carriers")) {
    const GridFunction u0 = packet(g, ctx.num("x0"), ctx.num("width"), c);
    ratios.push_back(kato_half_derivative(u0, ctx.num("T"), ctx.integer("steps"), 0.5));
    rows.push_back({c, ratios.back()});
  }
  write_table(ctx.out(), "kato.csv", "carrier,ratio", rows);
  const double flat = spread(ratios);
  ctx.summary() = {{"ratios", ratios}, {"spread", flat}};
  ctx.check("kato-flat", 14, "Kato half-derivative ratio varies <= tolerance across carriers",
            flat <= ctx.num("flat_tolerance"), flat, ctx.num("flat_tolerance"));
}

void maximal(Context& ctx) {
  const double L = ctx.num("L"), s = ctx.num("s"), T = ctx.num("T");
  const int N = ctx.integer("N"), steps = ctx.integer("steps"), count = ctx.integer("count");
  const int modes = static_cast<int>(16.0 * L / 3.141592653589793);
  auto rng = ctx.rng();
  std::normal_distribution<double> nd;
  std::vector<std::vector<double>> rows;
  double worst_dev = 0.0, worst_ratio = 0.0;
  for (int d = 0; d < count; ++d) {
    std::vector<Complex> coeffs(2 * modes + 1);
    for (int k = -modes; k <= modes; ++k)
      coeffs[k + modes] = Complex(nd(rng), nd(rng)) * std::pow(1.0 + std::pow(k * 3.141592653589793 / L, 2), -0.5 * (s + 1.0));
    double r[2];
    for (int level = 0; level < 2; ++level) {
      const Grid g = make_grid(1, L, N << level);
      const GridFunction u0 = GridFunction::sample(g, [&](const Point& x) {
        Complex v = 0.0;
        for (int k = -modes; k <= modes; ++k) v += coeffs[k + modes] * std::polar(1.0, k * 3.141592653589793 / L * x[0]);
        return v;
      });
      const EvolutionRecord rec = free_record(u0, T, steps, s, 1);
      if (d == 0 && level == 0) ctx.out().write_record(rec);
      r[level] = maximal_norm(rec) / hs_norm(u0, s);
    }
    worst_dev = std::max(worst_dev, std::abs(r[0] - r[1]) / r[1]);
    worst_ratio = std::max(worst_ratio, r[1]);
    rows.push_back({static_cast<double>(d), r[0], r[1]});
  }
  write_table(ctx.out(), "maximal.csv", "datum,ratio_N,ratio_2N", rows);
  ctx.summary() = {{"max_ratio", worst_ratio}, {"max_deviation", worst_dev}};
  ctx.check("maximal-stable", 0, "maximal-norm ratio stable under N -> 2N", worst_dev <= ctx.num("tolerance"), worst_dev,
            ctx.num("tolerance"));
}

void drift_smoothing(Context& ctx) {
  const Grid g = grid_1d(ctx, "L", "N");
  const GridFunction u0 = packet(g, ctx.num("x0"), ctx.num("width"), ctx.num("carrier"));
  const double T = ctx.num("T");
  const int steps = ctx.integer("steps");
  const int save = std::max(1, steps / 200);
  const auto decaying = [](const Point& x, int) { return Complex(0.0, 1.0 / (1.0 + x[0] * x[0])); };
  const auto constant = [](const Point&, int) { return Complex(0.0, 1.0); };
  const EvolutionRecord a = drift_evolve(u0, decaying, T, steps, save);
  const EvolutionRecord b = drift_evolve(u0, constant, T, steps, save);
  ctx.out().write_record(a);
  auto growth = [](const EvolutionRecord& r) {
    double m = 0.0;
    for (const auto& row : r.ledger) m = std::max(m, row.l2);
    return m / r.ledger.front().l2;
  };
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < a.ledger.size(); i += save)
    rows.push_back({a.ledger[i].t, a.ledger[i].l2, i < b.ledger.size() ? b.ledger[i].l2 : std::nan("")});
  write_table(ctx.out(), "drift.csv", "t,l2_decaying,l2_constant", rows);
  const double ga = growth(a), gb = growth(b);
  ctx.summary() = {{"decaying_growth", ga}, {"constant_growth", gb}, {"constant_status", b.status == RunStatus::ok ? "ok" : "diverged"}};
  ctx.check("decaying-bounded", 16, "Im b1 = lambda_2: sup_t ||u|| / ||u0|| <= threshold",
            a.status == RunStatus::ok && ga <= ctx.num("decaying_max_growth"), ga, ctx.num("decaying_max_growth"));
  ctx.check("constant-grows", 16, "Im b1 = 1: sup_t ||u|| / ||u0|| >= threshold", gb >= ctx.num("constant_min_growth"),
            gb, ctx.num("constant_min_growth"));
}

void mst_witness(Context& ctx) {
  const double alpha = ctx.num("alpha"), s = ctx.num("s");
  const int nodes = ctx.integer("nodes");
  const auto Ns = ctx.list("N_values"), ts = ctx.list("t_values");
  if (Ns.size() != 2 || ts.size() != 2) throw ConfigError("mst-witness: need two N values and two t values");
  double r[2][2];
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      r[i][j] = qslab::mst_witness(alpha, Ns[i], s, ts[j], nodes);
      rows.push_back({Ns[i], ts[j], r[i][j], alpha * Ns[i] * ts[j]});
    }
  write_table(ctx.out(), "mst.csv", "N_freq,t,ratio,alpha_N_t", rows);
  const double growth = r[1][0] / r[0][0];
  ctx.summary() = {{"ratios", {{r[0][0], r[0][1]}, {r[1][0], r[1][1]}}}, {"growth", growth}};
  ctx.check("frequency-growth", 18, "ratio at the larger N exceeds the smaller by >= min_growth",
            growth >= ctx.num("min_growth"), growth, ctx.num("min_growth"));
  for (int i = 0; i < 2; ++i) {
    const double q = r[i][1] / r[i][0] / (ts[1] / ts[0]);
    ctx.check("time-scaling-N" + fmt(Ns[i]), 18, "ratio scales linearly in t within tolerance",
              std::abs(q - 1.0) <= ctx.num("time_tolerance"), q, 1.0);
  }
}

}  // namespace qslab::scenarios
