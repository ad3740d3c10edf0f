#include <Eigen/Dense>
#include <cmath>

#include "common.hpp"
#include "qslab/cutoffs.hpp"
#include "qslab/estimates.hpp"
#include "qslab/psido.hpp"
#include "qslab/symbol_library.hpp"

namespace qslab::scenarios {

using namespace detail;

namespace {

linalg::PowerOptions norm_options() {
  linalg::PowerOptions o;
  o.tolerance = 1e-9;
  o.max_iterations = 4000;
  return o;
}

Symbol twisted_phase() {
  return Symbol(
      1, 0.0, "exp(-theta_1 atan(x) xi/<xi>)",
      [](const Point& x, const Point& xi, const JetLayout& l) {
        const PhaseJet v = phase_variables(l, 1, x, xi);
        return exp(-(theta(1.0, v.xi, 1) * atan(v.x[0]) * v.xi[0] / japanese(v.xi, 1)));
      },
      {}, {}, kMaxSymbolDepth);
}

std::vector<Symbol> order_zero_family() {
  const Symbol bump_field = symbols::multiplication(
      1, [](const std::array<Jet, kMaxDim>& x) { return 1.0 + 0.5 * exp(-(x[0] * x[0])); }, "1+e^{-x^2}/2");
  return {symbols::cutoff(1, 2.0), (symbols::bracket_ratio(1) * bump_field).with_name("xi/<xi> (1+e^{-x^2}/2)"),
          twisted_phase()};
}

/// Fixed physical trigonometric polynomial sum_{|k| <= modes} c_k e^{i k pi x / L}.
GridFunction trig_sample(const Grid& g, const std::vector<Complex>& coeffs, int modes) {
  const double base = 3.141592653589793 / g.half_width();
  return GridFunction::sample(g, [&](const Point& x) {
    Complex s = 0.0;
    for (int k = -modes; k <= modes; ++k) s += coeffs[k + modes] * std::polar(1.0, k * base * x[0]);
    return s;
  });
}

std::vector<Complex> trig_coefficients(std::mt19937_64& rng, int modes, double decay) {
  std::normal_distribution<double> nd;
  std::vector<Complex> c(2 * modes + 1);
  for (int k = -modes; k <= modes; ++k) c[k + modes] = Complex(nd(rng), nd(rng)) * std::pow(1.0 + k * k, -0.5 * decay);
  return c;
}

}  // namespace

void psido_calculus(Context& ctx) {
  const Grid g = grid_1d(ctx, "L", "N");
  const double lo = ctx.num("band"), hi = g.max_frequency() / 2;
  const auto opt = norm_options();
  const Symbol a = symbols::bracket(1, 1.0);
  const Symbol b = symbols::weight(1, 2.0);
  const DenseOperator exact = quantize(a, g) * quantize(b, g);
  const Symbol ab = a * b;
  const DenseOperator ab_adjoint = quantize(ab, g).adjoint();
  std::vector<double> comp, adj;
  std::vector<std::vector<double>> rows;
  for (int K = 1; K <= 3; ++K) {
    comp.push_back(band_norm(exact - quantize(compose(a, b, K), g), lo, hi, opt));
    adj.push_back(band_norm(ab_adjoint - quantize(adjoint_symbol(ab, K), g), lo, hi, opt));
    rows.push_back({static_cast<double>(K), comp.back(), adj.back()});
  }
  write_table(ctx.out(), "calculus.csv", "K,composition_residual,adjoint_residual", rows);
  for (int K = 1; K <= 2; ++K) {
    const std::string step = std::to_string(K) + "to" + std::to_string(K + 1);
    ctx.check("composition-" + step, 7, "composition residual drops by >= 2 for K: " + step,
              comp[K - 1] >= 2.0 * comp[K], comp[K - 1] / comp[K], 2.0);
    ctx.check("adjoint-" + step, 7, "adjoint residual drops by >= 2 for K: " + step, adj[K - 1] >= 2.0 * adj[K],
              adj[K - 1] / adj[K], 2.0);
  }
  const Symbol elliptic = (a * (symbols::constant(1, 1.0) + 0.5 * b)).with_name("<xi>(1 + lambda_2/2)");
  const DenseOperator ea = quantize(elliptic, g);
  const DenseOperator id = DenseOperator::identity(g);
  std::vector<double> par;
  std::vector<std::vector<double>> prow;
  const auto Rs = ctx.list("R_values");
  for (double R : Rs) {
    const Symbol p = parametrix(elliptic, R, ctx.integer("parametrix_terms"));
    par.push_back(band_norm(quantize(p, g) * ea - id, R, hi, opt));
    prow.push_back({R, par.back()});
  }
  write_table(ctx.out(), "parametrix.csv", "R,residual", prow);
  ctx.summary() = {{"composition", comp}, {"adjoint", adj}, {"parametrix", par}};
  for (std::size_t i = 1; i < par.size(); ++i)
    ctx.check("parametrix-R" + fmt(Rs[i]), 7, "parametrix residual on |xi| >= R halves as R doubles",
              par[i] <= 0.5 * par[i - 1], par[i] / par[i - 1], 0.5);
}

void garding(Context& ctx) {
  const double L = ctx.num("L");
  const Symbol field = symbols::multiplication(
      1, [](const std::array<Jet, kMaxDim>& x) { return 1.0 + sin(x[0]); }, "1+sin x");
  const Symbol a = (field * symbols::isotropic(1)).with_name("(1+sin x) xi^2").with_order(2.0);
  std::vector<double> defects;
  std::vector<std::vector<double>> rows;
  for (double n : ctx.list("N_values")) {
    const Grid g = make_grid(1, L, static_cast<int>(n));
    const GardingResult r = garding_defect(a, g, 0.0);
    defects.push_back(r.defect);
    rows.push_back({n, r.defect});
  }
  write_table(ctx.out(), "garding.csv", "N,defect", rows);
  const double dev = max_relative_deviation(defects, defects.back());
  ctx.summary() = {{"defects", defects}};
  ctx.check("defect-bounded", 8, "defect constant is finite and bounded below", std::isfinite(defects.back()),
            defects.back(), 0.0);
  ctx.check("defect-stable", 8, "defect varies <= tolerance across N", dev <= ctx.num("tolerance"), dev,
            ctx.num("tolerance"));
}

void weighted_bounds(Context& ctx) {
  const double m = ctx.num("m"), tol = ctx.num("tolerance");
  const auto family = order_zero_family();
  const auto opt = norm_options();
  std::vector<std::vector<double>> rows;
  auto weighted_norm = [&](const Symbol& a, int N) {
    const Grid g = make_grid(1, ctx.num("L_weighted"), N);
    linalg::Matrix M = quantize(a, g).matrix();
    Eigen::VectorXd w(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) w[j] = std::pow(1.0 + std::pow(g.point(j)[0], 2), -0.25 * m);
    M = w.asDiagonal() * M * w.cwiseInverse().asDiagonal();
    return linalg::operator_norm(M, opt).norm;
  };
  auto cube_ratios = [&](const Symbol& a, int N) {
    const Grid g = make_grid(1, ctx.num("L_cube"), N);
    const DenseOperator op = quantize(a, g);
    auto rng = ctx.rng(17);
    double sup_ratio = 0.0, sum_ratio = 0.0;
    std::vector<GridFunction> tests;
    for (double c : {-10.5, -3.5, 0.5, 6.5})
      for (double k : {0.0, 4.0, -8.0})
        tests.push_back(GridFunction::sample(g, [=](const Point& x) {
          const double y = (x[0] - c) / 0.5;
          return std::exp(-0.5 * y * y) * std::polar(1.0, k * x[0]);
        }));
    const int modes = static_cast<int>(8.0 * g.half_width() / 3.141592653589793);
    for (int i = 0; i < 8; ++i) tests.push_back(trig_sample(g, trig_coefficients(rng, modes, 0.0), modes));
    for (const auto& f : tests) {
      const GridFunction af = op.apply(f);
      const CubeNorms in = cube_norms(f), out = cube_norms(af);
      sup_ratio = std::max(sup_ratio, out.sup / in.sup);
      sum_ratio = std::max(sum_ratio, out.sum / in.sum);
    }
    return std::pair{sup_ratio, sum_ratio};
  };
  const int nw = ctx.integer("N_weighted"), nc = ctx.integer("N_cube");
  nlohmann::json summary = nlohmann::json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Symbol& a = family[i];
    const double w1 = weighted_norm(a, nw), w2 = weighted_norm(a, 2 * nw);
    const auto [s1, l1] = cube_ratios(a, nc);
    const auto [s2, l2] = cube_ratios(a, 2 * nc);
    rows.push_back({static_cast<double>(i), w1, w2, s1, s2, l1, l2});
    const double dw = std::abs(w1 - w2) / w2, ds = std::abs(s1 - s2) / s2, dl = std::abs(l1 - l2) / l2;
    summary.push_back({{"symbol", a.name()}, {"weighted", {w1, w2}}, {"cube_sup", {s1, s2}}, {"cube_sum", {l1, l2}}});
    const std::string id = "symbol" + std::to_string(i);
    ctx.check(id + "-weighted", 9, a.name() + ": L^2(lambda_m) norm stable under N -> 2N", dw <= tol, dw, tol);
    ctx.check(id + "-cube-sup", 9, a.name() + ": cube sup-norm ratio stable under N -> 2N", ds <= tol, ds, tol);
    ctx.check(id + "-cube-sum", 9, a.name() + ": cube sum-norm ratio stable under N -> 2N", dl <= tol, dl, tol);
  }
  write_table(ctx.out(), "weighted.csv", "symbol,weighted_N,weighted_2N,cube_sup_N,cube_sup_2N,cube_sum_N,cube_sum_2N",
              rows);
  ctx.summary()["symbols"] = summary;
}

void commutator(Context& ctx) {
  const double L = ctx.num("L"), tol = ctx.num("tolerance");
  const int N = ctx.integer("N"), pairs = ctx.integer("pairs"), modes = ctx.integer("modes");
  const Grid g1 = make_grid(1, L, N), g2 = make_grid(1, L, 2 * N);
  if (4 * modes * 3.141592653589793 / L >= g1.max_frequency())
    throw ConfigError("commutator: modes too high for the coarse grid");
  std::vector<std::vector<double>> rows;
  nlohmann::json summary = nlohmann::json::object();
  for (double s : ctx.list("s_values")) {
    auto rng = ctx.rng(static_cast<std::uint64_t>(std::llround(s * 1000)));
    double m1 = 0.0, m2 = 0.0;
    for (int p = 0; p < pairs; ++p) {
      const auto cf = trig_coefficients(rng, modes, 1.0);
      const auto cg = trig_coefficients(rng, modes, 1.0);
      m1 = std::max(m1, commutator_ratio(trig_sample(g1, cf, modes), trig_sample(g1, cg, modes), s));
      m2 = std::max(m2, commutator_ratio(trig_sample(g2, cf, modes), trig_sample(g2, cg, modes), s));
    }
    const double d = std::abs(m1 - m2) / m2;
    rows.push_back({s, m1, m2});
    summary[fmt(s)] = {m1, m2};
    ctx.check("s" + fmt(s), 19, "max commutator ratio stable under N -> 2N", d <= tol, d, tol);
  }
  write_table(ctx.out(), "commutator.csv", "s,max_ratio_N,max_ratio_2N", rows);
  ctx.summary() = summary;
}

void symmetrizer(Context& ctx) {
  const int n = ctx.integer("samples");
  const double gamma = ctx.num("gamma");
  auto rng = ctx.rng();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd;
  double worst_residual = 0.0, worst_det = 1e300;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n; ++i) {
    const int dim = 1 + (i % 2);
    std::array<std::array<double, kMaxDim>, kMaxDim> a{};
    std::array<std::array<Complex, kMaxDim>, kMaxDim> b{};
    const double ang = 2.0 * 3.141592653589793 * u(rng);
    const double d0 = 1.0 + 2.0 * u(rng), d1 = 1.0 + 2.0 * u(rng);
    const double c = std::cos(ang), s = std::sin(ang);
    a[0][0] = d0 * c * c + d1 * s * s;
    a[1][1] = d0 * s * s + d1 * c * c;
    a[0][1] = a[1][0] = (d0 - d1) * c * s;
    Eigen::Matrix2cd bm;
    bm(0, 0) = Complex(nd(rng), nd(rng));
    bm(1, 1) = Complex(nd(rng), nd(rng));
    bm(0, 1) = bm(1, 0) = Complex(nd(rng), nd(rng));
    if (dim == 1) bm(0, 1) = bm(1, 0) = bm(1, 1) = 0.0;
    const double sv = Eigen::JacobiSVD<Eigen::Matrix2cd>(bm).singularValues()[0];
    bm *= (1.0 - gamma) * u(rng) / sv;
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 2; ++k) b[l][k] = bm(l, k);
    const double r = 0.1 + 9.9 * u(rng), phi = 2.0 * 3.141592653589793 * u(rng);
    const Point xi = dim == 1 ? Point{u(rng) < 0.5 ? -r : r, 0.0} : Point{r * std::cos(phi), r * std::sin(phi)};
    const SymmetrizerReport rep = qslab::symmetrizer(a, b, xi, dim, gamma);
    worst_residual = std::max(worst_residual, rep.residual);
    worst_det = std::min(worst_det, rep.det_S);
    if (i < 64) rows.push_back({static_cast<double>(dim), xi[0], xi[1], rep.lambda_plus, rep.det_S, rep.residual});
  }
  write_table(ctx.out(), "symmetrizer.csv", "dim,xi1,xi2,lambda_plus,det_S,residual", rows);
  ctx.summary() = {{"worst_residual", worst_residual}, {"min_det", worst_det}};
  ctx.check("diagonalizes", 17, "||S M - diag(l+, -l+) S|| / (||S|| ||M||) <= 1e-12", worst_residual <= 1e-12,
            worst_residual, 1e-12);
  ctx.check("determinant", 17, "det S >= 4 - 1e-12", worst_det >= 4.0 - 1e-12, worst_det, 4.0 - 1e-12);
}

}  // namespace qslab::scenarios
