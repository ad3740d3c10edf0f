#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "qslab/evolve.hpp"

using namespace qslab;

namespace {

const Grid& small_grid() {
  static const Grid g = make_grid(1, oracle::kPi, 64);
  return g;
}

GridFunction small_data(double hs_target, double s, std::uint64_t seed = 1) {
  const GridFunction f = oracle::random_smooth(small_grid(), seed, 0.8);
  return (hs_target / hs_norm(f, s)) * f;
}

double last_difference(const EvolutionRecord& a, const EvolutionRecord& b) {
  return l2_norm(a.final_state() - b.final_state());
}

}  // namespace

TEST_CASE("free propagator") {
  const Grid g = make_grid(1, 4.0 * oracle::kPi, 1024);
  const GridFunction u0 = oracle::random_smooth(g, 2, 0.05);
  CHECK(oracle::max_abs_diff(free_evolve(u0, 0.0), u0) <= 1e-14 * sup_norm(u0));
  for (double t : {0.1, 0.7, 2.0})
    for (double s : {0.0, 0.5, 1.0, 2.0}) CHECK(hs_norm(free_evolve(u0, t), s) / hs_norm(u0, s) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle::max_abs_diff(free_evolve(free_evolve(u0, 0.8), -0.8), u0) <= 1e-12 * sup_norm(u0));
  CHECK(oracle::max_abs_diff(free_evolve(free_evolve(u0, 0.3), 0.5), free_evolve(u0, 0.8)) <= 1e-12 * sup_norm(u0));
}

TEST_CASE("viscous semigroup") {
  const Grid g = make_grid(1, oracle::kPi, 128);
  const GridFunction mode = GridFunction::sample(g, [](const Point& x) { return std::exp(Complex(0, x[0])); });
  CHECK(oracle::max_abs_diff(viscous_evolve(mode, 0.0, 1.0), mode) <= 1e-14);
  CHECK(l2_norm(laplacian(viscous_evolve(mode, 1.0, 1.0))) / l2_norm(mode) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  const double cap = 1.0 / std::sqrt(2.0 * std::exp(1.0));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GridFunction u0 = oracle::random_smooth(g, seed, 0.01);
    double prev = l2_norm(u0);
    for (double t = 0.01; t <= 1.0; t += 0.01) {
      const GridFunction v = viscous_evolve(u0, 0.5, t);
      CHECK(std::sqrt(0.5 * t) * l2_norm(laplacian(v)) / l2_norm(u0) <= cap + 1e-12);
      CHECK(l2_norm(v) <= prev * (1 + 1e-14));
      prev = l2_norm(v);
    }
    CHECK(oracle::max_abs_diff(free_evolve(viscous_evolve(u0, 0.2, 0.4), 0.4), viscous_evolve(free_evolve(u0, 0.4), 0.2, 0.4)) <
          1e-12 * sup_norm(u0));
  }
}

TEST_CASE("derivatives are spectral") {
  const Grid g = make_grid(1, oracle::kPi, 64);
  const GridFunction s = GridFunction::sample(g, [](const Point& x) { return Complex(std::sin(3 * x[0])); });
  const GridFunction c = GridFunction::sample(g, [](const Point& x) { return Complex(3 * std::cos(3 * x[0])); });
  CHECK(oracle::max_abs_diff(derivative(s, 0), c) < 1e-12);
  CHECK(oracle::max_abs_diff(laplacian(s), -9.0 * s) < 1e-11);
}

TEST_CASE("Picard semilinear solver") {
  PicardOptions opt;
  opt.eps = 0.5;
  opt.T = 0.2;
  opt.dt = 1e-3;
  opt.s = 2.0;
  const GridFunction u0 = small_data(0.1, 2.0);

  const EvolutionRecord linear = picard_semilinear(u0, Polynomial{}, opt);
  REQUIRE(linear.status == RunStatus::ok);
  const GridFunction exact = free_evolve(viscous_evolve(u0, opt.eps, opt.T), opt.T);
  CHECK(l2_norm(linear.final_state() - exact) <= 1e-6 * l2_norm(u0));

  const EvolutionRecord r = picard_semilinear(u0, Polynomial::cubic(), opt);
  REQUIRE(r.status == RunStatus::ok);
  CHECK(r.metadata["max_contraction_factor"].get<double>() <= 0.5);
  CHECK(r.metadata["residual"].get<double>() <= 2 * opt.tol);
  for (std::size_t i = 1; i < r.times.size(); ++i) CHECK(r.times[i] > r.times[i - 1]);

  PicardOptions half = opt;
  half.dt = opt.dt / 2;
  PicardOptions quarter = opt;
  quarter.dt = opt.dt / 4;
  const EvolutionRecord r2 = picard_semilinear(u0, Polynomial::cubic(), half);
  const EvolutionRecord r4 = picard_semilinear(u0, Polynomial::cubic(), quarter);
  const double d1 = last_difference(r, r2), d2 = last_difference(r2, r4);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.3));

  PicardOptions perturbed = opt;
  perturbed.perturbation = 0.1;
  perturbed.seed = 9;
  const EvolutionRecord p = picard_semilinear(u0, Polynomial::cubic(), perturbed);
  REQUIRE(p.status == RunStatus::ok);
  CHECK(sup_difference(r, p) <= 1e-8);

  CHECK_THROWS_AS(picard_semilinear(u0, Polynomial{{{1.0, 0, 0}}}, opt), PreconditionError);
}

TEST_CASE("quasilinear solver") {
  PicardOptions opt;
  opt.eps = 0.1;
  opt.T = 0.1;
  opt.dt = 1e-3;
  const GridFunction u0 = small_data(0.3, 2.0, 3);
  const EvolutionRecord lap = qlcp_solve(u0, CoefficientSet::laplacian(), opt);
  const EvolutionRecord sem = picard_semilinear(u0, Polynomial{}, opt);
  CHECK(sup_difference(lap, sem) <= 1e-10);

  const EvolutionRecord q = qlcp_solve(u0, CoefficientSet::quasilinear_1d(0.1), opt);
  REQUIRE(q.status == RunStatus::ok);
  CHECK(q.metadata["max_contraction_factor"].get<double>() <= 0.5);
  CHECK(ellipticity_margin(CoefficientSet::quasilinear_1d(0.1), u0, 0.0) >= 1.0);

  std::vector<double> gaps;
  std::vector<EvolutionRecord> runs;
  for (double eps : {0.1, 0.05, 0.025}) {
    PicardOptions o = opt;
    o.eps = eps;
    runs.push_back(qlcp_solve(u0, CoefficientSet::quasilinear_1d(0.1), o));
  }
  CHECK(sup_difference(runs[1], runs[2]) < sup_difference(runs[0], runs[1]));

  CoefficientSet bad = CoefficientSet::laplacian();
  bad.a = [](const CoefficientArgs&, int, int) { return -1.0; };
  CHECK_THROWS_AS(qlcp_solve(u0, bad, opt), PreconditionError);
}

TEST_CASE("Bona-Smith regularization") {
  const Grid g = make_grid(1, 4.0 * oracle::kPi, 1024);
  const GridFunction u0 = oracle::random_smooth(g, 5, 0.0);
  CHECK(oracle::max_abs_diff(bona_smith(u0, 1.0 / g.max_frequency()), u0) < 1e-12 * sup_norm(u0));
  // Rough data: |u^(xi)| ~ <xi>^{-(k + 1/2 + 0.1)}, so u0 sits in H^k barely.
  const int k = 3;
  const GridFunction rough = apply_multiplier(u0, [&](const Point& xi) { return Complex(std::pow(1 + xi[0] * xi[0], -(k + 0.6) / 2)); });
  double prev = 1e300;
  for (double delta : {0.2, 0.1, 0.05}) {
    const GridFunction r = bona_smith(rough, delta);
    CHECK(hs_norm(r, k + 1) <= 2.0 / delta * hs_norm(rough, k));
    const double rate = l2_norm(r - rough) / std::pow(delta, k);
    CHECK(rate < prev);
    prev = rate;
  }
}

TEST_CASE("energy budget") {
  CHECK(0.5 * (Polynomial::cubic().degree() + 1) == 2.0);
  CHECK(energy_time(1.0, 2.0, 1.0) == doctest::Approx(0.0625));
  CHECK(energy_time(1.0, 2.0, 0.1) == doctest::Approx(0.5));
  PicardOptions opt;
  opt.eps = 0.1;
  opt.T = 0.4;
  opt.dt = 2e-3;
  const GridFunction u0 = small_data(0.5, 2.0, 4);
  const EvolutionRecord r = picard_semilinear(u0, Polynomial::cubic(), opt);
  const double C = fit_energy_constant(r, Polynomial::cubic());
  CHECK(C > 0.0);
  const EnergyBudget e = energy_budget(r, Polynomial::cubic(), C);
  CHECK(e.alpha == 2.0);
  CHECK(e.holds);
  CHECK(e.f1.back().second <= 4 * 0.25 + 1e-12);
  const EnergyBudget tight = energy_budget(r, Polynomial::cubic(), 1e-3);
  CHECK(tight.partial);
}

TEST_CASE("drift equation") {
  const Grid g = make_grid(1, 8.0, 256);
  const GridFunction u0 = GridFunction::sample(g, [](const Point& x) { return Complex(std::exp(-x[0] * x[0])); });
  const EvolutionRecord r = drift_evolve(u0, [](const Point&, int) { return Complex(0.0); }, 1.0, 100);
  CHECK(oracle::max_abs_diff(r.final_state(), free_evolve(u0, 1.0)) < 1e-12);
  // A real drift only translates.
  const EvolutionRecord shift = drift_evolve(u0, [](const Point&, int) { return Complex(1.0); }, 1.0, 400);
  CHECK(l2_norm(shift.final_state()) == doctest::Approx(l2_norm(u0)).epsilon(1e-6));
  const EvolutionRecord grow = drift_evolve(u0, [](const Point&, int) { return Complex(0.0, 1.0); }, 1.0, 400);
  CHECK(l2_norm(grow.final_state()) >= 2.0 * l2_norm(u0));
}

TEST_CASE("record export") {
  const Grid g = make_grid(1, 8.0, 64);
  const GridFunction u0 = GridFunction::sample(g, [](const Point& x) { return Complex(std::exp(-x[0] * x[0])); });
  const EvolutionRecord r = free_record(u0, 1.0, 10, 1.0);
  CHECK(r.times.size() == 11);
  std::ostringstream out;
  write_norms_csv(out, r);
  CHECK(out.str().rfind("t,l2,hs,weighted_l2_m2,cube_sup\n", 0) == 0);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 12);
  const auto j = to_json(r);
  CHECK(j["status"] == "ok");
  CHECK(r.ledger.front().cube_sup.has_value());
}
