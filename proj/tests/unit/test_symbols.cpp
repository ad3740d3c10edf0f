#include <doctest.h>

#include "oracles.hpp"
#include "qslab/cutoffs.hpp"
#include "qslab/symbol_library.hpp"

using namespace qslab;
namespace sy = qslab::symbols;

namespace {

symbols::CoefficientMatrix identity2() {
  symbols::CoefficientMatrix a;
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k) a[l][k] = sy::constant_field(l == k ? 1.0 : 0.0);
  return a;
}

SampleSet xi_band(double lo, double hi, int n) {
  SampleSet s;
  for (int i = 0; i < 9; ++i) s.xs.push_back({-4.0 + i, 0.0});
  for (int i = 0; i <= n; ++i) {
    const double r = lo + (hi - lo) * i / n;
    s.xis.push_back({r, 0.0});
    s.xis.push_back({-r, 0.0});
  }
  return s;
}

}  // namespace

TEST_CASE("library symbol values") {
  CHECK(sy::free(1)({0.0}, {3.0}).real() == doctest::Approx(-9.0));
  CHECK(sy::weight(1, 2.0)({1.0}, {0.0}).real() == doctest::Approx(0.5));
  CHECK(sy::cutoff(1, 4.0)({0.0}, {10.0}).real() == doctest::Approx(1.0));
  CHECK(sy::cutoff(1, 4.0)({0.0}, {3.0}).real() == doctest::Approx(0.0));
  CHECK(sy::bracket(2, 1.0)({0.0, 0.0}, {3.0, 4.0}).real() == doctest::Approx(std::sqrt(26.0)));
  CHECK(sy::momentum(1)({0.0}, {2.0}) == Complex(0.0, 2.0));
}

TEST_CASE("seminorm estimates") {
  const SampleSet band = xi_band(0.0, 64.0, 512);
  const auto s1 = seminorm(sy::bracket(1, 1.0), {1, 0}, {0, 0}, band);
  double ref = 0.0;
  for (const auto& xi : band.xis) ref = std::max(ref, std::abs(xi[0]) / std::sqrt(1 + xi[0] * xi[0]));
  CHECK(s1.value <= 1.0 + 1e-12);
  CHECK(s1.value == doctest::Approx(ref).epsilon(1e-12));
  CHECK(seminorm(sy::constant(1, 1.0), {2, 0}, {1, 0}, band).value == 0.0);
  CHECK(seminorm(sy::constant(1, 1.0), {1, 0}, {0, 0}, band).value == 0.0);
  CHECK(seminorm(sy::free(1), {2, 0}, {0, 0}, band).value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("finite-difference fallback agrees with analytic derivatives") {
  const Grid g = make_grid(1, 8.0, 256);
  const Symbol fd = Symbol::from_values(
      1, 1.0, "<xi>/<x>^2", [](const Point& x, const Point& xi) { return Complex(std::sqrt(1 + xi[0] * xi[0]) / (1 + x[0] * x[0])); },
      g.dx(), g.dxi());
  const Symbol exact = sy::bracket(1, 1.0) * sy::weight(1, 2.0);
  for (double x : {-1.0, 0.3, 2.0})
    for (double xi : {1.0, 5.0}) {
      CHECK(std::abs(fd.derivative({x}, {xi}, {1, 0}, {0, 0}) - exact.derivative({x}, {xi}, {1, 0}, {0, 0})) < 1e-2);
      CHECK(std::abs(fd.derivative({x}, {xi}, {0, 0}, {1, 0}) - exact.derivative({x}, {xi}, {0, 0}, {1, 0})) < 1e-2);
    }
  CHECK_THROWS(fd.derivative({0.0}, {1.0}, {3, 0}, {2, 0}));
}

TEST_CASE("seminorms are stable under grid refinement") {
  const std::vector<Symbol> family = {sy::bracket(1, 1.0), sy::weight(1, 2.0), sy::variable_1d(0.5), sy::cutoff(1, 4.0),
                                      sy::bracket_ratio(1)};
  for (const Symbol& a : family)
    for (int depth_a = 0; depth_a <= 1; ++depth_a)
      for (int depth_b = 0; depth_a + depth_b <= 2; ++depth_b) {
        const Grid g = make_grid(1, 8.0, 128), h = make_grid(1, 8.0, 256);
        const double hi = g.max_frequency();
        const double v1 = seminorm(a, {depth_a, 0}, {depth_b, 0}, band_samples(g, 0.0, hi)).value;
        const double v2 = seminorm(a, {depth_a, 0}, {depth_b, 0}, band_samples(h, 0.0, hi)).value;
        CHECK(std::isfinite(v1));
        CHECK(std::abs(v2 - v1) <= 0.05 * std::max(v2, 1e-300) + 1e-14);
      }
}

TEST_CASE("elliptic families") {
  const Symbol id = sy::elliptic_quadratic(2, identity2(), 1.0);
  CHECK(id({0.3, -1.0}, {2.0, 3.0}).real() == doctest::Approx(13.0));
  symbols::CoefficientMatrix zero;
  for (auto& row : zero)
    for (auto& f : row) f = sy::constant_field(0.0);
  const Symbol root = sy::elliptic_root(2, identity2(), zero, 1.0);
  CHECK(root({1.0, 1.0}, {2.0, -1.0}).real() == doctest::Approx(5.0));

  const Symbol v = sy::variable_1d(0.5);
  const auto m = sy::ellipticity_margin(v, {});
  CHECK(m.gamma >= 1.0 - 1e-12);
  double dense = 1e300;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -20.0 + 40.0 * i / 4000;
    dense = std::min(dense, v({x}, {1.0}).real());
  }
  CHECK(dense >= 1.0);

  symbols::CoefficientMatrix a = identity2();
  symbols::CoefficientMatrix b;
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k) b[l][k] = sy::constant_field(l == k ? 0.6 : 0.0);
  const Symbol h = sy::elliptic_root(2, a, b, 0.5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int i = 0; i < 200; ++i) {
    const Point x{u(rng), u(rng)}, xi{u(rng), u(rng)};
    CHECK(h(x, xi).real() >= 0.5 * (xi[0] * xi[0] + xi[1] * xi[1]) - 1e-12);
  }
  for (int l = 0; l < 2; ++l) b[l][l] = sy::constant_field(1.0);
  CHECK_THROWS_AS(sy::elliptic_root(2, a, b, 0.5), sy::EllipticityError);
}

TEST_CASE("cutoff annulus support") {
  const double R = 3.0;
  for (int i = 0; i <= 600; ++i) {
    const double r = 10.0 * i / 600;
    const double t = theta(R, r);
    if (r <= R || r >= 2 * R) CHECK(t * (1 - t) == 0.0);
    CHECK(bump(r) + theta(1.0, r) == doctest::Approx(1.0));
  }
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(2.0) == 1.0);
}

TEST_CASE("named lookup") {
  const auto names = sy::names();
  CHECK(std::find(names.begin(), names.end(), "free") != names.end());
  CHECK(sy::make("free", {{"dim", 1}})({0.0}, {2.0}).real() == doctest::Approx(-4.0));
  CHECK_THROWS(sy::make("no-such-symbol", {}));
}
