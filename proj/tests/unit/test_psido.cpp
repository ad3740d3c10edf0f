#include <doctest.h>

#include "oracles.hpp"
#include "qslab/psido.hpp"
#include "qslab/symbol_library.hpp"

using namespace qslab;
namespace sy = qslab::symbols;

namespace {

double max_entry(const linalg::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Symbol sine() {
  return sy::multiplication(1, [](const std::array<Jet, kMaxDim>& x) { return sin(x[0]); }, "sin x");
}

}  // namespace

TEST_CASE("quantize basics") {
  const Grid g = make_grid(1, oracle::kPi, 32);
  CHECK(max_entry(quantize(sy::constant(1, 1.0), g).matrix() - linalg::Matrix::Identity(32, 32)) < 1e-13);
  const GridFunction s = GridFunction::sample(g, [](const Point& x) { return Complex(std::sin(x[0])); });
  const GridFunction c = GridFunction::sample(g, [](const Point& x) { return Complex(std::cos(x[0])); });
  CHECK(oracle::max_abs_diff(quantize(sy::momentum(1), g).apply(s), c) < 1e-10);
  const Grid h = make_grid(1, 2.5, 32);
  const auto ref = oracle::quantize(h, [](double, double xi) { return Complex(-xi * xi); });
  CHECK(max_entry(quantize(sy::free(1), h).matrix() - ref) < 1e-10);
  const auto ref2 = oracle::quantize(h, [](double x, double xi) { return Complex(std::sqrt(1 + xi * xi) / (1 + x * x), x); });
  const Symbol mixed = sy::bracket(1, 1.0) * sy::weight(1, 2.0) +
                       sy::multiplication(1, [](const std::array<Jet, kMaxDim>& x) { return x[0] * Complex(0, 1); }, "ix", false);
  CHECK(max_entry(quantize(mixed, h).matrix() - ref2) < 1e-10);
}

TEST_CASE("quantization is linear") {
  const Grid g = make_grid(1, 4.0, 64);
  const Symbol a = sy::bracket(1, 1.0) * sy::weight(1, 2.0), b = sine() * sy::momentum(1);
  const linalg::Matrix lhs = quantize(a + b, g).matrix();
  const linalg::Matrix rhs = quantize(a, g).matrix() + quantize(b, g).matrix();
  CHECK(max_entry(lhs - rhs) <= 1e-13 * max_entry(lhs));
}

TEST_CASE("band_norm agrees with an SVD of the projected matrix") {
  const Grid g = make_grid(1, 6.0, 64);
  const DenseOperator a = quantize(sy::bracket(1, 1.0) * sy::weight(1, 2.0), g);
  const DenseOperator p = band_projector(g, 2.0, 6.0);
  const double ref = oracle::spectral_norm((p * a * p).matrix());
  CHECK(band_norm(a, 2.0, 6.0) == doctest::Approx(ref).epsilon(1e-6));
  CHECK(a.norm() == doctest::Approx(oracle::spectral_norm(a.matrix())).epsilon(1e-8));
}

TEST_CASE("composition") {
  const Grid g = make_grid(1, oracle::kPi, 64);
  const Symbol c2 = compose(sy::momentum(1), sine(), 2);
  CHECK(std::abs(c2({0.0}, {2.0}) - Complex(1.0)) < 1e-14);
  // Exact on data whose shifted spectrum stays clear of the Nyquist wrap.
  const DenseOperator exact = quantize(sy::momentum(1), g) * quantize(sine(), g);
  const GridFunction f = apply_multiplier(oracle::random_smooth(g, 4, 0.0),
                                          [](const Point& xi) { return Complex(std::abs(xi[0]) <= 16.0 ? 1.0 : 0.0); });
  CHECK(oracle::max_abs_diff(quantize(c2, g).apply(f), exact.apply(f)) < 1e-10 * sup_norm(f));
  const Symbol ab = compose(sy::bracket(1, 1.0), sy::cutoff(1, 2.0), 3);
  for (double xi : {0.5, 3.0, 7.0})
    CHECK(std::abs(ab({0.7}, {xi}) - sy::bracket(1, 1.0)({0.0}, {xi}) * sy::cutoff(1, 2.0)({0.0}, {xi})) < 1e-14);
  CHECK(compose(sy::bracket(1, 1.0), sine(), 2).order() == doctest::Approx(1.0));
}

TEST_CASE("composition residual decreases with K") {
  const Grid g = make_grid(1, 8.0 * oracle::kPi, 256);
  const Symbol a = sy::bracket(1, 1.0), b = sy::weight(1, 2.0);
  const DenseOperator exact = quantize(a, g) * quantize(b, g);
  const double hi = g.max_frequency() / 2;
  double prev = 1e300;
  for (int K = 1; K <= 3; ++K) {
    const double r = oracle::spectral_norm((band_projector(g, 4.0, hi) * (exact - quantize(compose(a, b, K), g)) *
                                            band_projector(g, 4.0, hi))
                                               .matrix());
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("adjoint") {
  const Grid g = make_grid(1, oracle::kPi, 32);
  const Symbol v = sy::weight(1, 2.0);
  CHECK(max_entry(quantize(adjoint_symbol(v, 1), g).matrix() - quantize(v, g).matrix()) < 1e-14);
  const Symbol d = adjoint_symbol(sy::momentum(1), 3);
  CHECK(std::abs(d({0.4}, {2.0}) - Complex(0.0, -2.0)) < 1e-14);
  const Grid h = make_grid(1, 8.0 * oracle::kPi, 256);
  const Symbol a = sy::bracket(1, 1.0) * sy::weight(1, 2.0);
  const DenseOperator dag = quantize(a, h).adjoint();
  const DenseOperator p = band_projector(h, 4.0, h.max_frequency() / 2);
  double prev = 1e300;
  for (int K = 1; K <= 3; ++K) {
    const double r = oracle::spectral_norm((p * (dag - quantize(adjoint_symbol(a, K), h)) * p).matrix());
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("principal commutator") {
  CHECK(std::abs(principal_commutator(sy::bracket(1, 1.0), sy::cutoff(1, 2.0))({0.3}, {3.0})) == 0.0);
  const Symbol lap = sy::free(1), p = sy::weight(1, 2.0);
  const Symbol br = principal_commutator(lap, p);
  for (double x : {-1.0, 0.5})
    for (double xi : {1.0, -4.0}) {
      const double dp = -2.0 * x / std::pow(1 + x * x, 2);
      CHECK(br({x}, {xi}).real() == doctest::Approx(2.0 * xi * dp));
    }
  // i[Psi_c, Psi_a] minus the quantized bracket is order 0: -i p''.
  const Grid g = make_grid(1, 8.0 * oracle::kPi, 256);
  const DenseOperator A = quantize(lap, g), C = quantize(p, g);
  const DenseOperator comm = Complex(0.0, 1.0) * (C * A - A * C);
  const double hi = g.max_frequency() / 2;
  const double lower = band_norm(comm - quantize(br, g), 4.0, hi);
  const double whole = band_norm(quantize(br, g), 4.0, hi);
  const Symbol second = sy::multiplication(
      1, [](const std::array<Jet, kMaxDim>& x) { return Complex(0.0, -1.0) * (6.0 * x[0] * x[0] - 2.0) * pow(1.0 + x[0] * x[0], -3.0); },
      "-i p''", false);
  CHECK(lower <= 2.0 + 0.05);
  CHECK(lower < whole);
  CHECK(band_norm(comm - quantize(br, g) - quantize(second, g), 4.0, hi) < 0.05 * lower);
  CHECK(std::abs(principal_commutator(sy::weight(1, 2.0), sine())({0.2}, {1.0})) == 0.0);
}

TEST_CASE("Garding defect") {
  const Grid g = make_grid(1, oracle::kPi, 64);
  CHECK(garding_defect(sy::bracket(1, 2.0), g, 0.0).defect >= -1e-12);
  CHECK(garding_defect(sy::constant(1, 0.0), g, 0.0).defect == doctest::Approx(0.0));
  const Symbol neg = -1.0 * sy::isotropic(1);
  CHECK_THROWS_AS(garding_defect(neg, g, 1.0), PreconditionError);
}

TEST_CASE("Neumann inversion") {
  const Grid g = make_grid(1, 4.0, 64);
  const NeumannResult zero = neumann_invert(sy::constant(1, 0.0), g, 3);
  CHECK(max_entry(zero.inverse.matrix() - linalg::Matrix::Identity(64, 64)) < 1e-14);
  const Symbol a = 0.25 * (sy::cutoff(1, 4.0) * sy::bracket(1, -1.0));
  const NeumannResult r = neumann_invert(a, g, 4);
  for (std::size_t k = 1; k < r.residuals.size(); ++k) CHECK(r.residuals[k] <= 0.26 * r.residuals[k - 1]);
  CHECK_THROWS_AS(neumann_invert(sy::constant(1, 0.6), g, 2), PreconditionError);
}

TEST_CASE("gauge symbols") {
  const Symbol p = sy::weight(1, 2.0);
  CHECK(std::abs(gauge_symbol(p, 0.0, 4.0, -1)({0.3}, {20.0}) - 1.0) < 1e-15);
  CHECK(std::abs(gauge_symbol(p, 1.0, 4.0, -1)({0.3}, {3.0}) - 1.0) < 1e-15);
  const Complex far = gauge_symbol(p, 1.0, 4.0, -1)({0.0}, {20.0});
  CHECK(std::abs(far - std::exp(-1.0)) < 1e-14);
  CHECK(std::abs(gauge_symbol(p, 1.0, 4.0, 1)({0.0}, {20.0}) * far - 1.0) < 1e-14);
}

TEST_CASE("order-0 operator norms are stable under refinement") {
  for (const Symbol& a : {sy::bracket_ratio(1), sy::cutoff(1, 2.0) * sy::weight(1, 2.0), sine() * sy::bracket(1, 0.0)}) {
    const double n1 = quantize(a, make_grid(1, 4.0 * oracle::kPi, 128)).norm();
    const double n2 = quantize(a, make_grid(1, 4.0 * oracle::kPi, 256)).norm();
    CHECK(std::abs(n2 / n1 - 1.0) <= 0.1);
  }
}

TEST_CASE("parametrix residual decays in R") {
  const Grid g = make_grid(1, 4.0 * oracle::kPi, 256);
  const Symbol a = sy::bracket(1, 1.0) * (sy::constant(1, 1.0) + 0.5 * sy::weight(1, 2.0));
  const DenseOperator A = quantize(a, g), I = DenseOperator::identity(g);
  const double hi = g.max_frequency() / 2;
  const double r4 = band_norm(quantize(parametrix(a, 4.0, 3), g) * A - I, 4.0, hi);
  const double r8 = band_norm(quantize(parametrix(a, 8.0, 3), g) * A - I, 8.0, hi);
  CHECK(r8 < r4);
}

TEST_CASE("operator CSV export") {
  const Grid g = make_grid(1, 1.0, 8);
  std::ostringstream out;
  write_csv(out, DenseOperator::identity(g));
  const std::string s = out.str();
  CHECK(std::count(s.begin(), s.end(), '\n') >= 8);
}
