#include <doctest.h>

#include "oracles.hpp"
#include "qslab/doi.hpp"
#include "qslab/psido.hpp"
#include "qslab/symbol_library.hpp"

using namespace qslab;
namespace sy = qslab::symbols;

namespace {

// Independent copy of the cutoff profile: 1 on r <= a, 0 on r >= b.
double falloff(double r, double a, double b) {
  auto g = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
  const double t = (r - a) / (b - a);
  if (t <= 0) return 1.0;
  if (t >= 1) return 0.0;
  return 1.0 - g(t) / (g(t) + g(1 - t));
}

SampleSet lattice() { return doi::phase_lattice(1, 8.0, 64, 1.0, 8.0, 64); }

}  // namespace

TEST_CASE("transport escape symbol") {
  const auto w = doi::lambda2_weight();
  const Symbol p = doi::transport_p(1, w);
  CHECK(std::abs(p({0.0}, {1.0})) < 1e-15);
  const double lhs = 2.0 * p.derivative({0.0}, {1.0}, {0, 0}, {1, 0}).real();
  CHECK(lhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(lhs >= 2.0 / std::sqrt(2.0) - 1e-14);
  CHECK(std::abs(p.derivative({0.7}, {0.0}, {0, 0}, {1, 0})) == 0.0);
  const SampleSet s = lattice();
  CHECK(s.xs.size() == 64);
  CHECK(s.xis.size() == 64);
  const doi::BoundCheck b = doi::check_transport_bound(p, w, s);
  CHECK(b.samples == 64 * 64);
  CHECK(b.violations == 0);
  CHECK(b.worst_slack >= -1e-12);
  doi::TransportWeight rising{"rising", [](const Jet& r) { return 1.0 + r * r; }, [](const Jet& r) { return r + r * r * r / 3.0; }};
  CHECK_THROWS(doi::check_transport_bound(doi::transport_p(1, rising), rising, s));
}

TEST_CASE("q1") {
  const Symbol h = sy::isotropic(1);
  const Symbol q1 = doi::build_q1(h, 4.0);
  for (double x : {6.0, -7.5})
    for (double xi : {1.0, -3.0}) CHECK(q1({x}, {xi}).real() == doctest::Approx(4.0 * x * xi / std::sqrt(1 + xi * xi)));
  CHECK(q1({3.9}, {2.0}).real() == 0.0);
  // Cross-check with the Poisson bracket of h and |x|^2.
  const Symbol r2 = sy::multiplication(1, [](const std::array<Jet, kMaxDim>& x) { return x[0] * x[0]; }, "|x|^2");
  const Complex hr = poisson_bracket(h, r2)({6.0}, {2.0});
  CHECK(q1({6.0}, {2.0}).real() == doctest::Approx(hr.real() / std::sqrt(5.0)));
  const doi::Q1Report rep = doi::check_q1(sy::variable_1d(0.5), 4.0, lattice());
  CHECK(rep.violations == 0);
  CHECK(rep.c_fit > 0.0);
}

TEST_CASE("q2") {
  const double M = 4.0;
  CHECK(doi::phi1({M + 1.5}, 1, M) == doctest::Approx(falloff(M + 1.5, M + 1, M + 2)).epsilon(1e-14));
  CHECK(doi::phi2({1.5}, 1) == doctest::Approx(1.0 - falloff(1.5, 1, 2)).epsilon(1e-14));
  const Symbol q2 = doi::build_q2(sy::isotropic(1), M);
  CHECK(q2({20.0}, {1.0}).real() == 0.0);
  const double ref = -oracle::adaptive_simpson([&](double s) { return falloff(2 * s, M + 1, M + 2) * std::sqrt(2.0); }, 0.0,
                                               (M + 2) / 2, 1e-12);
  CHECK(q2({0.0}, {1.0}).real() == doctest::Approx(ref).epsilon(1e-6));
  const double ratio = q2({0.5}, {2.0}).real() / q2({0.5}, {1.0}).real();
  CHECK(ratio == doctest::Approx(std::sqrt(5.0) / (2.0 * std::sqrt(2.0))).epsilon(1e-6));
  CHECK_THROWS_AS(doi::build_q2(sy::annular_well(), 4.0), doi::Refusal);
}

TEST_CASE("q and the escape function") {
  const SampleSet s = lattice();
  for (const Symbol& h : {sy::isotropic(1), sy::variable_1d(0.5)}) {
    const doi::QReport q = doi::build_q(h, 4.0, s);
    CHECK(q.c > 0.0);
    CHECK(std::isfinite(q.growth));
    const Symbol q1 = doi::build_q1(h, 4.0);
    CHECK(q.q({7.5}, {3.0}).real() == doctest::Approx(q.N_scale * q1({7.5}, {3.0}).real()));
    const doi::EscapeFunction e = doi::escape_function(h, q, s);
    CHECK(e.violations == 0);
    CHECK(e.B_fit > 0.0);
    const double K = e.provenance["K"], eps = e.provenance["eps"];
    CHECK(e.sup_p <= 1.0 + K * K * oracle::kPi + 2 * eps);
    const auto j = doi::to_json(e, 1);
    CHECK(j["violations"] == 0);
    CHECK(j["provenance"]["construction"] == "doi");

    // Bracket along trajectories inside the scanned box.
    auto fp = [&e](const Point& x, const Point& xi) { return e.p(x, xi).real(); };
    for (double x0 : {-3.0, 0.5, 2.0}) {
      const PhaseTrajectory t = integrate_flow(h, {{x0}, {1.5}}, 2.0, 0.05);
      for (const auto& smp : t.samples) {
        if (std::abs(smp.x[0]) > 8.0) continue;
        const double g = doi::flow_derivative(h, fp, smp.x, smp.xi);
        const double w = std::abs(smp.xi[0]) / (1.0 + smp.x[0] * smp.x[0]);
        CHECK(g >= e.B_fit * w - 1.0 / e.B_fit - 1e-6);
      }
    }
  }
}

TEST_CASE("p of a vanishing q") {
  const SampleSet s = lattice();
  const Symbol zero = sy::constant(1, 0.0).with_order(1.0);
  const doi::EscapeFunction e = doi::build_p(sy::isotropic(1), zero, 0.1, s, 1e-4);
  CHECK(e.sup_p == 0.0);
  CHECK(e.violations == 0);
  CHECK(e.B_fit > 0.0);
}

TEST_CASE("escape time grows linearly with |X|") {
  const Symbol h = sy::variable_1d(0.5);
  const PhaseTrajectory t = integrate_flow(h, {{-1.0}, {1.0}}, 20.0, 0.01);
  const double s_off = 1.0;
  double C = 0.0;
  for (const auto& smp : t.samples)
    if (smp.s > s_off) C = std::max(C, (smp.s - s_off) / std::abs(smp.x[0]));
  CHECK(C > 0.0);
  CHECK(C < 1.0);
}
