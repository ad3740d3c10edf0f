#include <doctest.h>

#include <sstream>

#include "qslab/hamflow.hpp"
#include "qslab/symbol_library.hpp"

using namespace qslab;
namespace sy = qslab::symbols;

namespace {

double position_error(const PhaseTrajectory& a, const PhaseTrajectory& b) {
  const PhaseSample& p = a.samples.back();
  const PhaseSample& q = b.samples.back();
  return std::hypot(p.x[0] - q.x[0], p.xi[0] - q.xi[0]);
}

}  // namespace

TEST_CASE("free flow closed form") {
  const Symbol h = sy::isotropic(1);
  const PhaseTrajectory t = integrate_flow(h, {{0.0}, {1.0}}, 0.5, 0.01);
  CHECK(std::abs(t.samples.back().s - 0.5) < 1e-12);
  CHECK(std::abs(t.samples.back().x[0] - 1.0) < 1e-12);
  CHECK(std::abs(t.samples.back().xi[0] - 1.0) < 1e-12);
  const PhaseTrajectory t2 = integrate_flow(sy::isotropic(2), {{1.0, -2.0}, {0.6, 0.8}}, 3.0, 0.05);
  for (const auto& s : t2.samples) {
    CHECK(s.xi[0] == 0.6);
    CHECK(s.xi[1] == 0.8);
    CHECK(std::abs(s.x[0] - (1.0 + 1.2 * s.s)) < 1e-12);
  }
  CHECK(conservation_error(t2, sy::isotropic(2)) < 1e-12);
  for (std::size_t i = 1; i < t2.samples.size(); ++i) CHECK(t2.samples[i].s > t2.samples[i - 1].s);
}

TEST_CASE("conservation and RK4 order on the variable 1D metric") {
  const Symbol h = sy::variable_1d(0.5);
  CHECK(h({0.0}, {1.0}).real() == doctest::Approx(1.5));
  const PhaseTrajectory fine = integrate_flow(h, {{0.0}, {1.0}}, 10.0, 1e-3);
  CHECK(conservation_error(fine, h) <= 1e-8);
  CHECK(pinch_violation(fine, std::sqrt(1.5)) == 0.0);
  const PhaseTrajectory ref = integrate_flow(h, {{0.0}, {1.0}}, 2.0, 0.1 / 64);
  const double e1 = position_error(integrate_flow(h, {{0.0}, {1.0}}, 2.0, 0.1), ref);
  const double e2 = position_error(integrate_flow(h, {{0.0}, {1.0}}, 2.0, 0.05), ref);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.3));
}

TEST_CASE("homogeneity identities") {
  CHECK(homogeneity_error(sy::isotropic(1), {{0.3}, {1.0}}, 2.0, 2.0, 0.01) <= 1e-12);
  CHECK(homogeneity_error(sy::variable_1d(0.5), {{0.3}, {1.0}}, 1.0, 2.0, 1e-3) == 0.0);
  CHECK(homogeneity_error(sy::variable_1d(0.5), {{0.3}, {1.0}}, 3.0, 2.0, 1e-3) <= 1e-7);
}

TEST_CASE("time reversal") {
  const Symbol h = sy::variable_1d(0.5);
  const PhaseTrajectory fwd = integrate_flow(h, {{-1.0}, {0.7}}, 5.0, 1e-3);
  const PhaseSample end = fwd.samples.back();
  FlowOptions back;
  back.reverse = true;
  const PhaseTrajectory bwd = integrate_flow(h, {end.x, end.xi}, 5.0, 1e-3, back);
  CHECK(std::abs(bwd.samples.back().x[0] + 1.0) < 1e-8);
  CHECK(std::abs(bwd.samples.back().xi[0] - 0.7) < 1e-8);
}

TEST_CASE("escape times") {
  const Symbol h = sy::isotropic(1);
  const EscapeReport r = escape_time(h, {{0.0}, {1.0}}, 10.0);
  CHECK(r.status == EscapeStatus::escaped);
  CHECK(std::abs(r.s0 - 5.0) <= 1e-2);
  const EscapeReport out = escape_time(h, {{12.0}, {1.0}}, 10.0);
  CHECK(out.status == EscapeStatus::escaped);
  CHECK(out.s0 == 0.0);
  const EscapeReport well = escape_time(sy::annular_well(), {{3.25, 0.0}, {0.0, 1.0}}, 10.0);
  CHECK(well.status == EscapeStatus::trapped);
  CHECK(well.max_radius <= 4.0);
  CHECK(to_string(EscapeStatus::inconclusive) != to_string(EscapeStatus::trapped));
}

TEST_CASE("non-trapping scans") {
  std::vector<PhasePoint> origin;
  for (int k = 0; k < 16; ++k) {
    const double a = 2 * std::numbers::pi * k / 16;
    origin.push_back({{0.0, 0.0}, {std::cos(a), std::sin(a)}});
  }
  const ScanReport free = nontrap_scan(sy::isotropic(2), origin, 10.0);
  CHECK(free.overall == EscapeStatus::escaped);
  CHECK(std::abs(free.sup_s0 - 5.0) <= 1e-2);
  const auto seeds = seed_set(1, 2.0, 32);
  CHECK(seeds.size() == 32);
  const ScanReport flat = nontrap_scan(sy::variable_1d(0.5), seeds, 10.0);
  CHECK(flat.overall == EscapeStatus::escaped);
  CHECK(flat.trapped == 0);
  const ScanReport well = nontrap_scan(sy::annular_well(), {{{3.25, 0.0}, {0.0, 1.0}}, {{0.0, 0.0}, {1.0, 0.0}}}, 10.0);
  CHECK(well.overall == EscapeStatus::trapped);
  CHECK(well.trapped >= 1);
  const auto j = to_json(well, 2);
  CHECK(j.contains("seeds"));
}

TEST_CASE("trajectory CSV") {
  std::ostringstream out;
  write_csv(out, integrate_flow(sy::isotropic(2), {{0.0, 0.0}, {1.0, 0.0}}, 0.1, 0.05));
  CHECK(out.str().rfind("s,x1,x2,xi1,xi2\n", 0) == 0);
}
