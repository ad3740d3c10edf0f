#pragma once

#include <functional>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "qslab/hamflow.hpp"
#include "qslab/symbol.hpp"

namespace qslab::doi {

/// The construction could not be completed under verified hypotheses.
class Refusal : public Error {
 public:
  Refusal(const std::string& what, Point x, Point xi) : Error(what), x(x), xi(xi) {}
  Point x;
  Point xi;
};

/// (x, xi) lattice: x uniform in [-extent, extent]^dim, xi with
/// xi_min <= |xi| <= xi_max (both signs in 1D, eight directions in 2D).
SampleSet phase_lattice(int dim, double x_extent, int nx, double xi_min, double xi_max, int nxi);

/// Radial decreasing weight lambda(r) with primitive f(t) = int_0^t lambda(|r|) dr.
struct TransportWeight {
  std::string name;
  std::function<Jet(const Jet&)> lambda;
  std::function<Jet(const Jet&)> primitive;
};

/// lambda_2(r) = <r>^{-2}, f = arctan.
TransportWeight lambda2_weight();

/// p(x, xi) = Phi(x) . xi / <xi>, Phi = (f(x_1), ..., f(x_n)).
Symbol transport_p(int dim, const TransportWeight& weight);

struct BoundCheck {
  int samples = 0;
  int violations = 0;
  /// Smallest slack lhs - rhs observed.
  double worst_slack = 0.0;
  Point worst_x{};
  Point worst_xi{};
};

/// 2 xi . grad_x p >= 2 lambda(|x|) |xi|^2 / <xi> with analytic gradients.
/// Throws when lambda is not decreasing along the sampled radii.
BoundCheck check_transport_bound(const Symbol& p, const TransportWeight& weight, const SampleSet& samples);

/// Derivative of f along the Hamilton flow of h at (x, xi): centered difference
/// over the exact (RK4) flow with step delta.
double flow_derivative(const Symbol& h, const std::function<double(const Point&, const Point&)>& f, const Point& x,
                       const Point& xi, double delta = 1e-3);

struct Q1Report {
  Symbol q1;
  /// Fitted c in H_h q1 >= c psi(|x|^2) |xi|^2 / <xi>.
  double c_fit = 0.0;
  int violations = 0;
  Point worst_x{};
  Point worst_xi{};
};

/// q1 = <xi>^{-1} psi(|x|^2) H_h(|x|^2); psi = 0 for t <= M^2, 1 for t >= (M+1)^2.
Symbol build_q1(const Symbol& h, double M);
/// build_q1 plus the positivity scan of H_h q1 (analytic bracket).
Q1Report check_q1(const Symbol& h, double M, const SampleSet& samples);

struct Q2Options {
  double s_cap = 200.0;
  double ds = 1e-2;
  /// Trailing window (in s) over which phi_1(X) must stay zero with |X| > M + 2.
  double trailing_window = 1.0;
  /// Seeds for the non-trapping precheck; empty means seed_set(dim, M + 2, 32).
  std::vector<PhasePoint> seeds;
};

/// phi_1: 1 on |x| <= M + 1, 0 on |x| >= M + 2.
double phi1(const Point& x, int dim, double M);
/// phi_2: 0 on |xi| <= 1, 1 on |xi| >= 2.
double phi2(const Point& xi, int dim);

/// q2(x, xi) = -|xi|^{-1} int_0^inf phi_1(X(s; x, xi/|xi|)) <|xi| Xi(s; x, xi/|xi|)> ds,
/// evaluated lazily with a cache of unit-speed trajectories. Throws Refusal when
/// the non-trapping precheck fails or a trajectory is undecided at s_cap.
Symbol build_q2(const Symbol& h, double M, const Q2Options& options = {});

struct QReport {
  Symbol q;
  double N_scale = 0.0;
  double c = 0.0;
  double d = 0.0;
  /// sup |q| / <x> over the samples.
  double growth = 0.0;
  Point worst_x{};
  Point worst_xi{};
};

/// q = N q1 + phi_1(x) phi_2(xi) q2; scans N over `n_scales` and keeps the
/// first with c > 0 in H_h q >= c |xi| - d (bracket along the flow).
QReport build_q(const Symbol& h, double M, const SampleSet& samples, const std::vector<double>& n_scales = {1, 2, 4, 8, 16},
                const Q2Options& options = {});

struct EscapeFunction {
  Symbol p;
  nlohmann::json provenance;
  double B_fit = 0.0;
  int violations = 0;
  Point worst_x{};
  Point worst_xi{};
  /// sup |p| over the samples.
  double sup_p = 0.0;
};

/// p = (q/<x>) Psi_0 + [f(|q|) + 2 eps][Psi_+ - Psi_-], f(t) = 2 K^2 arctan t,
/// K = max(1, sup |q| / <x>) over the samples.
Symbol build_p_symbol(const Symbol& q, double eps, double K);

/// Fits B in H_h p >= B |xi| / <x>^2 - 1/B over the samples. A sample violates
/// when its bracket falls below the bound at B = b_floor.
EscapeFunction build_p(const Symbol& h, const Symbol& q, double eps, const SampleSet& samples, double b_floor);

/// Scans eps and returns the first escape function with zero violations
/// (or the best one when none passes).
EscapeFunction escape_function(const Symbol& h, const QReport& q, const SampleSet& samples,
                               const std::vector<double>& eps_values = {0.05, 0.1, 0.2}, double b_floor = 1e-4);

nlohmann::json to_json(const EscapeFunction& e, int dim);

}  // namespace qslab::doi
