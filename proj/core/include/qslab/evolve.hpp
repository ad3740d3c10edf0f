#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "qslab/grid.hpp"

namespace qslab {

/// e^{-it|xi|^2}: the propagator of u_t = i Delta u.
GridFunction free_evolve(const GridFunction& u0, double t);
/// e^{-eps t |xi|^4}.
GridFunction viscous_evolve(const GridFunction& u0, double eps, double t);
/// Low-pass phi^(delta xi) with phi^ = 1 on |xi| <= 1 and 0 on |xi| >= 2.
GridFunction bona_smith(const GridFunction& u0, double delta);

/// Spectral d/dx_axis.
GridFunction derivative(const GridFunction& f, int axis);
/// Spectral Laplacian.
GridFunction laplacian(const GridFunction& f);

/// G(u, conj u) = sum_j c_j u^{p_j} conj(u)^{q_j}.
struct Polynomial {
  struct Term {
    Complex c;
    int p = 0;
    int q = 0;
  };
  std::vector<Term> terms;

  Complex operator()(Complex u) const;
  /// Largest p + q.
  int degree() const;
  static Polynomial cubic();  // u^2 conj(u)
};

struct NormRow {
  double t = 0.0;
  double l2 = 0.0;
  double hs = 0.0;
  double weighted_l2_m2 = 0.0;
  std::optional<double> cube_sup;
};

enum class RunStatus { ok, diverged };

struct EvolutionRecord {
  Grid grid;
  std::vector<double> times{};
  /// States at `times` (only the saved ones; see state_times).
  std::vector<GridFunction> states{};
  std::vector<double> state_times{};
  std::vector<NormRow> ledger{};
  double s = 0.0;
  RunStatus status = RunStatus::ok;
  double diverged_at = 0.0;
  std::string message{};
  nlohmann::json metadata = nlohmann::json::object();

  const GridFunction& final_state() const { return states.back(); }
};

NormRow norm_row(const GridFunction& u, double t, double s);

/// Free evolution sampled at t_n = n T / steps; states kept every `save_every` steps.
EvolutionRecord free_record(const GridFunction& u0, double T, int steps, double s = 0.0, int save_every = 1);

struct PicardOptions {
  double eps = 0.1;
  double T = 0.1;
  double dt = 1e-3;
  double tol = 1e-10;
  int max_iterations = 200;
  /// Initial window T_eps = window_factor * eps, halved until the empirical
  /// contraction factor (from iterate 2 on) is <= contraction_target.
  double window_factor = 0.6;
  double contraction_target = 0.5;
  double s = 2.0;
  int save_every = 1;
  /// Perturbation of the initial iterate (uniqueness stress); zero disables.
  double perturbation = 0.0;
  std::uint64_t seed = 1;
};

/// Pointwise data available to QLCP coefficients.
struct CoefficientArgs {
  Point x{};
  double t = 0.0;
  Complex u;
  std::array<Complex, kMaxDim> grad_u{};
};

/// L(u) v = i a_lk d_l d_k v + i b_lk d_l d_k conj(v) + b1_l d_l v + b2_l d_l conj(v) + c1 v + c2 conj(v) + f.
struct CoefficientSet {
  std::function<double(const CoefficientArgs&, int, int)> a;
  std::function<Complex(const CoefficientArgs&, int, int)> b;
  std::function<Complex(const CoefficientArgs&, int)> b1;
  std::function<Complex(const CoefficientArgs&, int)> b2;
  std::function<Complex(const CoefficientArgs&)> c1;
  std::function<Complex(const CoefficientArgs&)> c2;
  std::function<Complex(const CoefficientArgs&)> f;
  bool depends_on_u = false;
  bool depends_on_gradient = false;

  static CoefficientSet laplacian();
  /// 1D a = 1 + kappa |u|^2.
  static CoefficientSet quasilinear_1d(double kappa);
};

/// min over grid points and unit xi of <a xi, xi> - |<b xi, xi>| along u.
double ellipticity_margin(const CoefficientSet& c, const GridFunction& u, double t);

/// L(w) w at time t with spectral derivatives.
GridFunction apply_qlcp(const CoefficientSet& c, const GridFunction& w, double t);

/// Picard iteration for Gamma w(t) = e^{-eps t Delta^2} u0 + int_0^t e^{-eps (t - t') Delta^2} [i Delta w + G] dt'.
EvolutionRecord picard_semilinear(const GridFunction& u0, const Polynomial& G, const PicardOptions& options);
/// Picard iteration for the regularized quasilinear problem with nonlinearity L(w) w.
EvolutionRecord qlcp_solve(const GridFunction& u0, const CoefficientSet& coeffs, const PicardOptions& options);

/// u_t = i Delta u + b1 . grad u, integrating-factor RK4 with exact free flow.
EvolutionRecord drift_evolve(const GridFunction& u0, const std::function<Complex(const Point&, int)>& b1, double T,
                             int steps, int save_every = 1);

/// max over the common time lattice of ||u - v||_{L^2}; lattices must agree.
double sup_difference(const EvolutionRecord& a, const EvolutionRecord& b);

struct EnergyBudget {
  double C = 0.0;
  double alpha = 0.0;
  double T0 = 0.0;
  /// f1(t) = sup_{r <= t} ||u(r)||_{H^s}^2 at the record times.
  std::vector<std::pair<double, double>> f1;
  bool holds = false;
  bool partial = false;
};

/// T0 = min{1/(2C), 1/(C 4^alpha ||u0||^{2 alpha - 2})}, alpha = (deg G + 1) / 2.
double energy_time(double C, double alpha, double u0_norm);
/// 2 max_t ||G(u)||_{H^s} / (||u||^3 + ||u||) over the record.
double fit_energy_constant(const EvolutionRecord& record, const Polynomial& G);
EnergyBudget energy_budget(const EvolutionRecord& record, const Polynomial& G, double C);

/// Columns t,l2,hs,weighted_l2_m2,cube_sup.
void write_norms_csv(std::ostream& out, const EvolutionRecord& record);
nlohmann::json to_json(const EvolutionRecord& record);

}  // namespace qslab
