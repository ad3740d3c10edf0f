#pragma once

#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "qslab/symbol.hpp"

namespace qslab {

struct PhasePoint {
  Point x{};
  Point xi{};
};

struct PhaseSample {
  double s = 0.0;
  Point x{};
  Point xi{};
};

enum class FlowStatus { completed, escaped, step_limit };

struct PhaseTrajectory {
  int dim = 1;
  PhasePoint seed;
  double ds = 0.0;
  std::vector<PhaseSample> samples;
  FlowStatus status = FlowStatus::completed;
  /// Set when status is escaped.
  double escape_radius = 0.0;
  double s_escape = 0.0;
};

struct FlowOptions {
  double box_radius = 1e3;
  /// Integrate dX/ds = -d_xi h, dXi/ds = +d_x h.
  bool reverse = false;
  std::size_t max_steps = 50'000'000;
  /// Keep every k-th sample (the last one is always kept).
  int record_every = 1;
};

/// Classical RK4 for dX/ds = d_xi h, dXi/ds = -d_x h.
PhaseTrajectory integrate_flow(const Symbol& h, const PhasePoint& seed, double s_max, double ds,
                               const FlowOptions& options = {});

/// One RK4 step of the Hamiltonian field.
PhasePoint rk4_step(const Symbol& h, const PhasePoint& z, double ds);

/// max_s |h(X, Xi) - h(x0, xi0)| / |h(x0, xi0)|.
double conservation_error(const PhaseTrajectory& traj, const Symbol& h);

/// max over samples of |X(s; x0, r xi0) - X(rs; x0, xi0)| and |Xi(s; x0, r xi0) - r Xi(rs; x0, xi0)|.
double homogeneity_error(const Symbol& h, const PhasePoint& seed, double r, double s_max, double ds);

/// Largest violation of lambda^{-2} |xi0|^2 <= |Xi(s)|^2 <= lambda^2 |xi0|^2 (0 when satisfied).
double pinch_violation(const PhaseTrajectory& traj, double lambda);

enum class EscapeStatus { escaped, trapped, inconclusive };

struct EscapeOptions {
  double s_cap = 200.0;
  double ds = 1e-2;
  double box_radius = 1e3;
};

struct EscapeReport {
  PhasePoint seed;
  EscapeStatus status = EscapeStatus::inconclusive;
  /// First s after which |X(s)| >= mu for the rest of the window.
  double s0 = 0.0;
  double max_radius = 0.0;
  double final_radius = 0.0;
};

/// Trapped: |X| < mu on all of [0, s_cap]. Inconclusive: |X| reached mu but
/// is back inside at s_cap, or the flow left the admissible box undecided.
EscapeReport escape_time(const Symbol& h, const PhasePoint& seed, double mu, const EscapeOptions& options = {});

struct ScanReport {
  std::vector<EscapeReport> seeds;
  EscapeStatus overall = EscapeStatus::escaped;
  double sup_s0 = 0.0;
  int trapped = 0;
  int inconclusive = 0;
};

/// Any trapped seed makes the scan trapped; otherwise any inconclusive seed makes it inconclusive.
ScanReport nontrap_scan(const Symbol& h, const std::vector<PhasePoint>& seeds, double mu,
                        const EscapeOptions& options = {});

/// Sample of {|x| <= r0} x {|xi| = 1}: `count` seeds.
std::vector<PhasePoint> seed_set(int dim, double r0, int count);

std::string to_string(EscapeStatus s);
nlohmann::json to_json(const ScanReport& r, int dim);
/// Columns s, x (or x1, x2), xi (or xi1, xi2).
void write_csv(std::ostream& out, const PhaseTrajectory& traj);

}  // namespace qslab
