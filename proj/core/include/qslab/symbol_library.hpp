#pragma once

#include <string>
#include <vector>

#include "qslab/symbol.hpp"

namespace qslab::symbols {

/// Scalar coefficient field c(x) evaluated on jet coordinates.
using Field = std::function<Jet(const std::array<Jet, kMaxDim>& x)>;
using CoefficientMatrix = std::array<std::array<Field, kMaxDim>, kMaxDim>;

/// Where ellipticity is checked: x on a (2 n + 1)^dim lattice of [-box, box]^dim
/// and xi on `directions` unit vectors (a single pair +-1 in 1D).
struct EllipticityScan {
  double box = 8.0;
  int half_points = 16;
  int directions = 64;
};

class EllipticityError : public PreconditionError {
 public:
  EllipticityError(const std::string& what, Point x, Point xi, double margin)
      : PreconditionError(what), x(x), xi(xi), margin(margin) {}
  Point x;
  Point xi;
  double margin;
};

/// -|xi|^2, the symbol of the Laplacian.
Symbol free(int dim);
/// |xi|^2.
Symbol isotropic(int dim);
Symbol constant(int dim, Complex c);
/// i xi_axis, the symbol of d/dx_axis.
Symbol momentum(int dim, int axis = 0);
/// <xi>^s.
Symbol bracket(int dim, double s);
/// xi_axis / <xi>.
Symbol bracket_ratio(int dim, int axis = 0);
/// theta_R(xi) = 1 - Phi(xi / R).
Symbol cutoff(int dim, double R);
/// lambda_m(x) = <x>^{-m}.
Symbol weight(int dim, double m);
/// Multiplication by c(x).
Symbol multiplication(int dim, Field c, std::string name, bool real_valued = true);

/// a_lk(x) xi_l xi_k, checked for a_lk xi_l xi_k >= gamma |xi|^2.
Symbol elliptic_quadratic(int dim, CoefficientMatrix a, double gamma, EllipticityScan scan = {},
                          bool asymptotically_flat = false);
/// sqrt((a_lk xi_l xi_k)^2 - |b_lk xi_l xi_k|^2), checked for h >= gamma |xi|^2.
Symbol elliptic_root(int dim, CoefficientMatrix a, CoefficientMatrix b, double gamma, EllipticityScan scan = {},
                     bool asymptotically_flat = false);

/// 1D a(x) xi^2 with a(x) = 1 + amplitude e^{-x^2}.
Symbol variable_1d(double amplitude = 0.5);
/// 2D (1 + depth e^{-(|x| - radius)^2})^{-1} |xi|^2.
Symbol annular_well(double depth = 4.0, double radius = 3.0);

/// Coefficient helpers.
Field constant_field(double c);
/// c (1 + amplitude e^{-|x|^2}).
Field gaussian_field(double c, double amplitude);

/// Library lookup by name and JSON parameter record.
Symbol make(const std::string& name, const nlohmann::json& params);
std::vector<std::string> names();

/// Smallest h(x, xi) / |xi|^2 over the scan, with its location.
struct EllipticityMargin {
  double gamma = 0.0;
  Point x{};
  Point xi{};
};
EllipticityMargin ellipticity_margin(const Symbol& h, const EllipticityScan& scan);

}  // namespace qslab::symbols
