#include "qslab/symbol_library.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qslab/cutoffs.hpp"

namespace qslab::symbols {

namespace {

Jet xi_square(const PhaseJet& v, int dim) { return squared_norm(v.xi, dim); }

void require_dim(int dim) {
  if (dim != 1 && dim != 2) throw PreconditionError("symbol library: dim must be 1 or 2");
}

Jet quadratic_form(const CoefficientMatrix& a, const PhaseJet& v, int dim) {
  Jet s(v.x[0].layout());
  for (int l = 0; l < dim; ++l)
    for (int k = 0; k < dim; ++k) s += a[l][k](v.x) * v.xi[l] * v.xi[k];
  return s;
}

// Radius regularized at the origin so that jets stay finite there.
constexpr double kRadiusSmoothing = 1e-2;

}  // namespace

Symbol free(int dim) {
  require_dim(dim);
  SymbolTraits t{.real_valued = true, .homogeneous_degree2 = true, .x_independent = true};
  return Symbol(
      dim, 2.0, "free",
      [dim](const Point& x, const Point& xi, const JetLayout& l) { return -xi_square(phase_variables(l, dim, x, xi), dim); },
      {}, t);
}

Symbol isotropic(int dim) {
  require_dim(dim);
  SymbolTraits t{.real_valued = true,
                 .homogeneous_degree2 = true,
                 .x_independent = true,
                 .elliptic = true,
                 .asymptotically_flat = true};
  return Symbol(
      dim, 2.0, "isotropic",
      [dim](const Point& x, const Point& xi, const JetLayout& l) { return xi_square(phase_variables(l, dim, x, xi), dim); },
      {}, t);
}

Symbol constant(int dim, Complex c) {
  require_dim(dim);
  SymbolTraits t{.real_valued = c.imag() == 0.0, .x_independent = true};
  return Symbol(
      dim, 0.0, "constant", [c](const Point&, const Point&, const JetLayout& l) { return Jet(l, c); },
      {{"re", c.real()}, {"im", c.imag()}}, t);
}

Symbol momentum(int dim, int axis) {
  require_dim(dim);
  if (axis < 0 || axis >= dim) throw PreconditionError("momentum: axis out of range");
  SymbolTraits t{.x_independent = true};
  return Symbol(
      dim, 1.0, "momentum",
      [dim, axis](const Point& x, const Point& xi, const JetLayout& l) {
        return phase_variables(l, dim, x, xi).xi[axis] * Complex(0.0, 1.0);
      },
      {{"axis", axis}}, t);
}

Symbol bracket(int dim, double s) {
  require_dim(dim);
  SymbolTraits t{.real_valued = true, .x_independent = true, .elliptic = s >= 0.0};
  return Symbol(
      dim, s, "bracket",
      [dim, s](const Point& x, const Point& xi, const JetLayout& l) {
        return pow(xi_square(phase_variables(l, dim, x, xi), dim) + 1.0, 0.5 * s);
      },
      {{"s", s}}, t);
}

Symbol bracket_ratio(int dim, int axis) {
  require_dim(dim);
  if (axis < 0 || axis >= dim) throw PreconditionError("bracket_ratio: axis out of range");
  SymbolTraits t{.real_valued = true, .x_independent = true};
  return Symbol(
      dim, 0.0, "bracket-ratio",
      [dim, axis](const Point& x, const Point& xi, const JetLayout& l) {
        PhaseJet v = phase_variables(l, dim, x, xi);
        return v.xi[axis] * pow(xi_square(v, dim) + 1.0, -0.5);
      },
      {{"axis", axis}}, t);
}

Symbol cutoff(int dim, double R) {
  require_dim(dim);
  if (!(R > 0.0)) throw PreconditionError("cutoff: R must be positive");
  SymbolTraits t{.real_valued = true, .x_independent = true};
  return Symbol(
      dim, 0.0, "cutoff",
      [dim, R](const Point& x, const Point& xi, const JetLayout& l) {
        return theta(R, phase_variables(l, dim, x, xi).xi, dim);
      },
      {{"R", R}}, t);
}

Symbol weight(int dim, double m) {
  require_dim(dim);
  SymbolTraits t{.real_valued = true};
  return Symbol(
      dim, 0.0, "weight",
      [dim, m](const Point& x, const Point& xi, const JetLayout& l) {
        return pow(squared_norm(phase_variables(l, dim, x, xi).x, dim) + 1.0, -0.5 * m);
      },
      {{"m", m}}, t);
}

Symbol multiplication(int dim, Field c, std::string name, bool real_valued) {
  require_dim(dim);
  SymbolTraits t{.real_valued = real_valued};
  return Symbol(
      dim, 0.0, std::move(name),
      [dim, c](const Point& x, const Point& xi, const JetLayout& l) { return c(phase_variables(l, dim, x, xi).x); }, {},
      t);
}

namespace {

std::vector<Point> unit_directions(int dim, int count) {
  if (dim == 1) return {Point{1.0, 0.0}, Point{-1.0, 0.0}};
  std::vector<Point> d;
  for (int k = 0; k < count; ++k) {
    double a = 2.0 * std::numbers::pi * k / count;
    d.push_back({std::cos(a), std::sin(a)});
  }
  return d;
}

std::vector<Point> box_points(int dim, double box, int half) {
  std::vector<Point> pts;
  const int n = 2 * half + 1;
  auto coord = [&](int i) { return half == 0 ? 0.0 : -box + box * i / half; };
  if (dim == 1) {
    for (int i = 0; i < n; ++i) pts.push_back({coord(i), 0.0});
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pts.push_back({coord(i), coord(j)});
  }
  return pts;
}

Symbol checked(Symbol h, double gamma, const EllipticityScan& scan) {
  EllipticityMargin m = ellipticity_margin(h, scan);
  if (!(m.gamma >= gamma * (1.0 - 1e-12))) {
    std::ostringstream msg;
    msg << h.name() << ": ellipticity h >= " << gamma << "|xi|^2 fails, worst ratio " << m.gamma << " at x=("
        << m.x[0] << "," << m.x[1] << ") xi=(" << m.xi[0] << "," << m.xi[1] << ")";
    throw EllipticityError(msg.str(), m.x, m.xi, m.gamma);
  }
  return h;
}

}  // namespace

EllipticityMargin ellipticity_margin(const Symbol& h, const EllipticityScan& scan) {
  EllipticityMargin worst{1e300, {}, {}};
  for (const Point& x : box_points(h.dim(), scan.box, scan.half_points)) {
    for (const Point& xi : unit_directions(h.dim(), scan.directions)) {
      Complex v = h(x, xi);
      double ratio = std::abs(v.imag()) > 1e-12 ? -1e300 : v.real();
      if (ratio < worst.gamma) worst = {ratio, x, xi};
    }
  }
  return worst;
}

Symbol elliptic_quadratic(int dim, CoefficientMatrix a, double gamma, EllipticityScan scan, bool asymptotically_flat) {
  require_dim(dim);
  if (!(gamma > 0.0)) throw PreconditionError("elliptic_quadratic: gamma must be positive");
  SymbolTraits t{.real_valued = true,
                 .homogeneous_degree2 = true,
                 .elliptic = true,
                 .asymptotically_flat = asymptotically_flat};
  Symbol h(
      dim, 2.0, "elliptic-quadratic",
      [dim, a](const Point& x, const Point& xi, const JetLayout& l) {
        return quadratic_form(a, phase_variables(l, dim, x, xi), dim);
      },
      {{"gamma", gamma}}, t);
  return checked(std::move(h), gamma, scan);
}

Symbol elliptic_root(int dim, CoefficientMatrix a, CoefficientMatrix b, double gamma, EllipticityScan scan,
                     bool asymptotically_flat) {
  require_dim(dim);
  if (!(gamma > 0.0)) throw PreconditionError("elliptic_root: gamma must be positive");
  SymbolTraits t{.real_valued = true,
                 .homogeneous_degree2 = true,
                 .elliptic = true,
                 .asymptotically_flat = asymptotically_flat};
  Symbol h(
      dim, 2.0, "elliptic-root",
      [dim, a, b](const Point& x, const Point& xi, const JetLayout& l) {
        PhaseJet v = phase_variables(l, dim, x, xi);
        Jet axx = quadratic_form(a, v, dim);
        Jet bxx = quadratic_form(b, v, dim);
        Jet d = axx * axx - bxx * bxx.conj();
        if (d.value().real() <= 0.0) return Jet(l, std::sqrt(std::max(d.value().real(), 0.0)));
        return sqrt(d.real());
      },
      {{"gamma", gamma}}, t);
  return checked(std::move(h), gamma, scan);
}

Field constant_field(double c) {
  return [c](const std::array<Jet, kMaxDim>& x) { return Jet(x[0].layout(), c); };
}

Field gaussian_field(double c, double amplitude) {
  return [c, amplitude](const std::array<Jet, kMaxDim>& x) {
    Jet r2 = x[0] * x[0] + x[1] * x[1];
    return (exp(-r2) * amplitude + 1.0) * c;
  };
}

Symbol variable_1d(double amplitude) {
  if (!(amplitude > -1.0)) throw PreconditionError("variable_1d: amplitude must exceed -1");
  SymbolTraits t{.real_valued = true,
                 .homogeneous_degree2 = true,
                 .elliptic = true,
                 .asymptotically_flat = true};
  return Symbol(
             1, 2.0, "variable-1d",
             [amplitude](const Point& x, const Point& xi, const JetLayout& l) {
               PhaseJet v = phase_variables(l, 1, x, xi);
               return (exp(-(v.x[0] * v.x[0])) * amplitude + 1.0) * v.xi[0] * v.xi[0];
             },
             {{"amplitude", amplitude}}, t)
      .with_name("variable-1d");
}

Symbol annular_well(double depth, double radius) {
  if (!(depth > -1.0)) throw PreconditionError("annular_well: depth must exceed -1");
  SymbolTraits t{.real_valued = true, .homogeneous_degree2 = true, .elliptic = true, .asymptotically_flat = true};
  return Symbol(
      2, 2.0, "annular-well",
      [depth, radius](const Point& x, const Point& xi, const JetLayout& l) {
        PhaseJet v = phase_variables(l, 2, x, xi);
        Jet r = sqrt(squared_norm(v.x, 2) + kRadiusSmoothing * kRadiusSmoothing);
        Jet d = r - radius;
        return squared_norm(v.xi, 2) / (exp(-(d * d)) * depth + 1.0);
      },
      {{"depth", depth}, {"radius", radius}}, t);
}

namespace {

CoefficientMatrix matrix_from_json(const nlohmann::json& m, int dim, double bump) {
  CoefficientMatrix a;
  for (int l = 0; l < kMaxDim; ++l)
    for (int k = 0; k < kMaxDim; ++k) a[l][k] = constant_field(0.0);
  if (!m.is_array() || static_cast<int>(m.size()) != dim) throw PreconditionError("coefficient matrix has wrong shape");
  for (int l = 0; l < dim; ++l) {
    if (!m[l].is_array() || static_cast<int>(m[l].size()) != dim)
      throw PreconditionError("coefficient matrix has wrong shape");
    for (int k = 0; k < dim; ++k) a[l][k] = gaussian_field(m[l][k].get<double>(), bump);
  }
  return a;
}

CoefficientMatrix zero_matrix() {
  CoefficientMatrix a;
  for (int l = 0; l < kMaxDim; ++l)
    for (int k = 0; k < kMaxDim; ++k) a[l][k] = constant_field(0.0);
  return a;
}

CoefficientMatrix identity_matrix(int dim) {
  CoefficientMatrix a;
  for (int l = 0; l < kMaxDim; ++l)
    for (int k = 0; k < kMaxDim; ++k) a[l][k] = constant_field(l == k && l < dim ? 1.0 : 0.0);
  return a;
}

}  // namespace

Symbol make(const std::string& name, const nlohmann::json& p) {
  const int dim = p.value("dim", 1);
  if (name == "free") return free(dim);
  if (name == "isotropic") return isotropic(dim);
  if (name == "constant") return constant(dim, Complex(p.value("re", 0.0), p.value("im", 0.0)));
  if (name == "momentum") return momentum(dim, p.value("axis", 0));
  if (name == "bracket") return bracket(dim, p.value("s", 1.0));
  if (name == "bracket-ratio") return bracket_ratio(dim, p.value("axis", 0));
  if (name == "cutoff") return cutoff(dim, p.value("R", 4.0));
  if (name == "weight") return weight(dim, p.value("m", 2.0));
  if (name == "variable-1d") return variable_1d(p.value("amplitude", 0.5));
  if (name == "annular-well") return annular_well(p.value("depth", 4.0), p.value("radius", 3.0));
  EllipticityScan scan{p.value("box", 8.0), p.value("half_points", 16), p.value("directions", 64)};
  const double bump = p.value("bump", 0.0);
  const double gamma = p.value("gamma", 0.5);
  const bool flat = p.value("flat", true);
  if (name == "elliptic-quadratic") {
    auto a = p.contains("a") ? matrix_from_json(p["a"], dim, bump) : identity_matrix(dim);
    return elliptic_quadratic(dim, a, gamma, scan, flat);
  }
  if (name == "elliptic-root") {
    auto a = p.contains("a") ? matrix_from_json(p["a"], dim, bump) : identity_matrix(dim);
    CoefficientMatrix b;
    auto bre = p.contains("b_re") ? matrix_from_json(p["b_re"], dim, bump) : zero_matrix();
    auto bim = p.contains("b_im") ? matrix_from_json(p["b_im"], dim, bump) : zero_matrix();
    for (int l = 0; l < kMaxDim; ++l)
      for (int k = 0; k < kMaxDim; ++k) {
        Field re = bre[l][k], im = bim[l][k];
        b[l][k] = [re, im](const std::array<Jet, kMaxDim>& x) { return re(x) + im(x) * Complex(0.0, 1.0); };
      }
    return elliptic_root(dim, a, b, gamma, scan, flat);
  }
  throw PreconditionError("unknown symbol family '" + name + "'");
}

std::vector<std::string> names() {
  return {"free",   "isotropic",   "constant",     "momentum",           "bracket",     "bracket-ratio", "cutoff",
          "weight", "variable-1d", "annular-well", "elliptic-quadratic", "elliptic-root"};
}

}  // namespace qslab::symbols
