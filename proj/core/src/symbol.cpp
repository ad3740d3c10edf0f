#include "qslab/symbol.hpp"

#include <algorithm>
#include <cmath>

namespace qslab {

Symbol::Symbol(int dim, double order, std::string name, Evaluator evaluator, nlohmann::json params,
               SymbolTraits traits, int max_depth)
    : dim_(dim),
      order_(order),
      name_(std::move(name)),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      params_(std::move(params)),
      traits_(traits),
      max_depth_(std::min(max_depth, kMaxSymbolDepth)) {
  if (dim != 1 && dim != 2) throw PreconditionError("symbol: dim must be 1 or 2");
  if (!*evaluator_) throw PreconditionError("symbol: empty evaluator");
  if (max_depth_ < 0) throw PreconditionError("symbol: negative derivative depth");
}

Complex Symbol::operator()(const Point& x, const Point& xi) const {
  Complex v = (*evaluator_)(x, xi, JetLayout::get(2 * dim_, 0)).value();
  if (!is_finite(v)) throw NumericalError("symbol '" + name_ + "': non-finite value");
  return v;
}

Jet Symbol::jet(const Point& x, const Point& xi, int depth) const {
  if (depth > max_depth_)
    throw PreconditionError("symbol '" + name_ + "': derivative depth " + std::to_string(depth) + " exceeds " +
                            std::to_string(max_depth_));
  return (*evaluator_)(x, xi, JetLayout::get(2 * dim_, depth));
}

Complex Symbol::derivative(const Point& x, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) const {
  int depth = 0;
  Monomial m{};
  for (int a = 0; a < dim_; ++a) {
    depth += alpha[a] + beta[a];
    m[x_var(a)] = static_cast<std::uint8_t>(beta[a]);
    m[xi_var(dim_, a)] = static_cast<std::uint8_t>(alpha[a]);
  }
  Complex v = jet(x, xi, depth).derivative(m);
  if (!is_finite(v)) throw NumericalError("symbol '" + name_ + "': non-finite derivative");
  return v;
}

Symbol Symbol::with_name(std::string name) const {
  Symbol s = *this;
  s.name_ = std::move(name);
  return s;
}

Symbol Symbol::with_traits(SymbolTraits traits) const {
  Symbol s = *this;
  s.traits_ = traits;
  return s;
}

Symbol Symbol::with_order(double order) const {
  Symbol s = *this;
  s.order_ = order;
  return s;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// D^m f by a tensor product of centered stencils:
//   f^(n)(v) ~ h^-n sum_k (-1)^k C(n,k) f(v + (n/2 - k) h).
Complex fd_derivative(const std::function<Complex(const Point&, const Point&)>& fn, int dim, const Point& x,
                      const Point& xi, const Monomial& m, double hx, double hxi) {
  std::array<int, kMaxJetVars> order{};
  std::array<double, kMaxJetVars> step{};
  int nv = 2 * dim;
  for (int v = 0; v < nv; ++v) {
    order[v] = m[v];
    step[v] = v < dim ? hx : hxi;
  }
  std::array<int, kMaxJetVars> k{};
  Complex acc = 0.0;
  while (true) {
    Point px = x, pxi = xi;
    double w = 1.0;
    for (int v = 0; v < nv; ++v) {
      if (order[v] == 0) continue;
      double shift = (0.5 * order[v] - k[v]) * step[v];
      if (v < dim)
        px[v] += shift;
      else
        pxi[v - dim] += shift;
      w *= ((k[v] % 2) ? -1.0 : 1.0) * binomial(order[v], k[v]) / std::pow(step[v], order[v]);
    }
    acc += w * fn(px, pxi);
    int v = 0;
    for (; v < nv; ++v) {
      if (k[v] < order[v]) {
        ++k[v];
        break;
      }
      k[v] = 0;
    }
    if (v == nv) break;
  }
  return acc;
}

}  // namespace

Symbol Symbol::from_values(int dim, double order, std::string name,
                           std::function<Complex(const Point&, const Point&)> fn, double h_x, double h_xi,
                           int max_depth, SymbolTraits traits) {
  if (!(h_x > 0.0) || !(h_xi > 0.0)) throw PreconditionError("symbol: finite-difference steps must be positive");
  auto eval = [fn, dim, h_x, h_xi](const Point& x, const Point& xi, const JetLayout& layout) {
    Jet j(layout);
    for (std::size_t i = 0; i < layout.size(); ++i) {
      const Monomial& m = layout.monomial(i);
      double fact = 1.0;
      for (int v = 0; v < layout.nvars(); ++v)
        for (int k = 2; k <= m[v]; ++k) fact *= k;
      j.coeff(i) = (i == 0 ? fn(x, xi) : fd_derivative(fn, dim, x, xi, m, h_x, h_xi)) / fact;
    }
    return j;
  };
  nlohmann::json params = {{"h_x", h_x}, {"h_xi", h_xi}, {"finite_difference", true}};
  return Symbol(dim, order, std::move(name), eval, params, traits, std::min(max_depth, 4));
}

namespace {

void require_compatible(const Symbol& a, const Symbol& b) {
  if (a.dim() != b.dim()) throw PreconditionError("symbol: dimension mismatch");
}

SymbolTraits meet(const SymbolTraits& a, const SymbolTraits& b) {
  SymbolTraits t;
  t.real_valued = a.real_valued && b.real_valued;
  t.x_independent = a.x_independent && b.x_independent;
  return t;
}

}  // namespace

Symbol operator+(const Symbol& a, const Symbol& b) {
  require_compatible(a, b);
  return Symbol(
      a.dim(), std::max(a.order(), b.order()), "(" + a.name() + "+" + b.name() + ")",
      [a, b](const Point& x, const Point& xi, const JetLayout& l) {
        return a.jet(x, xi, l.order()) + b.jet(x, xi, l.order());
      },
      {}, meet(a.traits(), b.traits()), std::min(a.max_depth(), b.max_depth()));
}

Symbol operator-(const Symbol& a, const Symbol& b) { return a + (-1.0 * b); }

Symbol operator*(const Symbol& a, const Symbol& b) {
  require_compatible(a, b);
  return Symbol(
      a.dim(), a.order() + b.order(), "(" + a.name() + "*" + b.name() + ")",
      [a, b](const Point& x, const Point& xi, const JetLayout& l) {
        return a.jet(x, xi, l.order()) * b.jet(x, xi, l.order());
      },
      {}, meet(a.traits(), b.traits()), std::min(a.max_depth(), b.max_depth()));
}

Symbol operator*(Complex c, const Symbol& a) {
  SymbolTraits t = a.traits();
  if (c.imag() != 0.0) t.real_valued = false;
  if (c.real() <= 0.0) t.elliptic = false;
  return Symbol(
      a.dim(), a.order(), a.name(), [a, c](const Point& x, const Point& xi, const JetLayout& l) {
        return a.jet(x, xi, l.order()) * c;
      },
      a.params(), t, a.max_depth());
}

SampleSet band_samples(const Grid& grid, double xi_lo, double xi_hi, int x_stride, int xi_stride) {
  if (x_stride < 1 || xi_stride < 1) throw PreconditionError("samples: strides must be positive");
  SampleSet s;
  s.dim = grid.dim();
  const int n = grid.points_per_axis();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    auto idx = grid.axis_indices(j);
    bool keep = true;
    for (int a = 0; a < grid.dim(); ++a) keep = keep && idx[a] % x_stride == 0;
    if (keep) s.xs.push_back(grid.point(j));
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto idx = grid.axis_indices(k);
    bool keep = true;
    for (int a = 0; a < grid.dim(); ++a) keep = keep && ((idx[a] + n) % n) % xi_stride == 0;
    Point xi = grid.wavevector(k);
    double r = euclidean_norm(xi, grid.dim());
    if (keep && r >= xi_lo && r <= xi_hi) s.xis.push_back(xi);
  }
  if (s.xs.empty() || s.xis.empty()) throw PreconditionError("samples: empty band");
  return s;
}

SeminormEstimate seminorm(const Symbol& a, const MultiIndex& alpha, const MultiIndex& beta, const SampleSet& band) {
  if (band.xs.empty() || band.xis.empty()) throw PreconditionError("seminorm: empty band");
  if (band.dim != a.dim()) throw PreconditionError("seminorm: dimension mismatch");
  int depth = 0, na = 0;
  Monomial m{};
  for (int k = 0; k < a.dim(); ++k) {
    depth += alpha[k] + beta[k];
    na += alpha[k];
    m[x_var(k)] = static_cast<std::uint8_t>(beta[k]);
    m[xi_var(a.dim(), k)] = static_cast<std::uint8_t>(alpha[k]);
  }
  if (depth > a.max_depth()) throw PreconditionError("seminorm: derivative depth exceeded");
  SeminormEstimate est{alpha, beta, 0.0, 1e300, 0.0};
  for (const Point& xi : band.xis) {
    const double r = euclidean_norm(xi, a.dim());
    est.xi_lo = std::min(est.xi_lo, r);
    est.xi_hi = std::max(est.xi_hi, r);
    const double w = std::pow(1.0 + r, na - a.order());
    for (const Point& x : band.xs) {
      Complex d = a.jet(x, xi, depth).derivative(m);
      if (!is_finite(d)) throw NumericalError("seminorm: non-finite derivative");
      est.value = std::max(est.value, std::abs(d) * w);
    }
  }
  return est;
}

}  // namespace qslab
