#include "qslab/psido.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "qslab/cutoffs.hpp"
#include "qslab/fft.hpp"
#include "qslab/symbol_library.hpp"

namespace qslab {

DenseOperator::DenseOperator(Grid grid, linalg::Matrix matrix) : grid_(grid), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (matrix_.rows() != n || matrix_.cols() != n) throw PreconditionError("dense operator: shape does not match grid");
}

DenseOperator DenseOperator::identity(const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  return DenseOperator(grid, linalg::Matrix::Identity(n, n));
}

GridFunction DenseOperator::apply(const GridFunction& f) const {
  if (!(f.grid() == grid_)) throw PreconditionError("dense operator: grid mismatch");
  Eigen::Map<const linalg::Vector> v(f.values().data(), static_cast<Eigen::Index>(f.size()));
  linalg::Vector out = matrix_ * v;
  return GridFunction(grid_, std::vector<Complex>(out.data(), out.data() + out.size()));
}

DenseOperator DenseOperator::adjoint() const { return DenseOperator(grid_, matrix_.adjoint()); }

double DenseOperator::norm(const linalg::PowerOptions& options) const {
  return linalg::operator_norm(matrix_, options).norm;
}

namespace {

void require_same_grid(const DenseOperator& a, const DenseOperator& b) {
  if (!(a.grid() == b.grid())) throw PreconditionError("dense operator: grid mismatch");
}

// Guards the N^{2 dim} assembly cost.
constexpr std::size_t kMaxDenseSize = 4096;

}  // namespace

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  require_same_grid(a, b);
  return DenseOperator(a.grid(), a.matrix() * b.matrix());
}

DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
  require_same_grid(a, b);
  return DenseOperator(a.grid(), a.matrix() + b.matrix());
}

DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
  require_same_grid(a, b);
  return DenseOperator(a.grid(), a.matrix() - b.matrix());
}

DenseOperator operator*(Complex c, const DenseOperator& a) { return DenseOperator(a.grid(), c * a.matrix()); }

namespace {

// Row j of the quantization: N^{-n} sum_k v_k e^{-i x_j' xi_k} with
// e^{-i x_j' xi_k} = (-1)^k e^{-2 pi i j' k / N}.
template <typename RowSymbol>
DenseOperator assemble(const Grid& grid, RowSymbol&& value) {
  if (grid.size() > kMaxDenseSize) throw PreconditionError("quantize: grid too large for a dense operator");
  const auto n = static_cast<Eigen::Index>(grid.size());
  linalg::Matrix m(n, n);
  std::vector<Complex> v(grid.size()), row(grid.size());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Point x = grid.point(j);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Point xi = grid.wavevector(k);
      auto idx = grid.axis_indices(k);
      int parity = 0;
      for (int a = 0; a < grid.dim(); ++a) parity += grid.wavenumber(idx[a]);
      const Complex phase = std::polar(1.0, dot(x, xi, grid.dim()));
      v[k] = value(x, xi) * phase * ((parity % 2 == 0) ? 1.0 : -1.0);
    }
    fft::forward(grid.dim(), grid.points_per_axis(), v, row);
    for (std::size_t c = 0; c < grid.size(); ++c) m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = row[c] * scale;
  }
  return DenseOperator(grid, std::move(m));
}

}  // namespace

DenseOperator quantize(const Symbol& a, const Grid& grid) {
  if (a.dim() != grid.dim()) throw PreconditionError("quantize: dimension mismatch");
  return assemble(grid, [&a](const Point& x, const Point& xi) {
    Complex v = a(x, xi);
    if (!is_finite(v)) throw NumericalError("quantize: non-finite symbol value");
    return v;
  });
}

DenseOperator multiplier_operator(const Grid& grid, const std::function<Complex(const Point&)>& m) {
  return assemble(grid, [&m](const Point&, const Point& xi) { return m(xi); });
}

DenseOperator band_projector(const Grid& grid, double lo, double hi) {
  const int dim = grid.dim();
  return multiplier_operator(grid, [=](const Point& xi) {
    double r = euclidean_norm(xi, dim);
    return (r >= lo && r <= hi) ? Complex(1.0) : Complex(0.0);
  });
}

double band_norm(const DenseOperator& a, double lo, double hi, const linalg::PowerOptions& options) {
  const Grid& g = a.grid();
  const int dim = g.dim();
  std::vector<char> keep(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double r = euclidean_norm(g.wavevector(k), dim);
    keep[k] = r >= lo && r <= hi;
  }
  auto project = [&g, &keep](const linalg::Vector& v) {
    std::vector<Complex> c(g.size()), out(g.size());
    to_spectrum(g, std::span<const Complex>(v.data(), g.size()), c);
    for (std::size_t k = 0; k < g.size(); ++k)
      if (!keep[k]) c[k] = 0.0;
    from_spectrum(g, c, out);
    return linalg::Vector(Eigen::Map<linalg::Vector>(out.data(), static_cast<Eigen::Index>(out.size())));
  };
  const linalg::Matrix& m = a.matrix();
  return linalg::operator_norm([&](const linalg::Vector& v) { return project(m * project(v)); },
                               [&](const linalg::Vector& v) { return project(m.adjoint() * project(v)); },
                               static_cast<Eigen::Index>(g.size()), options)
      .norm;
}

namespace {

std::vector<MultiIndex> multi_indices_below(int dim, int total) {
  std::vector<MultiIndex> out;
  for (int a0 = 0; a0 < total; ++a0) {
    if (dim == 1) {
      out.push_back({a0, 0});
      continue;
    }
    for (int a1 = 0; a0 + a1 < total; ++a1) out.push_back({a0, a1});
  }
  return out;
}

std::vector<MultiIndex> multi_indices_equal(int dim, int total) {
  std::vector<MultiIndex> out;
  if (dim == 1) return {{total, 0}};
  for (int a0 = 0; a0 <= total; ++a0) out.push_back({a0, total - a0});
  return out;
}

double factorial(const MultiIndex& a) {
  double f = 1.0;
  for (int v : a)
    for (int k = 2; k <= v; ++k) f *= k;
  return f;
}

// i^{-n}
Complex inverse_i_power(int n) {
  static const Complex table[4] = {1.0, Complex(0.0, -1.0), -1.0, Complex(0.0, 1.0)};
  return table[((n % 4) + 4) % 4];
}

Jet d_xi(Jet j, int dim, const MultiIndex& alpha) {
  for (int a = 0; a < dim; ++a)
    for (int k = 0; k < alpha[a]; ++k) j = j.differentiate(xi_var(dim, a));
  return j;
}

Jet d_x(Jet j, int dim, const MultiIndex& alpha) {
  for (int a = 0; a < dim; ++a)
    for (int k = 0; k < alpha[a]; ++k) j = j.differentiate(x_var(a));
  return j;
}

int total(const MultiIndex& a) { return a[0] + a[1]; }

void require_terms(int terms) {
  if (terms < 1) throw PreconditionError("calculus: at least one term required");
}

int reduced_depth(int depth, int by, const std::string& what) {
  if (depth - by < 0) throw PreconditionError(what + ": derivative depth exceeded");
  return depth - by;
}

}  // namespace

Symbol compose(const Symbol& a, const Symbol& b, int terms) {
  require_terms(terms);
  if (a.dim() != b.dim()) throw PreconditionError("compose: dimension mismatch");
  const int dim = a.dim();
  const int depth = reduced_depth(std::min(a.max_depth(), b.max_depth()), terms - 1, "compose");
  auto alphas = multi_indices_below(dim, terms);
  SymbolTraits t;
  t.x_independent = a.traits().x_independent && b.traits().x_independent;
  return Symbol(
      dim, a.order() + b.order(), "compose(" + a.name() + "," + b.name() + ")",
      [a, b, dim, terms, alphas](const Point& x, const Point& xi, const JetLayout& l) {
        const int r = l.order();
        Jet ja = a.jet(x, xi, r + terms - 1);
        Jet jb = b.jet(x, xi, r + terms - 1);
        Jet c(l);
        for (const auto& alpha : alphas) {
          Jet term = d_xi(ja, dim, alpha).truncate(r) * d_x(jb, dim, alpha).truncate(r);
          c += term * (inverse_i_power(total(alpha)) / factorial(alpha));
        }
        return c;
      },
      {{"terms", terms}}, t, depth);
}

Symbol adjoint_symbol(const Symbol& a, int terms) {
  require_terms(terms);
  const int dim = a.dim();
  const int depth = reduced_depth(a.max_depth(), 2 * (terms - 1), "adjoint_symbol");
  auto alphas = multi_indices_below(dim, terms);
  SymbolTraits t;
  t.x_independent = a.traits().x_independent;
  return Symbol(
      dim, a.order(), "adjoint(" + a.name() + ")",
      [a, dim, terms, alphas](const Point& x, const Point& xi, const JetLayout& l) {
        const int r = l.order();
        Jet ja = a.jet(x, xi, r + 2 * (terms - 1)).conj();
        Jet c(l);
        for (const auto& alpha : alphas) {
          Jet term = d_x(d_xi(ja, dim, alpha), dim, alpha).truncate(r);
          c += term * (inverse_i_power(total(alpha)) / factorial(alpha));
        }
        return c;
      },
      {{"terms", terms}}, t, depth);
}

Symbol poisson_bracket(const Symbol& h, const Symbol& phi) {
  if (h.dim() != phi.dim()) throw PreconditionError("poisson_bracket: dimension mismatch");
  const int dim = h.dim();
  const int depth = reduced_depth(std::min(h.max_depth(), phi.max_depth()), 1, "poisson_bracket");
  SymbolTraits t;
  t.real_valued = h.traits().real_valued && phi.traits().real_valued;
  return Symbol(
      dim, h.order() + phi.order() - 1.0, "H(" + h.name() + "," + phi.name() + ")",
      [h, phi, dim](const Point& x, const Point& xi, const JetLayout& l) {
        const int r = l.order();
        Jet jh = h.jet(x, xi, r + 1);
        Jet jp = phi.jet(x, xi, r + 1);
        Jet c(l);
        for (int k = 0; k < dim; ++k) {
          c += jh.differentiate(xi_var(dim, k)) * jp.differentiate(x_var(k));
          c -= jh.differentiate(x_var(k)) * jp.differentiate(xi_var(dim, k));
        }
        return c;
      },
      {}, t, depth);
}

Symbol principal_commutator(const Symbol& a, const Symbol& c) {
  return poisson_bracket(c, a).with_name("commutator(" + a.name() + "," + c.name() + ")");
}

Symbol parametrix(const Symbol& a, double R, int terms) {
  require_terms(terms);
  if (!(R > 0.0)) throw PreconditionError("parametrix: R must be positive");
  const int dim = a.dim();
  const int depth = reduced_depth(a.max_depth(), terms - 1, "parametrix");
  return Symbol(
      dim, -a.order(), "parametrix(" + a.name() + ")",
      [a, dim, terms, R](const Point& x, const Point& xi, const JetLayout& l) {
        const int r = l.order();
        const int top = r + terms - 1;
        const JetLayout& lt = JetLayout::get(l.nvars(), top);
        Jet ja = a.jet(x, xi, top);
        Jet cut = theta(0.5 * R, phase_variables(lt, dim, x, xi).xi, dim);
        std::vector<Jet> b;
        b.push_back(cut.is_constant() && cut.value() == Complex{} ? Jet(lt) : cut / ja);
        for (int j = 1; j < terms; ++j) {
          const int qj = top - j;
          Jet acc(JetLayout::get(l.nvars(), qj));
          for (int lo = 0; lo < j; ++lo)
            for (const auto& alpha : multi_indices_equal(dim, j - lo)) {
              Jet term = d_xi(b[lo], dim, alpha).truncate(qj) * d_x(ja, dim, alpha).truncate(qj);
              acc += term * (inverse_i_power(total(alpha)) / factorial(alpha));
            }
          b.push_back(-(b[0].truncate(qj) * acc));
        }
        Jet sum(l);
        for (const Jet& bj : b) sum += bj.truncate(r);
        return sum;
      },
      {{"R", R}, {"terms", terms}}, {}, depth);
}

GardingResult garding_defect(const Symbol& a, const Grid& grid, double far_band) {
  for (std::size_t j = 0; j < grid.size(); ++j)
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Point xi = grid.wavevector(k);
      if (euclidean_norm(xi, grid.dim()) < far_band) continue;
      if (a(grid.point(j), xi).real() < -1e-12)
        throw PreconditionError("garding_defect: Re a < 0 on the far band");
    }
  const double sigma = 0.5 * (a.order() - 1.0);
  const int dim = grid.dim();
  linalg::Matrix m = quantize(a, grid).matrix();
  linalg::Matrix h = 0.5 * (m + m.adjoint());
  linalg::Matrix jinv =
      multiplier_operator(grid, [=](const Point& xi) { return Complex(std::pow(1.0 + dot(xi, xi, dim), -0.5 * sigma)); })
          .matrix();
  linalg::Matrix b = jinv * h * jinv;
  b = 0.5 * (b + b.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<linalg::Matrix> es(b);
  if (es.info() != Eigen::Success) throw NumericalError("garding_defect: eigensolver failed");
  linalg::Vector w = jinv * es.eigenvectors().col(0);
  return {es.eigenvalues()[0], GridFunction(grid, std::vector<Complex>(w.data(), w.data() + w.size()))};
}

NeumannResult neumann_invert(const Symbol& a, const Grid& grid, int terms, int composition_terms) {
  if (terms < 0) throw PreconditionError("neumann_invert: negative term count");
  DenseOperator op = quantize(a, grid);
  const double nrm = op.norm();
  if (nrm >= 0.5) throw PreconditionError("neumann_invert: ||Psi_a|| >= 1/2");
  const DenseOperator id = DenseOperator::identity(grid);
  const DenseOperator one_minus = id - op;
  DenseOperator sum = id + op;
  DenseOperator power = op;
  NeumannResult r{sum, nrm, {}, {}};
  Symbol power_symbol = a;
  Symbol sum_symbol = symbols::constant(a.dim(), 1.0) + a;
  for (int k = 0; k <= terms; ++k) {
    if (k > 0) {
      power = power * op;
      sum = sum + power;
      const int t = std::min(composition_terms, power_symbol.max_depth() + 1);
      if (t >= 1 && std::min(a.max_depth(), power_symbol.max_depth()) >= t - 1) {
        power_symbol = compose(a, power_symbol, t);
        sum_symbol = sum_symbol + power_symbol;
      }
    }
    r.residuals.push_back((one_minus * sum - id).norm());
    r.symbols.push_back(sum_symbol);
  }
  r.inverse = sum;
  return r;
}

Symbol gauge_symbol(const Symbol& p, double M, double R, int sign) {
  if (sign != 1 && sign != -1) throw PreconditionError("gauge_symbol: sign must be +1 or -1");
  if (!(R > 0.0)) throw PreconditionError("gauge_symbol: R must be positive");
  const int dim = p.dim();
  SymbolTraits t{.real_valued = p.traits().real_valued};
  return Symbol(
      dim, 0.0, "gauge(" + p.name() + ")",
      [p, M, R, sign, dim](const Point& x, const Point& xi, const JetLayout& l) {
        if (M == 0.0) return Jet(l, 1.0);
        Jet cut = theta(R, phase_variables(l, dim, x, xi).xi, dim);
        if (cut.is_constant() && cut.value() == Complex{}) return Jet(l, 1.0);
        return exp(cut * p.jet(x, xi, l.order()) * (sign * M));
      },
      {{"M", M}, {"R", R}, {"sign", sign}}, t, p.max_depth());
}

void write_csv(std::ostream& out, const DenseOperator& op) {
  const auto& m = op.matrix();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << "re_" << c << ",im_" << c;
  out << '\n';
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", c ? "," : "", m(r, c).real(), m(r, c).imag());
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace qslab
