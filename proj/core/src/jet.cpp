#include "qslab/jet.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace qslab {

namespace {

int dense_key(const Monomial& m, int nvars, int order) {
  int key = 0;
  for (int v = 0; v < nvars; ++v) key = key * (order + 1) + m[v];
  return key;
}

void enumerate(int nvars, int degree, int var, Monomial& cur, std::vector<Monomial>& out) {
  if (var == nvars - 1) {
    cur[var] = static_cast<std::uint8_t>(degree);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int d = degree; d >= 0; --d) {
    cur[var] = static_cast<std::uint8_t>(d);
    enumerate(nvars, degree - d, var + 1, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

JetLayout::JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars == 0) {
    monomials_.push_back(Monomial{});
  } else {
    for (int d = 0; d <= order; ++d) {
      Monomial cur{};
      enumerate(nvars, d, 0, cur, monomials_);
    }
  }
  int table = 1;
  for (int v = 0; v < nvars; ++v) table *= order + 1;
  lookup_.assign(table, -1);
  degrees_.resize(monomials_.size());
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    int deg = 0;
    for (int v = 0; v < nvars; ++v) deg += monomials_[i][v];
    degrees_[i] = deg;
    lookup_[dense_key(monomials_[i], nvars, order)] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    for (std::size_t j = 0; j < monomials_.size(); ++j) {
      if (degrees_[i] + degrees_[j] > order) continue;
      Monomial m{};
      for (int v = 0; v < nvars; ++v) m[v] = static_cast<std::uint8_t>(monomials_[i][v] + monomials_[j][v]);
      products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                           static_cast<std::uint32_t>(index(m))});
    }
  }
}

const JetLayout& JetLayout::get(int nvars, int order) {
  if (nvars < 0 || nvars > kMaxJetVars) throw PreconditionError("jet: unsupported variable count");
  if (order < 0 || order > kMaxJetOrder) throw PreconditionError("jet: unsupported order");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot.reset(new JetLayout(nvars, order));
  return *slot;
}

int JetLayout::index(const Monomial& m) const noexcept {
  int deg = 0;
  for (int v = 0; v < nvars_; ++v) deg += m[v];
  for (int v = nvars_; v < kMaxJetVars; ++v)
    if (m[v] != 0) return -1;
  if (deg > order_) return -1;
  return lookup_[dense_key(m, nvars_, order_)];
}

Jet::Jet() : Jet(JetLayout::get(0, 0)) {}

Jet::Jet(const JetLayout& layout, Complex value) : layout_(&layout), c_(layout.size(), Complex{}) { c_[0] = value; }

Jet Jet::variable(const JetLayout& layout, int var, double value) {
  if (var < 0 || var >= layout.nvars()) throw PreconditionError("jet: variable index out of range");
  Jet j(layout, value);
  if (layout.order() >= 1) {
    Monomial m{};
    m[var] = 1;
    j.c_[layout.index(m)] = 1.0;
  }
  return j;
}

Complex Jet::coeff(const Monomial& m) const noexcept {
  int i = layout_->index(m);
  return i < 0 ? Complex{} : c_[i];
}

Complex Jet::derivative(const Monomial& m) const noexcept {
  double fact = 1.0;
  for (int v = 0; v < kMaxJetVars; ++v)
    for (int k = 2; k <= m[v]; ++k) fact *= k;
  return fact * coeff(m);
}

Jet Jet::differentiate(int var) const {
  if (layout_->order() == 0) throw PreconditionError("jet: derivative depth exceeded");
  const JetLayout& out_layout = JetLayout::get(layout_->nvars(), layout_->order() - 1);
  Jet out(out_layout);
  for (std::size_t i = 0; i < out_layout.size(); ++i) {
    Monomial m = out_layout.monomial(i);
    m[var] += 1;
    out.c_[i] = static_cast<double>(m[var]) * c_[layout_->index(m)];
  }
  return out;
}

Jet Jet::truncate(int order) const {
  if (order > layout_->order()) throw PreconditionError("jet: cannot raise order by truncation");
  if (order == layout_->order()) return *this;
  const JetLayout& out_layout = JetLayout::get(layout_->nvars(), order);
  Jet out(out_layout);
  // Graded ordering: the lower-order table is a prefix.
  for (std::size_t i = 0; i < out_layout.size(); ++i) out.c_[i] = c_[i];
  return out;
}

Jet Jet::conj() const {
  Jet out(*this);
  for (auto& z : out.c_) z = std::conj(z);
  return out;
}

Jet Jet::real() const {
  Jet out(*this);
  for (auto& z : out.c_) z = z.real();
  return out;
}

Jet Jet::imag() const {
  Jet out(*this);
  for (auto& z : out.c_) z = z.imag();
  return out;
}

bool Jet::is_constant() const noexcept {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != Complex{}) return false;
  return true;
}

namespace {

void require_same(const Jet& a, const Jet& b) {
  if (&a.layout() != &b.layout()) throw PreconditionError("jet: layout mismatch");
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  *this = *this * o;
  return *this;
}

Jet& Jet::operator+=(Complex s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(Complex s) {
  c_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(Complex s) {
  for (auto& z : c_) z *= s;
  return *this;
}

Jet& Jet::operator/=(Complex s) {
  for (auto& z : c_) z /= s;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
  require_same(a, b);
  Jet out(a.layout());
  if (a.layout().size() == 1) {
    out.coeff(0) = a.coeff(0) * b.coeff(0);
    return out;
  }
  for (const auto& p : a.layout().products()) out.coeff(p.out) += a.coeff(p.lhs) * b.coeff(p.rhs);
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator+(Jet a, Complex s) { return a += s; }
Jet operator+(Complex s, Jet a) { return a += s; }
Jet operator-(Jet a, Complex s) { return a -= s; }
Jet operator-(Complex s, const Jet& a) { return -a + s; }
Jet operator*(Jet a, Complex s) { return a *= s; }
Jet operator*(Complex s, Jet a) { return a *= s; }
Jet operator/(Jet a, Complex s) { return a /= s; }
Jet operator/(Complex s, const Jet& a) { return reciprocal(a) * s; }

namespace {

// Univariate power-series recurrences on b = f(a); a[1..n] given.
using Series = Taylor1;

Series identity_series(Complex a0, int n) {
  Series a{};
  a[0] = a0;
  if (n >= 1) a[1] = 1.0;
  return a;
}

Series series_exp(const Series& a, int n) {
  Series b{};
  b[0] = std::exp(a[0]);
  for (int k = 1; k <= n; ++k) {
    Complex s = 0.0;
    for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * b[k - j];
    b[k] = s / static_cast<double>(k);
  }
  return b;
}

Series series_log(const Series& a, int n) {
  Series b{};
  b[0] = std::log(a[0]);
  for (int k = 1; k <= n; ++k) {
    Complex s = 0.0;
    for (int j = 1; j < k; ++j) s += static_cast<double>(j) * b[j] * a[k - j];
    b[k] = (a[k] - s / static_cast<double>(k)) / a[0];
  }
  return b;
}

Series series_pow(const Series& a, double r, int n) {
  Series b{};
  b[0] = std::pow(a[0], r);
  for (int k = 1; k <= n; ++k) {
    Complex s = 0.0;
    for (int j = 1; j <= k; ++j) s += (r * j - (k - j)) * a[j] * b[k - j];
    b[k] = s / (static_cast<double>(k) * a[0]);
  }
  return b;
}

void series_sincos(const Series& a, int n, Series& s, Series& c) {
  s = {};
  c = {};
  s[0] = std::sin(a[0]);
  c[0] = std::cos(a[0]);
  for (int k = 1; k <= n; ++k) {
    Complex ss = 0.0, cc = 0.0;
    for (int j = 1; j <= k; ++j) {
      ss += static_cast<double>(j) * a[j] * c[k - j];
      cc += static_cast<double>(j) * a[j] * s[k - j];
    }
    s[k] = ss / static_cast<double>(k);
    c[k] = -cc / static_cast<double>(k);
  }
}

Series series_atan(const Series& a, int n) {
  // b' = a' / (1 + a^2)
  Series d{};
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= k; ++j) d[k] += a[j] * a[k - j];
  d[0] += 1.0;
  Series da{};
  for (int k = 0; k < n; ++k) da[k] = static_cast<double>(k + 1) * a[k + 1];
  Series q{};
  for (int k = 0; k < n; ++k) {
    Complex s = da[k];
    for (int j = 1; j <= k; ++j) s -= d[j] * q[k - j];
    q[k] = s / d[0];
  }
  Series b{};
  b[0] = std::atan(a[0]);
  for (int k = 1; k <= n; ++k) b[k] = q[k - 1] / static_cast<double>(k);
  return b;
}

Jet apply(const Jet& a, Series (*fn)(const Series&, int)) {
  const int n = a.layout().order();
  return compose(fn(identity_series(a.value(), n), n), a);
}

}  // namespace

Jet compose(const Taylor1& f, const Jet& a) {
  const int n = a.layout().order();
  Jet h = a;
  h.coeff(0) = 0.0;
  Jet r(a.layout(), f[n]);
  for (int k = n - 1; k >= 0; --k) {
    r = r * h;
    r += f[k];
  }
  return r;
}

Jet exp(const Jet& a) { return apply(a, series_exp); }
Jet log(const Jet& a) { return apply(a, series_log); }

Jet pow(const Jet& a, double r) {
  const int n = a.layout().order();
  return compose(series_pow(identity_series(a.value(), n), r, n), a);
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }
Jet reciprocal(const Jet& a) { return pow(a, -1.0); }

Jet sin(const Jet& a) {
  const int n = a.layout().order();
  Series s, c;
  series_sincos(identity_series(a.value(), n), n, s, c);
  return compose(s, a);
}

Jet cos(const Jet& a) {
  const int n = a.layout().order();
  Series s, c;
  series_sincos(identity_series(a.value(), n), n, s, c);
  return compose(c, a);
}

Jet atan(const Jet& a) { return apply(a, series_atan); }

PhaseJet phase_variables(const JetLayout& layout, int dim, const Point& x, const Point& xi) {
  if (layout.nvars() != 2 * dim) throw PreconditionError("jet: layout does not match phase-space dimension");
  PhaseJet p;
  for (int a = 0; a < kMaxDim; ++a) {
    p.x[a] = Jet(layout, a < dim ? x[a] : 0.0);
    p.xi[a] = Jet(layout, a < dim ? xi[a] : 0.0);
  }
  for (int a = 0; a < dim; ++a) {
    p.x[a] = Jet::variable(layout, x_var(a), x[a]);
    p.xi[a] = Jet::variable(layout, xi_var(dim, a), xi[a]);
  }
  return p;
}

}  // namespace qslab
