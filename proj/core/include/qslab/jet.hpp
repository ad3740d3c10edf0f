#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "qslab/types.hpp"

namespace qslab {

inline constexpr int kMaxJetVars = 2 * kMaxDim;
inline constexpr int kMaxJetOrder = 8;

using Monomial = std::array<std::uint8_t, kMaxJetVars>;

/// Monomial table for truncated Taylor polynomials in `nvars` variables of
/// total degree <= `order`. Layouts are interned; compare by address.
class JetLayout {
 public:
  static const JetLayout& get(int nvars, int order);

  int nvars() const noexcept { return nvars_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  const Monomial& monomial(std::size_t i) const noexcept { return monomials_[i]; }
  int degree(std::size_t i) const noexcept { return degrees_[i]; }
  /// Index of a monomial, or -1 when its degree exceeds the order.
  int index(const Monomial& m) const noexcept;

  struct Product {
    std::uint32_t lhs, rhs, out;
  };
  const std::vector<Product>& products() const noexcept { return products_; }

 private:
  JetLayout(int nvars, int order);

  int nvars_;
  int order_;
  std::vector<Monomial> monomials_;
  std::vector<int> degrees_;
  std::vector<int> lookup_;
  std::vector<Product> products_;
};

/// Truncated multivariate Taylor polynomial: sum_m c_m d^m with c_m = D^m f / m!.
class Jet {
 public:
  using Storage = boost::container::small_vector<Complex, 15>;

  Jet();
  explicit Jet(const JetLayout& layout, Complex value = 0.0);

  static Jet variable(const JetLayout& layout, int var, double value);

  const JetLayout& layout() const noexcept { return *layout_; }
  Complex value() const noexcept { return c_[0]; }
  Complex coeff(std::size_t i) const noexcept { return c_[i]; }
  Complex& coeff(std::size_t i) noexcept { return c_[i]; }
  /// Taylor coefficient of a monomial (zero beyond the order).
  Complex coeff(const Monomial& m) const noexcept;
  /// Partial derivative D^m f at the expansion point.
  Complex derivative(const Monomial& m) const noexcept;

  /// d/d(var) as a jet of one lower order.
  Jet differentiate(int var) const;
  /// Re-expand with a lower order.
  Jet truncate(int order) const;
  Jet conj() const;
  Jet real() const;
  Jet imag() const;
  bool is_constant() const noexcept;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator+=(Complex s);
  Jet& operator-=(Complex s);
  Jet& operator*=(Complex s);
  Jet& operator/=(Complex s);

 private:
  const JetLayout* layout_;
  Storage c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator-(Jet a);
Jet operator+(Jet a, Complex s);
Jet operator+(Complex s, Jet a);
Jet operator-(Jet a, Complex s);
Jet operator-(Complex s, const Jet& a);
Jet operator*(Jet a, Complex s);
Jet operator*(Complex s, Jet a);
Jet operator/(Jet a, Complex s);
Jet operator/(Complex s, const Jet& a);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet pow(const Jet& a, double r);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet atan(const Jet& a);
Jet reciprocal(const Jet& a);

/// Coefficients t_k = f^(k)(a0)/k!, k = 0..order, of a univariate function.
using Taylor1 = std::array<Complex, kMaxJetOrder + 1>;

/// f(a) for a univariate Taylor expansion of f at a.value().
Jet compose(const Taylor1& f, const Jet& a);

/// Jet variables for a phase-space point: x_0..x_{d-1}, xi_0..xi_{d-1}.
struct PhaseJet {
  std::array<Jet, kMaxDim> x;
  std::array<Jet, kMaxDim> xi;
};

PhaseJet phase_variables(const JetLayout& layout, int dim, const Point& x, const Point& xi);

inline int x_var(int axis) noexcept { return axis; }
inline int xi_var(int dim, int axis) noexcept { return dim + axis; }

}  // namespace qslab
