#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qslab/grid.hpp"
#include "qslab/jet.hpp"
#include "qslab/types.hpp"

namespace qslab {

using MultiIndex = std::array<int, kMaxDim>;

inline constexpr int kMaxSymbolDepth = 6;

struct SymbolTraits {
  bool real_valued = false;
  /// h(x, r xi) = r^2 h(x, xi).
  bool homogeneous_degree2 = false;
  bool x_independent = false;
  bool elliptic = false;
  /// Coefficients approach the flat metric as |x| grows.
  bool asymptotically_flat = false;
};

/// A symbol a(x, xi) of order m on R^dim x R^dim.
///
/// The evaluator returns the truncated Taylor expansion of a at (x, xi) in the
/// layout it is handed; derivatives up to `max_depth` are available.
class Symbol {
 public:
  using Evaluator = std::function<Jet(const Point& x, const Point& xi, const JetLayout& layout)>;

  Symbol(int dim, double order, std::string name, Evaluator evaluator, nlohmann::json params = {},
         SymbolTraits traits = {}, int max_depth = kMaxSymbolDepth);

  /// Finite-difference derivatives of a plain value function: nested centered
  /// stencils with steps h_x and h_xi (the grid's dx and dxi by convention).
  static Symbol from_values(int dim, double order, std::string name, std::function<Complex(const Point&, const Point&)> fn,
                            double h_x, double h_xi, int max_depth = 4, SymbolTraits traits = {});

  int dim() const noexcept { return dim_; }
  double order() const noexcept { return order_; }
  const std::string& name() const noexcept { return name_; }
  const nlohmann::json& params() const noexcept { return params_; }
  const SymbolTraits& traits() const noexcept { return traits_; }
  int max_depth() const noexcept { return max_depth_; }

  /// a(x, xi); non-finite values raise NumericalError.
  Complex operator()(const Point& x, const Point& xi) const;
  Jet jet(const Point& x, const Point& xi, int depth) const;
  /// d_xi^alpha d_x^beta a(x, xi).
  Complex derivative(const Point& x, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) const;

  Symbol with_name(std::string name) const;
  Symbol with_traits(SymbolTraits traits) const;
  Symbol with_order(double order) const;

 private:
  int dim_;
  double order_;
  std::string name_;
  std::shared_ptr<const Evaluator> evaluator_;
  nlohmann::json params_;
  SymbolTraits traits_;
  int max_depth_;
};

Symbol operator+(const Symbol& a, const Symbol& b);
Symbol operator-(const Symbol& a, const Symbol& b);
/// Pointwise product a(x, xi) b(x, xi); order m_a + m_b.
Symbol operator*(const Symbol& a, const Symbol& b);
Symbol operator*(Complex c, const Symbol& a);

/// Phase-space sample set: every x paired with every xi.
struct SampleSet {
  int dim = 1;
  std::vector<Point> xs;
  std::vector<Point> xis;
};

/// Grid points (every `x_stride`-th per axis) times the grid frequencies with
/// xi_lo <= |xi| <= xi_hi (every `xi_stride`-th per axis).
SampleSet band_samples(const Grid& grid, double xi_lo, double xi_hi, int x_stride = 1, int xi_stride = 1);

struct SeminormEstimate {
  MultiIndex alpha{};
  MultiIndex beta{};
  double value = 0.0;
  double xi_lo = 0.0;
  double xi_hi = 0.0;
};

/// sup |d_x^beta d_xi^alpha a| (1 + |xi|)^{|alpha| - m} over the samples.
SeminormEstimate seminorm(const Symbol& a, const MultiIndex& alpha, const MultiIndex& beta, const SampleSet& band);

}  // namespace qslab
