#include "qslab/linalg.hpp"

#include <cmath>
#include <random>

#include "qslab/types.hpp"

namespace qslab::linalg {

Vector random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

PowerResult operator_norm(const LinearMap& apply, const LinearMap& apply_adjoint, Eigen::Index n,
                          const PowerOptions& options) {
  if (n <= 0) throw PreconditionError("operator_norm: empty operator");
  PowerResult r;
  Vector v = random_vector(n, options.seed);
  v.normalize();
  double sigma = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Vector mv = apply(v);
    const double next = mv.norm();
    if (!std::isfinite(next)) throw NumericalError("operator_norm: non-finite iterate");
    r.iterations = it;
    if (next == 0.0) {
      sigma = 0.0;
      r.converged = true;
      break;
    }
    Vector w = apply_adjoint(mv);
    const double wn = w.norm();
    const bool done = it > 1 && std::abs(next - sigma) <= options.tolerance * next;
    sigma = next;
    if (wn == 0.0) {
      r.converged = true;
      break;
    }
    v = w / wn;
    if (done) {
      r.converged = true;
      break;
    }
  }
  r.norm = sigma;
  r.vector = std::move(v);
  return r;
}

PowerResult operator_norm(const Matrix& m, const PowerOptions& options) {
  if (m.rows() == 0 || m.cols() == 0) throw PreconditionError("operator_norm: empty matrix");
  return operator_norm([&m](const Vector& v) -> Vector { return m * v; },
                       [&m](const Vector& v) -> Vector { return m.adjoint() * v; }, m.cols(), options);
}

}  // namespace qslab::linalg
