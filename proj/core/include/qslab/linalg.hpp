#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace qslab::linalg {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using LinearMap = std::function<Vector(const Vector&)>;

struct PowerOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  std::uint64_t seed = 0x5eed;
};

struct PowerResult {
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Right singular vector estimate.
  Vector vector;
};

/// Largest singular value by power iteration on M^* M.
PowerResult operator_norm(const Matrix& m, const PowerOptions& options = {});
/// Matrix-free variant: `apply` is M, `apply_adjoint` is M^*.
PowerResult operator_norm(const LinearMap& apply, const LinearMap& apply_adjoint, Eigen::Index n,
                          const PowerOptions& options = {});

/// Deterministic complex Gaussian vector.
Vector random_vector(Eigen::Index n, std::uint64_t seed);

}  // namespace qslab::linalg
