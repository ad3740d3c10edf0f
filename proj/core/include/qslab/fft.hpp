#pragma once

#include <span>

#include "qslab/types.hpp"

namespace qslab::fft {

/// Unnormalized DFT over an n-dimensional square lattice of `points` per axis.
/// forward: out[k] = sum_j in[j] exp(-2 pi i j.k / N). backward uses exp(+...).
/// Plans are cached per shape; execution is safe from concurrent callers.
void forward(int dim, int points, std::span<const Complex> in, std::span<Complex> out);
void backward(int dim, int points, std::span<const Complex> in, std::span<Complex> out);

}  // namespace qslab::fft
