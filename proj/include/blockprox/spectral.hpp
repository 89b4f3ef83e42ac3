#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "blockprox/matrix.hpp"
#include "blockprox/partition.hpp"

namespace blockprox {

/// Symmetric positive semidefinite operator v -> G v, applied matrix-free.
struct GramOperator {
    std::size_t dim = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;
};

/// G = A^T A.
GramOperator gram_operator(const ColMatrix& A);

/// G = A[:, c0:c1]^T A[:, c0:c1].
GramOperator block_gram_operator(const ColMatrix& A, std::size_t c0, std::size_t c1);

/// Largest eigenvalue of a PSD operator by power iteration with a
/// deterministic all-ones start. Stops when the Rayleigh quotient is stable
/// to a relative `tol` on two consecutive iterations; throws
/// SpectralNormError carrying the last estimate on non-convergence.
double spectral_norm(const GramOperator& G, double tol = 1e-8, std::size_t max_iters = 100000);

/// ||A[:, block i]^T A[:, block i]||_2. Returns 0 for an all-zero column block.
double block_gram_norm(const ColMatrix& A, const BlockPartition& P, std::size_t i,
                       double tol = 1e-8);

}  // namespace blockprox
