#include "blockprox/spectral.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace blockprox {

GramOperator gram_operator(const ColMatrix& A) {
    return block_gram_operator(A, 0, A.cols());
}

GramOperator block_gram_operator(const ColMatrix& A, std::size_t c0, std::size_t c1) {
    GramOperator G;
    G.dim = c1 - c0;
    G.apply = [&A, c0, c1](std::span<const double> in, std::span<double> out) {
        std::vector<double> tmp(A.rows(), 0.0);
        A.add_block_times(c0, c1, in, tmp);
        A.block_transpose_times(c0, c1, tmp, out);
    };
    return G;
}

double spectral_norm(const GramOperator& G, double tol, std::size_t max_iters) {
    if (G.dim == 0) return 0.0;
    if (tol <= 0.0) {
        throw ConfigError("spectral_norm tolerance must be positive");
    }
    const std::size_t n = G.dim;
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n, 0.0);

    double lambda = 0.0;
    double prev = -1.0;
    std::size_t stable = 0;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        G.apply(v, w);
        double rayleigh = 0.0;
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rayleigh += v[i] * w[i];
            norm_sq += w[i] * w[i];
        }
        lambda = rayleigh;
        if (norm_sq == 0.0) {
            return 0.0;  // operator annihilates the probe: zero Gram block
        }
        if (iter > 0 && std::abs(lambda - prev) <= tol * std::max(std::abs(lambda), 1e-300)) {
            // require two consecutive stable Rayleigh quotients
            if (++stable >= 2) return lambda;
        } else {
            stable = 0;
        }
        prev = lambda;
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = w[i] * inv;
        }
    }
    throw SpectralNormError("power iteration did not converge within " +
                                std::to_string(max_iters) + " iterations",
                            lambda);
}

double block_gram_norm(const ColMatrix& A, const BlockPartition& P, std::size_t i, double tol) {
    if (i >= P.blocks()) {
        throw ConfigError("block index out of range");
    }
    return spectral_norm(block_gram_operator(A, P.begin(i), P.end(i)), tol);
}

}  // namespace blockprox
