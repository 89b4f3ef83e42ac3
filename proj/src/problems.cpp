#include "blockprox/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "blockprox/spectral.hpp"

namespace blockprox {

namespace {

// FNV-1a over the defining fields; enough to catch traces from different
// instances being compared against each other.
class Fingerprint {
public:
    void mix(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h_ ^= p[i];
            h_ *= 1099511628211ULL;
        }
    }
    void mix_u64(std::uint64_t v) { mix(&v, sizeof(v)); }
    void mix_f64(double v) { mix(&v, sizeof(v)); }

    std::string hex() const {
        char buf[20];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h_));
        return buf;
    }

private:
    std::uint64_t h_ = 1469598103934665603ULL;
};

std::string fingerprint_problem(const ColMatrix& A, std::span<const double> b,
                                const RegularizerSpec& reg, const BlockPartition& P,
                                LossScale scale) {
    Fingerprint fp;
    fp.mix_u64(A.rows());
    fp.mix_u64(A.cols());
    fp.mix_u64(static_cast<std::uint64_t>(scale));
    for (std::size_t c : P.boundaries()) fp.mix_u64(c);
    fp.mix_u64(reg.index());
    std::visit(
        [&fp](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, L1>) {
                fp.mix_f64(r.lambda);
            } else if constexpr (std::is_same_v<T, GroupL2>) {
                fp.mix_f64(r.lambda);
                for (std::size_t c : r.groups.boundaries()) fp.mix_u64(c);
            } else if constexpr (std::is_same_v<T, CappedL1>) {
                fp.mix_f64(r.lambda);
                fp.mix_f64(r.theta);
            } else if constexpr (std::is_same_v<T, Scad>) {
                fp.mix_f64(r.lambda);
                fp.mix_f64(r.gamma);
            }
        },
        reg);
    // sample a few matrix and rhs entries rather than hashing everything
    const auto dense_probe = [&fp, &A](std::size_t j) {
        fp.mix_f64(A.col_sum(j));
        fp.mix_f64(A.col_sq_sum(j));
    };
    dense_probe(0);
    dense_probe(A.cols() / 2);
    dense_probe(A.cols() - 1);
    double bsum = 0.0, bsq = 0.0;
    for (double v : b) {
        bsum += v;
        bsq += v * v;
    }
    fp.mix_f64(bsum);
    fp.mix_f64(bsq);
    return fp.hex();
}

}  // namespace

GeneratedData gen_sparse_ls(const GenParams& p) {
    if (p.m == 0 || p.n == 0) {
        throw ConfigError("generator: m and n must be positive");
    }
    if (!(p.density > 0.0) || p.density > 1.0) {
        throw ConfigError("generator: density must lie in (0, 1]");
    }
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    const bool sparse = p.density < 0.5;
    GeneratedData out;
    if (sparse) {
        std::vector<Triplet> entries;
        entries.reserve(static_cast<std::size_t>(p.density * p.m * p.n * 1.2) + 16);
        for (std::size_t j = 0; j < p.n; ++j) {
            for (std::size_t i = 0; i < p.m; ++i) {
                if (unif(rng) < p.density) {
                    entries.push_back({i, j, normal(rng)});
                }
            }
        }
        out.A = ColMatrix::from_triplets(p.m, p.n, entries);
    } else {
        std::vector<double> vals(p.m * p.n, 0.0);
        for (std::size_t j = 0; j < p.n; ++j) {
            for (std::size_t i = 0; i < p.m; ++i) {
                if (p.density >= 1.0 || unif(rng) < p.density) {
                    vals[j * p.m + i] = normal(rng);
                }
            }
        }
        out.A = ColMatrix::dense(p.m, p.n, std::move(vals));
    }

    if (p.gaussian_b) {
        out.b.resize(p.m);
        for (double& v : out.b) v = normal(rng);
        return out;
    }

    const std::size_t support = p.support.value_or(p.n / 10);
    out.planted.assign(p.n, 0.0);
    std::vector<std::size_t> idx(p.n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t k = 0; k < std::min(support, p.n); ++k) {
        out.planted[idx[k]] = normal(rng);
    }
    out.b = out.A.apply(out.planted);
    if (p.noise > 0.0) {
        for (double& v : out.b) v += p.noise * normal(rng);
    }
    return out;
}

std::pair<ColMatrix, std::vector<double>> standardize(const ColMatrix& A,
                                                      std::span<const double> b) {
    const std::size_t m = A.rows(), n = A.cols();
    if (m < 2) {
        throw ConfigError("standardize: need at least two rows");
    }
    if (b.size() != m) {
        throw ConfigError("standardize: b length mismatch");
    }
    std::vector<double> vals = A.to_dense();
    for (std::size_t j = 0; j < n; ++j) {
        double* col = vals.data() + j * m;
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) mean += col[i];
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = col[i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(m);  // population variance, makes unit sd exact
        if (var == 0.0) {
            throw StandardizeError("standardize: column " + std::to_string(j) +
                                       " has zero variance",
                                   j);
        }
        const double inv_sd = 1.0 / std::sqrt(var);
        for (std::size_t i = 0; i < m; ++i) {
            col[i] = (col[i] - mean) * inv_sd;
        }
    }
    std::vector<double> bc(b.begin(), b.end());
    double bmean = 0.0;
    for (double v : bc) bmean += v;
    bmean /= static_cast<double>(m);
    double bvar = 0.0;
    for (double v : bc) bvar += (v - bmean) * (v - bmean);
    if (bvar == 0.0) {
        throw StandardizeError("standardize: b is constant", n);
    }
    for (double& v : bc) v -= bmean;
    return {ColMatrix::dense(m, n, std::move(vals)), std::move(bc)};
}

ProblemInstance make_problem(ColMatrix A, std::vector<double> b, RegularizerSpec reg,
                             BlockPartition partition, LossScale scale) {
    if (partition.dim() != A.cols()) {
        throw ConfigError("partition dimension does not match matrix columns");
    }
    if (b.size() != A.rows()) {
        throw ConfigError("b length does not match matrix rows");
    }
    if (!all_finite(b)) {
        throw ConfigError("b contains a nonfinite entry");
    }
    validate_spec(reg, A.cols());
    if (!groups_align(reg, partition)) {
        throw ConfigError("group-l2: a group straddles a block boundary");
    }

    ProblemInstance P;
    P.A = std::move(A);
    P.b = std::move(b);
    P.reg = std::move(reg);
    P.partition = std::move(partition);
    P.loss_scale = scale;
    P.block_gram.resize(P.partition.blocks());
    for (std::size_t i = 0; i < P.partition.blocks(); ++i) {
        P.block_gram[i] = block_gram_norm(P.A, P.partition, i);
    }
    P.full_gram = spectral_norm(gram_operator(P.A));
    if (P.full_gram <= 0.0) {
        throw ConfigError("matrix is identically zero");
    }
    P.id = fingerprint_problem(P.A, P.b, P.reg, P.partition, scale);
    return P;
}

double smooth_value(const ProblemInstance& P, std::span<const double> residual) {
    double acc = 0.0;
    for (double v : residual) acc += v * v;
    return acc / (2.0 * P.denom());
}

void residual_of(const ProblemInstance& P, std::span<const double> x, std::span<double> r) {
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = -P.b[i];
    P.A.add_block_times(0, P.cols(), x, r);
}

double objective(const ProblemInstance& P, std::span<const double> x) {
    std::vector<double> r(P.rows());
    residual_of(P, x, r);
    return smooth_value(P, r) + reg_value(P.reg, x);
}

void grad_block(const ProblemInstance& P, std::span<const double> residual, std::size_t i,
                std::span<double> out) {
    grad_block_range(P, residual, P.partition.begin(i), P.partition.end(i), out);
}

void grad_block_range(const ProblemInstance& P, std::span<const double> residual, std::size_t c0,
                      std::size_t c1, std::span<double> out) {
    P.A.block_transpose_times(c0, c1, residual, out);
    const double inv = 1.0 / P.denom();
    for (double& v : out) v *= inv;
}

double step_size(const ProblemInstance& P, std::size_t i, StepPolicy policy) {
    if (policy == StepPolicy::FullLipschitz) {
        return P.denom() / P.full_gram;
    }
    const double g = P.block_gram[i];
    if (g <= 0.0) {
        throw UndefinedStepError(
            "step size undefined: block " + std::to_string(i) + " has zero Gram norm", i);
    }
    return policy == StepPolicy::PaperBlock ? 1.0 / g : P.denom() / g;
}

double stationarity_residual(const ProblemInstance& P, std::span<const double> x, double alpha) {
    if (!(alpha > 0.0)) {
        throw ConfigError("stationarity_residual: alpha must be positive");
    }
    std::vector<double> r(P.rows());
    residual_of(P, x, r);
    double acc = 0.0;
    std::vector<double> g, moved, prox;
    for (std::size_t i = 0; i < P.partition.blocks(); ++i) {
        const std::size_t sz = P.partition.size(i);
        g.resize(sz);
        moved.resize(sz);
        prox.resize(sz);
        grad_block(P, r, i, g);
        const auto xi = x.subspan(P.partition.begin(i), sz);
        for (std::size_t j = 0; j < sz; ++j) {
            moved[j] = xi[j] - alpha * g[j];
        }
        prox_block(P.reg, P.partition, i, moved, alpha, prox);
        for (std::size_t j = 0; j < sz; ++j) {
            const double d = xi[j] - prox[j];
            acc += d * d;
        }
    }
    return std::sqrt(acc);
}

void ResidualCache::init(const ProblemInstance& P, std::span<const double> x) {
    r_.resize(P.rows());
    residual_of(P, x, r_);
}

void ResidualCache::update_block(const ProblemInstance& P, std::size_t i,
                                 std::span<const double> delta) {
    P.A.add_block_times(P.partition.begin(i), P.partition.end(i), delta, r_);
}

void ResidualCache::add_product(const ProblemInstance& P, std::size_t c0, std::size_t c1,
                                std::span<const double> delta) {
    P.A.add_block_times(c0, c1, delta, r_);
}

void ResidualCache::assign(std::span<const double> r) {
    r_.assign(r.begin(), r.end());
}

double ResidualCache::refresh(const ProblemInstance& P, std::span<const double> x) {
    scratch_.resize(r_.size());
    residual_of(P, x, scratch_);
    double drift = 0.0;
    for (std::size_t i = 0; i < r_.size(); ++i) {
        const double d = r_[i] - scratch_[i];
        drift += d * d;
    }
    r_.swap(scratch_);
    return std::sqrt(drift);
}

double ResidualCache::sq_norm() const {
    double acc = 0.0;
    for (double v : r_) acc += v * v;
    return acc;
}

}  // namespace blockprox
