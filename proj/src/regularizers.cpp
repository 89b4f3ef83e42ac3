#include "blockprox/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blockprox {

namespace {

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline double pos(double x) { return x > 0.0 ? x : 0.0; }

inline double norm2(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

// Groups of `groups` fully contained in [c0, c1), as group indices.
// validate at problem build guarantees no group straddles a block boundary.
template <class Fn>
void for_groups_in(const BlockPartition& groups, std::size_t c0, std::size_t c1, Fn&& fn) {
    for (std::size_t g = 0; g < groups.blocks(); ++g) {
        if (groups.begin(g) >= c1) break;
        if (groups.end(g) <= c0) continue;
        fn(g);
    }
}

}  // namespace

void validate_spec(const RegularizerSpec& spec, std::size_t n) {
    std::visit(
        [n](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, L1>) {
                if (!(r.lambda > 0.0)) throw ConfigError("l1: lambda must be positive");
            } else if constexpr (std::is_same_v<T, GroupL2>) {
                if (!(r.lambda > 0.0)) throw ConfigError("group-l2: lambda must be positive");
                if (r.groups.dim() != n) {
                    throw ConfigError("group-l2: groups must partition all " +
                                      std::to_string(n) + " coordinates");
                }
            } else if constexpr (std::is_same_v<T, CappedL1>) {
                if (!(r.lambda > 0.0)) throw ConfigError("capped-l1: lambda must be positive");
                if (!(r.theta > 0.0)) throw ConfigError("capped-l1: theta must be positive");
            } else if constexpr (std::is_same_v<T, Scad>) {
                if (!(r.lambda > 0.0)) throw ConfigError("scad: lambda must be positive");
                // the middle prox piece divides by gamma - 2
                if (!(r.gamma > 2.0)) throw ConfigError("scad: gamma must exceed 2");
            }
        },
        spec);
}

bool is_convex(const RegularizerSpec& spec) {
    return std::holds_alternative<ZeroReg>(spec) || std::holds_alternative<L1>(spec) ||
           std::holds_alternative<GroupL2>(spec);
}

bool groups_align(const RegularizerSpec& spec, const BlockPartition& P) {
    const auto* g = std::get_if<GroupL2>(&spec);
    if (g == nullptr) return true;
    for (std::size_t k = 0; k < g->groups.blocks(); ++k) {
        const std::size_t blk = P.block_of(g->groups.begin(k));
        if (g->groups.end(k) > P.end(blk)) return false;
    }
    return true;
}

double scad_value(double u, double lambda, double gamma) {
    const double a = std::abs(u);
    if (a <= lambda) return lambda * a;
    if (a <= gamma * lambda) {
        return (2.0 * gamma * lambda * a - a * a - lambda * lambda) / (2.0 * (gamma - 1.0));
    }
    return lambda * lambda * (gamma + 1.0) / 2.0;
}

double capped_l1_value(double u, double lambda, double theta) {
    return lambda * std::min(std::abs(u), theta);
}

double reg_value(const RegularizerSpec& spec, std::span<const double> x) {
    return std::visit(
        [&x](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, ZeroReg>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, L1>) {
                double acc = 0.0;
                for (double v : x) acc += std::abs(v);
                return r.lambda * acc;
            } else if constexpr (std::is_same_v<T, GroupL2>) {
                if (x.size() != r.groups.dim()) {
                    throw ConfigError("group-l2: vector does not match group partition");
                }
                double acc = 0.0;
                for (std::size_t g = 0; g < r.groups.blocks(); ++g) {
                    acc += norm2(x.subspan(r.groups.begin(g), r.groups.size(g)));
                }
                return r.lambda * acc;
            } else if constexpr (std::is_same_v<T, CappedL1>) {
                double acc = 0.0;
                for (double v : x) acc += std::min(std::abs(v), r.theta);
                return r.lambda * acc;
            } else {
                double acc = 0.0;
                for (double v : x) acc += scad_value(v, r.lambda, r.gamma);
                return acc;
            }
        },
        spec);
}

double reg_block_value(const RegularizerSpec& spec, const BlockPartition& P, std::size_t i,
                       std::span<const double> xi) {
    if (const auto* g = std::get_if<GroupL2>(&spec)) {
        const std::size_t c0 = P.begin(i);
        double acc = 0.0;
        for_groups_in(g->groups, c0, P.end(i), [&](std::size_t k) {
            acc += norm2(xi.subspan(g->groups.begin(k) - c0, g->groups.size(k)));
        });
        return g->lambda * acc;
    }
    return reg_value(spec, xi);  // separable penalties restrict trivially
}

std::vector<double> prox_l1(std::span<const double> u, double tau) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = sign(u[i]) * pos(std::abs(u[i]) - tau);
    }
    return out;
}

std::vector<double> prox_group_l2(std::span<const double> u, double tau,
                                  const BlockPartition& groups) {
    if (u.size() != groups.dim()) {
        throw ConfigError("prox_group_l2: vector does not match group partition");
    }
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t g = 0; g < groups.blocks(); ++g) {
        const auto ug = u.subspan(groups.begin(g), groups.size(g));
        const double nrm = norm2(ug);
        if (nrm <= tau) continue;  // covers the ||u_g|| = 0 convention
        const double scale = 1.0 - tau / nrm;
        for (std::size_t j = 0; j < ug.size(); ++j) {
            out[groups.begin(g) + j] = scale * ug[j];
        }
    }
    return out;
}

double prox_capped_l1(double v, double lambda, double theta) {
    const double a = std::abs(v);
    const double v1 = sign(v) * std::max(theta, a);
    const double v2 = sign(v) * std::min(theta, pos(a - lambda));
    const auto h2 = [&](double x) {
        return 0.5 * (x - v) * (x - v) + capped_l1_value(x, lambda, theta);
    };
    return h2(v1) <= h2(v2) ? v1 : v2;
}

double prox_scad(double u, double lambda, double gamma) {
    return prox_scad_step(u, lambda, gamma, 1.0);
}

double prox_scad_step(double u, double lambda, double gamma, double alpha) {
    const double a = std::abs(u);
    const double s = sign(u);
    const auto h = [&](double x) {
        return 0.5 * (x - u) * (x - u) + alpha * scad_value(x, lambda, gamma);
    };

    // candidates: the minimizer of each SCAD piece, clamped to its interval.
    double cands[4];
    std::size_t ncand = 0;
    cands[ncand++] = s * std::min(lambda, pos(a - alpha * lambda));
    const double denom = gamma - 1.0 - alpha;
    if (denom > 0.0) {
        const double interior = (a * (gamma - 1.0) - alpha * gamma * lambda) / denom;
        cands[ncand++] = s * std::clamp(interior, lambda, gamma * lambda);
    } else {
        // middle piece turns concave for alpha >= gamma-1: minimum sits at an endpoint
        cands[ncand++] = s * lambda;
        cands[ncand++] = s * gamma * lambda;
    }
    cands[ncand++] = s * std::max(gamma * lambda, a);

    double best = cands[0];
    double best_val = h(best);
    for (std::size_t k = 1; k < ncand; ++k) {
        const double val = h(cands[k]);
        if (val < best_val) {
            best = cands[k];
            best_val = val;
        }
    }
    return best;
}

void prox_block(const RegularizerSpec& spec, const BlockPartition& P, std::size_t i,
                std::span<const double> u, double alpha, std::span<double> out) {
    if (!(alpha > 0.0)) {
        throw ConfigError("prox_block: step size must be positive");
    }
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, ZeroReg>) {
                std::copy(u.begin(), u.end(), out.begin());
            } else if constexpr (std::is_same_v<T, L1>) {
                const double tau = alpha * r.lambda;
                for (std::size_t j = 0; j < u.size(); ++j) {
                    out[j] = sign(u[j]) * pos(std::abs(u[j]) - tau);
                }
            } else if constexpr (std::is_same_v<T, GroupL2>) {
                const double tau = alpha * r.lambda;
                const std::size_t c0 = P.begin(i);
                std::fill(out.begin(), out.end(), 0.0);
                for_groups_in(r.groups, c0, P.end(i), [&](std::size_t k) {
                    const std::size_t off = r.groups.begin(k) - c0;
                    const auto ug = u.subspan(off, r.groups.size(k));
                    const double nrm = norm2(ug);
                    if (nrm <= tau) return;
                    const double scale = 1.0 - tau / nrm;
                    for (std::size_t j = 0; j < ug.size(); ++j) {
                        out[off + j] = scale * ug[j];
                    }
                });
            } else if constexpr (std::is_same_v<T, CappedL1>) {
                const double lam = alpha * r.lambda;  // theta stays unscaled
                for (std::size_t j = 0; j < u.size(); ++j) {
                    out[j] = prox_capped_l1(u[j], lam, r.theta);
                }
            } else {
                for (std::size_t j = 0; j < u.size(); ++j) {
                    out[j] = prox_scad_step(u[j], r.lambda, r.gamma, alpha);
                }
            }
        },
        spec);
}

std::vector<double> prox_full(const RegularizerSpec& spec, const BlockPartition& P,
                              std::span<const double> u, double alpha) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < P.blocks(); ++i) {
        prox_block(spec, P, i, u.subspan(P.begin(i), P.size(i)), alpha,
                   std::span<double>(out).subspan(P.begin(i), P.size(i)));
    }
    return out;
}

double gs_s_score(const RegularizerSpec& spec, const BlockPartition& P, std::size_t i,
                  std::span<const double> grad_i, std::span<const double> xi) {
    if (!is_convex(spec)) {
        throw UnsupportedRuleError("gs-s score requires a convex regularizer");
    }
    if (std::holds_alternative<ZeroReg>(spec)) {
        return norm2(grad_i);
    }
    if (const auto* l1 = std::get_if<L1>(&spec)) {
        double acc = 0.0;
        for (std::size_t j = 0; j < xi.size(); ++j) {
            // distance from -grad_j to the subdifferential of lambda*|.| at x_j
            double d;
            if (xi[j] != 0.0) {
                d = grad_i[j] + l1->lambda * sign(xi[j]);
            } else {
                d = pos(std::abs(grad_i[j]) - l1->lambda);
            }
            acc += d * d;
        }
        return std::sqrt(acc);
    }
    const auto& g = std::get<GroupL2>(spec);
    const std::size_t c0 = P.begin(i);
    double acc = 0.0;
    for_groups_in(g.groups, c0, P.end(i), [&](std::size_t k) {
        const std::size_t off = g.groups.begin(k) - c0;
        const auto xg = xi.subspan(off, g.groups.size(k));
        const auto gg = grad_i.subspan(off, g.groups.size(k));
        const double xnrm = norm2(xg);
        double d;
        if (xnrm > 0.0) {
            double acc_g = 0.0;
            for (std::size_t j = 0; j < xg.size(); ++j) {
                const double t = gg[j] + g.lambda * xg[j] / xnrm;
                acc_g += t * t;
            }
            d = std::sqrt(acc_g);
        } else {
            d = pos(norm2(gg) - g.lambda);  // distance to the radius-lambda ball
        }
        acc += d * d;
    });
    return std::sqrt(acc);
}

}  // namespace blockprox
