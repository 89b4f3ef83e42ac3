#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blockprox/problems.hpp"

namespace blockprox {

enum class BlockRule { Cyclic, Shuffled, Uniform, GSr, GSs };

BlockRule parse_rule(std::string_view name);
std::string rule_name(BlockRule rule);

/// Everything a selection rule may look at when picking the next block.
struct SelectionContext {
    const ProblemInstance& problem;
    std::span<const double> x;
    std::span<const double> residual;     // r = Ax - b at the current x
    std::span<const double> block_steps;  // alpha_i per block
    double global_step;                   // 1/L step for the global GS-r variant
};

/// Owns the mutable state of one selection strategy: RNG, cyclic cursor,
/// per-pass permutation, and scratch buffers for the greedy scores.
class RuleState {
public:
    /// Throws UnsupportedRuleError for gs-s with a nonconvex regularizer.
    RuleState(BlockRule rule, const ProblemInstance& P, std::uint64_t seed,
              bool gs_r_global_step = false);

    std::size_t next(const SelectionContext& ctx);

    BlockRule rule() const { return rule_; }

private:
    std::size_t greedy_pick(const SelectionContext& ctx);

    BlockRule rule_;
    std::size_t blocks_;
    bool gs_r_global_step_;
    std::mt19937_64 rng_;
    std::size_t cursor_ = 0;
    std::vector<std::size_t> perm_;
    std::vector<double> grad_, moved_, prox_;
};

}  // namespace blockprox
