#include "blockprox/blockrules.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace blockprox {

BlockRule parse_rule(std::string_view name) {
    if (name == "cyclic") return BlockRule::Cyclic;
    if (name == "shuffled") return BlockRule::Shuffled;
    if (name == "uniform") return BlockRule::Uniform;
    if (name == "gs-r") return BlockRule::GSr;
    if (name == "gs-s") return BlockRule::GSs;
    throw ConfigError("unknown block rule: " + std::string(name));
}

std::string rule_name(BlockRule rule) {
    switch (rule) {
        case BlockRule::Cyclic: return "cyclic";
        case BlockRule::Shuffled: return "shuffled";
        case BlockRule::Uniform: return "uniform";
        case BlockRule::GSr: return "gs-r";
        case BlockRule::GSs: return "gs-s";
    }
    return "?";
}

RuleState::RuleState(BlockRule rule, const ProblemInstance& P, std::uint64_t seed,
                     bool gs_r_global_step)
    : rule_(rule),
      blocks_(P.partition.blocks()),
      gs_r_global_step_(gs_r_global_step),
      rng_(seed) {
    if (rule_ == BlockRule::GSs && !is_convex(P.reg)) {
        throw UnsupportedRuleError("gs-s selection requires a convex regularizer; use gs-r");
    }
    if (rule_ == BlockRule::Shuffled) {
        perm_.resize(blocks_);
        std::iota(perm_.begin(), perm_.end(), 0);
    }
}

std::size_t RuleState::next(const SelectionContext& ctx) {
    switch (rule_) {
        case BlockRule::Cyclic: {
            const std::size_t i = cursor_;
            cursor_ = (cursor_ + 1) % blocks_;
            return i;
        }
        case BlockRule::Shuffled: {
            if (cursor_ == 0) {
                std::shuffle(perm_.begin(), perm_.end(), rng_);
            }
            const std::size_t i = perm_[cursor_];
            cursor_ = (cursor_ + 1) % blocks_;
            return i;
        }
        case BlockRule::Uniform: {
            std::uniform_int_distribution<std::size_t> pick(0, blocks_ - 1);
            return pick(rng_);
        }
        case BlockRule::GSr:
        case BlockRule::GSs:
            return greedy_pick(ctx);
    }
    return 0;
}

std::size_t RuleState::greedy_pick(const SelectionContext& ctx) {
    const ProblemInstance& P = ctx.problem;
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < blocks_; ++i) {
        const std::size_t sz = P.partition.size(i);
        grad_.resize(sz);
        grad_block(P, ctx.residual, i, grad_);
        const auto xi = ctx.x.subspan(P.partition.begin(i), sz);

        double score;
        if (rule_ == BlockRule::GSs) {
            score = gs_s_score(P.reg, P.partition, i, grad_, xi);
        } else {
            // length of the prox-gradient trial step on block i
            const double alpha = gs_r_global_step_ ? ctx.global_step : ctx.block_steps[i];
            moved_.resize(sz);
            prox_.resize(sz);
            for (std::size_t j = 0; j < sz; ++j) {
                moved_[j] = xi[j] - alpha * grad_[j];
            }
            prox_block(P.reg, P.partition, i, moved_, alpha, prox_);
            double acc = 0.0;
            for (std::size_t j = 0; j < sz; ++j) {
                const double d = xi[j] - prox_[j];
                acc += d * d;
            }
            score = std::sqrt(acc);
        }
        if (score > best_score) {  // ties keep the smallest index
            best_score = score;
            best = i;
        }
    }
    return best;
}

}  // namespace blockprox
