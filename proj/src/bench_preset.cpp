#include <cmath>

#include "blockprox/bench.hpp"

namespace blockprox::bench {

namespace {

SolverConfig full_vector(Algorithm alg, const std::string& name, double beta, double t) {
    SolverConfig s;
    s.algorithm = alg;
    s.name = name;
    s.beta0 = beta;
    s.t = t;
    s.step_policy = StepPolicy::FullLipschitz;
    return s;
}

SolverConfig block_solver(Algorithm alg, const std::string& name, BlockRule rule, double beta,
                          double t) {
    SolverConfig s;
    s.algorithm = alg;
    s.name = name;
    s.rule = rule;
    s.beta0 = beta;
    s.t = t;
    // with the presets' unit loss scaling this is exactly 1/||A_i^T A_i||
    s.step_policy = StepPolicy::PaperBlock;
    return s;
}

void add_block_family(RunConfig& cfg, double beta, double t) {
    cfg.solvers.push_back(
        block_solver(Algorithm::Bpl, "bpl-shuffled", BlockRule::Shuffled, beta, t));
    cfg.solvers.push_back(
        block_solver(Algorithm::BcoApgncPlus, "bco-uniform", BlockRule::Uniform, beta, t));
    cfg.solvers.push_back(
        block_solver(Algorithm::BcoApgncPlus, "bco-gsr", BlockRule::GSr, beta, t));
}

}  // namespace

RunConfig preset(std::string_view name, double scale) {
    if (!(scale > 0.0)) {
        throw ConfigError("preset scale must be positive");
    }
    RunConfig cfg;
    cfg.budget = 100;
    cfg.ref_budget = 10000;
    cfg.problem.kind = ProblemSection::Kind::Generate;
    cfg.problem.m = static_cast<std::size_t>(std::ceil(1000.0 * scale));
    cfg.problem.n = static_cast<std::size_t>(std::ceil(5000.0 * scale));
    cfg.problem.density = 0.1;
    cfg.problem.noise = 0.01;
    // the experiments pair lambda and the per-block steps with the plain
    // 1/2 ||Ax-b||^2 loss; the column-scaled form would zero out every preset
    cfg.problem.loss_scale = LossScale::Unit;

    if (name == "lasso") {
        cfg.problem.blocks = 5;
        cfg.regularizer.type = "l1";
        cfg.regularizer.lambda = 1.0;
        cfg.solvers.push_back(full_vector(Algorithm::Apg, "apg", 0.9, 0.9));
        cfg.solvers.push_back(full_vector(Algorithm::ApgncPlus, "apgnc+", 0.9, 0.9));
        add_block_family(cfg, 0.9, 0.9);
    } else if (name == "group-lasso") {
        cfg.problem.blocks = 5;
        cfg.regularizer.type = "group-l2";
        cfg.regularizer.lambda = 1.0;
        cfg.regularizer.group_count = 5;  // groups coincide with the blocks
        cfg.solvers.push_back(full_vector(Algorithm::ApgncPlus, "apgnc+", 0.8, 0.2));
        add_block_family(cfg, 0.8, 0.2);
    } else if (name == "capped-l1") {
        cfg.problem.blocks = 10;
        cfg.regularizer.type = "capped-l1";
        cfg.regularizer.lambda = 1e-4;
        cfg.regularizer.theta = 1e-5;  // theta = 0.1 lambda
        cfg.solvers.push_back(full_vector(Algorithm::ApgncPlus, "apgnc+", 0.8, 0.2));
        add_block_family(cfg, 0.8, 0.2);
    } else if (name == "scad") {
        cfg.problem.blocks = 10;
        cfg.problem.density = 1.0;  // dense standard-normal design
        cfg.problem.gaussian_b = true;
        cfg.problem.standardize = true;
        cfg.regularizer.type = "scad";
        cfg.regularizer.lambda = 1e-4;
        cfg.regularizer.gamma = 3.0;
        cfg.solvers.push_back(full_vector(Algorithm::ApgncPlus, "apgnc+", 0.8, 0.2));
        add_block_family(cfg, 0.8, 0.2);
    } else {
        throw ConfigError("unknown preset: " + std::string(name));
    }
    set_seed(cfg, 1);
    return cfg;
}

}  // namespace blockprox::bench
