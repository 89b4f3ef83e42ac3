#include "blockprox/problems.hpp"
#include "blockprox/solvers.hpp"

namespace blockprox {

ReferenceOptimum reference_optimum(const ProblemInstance& P, std::size_t budget_passes) {
    if (budget_passes < 1) {
        throw ConfigError("reference budget must be at least one pass");
    }

    SolverConfig base;
    base.step_policy = StepPolicy::LipschitzBlock;
    base.max_passes = budget_passes;
    base.beta0 = 0.8;
    base.t = 0.5;
    base.record_trace = false;  // only the running best is needed
    base.record_residual = false;

    SolverConfig greedy = base;
    greedy.algorithm = Algorithm::BcoApgncPlus;
    greedy.rule = BlockRule::GSr;
    greedy.name = "reference-bco-gsr";

    SolverConfig sweep = base;
    sweep.algorithm = Algorithm::Bpl;
    sweep.rule = BlockRule::Cyclic;
    sweep.bpl_schedule = MomentumSchedule::FistaWeights;
    sweep.name = "reference-bpl-cyclic";

    ReferenceOptimum best;
    best.value = std::numeric_limits<double>::infinity();
    for (const SolverConfig& cfg : {greedy, sweep}) {
        Trace tr;
        try {
            tr = run_solver(P, cfg);
        } catch (const DivergenceError& e) {
            tr = e.partial_trace();  // keep whatever the run achieved
        }
        if (tr.best_objective < best.value) {
            best.value = tr.best_objective;
            best.x = tr.best_x;
        }
    }
    best.residual =
        stationarity_residual(P, best.x, step_size(P, 0, StepPolicy::FullLipschitz));
    return best;
}

}  // namespace blockprox
