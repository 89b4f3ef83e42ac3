#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blockprox/blockrules.hpp"
#include "blockprox/problems.hpp"

namespace blockprox {

enum class Algorithm { Apg, ApgncPlus, Bpl, BcoApgncPlus };

Algorithm parse_algorithm(std::string_view name);
std::string algorithm_name(Algorithm a);

/// Extrapolation weight schedule for the plain block prox-linear solver.
enum class MomentumSchedule { FistaWeights, Constant };

struct SolverConfig {
    Algorithm algorithm = Algorithm::BcoApgncPlus;
    std::string name;  // trace label; derived from the algorithm when empty

    double beta0 = 0.9;  // initial momentum, in (0, 1]
    double t = 0.9;      // damping factor, in (0, 1)

    StepPolicy step_policy = StepPolicy::LipschitzBlock;
    BlockRule rule = BlockRule::Cyclic;
    bool gs_r_global_step = false;  // score GS-r with the global 1/L step

    std::size_t max_passes = 100;
    double tol = 0.0;  // stationarity tolerance; 0 disables early stopping
    std::uint64_t seed = 0;

    MomentumSchedule bpl_schedule = MomentumSchedule::FistaWeights;
    double bpl_omega = 0.0;  // weight for the constant schedule

    /// Feed the probe point back into the iterate on the increase branch.
    /// Off by default: the probe only drives the momentum adaptation.
    bool probe_feedback = false;

    std::optional<std::vector<double>> x0;  // defaults to the zero vector

    std::size_t refresh_interval_passes = 50;
    bool record_residual = true;  // stationarity residual once per pass
    bool record_trace = true;     // keep per-update records
    bool record_iterates = false;  // snapshot x (and probe) each update

    bool allow_zero_beta = false;  // test hook: permit beta0 = 0
    double step_scale = 1.0;       // test hook: multiply all step sizes
};

void validate_config(const ProblemInstance& P, const SolverConfig& cfg);

struct TraceRecord {
    std::size_t k = 0;     // block-update counter, 0-based
    std::size_t pass = 0;  // k / s
    int block = -1;        // -1 for full-vector updates
    double objective = 0.0;
    double beta = 0.0;  // momentum of the updated block after this step
    std::optional<double> residual;  // stationarity residual, once per pass
    double elapsed_s = 0.0;

    // adaptive-momentum bookkeeping, kept in memory only
    std::optional<double> probe_objective;
    std::optional<bool> decrease_branch;
};

struct Trace {
    std::string solver_name;
    Algorithm algorithm = Algorithm::Apg;
    std::string problem_id;
    std::size_t records_per_pass = 1;
    std::size_t budget_passes = 0;
    double initial_objective = 0.0;
    std::optional<double> fstar;  // shared reference value, set by the bench harness

    std::vector<TraceRecord> records;
    std::vector<std::vector<double>> iterates;  // filled when record_iterates
    std::vector<std::vector<double>> probes;

    double best_objective = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    std::optional<double> final_residual;

    double max_refresh_drift = 0.0;    // ||r_cached - r_fresh|| seen at refreshes
    double max_refresh_obj_err = 0.0;  // relative objective drift seen at refreshes
    bool stopped_early = false;
    bool diverged = false;

    /// Objective after `passes` complete passes (initial value for 0).
    double objective_after_pass(std::size_t passes) const;
};

/// Iterates became nonfinite or the objective blew past the divergence guard.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, Trace partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}

    const Trace& partial_trace() const { return partial_; }

private:
    Trace partial_;
};

Trace run_apg(const ProblemInstance& P, const SolverConfig& cfg);
Trace run_apgnc_plus(const ProblemInstance& P, const SolverConfig& cfg);
Trace run_bpl(const ProblemInstance& P, const SolverConfig& cfg);
Trace run_bcoapgnc_plus(const ProblemInstance& P, const SolverConfig& cfg);

/// Dispatch on cfg.algorithm.
Trace run_solver(const ProblemInstance& P, const SolverConfig& cfg);

struct AssumptionReport {
    bool partition_ok = false;
    bool steps_positive = false;
    bool rule_supported = false;
    bool config_ok = false;
    /// Hard bound on the block revisit interval; empty for probabilistic rules.
    std::optional<std::size_t> coverage_T;
    std::vector<std::string> notes;

    bool all_ok() const {
        return partition_ok && steps_positive && rule_supported && config_ok;
    }
};

AssumptionReport check_assumptions(const ProblemInstance& P, const SolverConfig& cfg);
std::ostream& operator<<(std::ostream& os, const AssumptionReport& rep);

}  // namespace blockprox
