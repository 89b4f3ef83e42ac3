#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "blockprox/problems.hpp"
#include "blockprox/solvers.hpp"
#include "blockprox/trace_io.hpp"

namespace blockprox::bench {

inline constexpr const char* kVersion = "0.1.0";

struct ProblemSection {
    enum class Kind { Generate, Files };
    Kind kind = Kind::Generate;
    std::size_t m = 100;
    std::size_t n = 500;
    double density = 0.1;
    std::uint64_t seed = 1;
    bool standardize = false;
    LossScale loss_scale = LossScale::Cols;
    bool gaussian_b = false;
    double noise = 0.01;
    std::optional<std::size_t> support;
    std::string matrix_path;  // Files kind
    std::string rhs_path;
    std::size_t blocks = 1;  // s
};

struct RegSection {
    std::string type = "l1";  // l1 | group-l2 | capped-l1 | scad | none
    double lambda = 1.0;
    double theta = 0.0;
    double gamma = 0.0;
    std::size_t group_count = 0;                 // contiguous equal groups when > 0
    std::vector<std::size_t> group_boundaries;   // explicit boundaries otherwise
};

struct RunConfig {
    ProblemSection problem;
    RegSection regularizer;
    std::vector<SolverConfig> solvers;
    std::size_t budget = 100;
    std::size_t ref_budget = 10000;
    std::string out_dir;
    bool timing = false;  // wall-clock column in trace CSVs (non-reproducible)
};

/// Minimal TOML-style config: `[section]` / `[[solver]]` headers and
/// `key = value` lines with strings, numbers, booleans and flat arrays.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

/// The four experiment presets (lasso, group-lasso, capped-l1, scad) at an
/// optional size scale: m and n shrink proportionally, s stays fixed.
RunConfig preset(std::string_view name, double scale = 1.0);

/// Reseed the instance generator and derive fresh per-solver seeds.
void set_seed(RunConfig& cfg, std::uint64_t seed);

RegularizerSpec build_regularizer(const RegSection& reg, std::size_t n);
ProblemInstance build_problem(const ProblemSection& prob, const RegSection& reg);

struct SolverSummary {
    std::string name;
    double final_gap = 0.0;
    /// Passes until F - F* first drops to 1e-2 / 1e-4 / 1e-6; -1 when never.
    std::array<long, 3> passes_to{-1, -1, -1};
    std::size_t max_block_gap = 0;
    bool monotone = false;
    bool diverged = false;
};

struct RunResult {
    double fstar = 0.0;
    double reference_residual = 0.0;
    std::vector<Trace> traces;
    std::vector<SolverSummary> summaries;
};

/// Build the instance once, compute the shared reference optimum, run every
/// solver, and (when out_dir is set) write one trace CSV per solver plus
/// summary.csv and meta.json.
RunResult run(const RunConfig& cfg);

std::string summary_csv(const std::vector<SolverSummary>& rows);

/// Problem files as written by the `generate` subcommand.
void write_instance(const std::string& dir, const RunConfig& cfg);

struct CompareRow {
    std::string solver;
    std::vector<double> gaps;  // F - F* at each checkpoint
};

struct CompareReport {
    std::vector<std::size_t> checkpoints;
    std::vector<CompareRow> rows;
    std::vector<std::string> winners;  // per checkpoint; "tie" on exact ties
};

CompareReport compare_traces(const std::vector<Trace>& traces,
                             std::vector<std::size_t> checkpoints = {});
CompareReport compare_files(const std::vector<std::string>& paths,
                            std::vector<std::size_t> checkpoints = {});

/// True when `solver` is never strictly beaten at any of the checkpoints.
bool holds_best(const CompareReport& report, const std::string& solver);

std::string render(const CompareReport& report);

std::string step_policy_name(StepPolicy policy);
StepPolicy parse_step_policy(std::string_view name);

}  // namespace blockprox::bench
