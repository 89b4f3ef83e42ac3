// Command-line harness: generate instances, run single solvers, reproduce the
// benchmark presets, and compare convergence traces.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blockprox/bench.hpp"

namespace {

using namespace blockprox;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAssert = 3;

struct CommonOpts {
    std::string preset_name;
    std::string config_path;
    double scale = 1.0;
    long seed = -1;
    long budget = -1;
    std::string out;
};

bench::RunConfig resolve_config(const CommonOpts& opt) {
    bench::RunConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = bench::load_config(opt.config_path);
        if (!opt.preset_name.empty()) {
            throw ConfigError("pass either --preset or --config, not both");
        }
    } else if (!opt.preset_name.empty()) {
        cfg = bench::preset(opt.preset_name, opt.scale);
    } else {
        throw ConfigError("need --preset or --config");
    }
    if (opt.seed >= 0) {
        bench::set_seed(cfg, static_cast<std::uint64_t>(opt.seed));
    }
    if (opt.budget >= 0) {
        cfg.budget = static_cast<std::size_t>(opt.budget);
    }
    if (!opt.out.empty()) {
        cfg.out_dir = opt.out;
    }
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opt) {
    cmd->add_option("--preset", opt.preset_name,
                    "preset name: lasso | group-lasso | capped-l1 | scad");
    cmd->add_option("--config", opt.config_path, "run config file");
    cmd->add_option("--scale", opt.scale, "shrink preset dimensions by this factor");
    cmd->add_option("--seed", opt.seed, "instance seed (also reseeds the solvers)");
    cmd->add_option("--budget", opt.budget, "pass budget");
    cmd->add_option("--out", opt.out, "output directory");
}

int cmd_generate(const CommonOpts& opt) {
    bench::RunConfig cfg = resolve_config(opt);
    if (cfg.out_dir.empty()) {
        throw ConfigError("generate needs --out");
    }
    bench::write_instance(cfg.out_dir, cfg);
    std::cout << "instance written to " << cfg.out_dir << '\n';
    return kExitOk;
}

int cmd_bench(const CommonOpts& opt, bool timing) {
    bench::RunConfig cfg = resolve_config(opt);
    if (timing) cfg.timing = true;
    if (cfg.out_dir.empty()) {
        cfg.out_dir = "out";
    }
    const bench::RunResult result = bench::run(cfg);
    std::cout << "F* = " << result.fstar
              << " (reference stationarity residual " << result.reference_residual << ")\n";
    std::cout << bench::summary_csv(result.summaries);
    std::cout << "traces written to " << cfg.out_dir << '\n';
    return kExitOk;
}

int cmd_solve(const CommonOpts& opt, const std::string& solver_name, bool timing, bool check) {
    bench::RunConfig cfg = resolve_config(opt);
    if (!solver_name.empty()) {
        std::vector<SolverConfig> keep;
        for (const auto& s : cfg.solvers) {
            if (s.name == solver_name) keep.push_back(s);
        }
        if (keep.empty()) {
            throw ConfigError("no solver named " + solver_name + " in this config");
        }
        cfg.solvers = std::move(keep);
    } else if (cfg.solvers.size() != 1) {
        throw ConfigError("solve runs one solver; pick one with --solver");
    }
    if (check) {
        ProblemInstance P = bench::build_problem(cfg.problem, cfg.regularizer);
        std::cout << check_assumptions(P, cfg.solvers.front());
        return kExitOk;
    }
    if (timing) cfg.timing = true;
    if (cfg.out_dir.empty()) cfg.out_dir = "out";
    const bench::RunResult result = bench::run(cfg);
    std::cout << bench::summary_csv(result.summaries);
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& files, const std::string& assert_best,
                const std::vector<std::size_t>& passes) {
    const bench::CompareReport report = bench::compare_files(files, passes);
    std::cout << bench::render(report);
    if (!assert_best.empty() && !bench::holds_best(report, assert_best)) {
        std::cerr << "assertion failed: " << assert_best
                  << " is beaten at one or more checkpoints\n";
        return kExitAssert;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block-coordinate accelerated proximal-gradient benchmark"};
    app.require_subcommand(1);

    CommonOpts gen_opt, bench_opt, solve_opt;
    bool bench_timing = false, solve_timing = false, solve_check = false;
    std::string solver_name, assert_best;
    std::vector<std::string> compare_files;
    std::vector<std::size_t> compare_passes;

    auto* gen = app.add_subcommand("generate", "write instance files (A.mtx, b.txt, meta.json)");
    add_common(gen, gen_opt);

    auto* bench_cmd = app.add_subcommand("bench", "run a preset or config file end to end");
    add_common(bench_cmd, bench_opt);
    bench_cmd->add_flag("--timing", bench_timing, "record wall-clock times in trace CSVs");

    auto* solve = app.add_subcommand("solve", "run a single solver");
    add_common(solve, solve_opt);
    solve->add_option("--solver", solver_name, "solver name from the config");
    solve->add_flag("--timing", solve_timing, "record wall-clock times in trace CSVs");
    solve->add_flag("--check", solve_check, "print the assumption report and exit");

    auto* cmp = app.add_subcommand("compare", "tabulate F - F* across trace files");
    cmp->add_option("files", compare_files, "trace CSV files")->required()->expected(-2);
    cmp->add_option("--assert-best", assert_best,
                    "exit 3 unless this solver is never beaten at the checkpoints");
    cmp->add_option("--passes", compare_passes, "checkpoint passes (default 5 10 20 50 budget)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(gen_opt);
        if (bench_cmd->parsed()) return cmd_bench(bench_opt, bench_timing);
        if (solve->parsed()) return cmd_solve(solve_opt, solver_name, solve_timing, solve_check);
        if (cmp->parsed()) return cmd_compare(compare_files, assert_best, compare_passes);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitOk;
}
