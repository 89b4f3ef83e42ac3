#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "blockprox/bench.hpp"

namespace blockprox::bench {

namespace {

constexpr std::array<double, 3> kThresholds = {1e-2, 1e-4, 1e-6};

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
    }
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

SolverSummary summarize(const Trace& tr, double fstar) {
    SolverSummary sm;
    sm.name = tr.solver_name;
    sm.diverged = tr.diverged;

    double last = tr.initial_objective;
    sm.monotone = true;
    for (const auto& rec : tr.records) {
        if (rec.objective > last + 1e-12 * std::max(1.0, std::abs(last))) {
            sm.monotone = false;
        }
        last = rec.objective;
    }
    sm.final_gap = last - fstar;

    for (std::size_t ti = 0; ti < kThresholds.size(); ++ti) {
        for (const auto& rec : tr.records) {
            if (rec.objective - fstar <= kThresholds[ti]) {
                sm.passes_to[ti] = static_cast<long>(rec.k / tr.records_per_pass) + 1;
                break;
            }
        }
    }

    // max inter-visit gap, counted in block updates and including the leading
    // and trailing stretches; full-vector solvers touch everything each step
    if (tr.records_per_pass <= 1) {
        sm.max_block_gap = tr.records.empty() ? 0 : 1;
    } else {
        const std::size_t s = tr.records_per_pass;
        const std::size_t total = tr.records.size();
        std::vector<std::size_t> last_seen(s, 0);
        std::vector<bool> seen(s, false);
        std::size_t max_gap = 0;
        for (const auto& rec : tr.records) {
            const auto b = static_cast<std::size_t>(rec.block);
            const std::size_t prev = seen[b] ? last_seen[b] + 1 : 0;
            max_gap = std::max(max_gap, rec.k + 1 - prev);
            last_seen[b] = rec.k;
            seen[b] = true;
        }
        for (std::size_t b = 0; b < s; ++b) {
            max_gap = std::max(max_gap, seen[b] ? total - 1 - last_seen[b] : total);
        }
        sm.max_block_gap = max_gap;
    }
    return sm;
}

nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["version"] = kVersion;
    auto& p = j["problem"];
    p["kind"] = cfg.problem.kind == ProblemSection::Kind::Generate ? "generate" : "files";
    p["m"] = cfg.problem.m;
    p["n"] = cfg.problem.n;
    p["density"] = cfg.problem.density;
    p["seed"] = cfg.problem.seed;
    p["standardize"] = cfg.problem.standardize;
    p["loss_scale"] = cfg.problem.loss_scale == LossScale::Cols
                          ? "cols"
                          : (cfg.problem.loss_scale == LossScale::Rows ? "rows" : "unit");
    p["gaussian_b"] = cfg.problem.gaussian_b;
    p["noise"] = cfg.problem.noise;
    if (cfg.problem.support) p["support"] = *cfg.problem.support;
    if (!cfg.problem.matrix_path.empty()) p["matrix"] = cfg.problem.matrix_path;
    if (!cfg.problem.rhs_path.empty()) p["rhs"] = cfg.problem.rhs_path;
    p["blocks"] = cfg.problem.blocks;
    auto& r = j["regularizer"];
    r["type"] = cfg.regularizer.type;
    r["lambda"] = cfg.regularizer.lambda;
    if (cfg.regularizer.theta > 0) r["theta"] = cfg.regularizer.theta;
    if (cfg.regularizer.gamma > 0) r["gamma"] = cfg.regularizer.gamma;
    if (cfg.regularizer.group_count > 0) r["groups"] = cfg.regularizer.group_count;
    if (!cfg.regularizer.group_boundaries.empty()) {
        r["group_boundaries"] = cfg.regularizer.group_boundaries;
    }
    j["budget"] = cfg.budget;
    j["ref_budget"] = cfg.ref_budget;
    j["solvers"] = nlohmann::json::array();
    for (const auto& s : cfg.solvers) {
        nlohmann::json sj;
        sj["name"] = s.name;
        sj["algorithm"] = algorithm_name(s.algorithm);
        sj["rule"] = rule_name(s.rule);
        sj["beta"] = s.beta0;
        sj["t"] = s.t;
        sj["step"] = step_policy_name(s.step_policy);
        sj["seed"] = s.seed;
        j["solvers"].push_back(std::move(sj));
    }
    return j;
}

}  // namespace

std::string summary_csv(const std::vector<SolverSummary>& rows) {
    std::string out =
        "solver,final_gap,passes_to_1e-2,passes_to_1e-4,passes_to_1e-6,"
        "max_block_gap,monotone,diverged\n";
    for (const auto& sm : rows) {
        out += sm.name;
        out += ',';
        out += fmt(sm.final_gap);
        for (long p : sm.passes_to) {
            out += ',';
            out += std::to_string(p);
        }
        out += ',' + std::to_string(sm.max_block_gap);
        out += sm.monotone ? ",1" : ",0";
        out += sm.diverged ? ",1\n" : ",0\n";
    }
    return out;
}

RunResult run(const RunConfig& cfg) {
    ProblemInstance P = build_problem(cfg.problem, cfg.regularizer);

    RunResult result;
    const ReferenceOptimum ref = reference_optimum(P, cfg.ref_budget);
    result.fstar = ref.value;
    result.reference_residual = ref.residual;

    for (const SolverConfig& solver : cfg.solvers) {
        SolverConfig sc = solver;
        sc.max_passes = std::max<std::size_t>(cfg.budget, 1);
        Trace tr;
        if (cfg.budget == 0) {
            // empty run: report the starting point only
            tr.solver_name = sc.name.empty() ? algorithm_name(sc.algorithm) : sc.name;
            tr.algorithm = sc.algorithm;
            tr.problem_id = P.id;
            tr.records_per_pass =
                (sc.algorithm == Algorithm::Bpl || sc.algorithm == Algorithm::BcoApgncPlus)
                    ? P.partition.blocks()
                    : 1;
            tr.budget_passes = 0;
            tr.initial_objective = objective(P, std::vector<double>(P.cols(), 0.0));
        } else {
            try {
                tr = run_solver(P, sc);
            } catch (const DivergenceError& e) {
                tr = e.partial_trace();
            }
        }
        tr.fstar = result.fstar;
        result.summaries.push_back(summarize(tr, result.fstar));
        result.traces.push_back(std::move(tr));
    }

    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        for (const auto& tr : result.traces) {
            save_trace_csv((fs::path(cfg.out_dir) / (sanitize(tr.solver_name) + ".csv")).string(),
                           tr, cfg.timing);
        }
        std::ofstream sum(fs::path(cfg.out_dir) / "summary.csv");
        if (!sum) throw IoError("cannot write summary.csv");
        sum << summary_csv(result.summaries);

        nlohmann::json meta = config_json(cfg);
        meta["problem_id"] = P.id;
        meta["fstar"] = result.fstar;
        meta["reference_residual"] = result.reference_residual;
        std::ofstream mj(fs::path(cfg.out_dir) / "meta.json");
        if (!mj) throw IoError("cannot write meta.json");
        mj << meta.dump(2) << '\n';
    }
    return result;
}

void write_instance(const std::string& dir, const RunConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    GenParams gp;
    gp.m = cfg.problem.m;
    gp.n = cfg.problem.n;
    gp.density = cfg.problem.density;
    gp.seed = cfg.problem.seed;
    gp.noise = cfg.problem.noise;
    gp.support = cfg.problem.support;
    gp.gaussian_b = cfg.problem.gaussian_b;
    auto data = gen_sparse_ls(gp);

    ColMatrix A = std::move(data.A);
    std::vector<double> b = std::move(data.b);
    if (cfg.problem.standardize) {
        auto [As, bs] = standardize(A, b);
        A = std::move(As);
        b = std::move(bs);
    }
    save_matrix_market((fs::path(dir) / "A.mtx").string(), A);
    save_vector((fs::path(dir) / "b.txt").string(), b);
    if (!data.planted.empty()) {
        save_vector((fs::path(dir) / "planted.txt").string(), data.planted);
    }
    nlohmann::json meta = config_json(cfg);
    std::ofstream mj(fs::path(dir) / "meta.json");
    if (!mj) throw IoError("cannot write meta.json");
    mj << meta.dump(2) << '\n';
}

}  // namespace blockprox::bench
