#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "blockprox/solvers.hpp"
#include "test_oracles.hpp"

using namespace blockprox;

namespace {

ProblemInstance one_dim(double a, double b, RegularizerSpec reg = ZeroReg{}) {
    return make_problem(ColMatrix::dense(1, 1, {a}), {b}, std::move(reg), make_partition(1, 1));
}

SolverConfig basic(Algorithm alg) {
    SolverConfig cfg;
    cfg.algorithm = alg;
    cfg.step_policy = (alg == Algorithm::Apg || alg == Algorithm::ApgncPlus)
                          ? StepPolicy::FullLipschitz
                          : StepPolicy::LipschitzBlock;
    return cfg;
}

// Reconstruct the per-block momentum evolution from the trace and verify each
// recorded beta is exactly the damped or amplified previous value of that
// block; untouched blocks must carry their old value forward.
void check_momentum_ledger(const Trace& tr, double beta0, double t, std::size_t s) {
    std::vector<double> beta(s, beta0);
    for (const auto& rec : tr.records) {
        REQUIRE(rec.block >= 0);
        REQUIRE(rec.decrease_branch.has_value());
        const auto b = static_cast<std::size_t>(rec.block);
        const double expected =
            *rec.decrease_branch ? beta[b] * t : std::min(beta[b] / t, 1.0);
        CHECK(rec.beta == expected);  // identical arithmetic, so exact equality
        beta[b] = expected;
        CHECK(rec.beta > 0.0);
        CHECK(rec.beta <= 1.0);
    }
}

}  // namespace

TEST_CASE("apg extrapolation weights follow the t-recursion") {
    auto P = oracle::random_instance(8, 6, 1, L1{0.3}, 1);
    auto cfg = basic(Algorithm::Apg);
    cfg.max_passes = 5;
    const auto tr = run_apg(P, cfg);
    REQUIRE(tr.records.size() == 5);

    // t1 = 1, t0 = 0; recorded beta_k is (t_{k-1} - 1)/t_k
    double t_prev = 0.0, t_cur = 1.0;
    for (const auto& rec : tr.records) {
        CHECK(rec.beta == doctest::Approx((t_prev - 1.0) / t_cur).epsilon(1e-15));
        const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t_cur * t_cur)) / 2.0;
        t_prev = t_cur;
        t_cur = t_next;
    }
    // t2 is the golden ratio
    CHECK((1.0 + std::sqrt(5.0)) / 2.0 == doctest::Approx(1.618033988749895));
    CHECK(tr.records[1].beta == doctest::Approx((1.0 - 1.0) / 1.618033988749895));
}

TEST_CASE("apg takes the exact one-step solution on a 1-d quadratic") {
    auto P = one_dim(1.0, 2.0);
    // n = 1 scaling: L = 1, eta = 1
    CHECK(step_size(P, 0, StepPolicy::FullLipschitz) == doctest::Approx(1.0));
    auto cfg = basic(Algorithm::Apg);
    cfg.max_passes = 1;
    cfg.record_iterates = true;
    const auto tr = run_apg(P, cfg);
    REQUIRE(tr.iterates.size() == 1);
    CHECK(tr.iterates[0][0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(tr.records[0].objective == doctest::Approx(0.0));
}

TEST_CASE("apg solves a tiny lasso to the enumeration optimum") {
    auto P = oracle::random_instance(6, 2, 1, L1{0.4}, 7);
    const auto enumerated = oracle::lasso_enumeration_optimum(P, 0.4);
    auto cfg = basic(Algorithm::Apg);
    cfg.max_passes = 500;
    const auto tr = run_apg(P, cfg);
    CHECK(tr.records.back().objective == doctest::Approx(enumerated.objective).epsilon(1e-8));
    REQUIRE(tr.final_residual.has_value());
    CHECK(*tr.final_residual <= 1e-8);
}

TEST_CASE("apgnc+ momentum arithmetic is exact") {
    // pure arithmetic of the two branches
    CHECK(0.9 * 0.9 == 0.81);
    CHECK(std::min(0.5 / 0.8, 1.0) == 0.625);
    CHECK(std::min(0.8 / 0.2, 1.0) == 1.0);

    bool saw_decrease = false, saw_increase = false;
    const std::pair<double, double> params[] = {{0.9, 0.9}, {0.1, 0.5}, {0.5, 0.2}};
    for (const auto& [beta0, t] : params) {
        for (std::uint64_t seed : {11ULL, 12ULL}) {
            auto P = oracle::random_instance(10, 8, 1, L1{0.3}, seed);
            auto cfg = basic(Algorithm::ApgncPlus);
            cfg.beta0 = beta0;
            cfg.t = t;
            cfg.max_passes = 60;
            const auto tr = run_apgnc_plus(P, cfg);

            double beta = beta0;
            for (const auto& rec : tr.records) {
                REQUIRE(rec.decrease_branch.has_value());
                const double expected =
                    *rec.decrease_branch ? t * beta : std::min(beta / t, 1.0);
                CHECK(rec.beta == expected);
                beta = expected;
                CHECK(beta > 0.0);
                CHECK(beta <= 1.0);
                (*rec.decrease_branch ? saw_decrease : saw_increase) = true;
            }
        }
    }
    CHECK(saw_decrease);
    CHECK(saw_increase);
}

TEST_CASE("apgnc+ branch comparisons hold on recomputation") {
    auto P = oracle::random_instance(12, 9, 1, L1{0.2}, 13);
    auto cfg = basic(Algorithm::ApgncPlus);
    cfg.beta0 = 0.8;
    cfg.t = 0.5;
    cfg.max_passes = 50;
    cfg.record_iterates = true;
    const auto tr = run_apgnc_plus(P, cfg);
    REQUIRE(tr.iterates.size() == tr.records.size());
    REQUIRE(tr.probes.size() == tr.records.size());
    for (std::size_t k = 0; k < tr.records.size(); ++k) {
        const double fx = objective(P, tr.iterates[k]);
        const double fv = objective(P, tr.probes[k]);
        CHECK(std::abs(fx - tr.records[k].objective) <= 1e-9 * std::max(1.0, std::abs(fx)));
        CHECK(std::abs(fv - *tr.records[k].probe_objective) <=
              1e-9 * std::max(1.0, std::abs(fv)));
        if (*tr.records[k].decrease_branch) {
            CHECK(fx <= fv + 1e-9);
        } else {
            CHECK(fx >= fv - 1e-9);
        }
    }
}

TEST_CASE("bpl with one block reproduces apg exactly") {
    for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
        auto P = oracle::random_instance(8, 6, 1, L1{0.3}, seed);
        auto apg_cfg = basic(Algorithm::Apg);
        apg_cfg.max_passes = 100;
        apg_cfg.record_iterates = true;
        auto bpl_cfg = basic(Algorithm::Bpl);
        bpl_cfg.step_policy = StepPolicy::FullLipschitz;  // same eta as apg when s = 1
        bpl_cfg.bpl_schedule = MomentumSchedule::FistaWeights;
        bpl_cfg.max_passes = 100;
        bpl_cfg.record_iterates = true;

        const auto ta = run_apg(P, apg_cfg);
        const auto tb = run_bpl(P, bpl_cfg);
        REQUIRE(ta.iterates.size() == 100);
        REQUIRE(tb.iterates.size() == 100);
        double worst = 0.0;
        for (std::size_t k = 0; k < 100; ++k) {
            for (std::size_t j = 0; j < 6; ++j) {
                worst = std::max(worst, std::abs(ta.iterates[k][j] - tb.iterates[k][j]));
            }
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("bpl with exact block steps solves a diagonal system in one pass") {
    auto P = make_problem(ColMatrix::dense(2, 2, {1.0, 0.0, 0.0, 2.0}), {1.0, 2.0}, ZeroReg{},
                          make_partition(2, 2));
    auto cfg = basic(Algorithm::Bpl);
    cfg.rule = BlockRule::Cyclic;
    cfg.bpl_schedule = MomentumSchedule::Constant;
    cfg.bpl_omega = 0.0;
    cfg.max_passes = 1;
    cfg.record_iterates = true;
    const auto tr = run_bpl(P, cfg);
    REQUIRE(tr.iterates.size() == 2);
    CHECK(tr.iterates[1][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tr.iterates[1][1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero data keeps every solver at the origin") {
    auto P = make_problem(ColMatrix::dense(2, 2, {1.0, 0.0, 0.0, 1.0}), {0.0, 0.0}, L1{0.5},
                          make_partition(2, 2));
    for (Algorithm alg : {Algorithm::Apg, Algorithm::ApgncPlus, Algorithm::Bpl,
                          Algorithm::BcoApgncPlus}) {
        auto cfg = basic(alg);
        cfg.max_passes = 20;
        cfg.record_iterates = true;
        const auto tr = run_solver(P, cfg);
        for (const auto& x : tr.iterates) {
            CHECK(x == std::vector<double>{0.0, 0.0});
        }
    }
}

TEST_CASE("bco momentum is per block and exactly follows the branch rule") {
    auto P = oracle::random_instance(14, 10, 5, L1{0.25}, 31, 0.7);
    auto cfg = basic(Algorithm::BcoApgncPlus);
    cfg.rule = BlockRule::Shuffled;
    cfg.beta0 = 0.8;
    cfg.t = 0.2;
    cfg.seed = 5;
    cfg.max_passes = 40;
    const auto tr = run_bcoapgnc_plus(P, cfg);
    REQUIRE(tr.records.size() == 200);
    check_momentum_ledger(tr, 0.8, 0.2, 5);
}

TEST_CASE("bco updates exactly one block per iteration") {
    auto P = oracle::random_instance(10, 8, 4, L1{0.3}, 33);
    auto cfg = basic(Algorithm::BcoApgncPlus);
    cfg.rule = BlockRule::Cyclic;
    cfg.max_passes = 6;
    cfg.record_iterates = true;
    const auto tr = run_bcoapgnc_plus(P, cfg);
    std::vector<double> prev(8, 0.0);
    for (std::size_t k = 0; k < tr.records.size(); ++k) {
        const auto& x = tr.iterates[k];
        const auto b = static_cast<std::size_t>(tr.records[k].block);
        for (std::size_t j = 0; j < 8; ++j) {
            const std::size_t blk = P.partition.block_of(j);
            if (blk != b) {
                CHECK(x[j] == prev[j]);  // untouched blocks copied verbatim
            }
        }
        prev = x;
    }
}

TEST_CASE("bco probe comparisons hold on recomputation") {
    auto P = oracle::random_instance(12, 8, 4, CappedL1{0.3, 0.2}, 37);
    auto cfg = basic(Algorithm::BcoApgncPlus);
    cfg.rule = BlockRule::Uniform;
    cfg.seed = 3;
    cfg.beta0 = 0.8;
    cfg.t = 0.2;
    cfg.max_passes = 30;
    cfg.record_iterates = true;
    const auto tr = run_bcoapgnc_plus(P, cfg);
    for (std::size_t k = 0; k < tr.records.size(); ++k) {
        const double fx = objective(P, tr.iterates[k]);
        const double fv = objective(P, tr.probes[k]);
        CHECK(std::abs(fx - tr.records[k].objective) <= 1e-9 * std::max(1.0, std::abs(fx)));
        if (*tr.records[k].decrease_branch) {
            CHECK(fx <= fv + 1e-9);
        } else {
            CHECK(fx >= fv - 1e-9);
        }
    }
}

TEST_CASE("probe never replaces the iterate unless feedback is enabled") {
    auto P = oracle::random_instance(12, 8, 4, L1{0.3}, 39);
    auto cfg = basic(Algorithm::BcoApgncPlus);
    cfg.rule = BlockRule::Cyclic;
    cfg.beta0 = 0.9;
    cfg.t = 0.5;
    cfg.max_passes = 25;
    cfg.record_iterates = true;
    const auto tr = run_bcoapgnc_plus(P, cfg);

    // v must differ from x only on blocks that have been updated so far
    std::vector<bool> touched(4, false);
    for (std::size_t k = 0; k < tr.records.size(); ++k) {
        touched[static_cast<std::size_t>(tr.records[k].block)] = true;
        for (std::size_t j = 0; j < 8; ++j) {
            if (!touched[P.partition.block_of(j)]) {
                CHECK(tr.probes[k][j] == tr.iterates[k][j]);
            }
        }
    }

    auto fb = cfg;
    fb.probe_feedback = true;
    const auto tf = run_bcoapgnc_plus(P, fb);  // smoke: the study variant runs
    CHECK(tf.records.size() == tr.records.size());
}

TEST_CASE("zero-momentum block solvers descend monotonically") {
    const BlockPartition groups = make_partition(12, 4);
    const std::vector<RegularizerSpec> regs = {L1{0.3}, GroupL2{0.3, groups},
                                               CappedL1{0.3, 0.15}, Scad{0.3, 3.0}, ZeroReg{}};
    for (std::size_t ri = 0; ri < regs.size(); ++ri) {
        auto P = oracle::random_instance(16, 12, 4, regs[ri], 50 + ri, 0.8);

        auto bpl = basic(Algorithm::Bpl);
        bpl.bpl_schedule = MomentumSchedule::Constant;
        bpl.bpl_omega = 0.0;
        bpl.rule = BlockRule::Cyclic;
        bpl.max_passes = 60;

        auto bco = basic(Algorithm::BcoApgncPlus);
        bco.allow_zero_beta = true;
        bco.beta0 = 0.0;
        bco.rule = BlockRule::Shuffled;
        bco.seed = 77;
        bco.max_passes = 60;

        for (const auto* cfg : {&bpl, &bco}) {
            const auto tr = run_solver(P, *cfg);
            double last = tr.initial_objective;
            for (const auto& rec : tr.records) {
                CHECK(rec.objective <= last + 1e-12 * std::max(1.0, std::abs(last)));
                last = rec.objective;
            }
        }
    }
}

TEST_CASE("all four solvers reach stationarity on the small convex suite") {
    struct Case {
        RegularizerSpec reg;
        std::size_t n, s;
    };
    const std::vector<Case> cases = {
        {L1{0.4}, 12, 3},
        {GroupL2{0.4, make_partition(24, 6)}, 24, 6},
        {ZeroReg{}, 8, 2},
        {L1{0.05}, 40, 5},
    };
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        auto P = oracle::random_instance(cases[ci].n + 10, cases[ci].n, cases[ci].s,
                                         cases[ci].reg, 500 + ci, 0.9);
        for (Algorithm alg : {Algorithm::Apg, Algorithm::ApgncPlus, Algorithm::Bpl,
                              Algorithm::BcoApgncPlus}) {
            auto cfg = basic(alg);
            cfg.rule = BlockRule::Cyclic;
            cfg.max_passes = 3000;
            cfg.tol = 1e-7;
            const auto tr = run_solver(P, cfg);
            REQUIRE(tr.final_residual.has_value());
            CHECK(*tr.final_residual <= 1e-6);
        }
    }
}

TEST_CASE("block solver limit points match the lasso enumeration oracle") {
    for (std::uint64_t seed : {61ULL, 62ULL, 63ULL}) {
        auto P = oracle::random_instance(5, 2, 2, L1{0.3}, seed);
        const auto enumerated = oracle::lasso_enumeration_optimum(P, 0.3);
        for (Algorithm alg : {Algorithm::Bpl, Algorithm::BcoApgncPlus}) {
            auto cfg = basic(alg);
            cfg.rule = BlockRule::Cyclic;
            cfg.max_passes = 800;
            const auto tr = run_solver(P, cfg);
            CHECK(tr.best_objective ==
                  doctest::Approx(enumerated.objective).epsilon(1e-6));
            // no iterate may undercut the enumerated optimum
            for (const auto& rec : tr.records) {
                CHECK(rec.objective >= enumerated.objective - 1e-9);
            }
        }
    }
}

TEST_CASE("traces are bit-identical across reruns") {
    auto P = oracle::random_instance(15, 10, 5, L1{0.3}, 71, 0.6);
    auto cfg = basic(Algorithm::BcoApgncPlus);
    cfg.rule = BlockRule::Uniform;
    cfg.seed = 99;
    cfg.max_passes = 30;
    const auto a = run_solver(P, cfg);
    const auto b = run_solver(P, cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        CHECK(a.records[k].objective == b.records[k].objective);
        CHECK(a.records[k].beta == b.records[k].beta);
        CHECK(a.records[k].block == b.records[k].block);
        CHECK(a.records[k].residual == b.records[k].residual);
    }
}

TEST_CASE("runaway steps trigger the divergence guard") {
    auto P = oracle::random_instance(10, 8, 4, ZeroReg{}, 81);
    auto cfg = basic(Algorithm::Bpl);
    cfg.bpl_schedule = MomentumSchedule::Constant;
    cfg.bpl_omega = 0.0;
    cfg.step_scale = 50.0;  // far beyond 2/L
    cfg.max_passes = 400;
    CHECK_THROWS_AS(run_bpl(P, cfg), DivergenceError);
    try {
        run_bpl(P, cfg);
    } catch (const DivergenceError& e) {
        CHECK(e.partial_trace().diverged);
        CHECK(!e.partial_trace().records.empty());
    }
}

TEST_CASE("objective from the maintained residual matches recomputation at refreshes") {
    auto P = oracle::random_instance(20, 16, 4, L1{0.2}, 91, 0.5);
    auto cfg = basic(Algorithm::BcoApgncPlus);
    cfg.rule = BlockRule::Cyclic;
    cfg.max_passes = 200;
    cfg.refresh_interval_passes = 50;
    const auto tr = run_solver(P, cfg);
    CHECK(tr.max_refresh_obj_err <= 1e-8);
    double bnorm = 0.0;
    for (double v : P.b) bnorm += v * v;
    CHECK(tr.max_refresh_drift <= 1e-8 * (1.0 + std::sqrt(bnorm)));
}

TEST_CASE("config validation enforces the input contract") {
    auto P = oracle::random_instance(6, 4, 2, L1{0.3}, 101);
    auto cfg = basic(Algorithm::BcoApgncPlus);
    cfg.beta0 = 1.5;
    CHECK_THROWS_AS(run_solver(P, cfg), ConfigError);
    cfg.beta0 = 0.9;
    cfg.t = 1.0;
    CHECK_THROWS_AS(run_solver(P, cfg), ConfigError);
    cfg.t = 0.9;
    cfg.max_passes = 0;
    CHECK_THROWS_AS(run_solver(P, cfg), ConfigError);

    auto apg = basic(Algorithm::Apg);
    apg.step_policy = StepPolicy::PaperBlock;
    CHECK_THROWS_AS(run_solver(P, apg), ConfigError);
}

TEST_CASE("assumption report covers coverage and rule support") {
    auto P = oracle::random_instance(8, 6, 3, Scad{0.2, 3.0}, 111);
    auto cfg = basic(Algorithm::BcoApgncPlus);
    cfg.rule = BlockRule::Cyclic;
    auto rep = check_assumptions(P, cfg);
    CHECK(rep.partition_ok);
    CHECK(rep.steps_positive);
    CHECK(rep.rule_supported);
    CHECK(rep.config_ok);
    REQUIRE(rep.coverage_T.has_value());
    CHECK(*rep.coverage_T == 3);

    cfg.rule = BlockRule::Shuffled;
    rep = check_assumptions(P, cfg);
    REQUIRE(rep.coverage_T.has_value());
    CHECK(*rep.coverage_T == 3);

    cfg.rule = BlockRule::GSs;
    rep = check_assumptions(P, cfg);
    CHECK_FALSE(rep.rule_supported);
    CHECK_FALSE(rep.coverage_T.has_value());

    cfg.rule = BlockRule::Cyclic;
    cfg.beta0 = 1.5;
    rep = check_assumptions(P, cfg);
    CHECK_FALSE(rep.config_ok);
}

TEST_CASE("early stopping honors the tolerance") {
    auto P = oracle::random_instance(10, 8, 2, L1{0.5}, 121);
    auto cfg = basic(Algorithm::Bpl);
    cfg.rule = BlockRule::Cyclic;
    cfg.max_passes = 5000;
    cfg.tol = 1e-6;
    const auto tr = run_solver(P, cfg);
    CHECK(tr.stopped_early);
    CHECK(tr.records.size() < 5000 * 2);
    REQUIRE(tr.final_residual.has_value());
    CHECK(*tr.final_residual <= 1e-6);
}
