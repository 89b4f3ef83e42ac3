#include "blockprox/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

namespace blockprox {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> initial_x(const ProblemInstance& P, const SolverConfig& cfg) {
    if (cfg.x0) {
        if (cfg.x0->size() != P.cols()) {
            throw ConfigError("x0 length does not match problem dimension");
        }
        if (!all_finite(*cfg.x0)) {
            throw ConfigError("x0 contains a nonfinite entry");
        }
        return *cfg.x0;
    }
    return std::vector<double>(P.cols(), 0.0);
}

Trace make_trace(const ProblemInstance& P, const SolverConfig& cfg, std::size_t records_per_pass) {
    Trace tr;
    tr.solver_name = cfg.name.empty() ? algorithm_name(cfg.algorithm) : cfg.name;
    tr.algorithm = cfg.algorithm;
    tr.problem_id = P.id;
    tr.records_per_pass = records_per_pass;
    tr.budget_passes = cfg.max_passes;
    return tr;
}

void track_best(Trace& tr, double F, std::span<const double> x) {
    if (F < tr.best_objective) {
        tr.best_objective = F;
        tr.best_x.assign(x.begin(), x.end());
    }
}

void guard_divergence(double F, double F0, Trace& tr, std::span<const double> x) {
    const bool blown = !std::isfinite(F) || (F0 > 0.0 && F > 1e6 * F0) || !all_finite(x);
    if (blown) {
        tr.diverged = true;
        throw DivergenceError("solver diverged: objective " + std::to_string(F), std::move(tr));
    }
}

// Per-update bookkeeping shared by all four solvers: records, pass-end
// stationarity residual, early stop, cache refresh with drift tracking.
struct PassDriver {
    const ProblemInstance& P;
    const SolverConfig& cfg;
    Trace& tr;
    Clock::time_point start = Clock::now();
    double residual_step;  // alpha used for the stationarity residual

    PassDriver(const ProblemInstance& p, const SolverConfig& c, Trace& t)
        : P(p), cfg(c), tr(t) {
        residual_step = step_size(P, 0, StepPolicy::FullLipschitz);
    }

    bool pass_ended(std::size_t k) const { return (k + 1) % tr.records_per_pass == 0; }

    // Returns true when the run should stop early. `caches` are refreshed and
    // `maintained_obj` is re-synchronized by the caller via the callback.
    template <class RefreshFn>
    bool finish_update(std::size_t k, int block, double objective, double beta,
                       std::optional<double> probe_obj, std::optional<bool> branch,
                       std::span<const double> x, std::span<const double> probe,
                       RefreshFn&& refresh) {
        TraceRecord rec;
        rec.k = k;
        rec.pass = k / tr.records_per_pass;
        rec.block = block;
        rec.objective = objective;
        rec.beta = beta;
        rec.elapsed_s = seconds_since(start);
        rec.probe_objective = probe_obj;
        rec.decrease_branch = branch;

        bool stop = false;
        if (pass_ended(k)) {
            if (cfg.record_residual) {
                const double res = stationarity_residual(P, x, residual_step);
                rec.residual = res;
                tr.final_residual = res;
                if (cfg.tol > 0.0 && res <= cfg.tol) {
                    stop = true;
                    tr.stopped_early = true;
                }
            }
            const std::size_t pass_done = rec.pass + 1;
            if (pass_done % cfg.refresh_interval_passes == 0) {
                refresh();
            }
        }
        if (cfg.record_trace) {
            tr.records.push_back(std::move(rec));
            if (cfg.record_iterates) {
                tr.iterates.emplace_back(x.begin(), x.end());
                if (!probe.empty()) {
                    tr.probes.emplace_back(probe.begin(), probe.end());
                }
            }
        }
        return stop;
    }
};

double fista_next(double t) { return (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0; }

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
    if (name == "apg") return Algorithm::Apg;
    if (name == "apgnc+" || name == "apgnc") return Algorithm::ApgncPlus;
    if (name == "bpl") return Algorithm::Bpl;
    if (name == "bcoapgnc+" || name == "bcoapgnc") return Algorithm::BcoApgncPlus;
    throw ConfigError("unknown algorithm: " + std::string(name));
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Apg: return "apg";
        case Algorithm::ApgncPlus: return "apgnc+";
        case Algorithm::Bpl: return "bpl";
        case Algorithm::BcoApgncPlus: return "bcoapgnc+";
    }
    return "?";
}

void validate_config(const ProblemInstance& P, const SolverConfig& cfg) {
    const double beta_lo = cfg.allow_zero_beta ? -0.0 : 0.0;
    if (!(cfg.beta0 > beta_lo || (cfg.allow_zero_beta && cfg.beta0 == 0.0)) ||
        cfg.beta0 > 1.0) {
        throw ConfigError("beta0 must lie in (0, 1]");
    }
    if (!(cfg.t > 0.0) || !(cfg.t < 1.0)) {
        throw ConfigError("t must lie in (0, 1)");
    }
    if (cfg.max_passes < 1) {
        throw ConfigError("max_passes must be at least 1");
    }
    if (cfg.tol < 0.0) {
        throw ConfigError("tolerance must be nonnegative");
    }
    if (!(cfg.step_scale > 0.0)) {
        throw ConfigError("step_scale must be positive");
    }
    if (cfg.refresh_interval_passes < 1) {
        throw ConfigError("refresh interval must be at least one pass");
    }
    if ((cfg.algorithm == Algorithm::Apg || cfg.algorithm == Algorithm::ApgncPlus) &&
        cfg.step_policy != StepPolicy::FullLipschitz) {
        throw ConfigError("full-vector solvers require the full-lipschitz step policy");
    }
    if (cfg.algorithm == Algorithm::Bpl && cfg.bpl_schedule == MomentumSchedule::Constant &&
        cfg.bpl_omega < 0.0) {
        throw ConfigError("constant extrapolation weight must be nonnegative");
    }
    if (cfg.x0 && cfg.x0->size() != P.cols()) {
        throw ConfigError("x0 length does not match problem dimension");
    }
}

double Trace::objective_after_pass(std::size_t passes) const {
    double value = initial_objective;
    for (const auto& rec : records) {
        if (rec.pass >= passes) break;
        value = rec.objective;
    }
    return value;
}

Trace run_apg(const ProblemInstance& P, const SolverConfig& cfg) {
    validate_config(P, cfg);
    const std::size_t n = P.cols();
    const double eta = step_size(P, 0, StepPolicy::FullLipschitz) * cfg.step_scale;

    std::vector<double> x = initial_x(P, cfg);
    std::vector<double> x_prev = x;
    ResidualCache rc;
    rc.init(P, x);
    double reg_run = reg_value(P.reg, x);

    Trace tr = make_trace(P, cfg, 1);
    const double F0 = smooth_value(P, rc.residual()) + reg_run;
    tr.initial_objective = F0;
    track_best(tr, F0, x);
    PassDriver driver(P, cfg, tr);

    std::vector<double> d(n), grad(n), u(n), diff(n);
    double t_prev = 0.0, t_cur = 1.0;

    for (std::size_t k = 0; k < cfg.max_passes; ++k) {
        const double mom = (t_prev - 1.0) / t_cur;
        for (std::size_t j = 0; j < n; ++j) {
            d[j] = mom * (x[j] - x_prev[j]);
        }
        rc.add_product(P, 0, n, d);  // residual now at the extrapolated point
        grad_block_range(P, rc.residual(), 0, n, grad);
        for (std::size_t j = 0; j < n; ++j) {
            u[j] = x[j] + d[j] - eta * grad[j];
        }
        std::vector<double> xnew = prox_full(P.reg, P.partition, u, eta);
        for (std::size_t j = 0; j < n; ++j) {
            diff[j] = xnew[j] - (x[j] + d[j]);
        }
        rc.add_product(P, 0, n, diff);  // residual now at xnew

        x_prev.swap(x);
        x.swap(xnew);
        reg_run = reg_value(P.reg, x);
        const double F = smooth_value(P, rc.residual()) + reg_run;
        guard_divergence(F, F0, tr, x);
        track_best(tr, F, x);

        t_prev = t_cur;
        t_cur = fista_next(t_cur);

        const bool stop = driver.finish_update(k, -1, F, mom, std::nullopt, std::nullopt, x, {},
                                               [&] { tr.max_refresh_drift = std::max(
                                                         tr.max_refresh_drift, rc.refresh(P, x)); });
        if (stop) break;
    }
    return tr;
}

Trace run_apgnc_plus(const ProblemInstance& P, const SolverConfig& cfg) {
    validate_config(P, cfg);
    const std::size_t n = P.cols();
    const std::size_t m = P.rows();
    const double eta = step_size(P, 0, StepPolicy::FullLipschitz) * cfg.step_scale;

    std::vector<double> y = initial_x(P, cfg);
    std::vector<double> x_cur = y;
    ResidualCache ry;
    ry.init(P, y);
    std::vector<double> r_xcur(ry.residual().begin(), ry.residual().end());
    double beta = cfg.beta0;

    Trace tr = make_trace(P, cfg, 1);
    const double F0 = smooth_value(P, ry.residual()) + reg_value(P.reg, y);
    tr.initial_objective = F0;
    track_best(tr, F0, y);
    PassDriver driver(P, cfg, tr);

    std::vector<double> grad(n), u(n), diff(n), xnew(n), v(n), r_v(m);

    for (std::size_t k = 0; k < cfg.max_passes; ++k) {
        grad_block_range(P, ry.residual(), 0, n, grad);
        for (std::size_t j = 0; j < n; ++j) {
            u[j] = y[j] - eta * grad[j];
        }
        xnew = prox_full(P.reg, P.partition, u, eta);
        for (std::size_t j = 0; j < n; ++j) {
            diff[j] = xnew[j] - y[j];
        }
        ry.add_product(P, 0, n, diff);  // ry now holds the residual of xnew
        const double Fx = smooth_value(P, ry.residual()) + reg_value(P.reg, xnew);
        guard_divergence(Fx, F0, tr, xnew);
        track_best(tr, Fx, xnew);

        for (std::size_t j = 0; j < n; ++j) {
            v[j] = xnew[j] + beta * (xnew[j] - x_cur[j]);
        }
        const auto r_xnew = ry.residual();
        for (std::size_t i = 0; i < m; ++i) {
            r_v[i] = r_xnew[i] + beta * (r_xnew[i] - r_xcur[i]);
        }
        const double Fv = smooth_value(P, r_v) + reg_value(P.reg, v);

        const bool decrease = Fx <= Fv;  // equality takes the damping branch
        r_xcur.assign(r_xnew.begin(), r_xnew.end());
        x_cur = xnew;
        if (decrease) {
            y = xnew;
            beta = cfg.t * beta;
        } else {
            y = v;
            ry.assign(r_v);
            beta = std::min(beta / cfg.t, 1.0);
        }

        const bool stop = driver.finish_update(
            k, -1, Fx, beta, Fv, decrease, x_cur, v, [&] {
                tr.max_refresh_drift = std::max(tr.max_refresh_drift, ry.refresh(P, y));
                residual_of(P, x_cur, r_xcur);
            });
        if (stop) break;
    }
    return tr;
}

namespace {

// State shared by the two block solvers.
struct BlockLoop {
    const ProblemInstance& P;
    const SolverConfig& cfg;
    std::size_t s;
    std::vector<double> alpha;  // per-block step
    double global_step;

    BlockLoop(const ProblemInstance& p, const SolverConfig& c) : P(p), cfg(c) {
        s = P.partition.blocks();
        alpha.resize(s);
        for (std::size_t i = 0; i < s; ++i) {
            alpha[i] = step_size(P, i, cfg.step_policy) * cfg.step_scale;
        }
        global_step = step_size(P, 0, StepPolicy::FullLipschitz) * cfg.step_scale;
    }
};

}  // namespace

Trace run_bpl(const ProblemInstance& P, const SolverConfig& cfg) {
    validate_config(P, cfg);
    BlockLoop loop(P, cfg);
    const std::size_t s = loop.s;

    std::vector<double> x = initial_x(P, cfg);
    std::vector<double> x_prev = x;  // per-block value before each block's last update
    ResidualCache rc;
    rc.init(P, x);
    double reg_run = reg_value(P.reg, x);

    Trace tr = make_trace(P, cfg, s);
    const double F0 = smooth_value(P, rc.residual()) + reg_run;
    tr.initial_objective = F0;
    track_best(tr, F0, x);
    PassDriver driver(P, cfg, tr);

    RuleState rule(cfg.rule, P, cfg.seed, cfg.gs_r_global_step);
    double t_prev = 0.0, t_cur = 1.0;

    std::vector<double> d, grad, u, newvals;
    const std::size_t updates = cfg.max_passes * s;
    for (std::size_t k = 0; k < updates; ++k) {
        const SelectionContext ctx{P, x, rc.residual(), loop.alpha, loop.global_step};
        const std::size_t i = rule.next(ctx);
        const std::size_t c0 = P.partition.begin(i), c1 = P.partition.end(i);
        const std::size_t sz = c1 - c0;

        double omega;
        if (cfg.bpl_schedule == MomentumSchedule::FistaWeights) {
            omega = (t_prev - 1.0) / t_cur;
            t_prev = t_cur;
            t_cur = fista_next(t_cur);
        } else {
            omega = cfg.bpl_omega;
        }

        d.resize(sz);
        grad.resize(sz);
        u.resize(sz);
        newvals.resize(sz);
        for (std::size_t j = 0; j < sz; ++j) {
            d[j] = omega * (x[c0 + j] - x_prev[c0 + j]);
        }
        rc.add_product(P, c0, c1, d);  // residual at the extrapolated point
        grad_block_range(P, rc.residual(), c0, c1, grad);
        const double a = loop.alpha[i];
        for (std::size_t j = 0; j < sz; ++j) {
            u[j] = x[c0 + j] + d[j] - a * grad[j];
        }
        prox_block(P.reg, P.partition, i, u, a, newvals);

        const auto xi = std::span<const double>(x).subspan(c0, sz);
        reg_run -= reg_block_value(P.reg, P.partition, i, xi);
        reg_run += reg_block_value(P.reg, P.partition, i, newvals);
        for (std::size_t j = 0; j < sz; ++j) {
            const double extr = x[c0 + j] + d[j];
            x_prev[c0 + j] = x[c0 + j];
            d[j] = newvals[j] - extr;  // reuse d as the residual correction
            x[c0 + j] = newvals[j];
        }
        rc.add_product(P, c0, c1, d);

        const double F = smooth_value(P, rc.residual()) + reg_run;
        guard_divergence(F, F0, tr, x);
        track_best(tr, F, x);

        const bool stop = driver.finish_update(
            k, static_cast<int>(i), F, omega, std::nullopt, std::nullopt, x, {}, [&] {
                tr.max_refresh_drift = std::max(tr.max_refresh_drift, rc.refresh(P, x));
                const double fresh = smooth_value(P, rc.residual()) + reg_value(P.reg, x);
                tr.max_refresh_obj_err =
                    std::max(tr.max_refresh_obj_err,
                             std::abs(F - fresh) / std::max(1.0, std::abs(fresh)));
                reg_run = reg_value(P.reg, x);
            });
        if (stop) break;
    }
    return tr;
}

Trace run_bcoapgnc_plus(const ProblemInstance& P, const SolverConfig& cfg) {
    validate_config(P, cfg);
    BlockLoop loop(P, cfg);
    const std::size_t s = loop.s;

    std::vector<double> x = initial_x(P, cfg);
    std::vector<double> x_prev = x;
    std::vector<double> v = x;  // momentum probe, touched one block at a time
    std::vector<double> beta(s, cfg.beta0);
    ResidualCache rc, rv;
    rc.init(P, x);
    rv.init(P, v);
    double reg_x = reg_value(P.reg, x);
    double reg_v = reg_x;

    Trace tr = make_trace(P, cfg, s);
    const double F0 = smooth_value(P, rc.residual()) + reg_x;
    tr.initial_objective = F0;
    track_best(tr, F0, x);
    PassDriver driver(P, cfg, tr);

    RuleState rule(cfg.rule, P, cfg.seed, cfg.gs_r_global_step);

    std::vector<double> d, grad, u, newvals, vdelta;
    const std::size_t updates = cfg.max_passes * s;
    for (std::size_t k = 0; k < updates; ++k) {
        const SelectionContext ctx{P, x, rc.residual(), loop.alpha, loop.global_step};
        const std::size_t i = rule.next(ctx);
        const std::size_t c0 = P.partition.begin(i), c1 = P.partition.end(i);
        const std::size_t sz = c1 - c0;
        const double bi = beta[i];

        d.resize(sz);
        grad.resize(sz);
        u.resize(sz);
        newvals.resize(sz);
        vdelta.resize(sz);
        for (std::size_t j = 0; j < sz; ++j) {
            d[j] = bi * (x[c0 + j] - x_prev[c0 + j]);
        }
        rc.add_product(P, c0, c1, d);
        grad_block_range(P, rc.residual(), c0, c1, grad);
        const double a = loop.alpha[i];
        for (std::size_t j = 0; j < sz; ++j) {
            u[j] = x[c0 + j] + d[j] - a * grad[j];
        }
        prox_block(P.reg, P.partition, i, u, a, newvals);

        const auto xi = std::span<const double>(x).subspan(c0, sz);
        reg_x -= reg_block_value(P.reg, P.partition, i, xi);
        reg_x += reg_block_value(P.reg, P.partition, i, newvals);
        for (std::size_t j = 0; j < sz; ++j) {
            const double old = x[c0 + j];
            const double extr = old + d[j];
            x_prev[c0 + j] = old;
            x[c0 + j] = newvals[j];
            // probe on the updated block: x_i + beta_i (x_i - x_i_old)
            const double vnew = newvals[j] + bi * (newvals[j] - old);
            vdelta[j] = vnew - v[c0 + j];
            v[c0 + j] = vnew;
            d[j] = newvals[j] - extr;
        }
        rc.add_product(P, c0, c1, d);
        rv.add_product(P, c0, c1, vdelta);
        {
            const auto vi = std::span<const double>(v).subspan(c0, sz);
            std::vector<double> v_old(sz);
            for (std::size_t j = 0; j < sz; ++j) v_old[j] = vi[j] - vdelta[j];
            reg_v -= reg_block_value(P.reg, P.partition, i, v_old);
            reg_v += reg_block_value(P.reg, P.partition, i, vi);
        }

        double Fx = smooth_value(P, rc.residual()) + reg_x;
        const double Fv = smooth_value(P, rv.residual()) + reg_v;
        guard_divergence(Fx, F0, tr, x);

        const bool decrease = Fx <= Fv;  // ties damp the momentum
        if (decrease) {
            beta[i] = bi * cfg.t;
        } else {
            beta[i] = std::min(bi / cfg.t, 1.0);
            if (cfg.probe_feedback) {
                // study-only variant: adopt the probe block when it is better
                for (std::size_t j = 0; j < sz; ++j) {
                    vdelta[j] = v[c0 + j] - x[c0 + j];
                    x[c0 + j] = v[c0 + j];
                }
                rc.add_product(P, c0, c1, vdelta);
                const auto xi2 = std::span<const double>(x).subspan(c0, sz);
                reg_x = reg_x - reg_block_value(P.reg, P.partition, i, newvals) +
                        reg_block_value(P.reg, P.partition, i, xi2);
                Fx = smooth_value(P, rc.residual()) + reg_x;
            }
        }
        track_best(tr, Fx, x);

        const bool stop = driver.finish_update(
            k, static_cast<int>(i), Fx, beta[i], Fv, decrease, x, v, [&] {
                tr.max_refresh_drift = std::max(tr.max_refresh_drift, rc.refresh(P, x));
                tr.max_refresh_drift = std::max(tr.max_refresh_drift, rv.refresh(P, v));
                const double fresh = smooth_value(P, rc.residual()) + reg_value(P.reg, x);
                tr.max_refresh_obj_err =
                    std::max(tr.max_refresh_obj_err,
                             std::abs(Fx - fresh) / std::max(1.0, std::abs(fresh)));
                reg_x = reg_value(P.reg, x);
                reg_v = reg_value(P.reg, v);
            });
        if (stop) break;
    }
    return tr;
}

Trace run_solver(const ProblemInstance& P, const SolverConfig& cfg) {
    switch (cfg.algorithm) {
        case Algorithm::Apg: return run_apg(P, cfg);
        case Algorithm::ApgncPlus: return run_apgnc_plus(P, cfg);
        case Algorithm::Bpl: return run_bpl(P, cfg);
        case Algorithm::BcoApgncPlus: return run_bcoapgnc_plus(P, cfg);
    }
    throw ConfigError("unknown algorithm tag");
}

AssumptionReport check_assumptions(const ProblemInstance& P, const SolverConfig& cfg) {
    AssumptionReport rep;

    rep.partition_ok = P.partition.dim() == P.cols() && P.partition.blocks() >= 1;
    if (!rep.partition_ok) {
        rep.notes.push_back("partition does not cover the coordinates");
    }

    rep.steps_positive = true;
    for (std::size_t i = 0; i < P.partition.blocks(); ++i) {
        if (P.block_gram[i] <= 0.0) {
            rep.steps_positive = false;
            rep.notes.push_back("block " + std::to_string(i) +
                                " has zero Gram norm: block step undefined");
        }
    }

    const bool block_algorithm =
        cfg.algorithm == Algorithm::Bpl || cfg.algorithm == Algorithm::BcoApgncPlus;
    if (!block_algorithm || cfg.rule == BlockRule::Cyclic || cfg.rule == BlockRule::Shuffled) {
        rep.coverage_T = block_algorithm ? P.partition.blocks() : 1;
        rep.notes.push_back("block coverage: hard, T = " + std::to_string(*rep.coverage_T));
    } else {
        rep.notes.push_back(
            "block coverage: probabilistic only; harness logs the max inter-visit gap");
    }

    rep.rule_supported = !(block_algorithm && cfg.rule == BlockRule::GSs && !is_convex(P.reg));
    if (!rep.rule_supported) {
        rep.notes.push_back("gs-s selection requires a convex regularizer");
    }

    rep.config_ok = true;
    try {
        validate_config(P, cfg);
    } catch (const ConfigError& e) {
        rep.config_ok = false;
        rep.notes.push_back(std::string("config rejected: ") + e.what());
    }
    return rep;
}

std::ostream& operator<<(std::ostream& os, const AssumptionReport& rep) {
    os << "partition: " << (rep.partition_ok ? "ok" : "INVALID") << '\n';
    os << "block steps: " << (rep.steps_positive ? "positive" : "UNDEFINED") << '\n';
    os << "rule: " << (rep.rule_supported ? "supported" : "UNSUPPORTED") << '\n';
    os << "config: " << (rep.config_ok ? "ok" : "REJECTED") << '\n';
    if (rep.coverage_T) {
        os << "coverage: T = " << *rep.coverage_T << '\n';
    } else {
        os << "coverage: probabilistic\n";
    }
    for (const auto& note : rep.notes) {
        os << "  - " << note << '\n';
    }
    return os;
}

}  // namespace blockprox
