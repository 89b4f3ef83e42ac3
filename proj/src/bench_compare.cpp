#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "blockprox/bench.hpp"

namespace blockprox::bench {

CompareReport compare_traces(const std::vector<Trace>& traces,
                             std::vector<std::size_t> checkpoints) {
    if (traces.size() < 2) {
        throw ConfigError("compare needs at least two traces");
    }
    const std::string& pid = traces.front().problem_id;
    const std::size_t budget = traces.front().budget_passes;
    for (const auto& tr : traces) {
        if (tr.problem_id != pid) {
            throw ConfigError("compare: traces come from different problems (" + pid + " vs " +
                              tr.problem_id + ")");
        }
        if (tr.budget_passes != budget) {
            throw ConfigError("compare: traces have different pass budgets");
        }
        if (!tr.fstar) {
            throw ConfigError("compare: trace " + tr.solver_name +
                              " carries no reference value");
        }
    }

    if (checkpoints.empty()) {
        checkpoints = {5, 10, 20, 50, budget};
    }
    std::set<std::size_t> uniq;
    for (std::size_t p : checkpoints) {
        if (p <= budget) uniq.insert(p);
    }
    CompareReport report;
    report.checkpoints.assign(uniq.begin(), uniq.end());

    for (const auto& tr : traces) {
        CompareRow row;
        row.solver = tr.solver_name;
        for (std::size_t p : report.checkpoints) {
            row.gaps.push_back(tr.objective_after_pass(p) - *tr.fstar);
        }
        report.rows.push_back(std::move(row));
    }

    for (std::size_t c = 0; c < report.checkpoints.size(); ++c) {
        double best = report.rows.front().gaps[c];
        std::size_t best_i = 0;
        bool tied = false;
        for (std::size_t i = 1; i < report.rows.size(); ++i) {
            const double g = report.rows[i].gaps[c];
            if (g < best) {
                best = g;
                best_i = i;
                tied = false;
            } else if (g == best) {
                tied = true;
            }
        }
        report.winners.push_back(tied ? "tie" : report.rows[best_i].solver);
    }
    return report;
}

CompareReport compare_files(const std::vector<std::string>& paths,
                            std::vector<std::size_t> checkpoints) {
    std::vector<Trace> traces;
    traces.reserve(paths.size());
    for (const auto& p : paths) {
        traces.push_back(load_trace_csv(p));
    }
    return compare_traces(traces, std::move(checkpoints));
}

bool holds_best(const CompareReport& report, const std::string& solver) {
    const auto it = std::find_if(report.rows.begin(), report.rows.end(),
                                 [&](const CompareRow& r) { return r.solver == solver; });
    if (it == report.rows.end()) {
        throw ConfigError("compare: no trace named " + solver);
    }
    for (std::size_t c = 0; c < report.checkpoints.size(); ++c) {
        for (const auto& row : report.rows) {
            if (row.gaps[c] < it->gaps[c]) return false;
        }
    }
    return true;
}

std::string render(const CompareReport& report) {
    std::ostringstream os;
    os << "pass";
    for (const auto& row : report.rows) {
        os << '\t' << row.solver;
    }
    os << "\twinner\n";
    for (std::size_t c = 0; c < report.checkpoints.size(); ++c) {
        os << report.checkpoints[c];
        for (const auto& row : report.rows) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6g", row.gaps[c]);
            os << '\t' << buf;
        }
        os << '\t' << report.winners[c] << '\n';
    }
    return os.str();
}

}  // namespace blockprox::bench
