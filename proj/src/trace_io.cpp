#include "blockprox/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace blockprox {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

void write_trace_csv(std::ostream& os, const Trace& trace, bool timing) {
    os << "# solver " << trace.solver_name << '\n';
    os << "# algorithm " << algorithm_name(trace.algorithm) << '\n';
    os << "# problem " << trace.problem_id << '\n';
    os << "# records_per_pass " << trace.records_per_pass << '\n';
    os << "# budget_passes " << trace.budget_passes << '\n';
    os << "# initial_objective " << fmt(trace.initial_objective) << '\n';
    if (trace.fstar) {
        os << "# fstar " << fmt(*trace.fstar) << '\n';
    }
    if (trace.diverged) {
        os << "# diverged 1\n";
    }
    os << "k,pass,block,objective,beta_block,residual,elapsed_s\n";
    for (const auto& rec : trace.records) {
        os << rec.k << ',' << rec.pass << ',' << rec.block << ',' << fmt(rec.objective) << ','
           << fmt(rec.beta) << ',';
        if (rec.residual) {
            os << fmt(*rec.residual);
        }
        os << ',';
        if (timing) {
            os << fmt(rec.elapsed_s);
        }
        os << '\n';
    }
}

Trace read_trace_csv(std::istream& is) {
    Trace trace;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string key;
            meta >> key;
            if (key == "solver") {
                meta >> trace.solver_name;
            } else if (key == "algorithm") {
                std::string name;
                meta >> name;
                trace.algorithm = parse_algorithm(name);
            } else if (key == "problem") {
                meta >> trace.problem_id;
            } else if (key == "records_per_pass") {
                meta >> trace.records_per_pass;
            } else if (key == "budget_passes") {
                meta >> trace.budget_passes;
            } else if (key == "initial_objective") {
                meta >> trace.initial_objective;
            } else if (key == "fstar") {
                double v = 0.0;
                meta >> v;
                trace.fstar = v;
            } else if (key == "diverged") {
                trace.diverged = true;
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("k,pass,block,", 0) != 0) {
                throw IoError("trace CSV: unexpected header line: " + line);
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != 7) {
            throw IoError("trace CSV: expected 7 fields, got " +
                          std::to_string(fields.size()));
        }
        TraceRecord rec;
        rec.k = std::stoull(fields[0]);
        rec.pass = std::stoull(fields[1]);
        rec.block = std::stoi(fields[2]);
        rec.objective = std::stod(fields[3]);
        rec.beta = std::stod(fields[4]);
        if (!fields[5].empty()) {
            rec.residual = std::stod(fields[5]);
        }
        if (!fields[6].empty()) {
            rec.elapsed_s = std::stod(fields[6]);
        }
        trace.records.push_back(rec);
    }
    if (!header_seen) {
        throw IoError("trace CSV: missing header");
    }
    return trace;
}

void save_trace_csv(const std::string& path, const Trace& trace, bool timing) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_trace_csv(os, trace, timing);
}

Trace load_trace_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return read_trace_csv(is);
}

}  // namespace blockprox
