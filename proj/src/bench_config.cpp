#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "blockprox/bench.hpp"

namespace blockprox::bench {

namespace {

struct Value {
    enum class Kind { String, Number, Bool, Array } kind;
    std::string str;
    double num = 0.0;
    bool flag = false;
    std::vector<Value> items;

    double as_number(const std::string& key) const {
        if (kind != Kind::Number) throw ConfigError("config: " + key + " must be a number");
        return num;
    }
    std::size_t as_count(const std::string& key) const {
        const double v = as_number(key);
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
            throw ConfigError("config: " + key + " must be a nonnegative integer");
        }
        return static_cast<std::size_t>(v);
    }
    const std::string& as_string(const std::string& key) const {
        if (kind != Kind::String) throw ConfigError("config: " + key + " must be a string");
        return str;
    }
    bool as_bool(const std::string& key) const {
        if (kind != Kind::Bool) throw ConfigError("config: " + key + " must be a boolean");
        return flag;
    }
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

Value parse_value(const std::string& raw);

Value parse_array(const std::string& raw) {
    Value v;
    v.kind = Value::Kind::Array;
    const std::string inner = trim(raw.substr(1, raw.size() - 2));
    if (inner.empty()) return v;
    std::string cur;
    bool quoted = false;
    for (char c : inner) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
            v.items.push_back(parse_value(trim(cur)));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    v.items.push_back(parse_value(trim(cur)));
    return v;
}

Value parse_value(const std::string& raw) {
    if (raw.empty()) throw ConfigError("config: empty value");
    Value v;
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') {
            throw ConfigError("config: unterminated string: " + raw);
        }
        v.kind = Value::Kind::String;
        v.str = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') throw ConfigError("config: unterminated array: " + raw);
        return parse_array(raw);
    }
    if (raw == "true" || raw == "false") {
        v.kind = Value::Kind::Bool;
        v.flag = raw == "true";
        return v;
    }
    v.kind = Value::Kind::Number;
    try {
        std::size_t used = 0;
        v.num = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse value: " + raw);
    }
    return v;
}

LossScale parse_loss_scale(const std::string& s) {
    if (s == "cols") return LossScale::Cols;
    if (s == "rows") return LossScale::Rows;
    if (s == "unit") return LossScale::Unit;
    throw ConfigError("config: loss_scale must be \"cols\", \"rows\" or \"unit\"");
}

void apply_problem(ProblemSection& p, const std::string& key, const Value& v) {
    if (key == "kind") {
        const auto& s = v.as_string(key);
        if (s == "generate") p.kind = ProblemSection::Kind::Generate;
        else if (s == "files") p.kind = ProblemSection::Kind::Files;
        else throw ConfigError("config: problem kind must be \"generate\" or \"files\"");
    } else if (key == "m") p.m = v.as_count(key);
    else if (key == "n") p.n = v.as_count(key);
    else if (key == "density") p.density = v.as_number(key);
    else if (key == "seed") p.seed = v.as_count(key);
    else if (key == "standardize") p.standardize = v.as_bool(key);
    else if (key == "loss_scale") p.loss_scale = parse_loss_scale(v.as_string(key));
    else if (key == "gaussian_b") p.gaussian_b = v.as_bool(key);
    else if (key == "noise") p.noise = v.as_number(key);
    else if (key == "support") p.support = v.as_count(key);
    else if (key == "matrix") p.matrix_path = v.as_string(key);
    else if (key == "rhs") p.rhs_path = v.as_string(key);
    else if (key == "blocks") p.blocks = v.as_count(key);
    else throw ConfigError("config: unknown problem key: " + key);
}

void apply_regularizer(RegSection& r, const std::string& key, const Value& v) {
    if (key == "type") r.type = v.as_string(key);
    else if (key == "lambda") r.lambda = v.as_number(key);
    else if (key == "theta") r.theta = v.as_number(key);
    else if (key == "gamma") r.gamma = v.as_number(key);
    else if (key == "groups") r.group_count = v.as_count(key);
    else if (key == "group_boundaries") {
        if (v.kind != Value::Kind::Array) {
            throw ConfigError("config: group_boundaries must be an array");
        }
        r.group_boundaries.clear();
        for (const auto& item : v.items) {
            r.group_boundaries.push_back(item.as_count(key));
        }
    } else throw ConfigError("config: unknown regularizer key: " + key);
}

void apply_run(RunConfig& cfg, const std::string& key, const Value& v) {
    if (key == "budget") cfg.budget = v.as_count(key);
    else if (key == "ref_budget") cfg.ref_budget = v.as_count(key);
    else if (key == "out") cfg.out_dir = v.as_string(key);
    else if (key == "timing") cfg.timing = v.as_bool(key);
    else throw ConfigError("config: unknown run key: " + key);
}

void apply_solver(SolverConfig& s, const std::string& key, const Value& v) {
    if (key == "name") s.name = v.as_string(key);
    else if (key == "algorithm") s.algorithm = parse_algorithm(v.as_string(key));
    else if (key == "rule") s.rule = parse_rule(v.as_string(key));
    else if (key == "beta") s.beta0 = v.as_number(key);
    else if (key == "t") s.t = v.as_number(key);
    else if (key == "step") s.step_policy = parse_step_policy(v.as_string(key));
    else if (key == "seed") s.seed = v.as_count(key);
    else if (key == "schedule") {
        const auto& sch = v.as_string(key);
        if (sch == "fista") s.bpl_schedule = MomentumSchedule::FistaWeights;
        else if (sch == "constant") s.bpl_schedule = MomentumSchedule::Constant;
        else throw ConfigError("config: schedule must be \"fista\" or \"constant\"");
    } else if (key == "omega") s.bpl_omega = v.as_number(key);
    else if (key == "gs_r_global") s.gs_r_global_step = v.as_bool(key);
    else if (key == "probe_feedback") s.probe_feedback = v.as_bool(key);
    else if (key == "tol") s.tol = v.as_number(key);
    else throw ConfigError("config: unknown solver key: " + key);
}

}  // namespace

StepPolicy parse_step_policy(std::string_view name) {
    if (name == "paper-block") return StepPolicy::PaperBlock;
    if (name == "lipschitz-block") return StepPolicy::LipschitzBlock;
    if (name == "full-lipschitz") return StepPolicy::FullLipschitz;
    throw ConfigError("unknown step policy: " + std::string(name));
}

std::string step_policy_name(StepPolicy policy) {
    switch (policy) {
        case StepPolicy::PaperBlock: return "paper-block";
        case StepPolicy::LipschitzBlock: return "lipschitz-block";
        case StepPolicy::FullLipschitz: return "full-lipschitz";
    }
    return "?";
}

RunConfig parse_config(std::istream& is) {
    RunConfig cfg;
    cfg.solvers.clear();
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        try {
            if (line.front() == '[') {
                if (line.rfind("[[", 0) == 0) {
                    if (line != "[[solver]]") {
                        throw ConfigError("config: unknown table array: " + line);
                    }
                    cfg.solvers.emplace_back();
                    section = "solver";
                } else {
                    if (line.back() != ']') throw ConfigError("config: bad section: " + line);
                    section = line.substr(1, line.size() - 2);
                    if (section != "problem" && section != "regularizer" && section != "run") {
                        throw ConfigError("config: unknown section: " + section);
                    }
                }
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("config: expected key = value: " + line);
            }
            const std::string key = trim(line.substr(0, eq));
            const Value value = parse_value(trim(line.substr(eq + 1)));
            if (section == "problem") apply_problem(cfg.problem, key, value);
            else if (section == "regularizer") apply_regularizer(cfg.regularizer, key, value);
            else if (section == "run") apply_run(cfg, key, value);
            else if (section == "solver") apply_solver(cfg.solvers.back(), key, value);
            else throw ConfigError("config: key outside any section: " + key);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(e.what()) + " (line " + std::to_string(lineno) + ")");
        }
    }
    // unique solver names
    for (std::size_t i = 0; i < cfg.solvers.size(); ++i) {
        if (cfg.solvers[i].name.empty()) {
            cfg.solvers[i].name = algorithm_name(cfg.solvers[i].algorithm);
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (cfg.solvers[i].name == cfg.solvers[j].name) {
                throw ConfigError("config: duplicate solver name: " + cfg.solvers[i].name);
            }
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    return parse_config(is);
}

RegularizerSpec build_regularizer(const RegSection& reg, std::size_t n) {
    RegularizerSpec spec;
    if (reg.type == "none") {
        spec = ZeroReg{};
    } else if (reg.type == "l1") {
        spec = L1{reg.lambda};
    } else if (reg.type == "group-l2") {
        BlockPartition groups;
        if (!reg.group_boundaries.empty()) {
            groups = BlockPartition(reg.group_boundaries);
        } else if (reg.group_count > 0) {
            groups = make_partition(n, reg.group_count);
        } else {
            throw ConfigError("group-l2 needs groups or group_boundaries");
        }
        spec = GroupL2{reg.lambda, std::move(groups)};
    } else if (reg.type == "capped-l1") {
        spec = CappedL1{reg.lambda, reg.theta};
    } else if (reg.type == "scad") {
        spec = Scad{reg.lambda, reg.gamma};
    } else {
        throw ConfigError("unknown regularizer type: " + reg.type);
    }
    validate_spec(spec, n);
    return spec;
}

ProblemInstance build_problem(const ProblemSection& prob, const RegSection& reg) {
    ColMatrix A;
    std::vector<double> b;
    if (prob.kind == ProblemSection::Kind::Generate) {
        GenParams gp;
        gp.m = prob.m;
        gp.n = prob.n;
        gp.density = prob.density;
        gp.seed = prob.seed;
        gp.noise = prob.noise;
        gp.support = prob.support;
        gp.gaussian_b = prob.gaussian_b;
        auto data = gen_sparse_ls(gp);
        A = std::move(data.A);
        b = std::move(data.b);
    } else {
        if (prob.matrix_path.empty() || prob.rhs_path.empty()) {
            throw ConfigError("problem kind \"files\" needs matrix and rhs paths");
        }
        A = load_matrix_market(prob.matrix_path);
        b = load_vector(prob.rhs_path);
    }
    if (prob.standardize) {
        auto [As, bs] = standardize(A, b);
        A = std::move(As);
        b = std::move(bs);
    }
    const std::size_t n = A.cols();
    auto partition = make_partition(n, prob.blocks == 0 ? 1 : prob.blocks);
    auto spec = build_regularizer(reg, n);
    return make_problem(std::move(A), std::move(b), std::move(spec), std::move(partition),
                        prob.loss_scale);
}

void set_seed(RunConfig& cfg, std::uint64_t seed) {
    cfg.problem.seed = seed;
    for (std::size_t i = 0; i < cfg.solvers.size(); ++i) {
        cfg.solvers[i].seed = seed * 1000003ULL + 101ULL * (i + 1);
    }
}

}  // namespace blockprox::bench
