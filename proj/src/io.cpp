#include "cogarq/io.hpp"

#include <fstream>
#include <sstream>

#include "cogarq/errors.hpp"

namespace cogarq::io {

namespace {

template <class T>
T get(const json& j, const char* key, const char* where) {
    if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(where) + "." + key + ": " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const char* where) {
    return j.contains(key) ? get<T>(j, key, where) : fallback;
}

void require_object(const json& j, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
}

json estimate(const Estimate& e) { return {{"mean", e.mean}, {"stderr", e.stderr_}}; }

}  // namespace

json to_json(const SystemParams& p) {
    return {{"alpha", p.alpha}, {"rho", p.rho}, {"lambda", p.lambda},
            {"nu", p.nu}, {"lambda_s", p.lambda_s}, {"t_max", p.t_max}};
}

json to_json(const Metrics& m) {
    return {{"j_p", m.j_p}, {"w_p", m.w_p}, {"w_s", m.w_s}, {"j_fp", m.j_fp}, {"j_ntx", m.j_ntx}};
}

json to_json(const SolveReport& r) {
    return {{"method", std::string(to_string(r.method))},
            {"metric", std::string(to_string(r.metric))},
            {"epsilon", r.epsilon},
            {"sigma", r.sigma},
            {"kappa", r.policy.vector()},
            {"w_s", r.w_s},
            {"w_p", r.w_p},
            {"delta", r.delta},
            {"binding", r.binding},
            {"iterations", r.iterations}};
}

json to_json(const SimStats& s) {
    json occ = json::array();
    for (const auto& e : s.occupancy_hat) occ.push_back(estimate(e));
    return {{"w_p_hat", estimate(s.w_p_hat)},
            {"w_s_hat", estimate(s.w_s_hat)},
            {"fp_hat", estimate(s.fp_hat)},
            {"ntx_hat", estimate(s.ntx_hat)},
            {"occupancy_hat", occ},
            {"slots_counted", s.slots_counted},
            {"packets_completed", s.packets_completed},
            {"prng", s.prng}};
}

json to_json(const phy::FailureProbs& fp, const phy::IncreasingFactors& f) {
    return {{"rho", fp.rho}, {"rho_star", fp.rho_star}, {"nu", fp.nu}, {"nu_star", fp.nu_star},
            {"lambda", f.lambda}, {"lambda_s", f.lambda_s}};
}

SystemParams params_from_json(const json& j) {
    require_object(j, "params");
    SystemParams p;
    p.alpha = get<double>(j, "alpha", "params");
    p.rho = get<double>(j, "rho", "params");
    p.lambda = get<double>(j, "lambda", "params");
    p.nu = get_or<double>(j, "nu", 0.0, "params");
    p.lambda_s = get_or<double>(j, "lambda_s", 0.0, "params");
    p.t_max = get<int>(j, "t_max", "params");
    try {
        p.validate();
    } catch (const InvariantError& e) {
        throw ConfigError(e.what());
    }
    return p;
}

phy::LinkBudget link_budget_from_json(const json& j) {
    require_object(j, "link_budget");
    phy::LinkBudget b;
    const char* w = "link_budget";
    b.r_p = get<double>(j, "r_p", w);
    b.r_s = get<double>(j, "r_s", w);
    b.p_p = get<double>(j, "p_p", w);
    b.p_s = get<double>(j, "p_s", w);
    b.gbar_pp = get<double>(j, "gbar_pp", w);
    b.gbar_ps = get<double>(j, "gbar_ps", w);
    b.gbar_ss = get<double>(j, "gbar_ss", w);
    b.gbar_sp = get<double>(j, "gbar_sp", w);
    b.secondary_rx_mode = phy::secondary_rx_from_string(get_or<std::string>(j, "secondary_rx_mode", "treat-as-noise", w));
    try {
        b.validate();
    } catch (const InvariantError& e) {
        throw ConfigError(e.what());
    }
    return b;
}

Policy policy_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("policy: expected an array of probabilities");
    std::vector<double> k;
    try {
        k = j.get<std::vector<double>>();
        return Policy(std::move(k));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("policy: ") + e.what());
    } catch (const InvariantError& e) {
        throw ConfigError(e.what());
    }
}

SystemParams ExperimentConfig::system() const {
    if (params) return *params;
    if (!phy) throw ConfigError("config needs either 'params' or 'link_budget'");
    const auto fp = phy::failure_probs(phy->budget, phy->fading, phy->mc_samples, phy->seed);
    const auto f = phy::increasing_factors(fp);
    SystemParams p;
    p.alpha = alpha;
    p.t_max = t_max;
    p.rho = fp.rho;
    p.lambda = f.lambda;
    p.nu = fp.nu;
    p.lambda_s = f.lambda_s;
    try {
        p.validate();
    } catch (const InvariantError& e) {
        throw ConfigError(std::string("derived parameters: ") + e.what());
    }
    return p;
}

ExperimentConfig config_from_json(const json& j) {
    require_object(j, "config");
    ExperimentConfig c;
    if (j.contains("params") && j.contains("link_budget"))
        throw ConfigError("config: give either 'params' or 'link_budget', not both");
    if (j.contains("params")) c.params = params_from_json(j["params"]);
    if (j.contains("link_budget")) {
        PhySetup s;
        s.budget = link_budget_from_json(j["link_budget"]);
        s.fading = phy::fading_from_string(get_or<std::string>(j, "fading", "rayleigh", "config"));
        s.mc_samples = get_or<std::uint64_t>(j, "mc_samples", s.mc_samples, "config");
        s.seed = get_or<std::uint64_t>(j, "phy_seed", s.seed, "config");
        c.phy = s;
    }
    if (j.contains("traffic")) {
        const auto& t = j["traffic"];
        require_object(t, "traffic");
        c.alpha = get<double>(t, "alpha", "traffic");
        c.t_max = get<int>(t, "t_max", "traffic");
    }
    if (j.contains("constraint")) {
        const auto& k = j["constraint"];
        require_object(k, "constraint");
        c.constraint.metric = metric_from_string(get_or<std::string>(k, "metric", "throughput", "constraint"));
        c.constraint.epsilon = get_or<double>(k, "epsilon", 0.0, "constraint");
        c.constraint.validate();
    }
    if (j.contains("solver")) c.solver = method_from_string(get<std::string>(j, "solver", "config"));
    c.allow_general = get_or<bool>(j, "allow_general", false, "config");
    if (j.contains("policy")) c.policy = policy_from_json(j["policy"]);
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        require_object(s, "sweep");
        SweepSpec sw;
        sw.variable = get<std::string>(s, "variable", "sweep");
        sw.from = get<double>(s, "from", "sweep");
        sw.to = get<double>(s, "to", "sweep");
        sw.steps = get<int>(s, "steps", "sweep");
        if (sw.variable != "epsilon" && sw.variable != "alpha" && sw.variable != "rho" && sw.variable != "lambda" &&
            sw.variable != "lambda_s")
            throw ConfigError("sweep: unknown variable '" + sw.variable + "'");
        if (sw.steps < 1) throw ConfigError("sweep: steps must be >= 1");
        if (!(sw.from <= sw.to)) throw ConfigError("sweep: from must be <= to");
        c.sweep = sw;
    }
    if (j.contains("sim")) {
        const auto& s = j["sim"];
        require_object(s, "sim");
        SimConfig sc;
        sc.n_slots = get_or<std::uint64_t>(s, "n_slots", sc.n_slots, "sim");
        sc.seed = get_or<std::uint64_t>(s, "seed", sc.seed, "sim");
        sc.warmup_slots = get_or<std::uint64_t>(s, "warmup_slots", sc.warmup_slots, "sim");
        sc.batches = get_or<int>(s, "batches", sc.batches, "sim");
        sc.validate();
        c.sim = sc;
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        require_object(o, "output");
        if (o.contains("path")) c.output_path = get<std::string>(o, "path", "output");
        c.format = get_or<std::string>(o, "format", c.format, "output");
    }
    if (c.format != "csv" && c.format != "json") throw ConfigError("output.format must be csv or json");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

void apply_sweep_value(const std::string& variable, double value, SystemParams& params, ConstraintSpec& spec) {
    if (variable == "epsilon") spec.epsilon = value;
    else if (variable == "alpha") params.alpha = value;
    else if (variable == "rho") params.rho = value;
    else if (variable == "lambda") params.lambda = value;
    else if (variable == "lambda_s") params.lambda_s = value;
    else throw ConfigError("unknown sweep variable '" + variable + "'");
}

}  // namespace cogarq::io
