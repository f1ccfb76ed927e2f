#include "cogarq/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cogarq/errors.hpp"
#include "cogarq/io.hpp"
#include "cogarq/solver_lp.hpp"
#include "cogarq/solver_structured.hpp"
#include "cogarq/verify.hpp"

namespace cogarq::cli {

namespace {

using io::json;

struct Flags {
    std::string config;
    std::string solver;
    std::string metric;
    std::optional<double> epsilon;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> slots;
    std::string out;
    std::string format;
    std::string policy;
    std::string dump_lp;
    std::string trace;
    int workers = 1;
    int instances = 200;
    bool validate = false;
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--policy: cannot parse '" + item + "'");
        }
    }
    return v;
}

// want_sim: a bare --seed creates the sim block (simulate) instead of
// only reseeding an existing one.
io::ExperimentConfig load(const Flags& f, bool want_sim = false) {
    io::ExperimentConfig c = f.config.empty() ? io::ExperimentConfig{} : io::load_config(f.config);
    if (!f.solver.empty()) c.solver = method_from_string(f.solver);
    if (!f.metric.empty()) c.constraint.metric = metric_from_string(f.metric);
    if (f.epsilon) {
        c.constraint.epsilon = *f.epsilon;
        c.constraint.validate();
    }
    if (f.seed) {
        if (c.phy) c.phy->seed = *f.seed;
        if (!c.sim && want_sim) c.sim = SimConfig{};
        if (c.sim) c.sim->seed = *f.seed;
    }
    if (f.slots) {
        if (!c.sim) c.sim = SimConfig{};
        c.sim->n_slots = *f.slots;
        c.sim->validate();
    }
    if (!f.out.empty()) c.output_path = f.out;
    if (!f.format.empty()) {
        if (f.format != "csv" && f.format != "json") throw ConfigError("--format must be csv or json");
        c.format = f.format;
    }
    if (!f.policy.empty()) {
        try {
            c.policy = Policy(parse_list(f.policy));
        } catch (const InvariantError& e) {
            throw ConfigError(e.what());
        }
    }
    if (f.workers < 1) throw ConfigError("--workers must be >= 1");
    return c;
}

std::uint64_t seed_of(const io::ExperimentConfig& c) {
    if (c.sim) return c.sim->seed;
    if (c.phy) return c.phy->seed;
    return 0;
}

json meta(const io::ExperimentConfig& c) {
    return {{"tool", "cogarq"}, {"version", io::kVersion}, {"seed", seed_of(c)}};
}

// Writes to the configured file, or to `out`.
void emit(const io::ExperimentConfig& c, std::ostream& out, const std::string& text) {
    if (c.output_path) {
        std::ofstream f(*c.output_path, std::ios::binary);
        if (!f) throw ConfigError("cannot write '" + *c.output_path + "'");
        f << text;
    } else {
        out << text;
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void check_policy(const SystemParams& p, const Policy& k) {
    if (k.size() != p.num_states()) {
        std::ostringstream err;
        err << "policy has " << k.size() << " entries, expected T+1 = " << p.num_states();
        throw ConfigError(err.str());
    }
}

json analytic(const SystemParams& p, const Policy& k) {
    json j = io::to_json(evaluate(p, k));
    j["pi"] = steady_state(p, k).pi;
    j["delta"] = delta_loss(p, k, Metric::throughput);
    return j;
}

int cmd_phy(const Flags& f, std::ostream& out) {
    const auto c = load(f);
    if (!c.phy) throw ConfigError("phy: config has no 'link_budget'");
    const auto fp = phy::failure_probs(c.phy->budget, c.phy->fading, c.phy->mc_samples, c.phy->seed);
    json j = io::to_json(fp, phy::increasing_factors(fp));
    j["meta"] = meta(c);
    j["fading"] = std::string(phy::to_string(c.phy->fading));
    j["secondary_rx_mode"] = std::string(phy::to_string(c.phy->budget.secondary_rx_mode));
    j["mc_samples"] = c.phy->mc_samples;
    emit(c, out, dump(j));
    return ok;
}

int cmd_analyze(const Flags& f, std::ostream& out) {
    const auto c = load(f);
    const auto p = c.system();
    if (!c.policy) throw ConfigError("analyze: no policy given (config 'policy' or --policy)");
    check_policy(p, *c.policy);
    json j = analytic(p, *c.policy);
    j["meta"] = meta(c);
    j["params"] = io::to_json(p);
    j["kappa"] = c.policy->vector();
    emit(c, out, dump(j));
    return ok;
}

SolveReport run_solver(const io::ExperimentConfig& c, const SystemParams& p, const ConstraintSpec& spec) {
    StructuredOptions opts;
    opts.allow_general = c.allow_general;
    return solve(p, spec, c.solver, opts);
}

int cmd_optimize(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto c = load(f);
    const auto p = c.system();
    if (!f.dump_lp.empty()) {
        std::ofstream lpf(f.dump_lp, std::ios::binary);
        if (!lpf) throw ConfigError("cannot write '" + f.dump_lp + "'");
        lp::write_lp(lpf, lp::build_lp(p, c.constraint), p.t_max);
    }
    const auto rep = run_solver(c, p, c.constraint);
    if (c.solver == Method::lp && c.constraint.metric != Metric::num_tx && p.nu_star() == p.nu) {
        const auto v = solve_vertical(p, c.constraint);
        if (std::abs(v.w_s - rep.w_s) > 1e-6)
            err << "warning: lp and vertical disagree (w_s " << rep.w_s << " vs " << v.w_s << ")\n";
    }
    json j = io::to_json(rep);
    j["meta"] = meta(c);
    j["params"] = io::to_json(p);
    emit(c, out, dump(j));
    return ok;
}

struct SweepRow {
    double value = 0.0;
    SolveReport rep;
    Metrics m;
    std::optional<SimStats> sim;
};

int cmd_sweep(const Flags& f, std::ostream& out) {
    const auto c = load(f);
    if (!c.sweep) throw ConfigError("sweep: config has no 'sweep' block");
    const auto base = c.system();
    const auto& sw = *c.sweep;

    std::vector<SweepRow> rows(sw.steps);
    std::vector<std::exception_ptr> errors(sw.steps);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < sw.steps; i = next++) {
            try {
                SystemParams p = base;
                ConstraintSpec spec = c.constraint;
                rows[i].value = sw.value(i);
                io::apply_sweep_value(sw.variable, rows[i].value, p, spec);
                try {
                    p.validate();
                } catch (const InvariantError& e) {
                    throw ConfigError(std::string("sweep point: ") + e.what());
                }
                rows[i].rep = run_solver(c, p, spec);
                rows[i].m = evaluate(p, rows[i].rep.policy);
                if (c.sim) {
                    SimConfig sc = *c.sim;
                    sc.seed += static_cast<std::uint64_t>(i);
                    rows[i].sim = simulate(p, rows[i].rep.policy, sc);
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nw = std::min(f.workers, sw.steps);
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::ostringstream s;
    s << std::setprecision(15);
    if (c.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            json j = io::to_json(r.rep);
            j["sweep_var"] = sw.variable;
            j["value"] = r.value;
            j["j_p"] = r.m.j_p;
            j["j_fp"] = r.m.j_fp;
            j["j_ntx"] = r.m.j_ntx;
            if (r.sim) {
                j["w_s_hat"] = r.sim->w_s_hat.mean;
                j["w_p_hat"] = r.sim->w_p_hat.mean;
            }
            arr.push_back(j);
        }
        s << dump({{"meta", meta(c)}, {"rows", arr}});
    } else {
        s << "# cogarq " << io::kVersion << " seed=" << seed_of(c) << "\n";
        s << "sweep_var,value";
        for (int t = 0; t <= base.t_max; ++t) s << ",kappa_" << t;
        s << ",w_s,w_p,j_p,delta,j_fp,j_ntx,solver,binding";
        if (c.sim) s << ",w_s_hat,w_p_hat";
        s << "\n";
        for (const auto& r : rows) {
            s << sw.variable << ',' << r.value;
            for (double k : r.rep.policy.values()) s << ',' << k;
            s << ',' << r.m.w_s << ',' << r.m.w_p << ',' << r.m.j_p << ',' << r.rep.delta << ',' << r.m.j_fp << ','
              << r.m.j_ntx << ',' << to_string(r.rep.method) << ',' << (r.rep.binding ? "true" : "false");
            if (r.sim) s << ',' << r.sim->w_s_hat.mean << ',' << r.sim->w_p_hat.mean;
            s << "\n";
        }
    }
    emit(c, out, s.str());
    return ok;
}

int cmd_simulate(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto c = load(f, true);
    if (!c.sim) throw ConfigError("simulate: config has no 'sim' block (or pass --slots/--seed)");
    const auto p = c.system();
    Policy k;
    if (c.policy) {
        k = *c.policy;
        check_policy(p, k);
    } else {
        k = run_solver(c, p, c.constraint).policy;
    }
    std::ofstream trace;
    if (!f.trace.empty()) {
        trace.open(f.trace, std::ios::binary);
        if (!trace) throw ConfigError("cannot write '" + f.trace + "'");
    }
    const auto st = simulate(p, k, *c.sim, f.trace.empty() ? nullptr : &trace);
    const auto a = analytic(p, k);

    json checks = json::array();
    bool all = true;
    auto compare = [&](const std::string& name, const Estimate& e, double truth) {
        const double z = e.stderr_ > 0.0 ? std::abs(e.mean - truth) / e.stderr_ : (std::abs(e.mean - truth) <= 1e-12 ? 0.0 : INFINITY);
        const bool pass = z <= 5.0;
        all = all && pass;
        checks.push_back({{"name", name}, {"estimate", e.mean}, {"analytic", truth}, {"z", std::isfinite(z) ? json(z) : json("inf")}, {"pass", pass}});
    };
    compare("w_p", st.w_p_hat, a["w_p"].get<double>());
    compare("w_s", st.w_s_hat, a["w_s"].get<double>());
    compare("fp", st.fp_hat, a["j_fp"].get<double>());
    compare("ntx", st.ntx_hat, a["j_ntx"].get<double>());
    for (int t = 0; t <= p.t_max; ++t) compare("pi_" + std::to_string(t), st.occupancy_hat[t], a["pi"][t].get<double>());

    json j;
    j["meta"] = meta(c);
    j["params"] = io::to_json(p);
    j["kappa"] = k.vector();
    j["analytic"] = a;
    j["sim"] = io::to_json(st);
    j["checks"] = checks;
    emit(c, out, dump(j));
    if (f.validate && !all) {
        err << "simulate: an analytic value lies outside 5 standard errors\n";
        return validation_failed;
    }
    return ok;
}

int cmd_verify(const Flags& f, std::ostream& out) {
    const std::uint64_t seed = f.seed.value_or(1);
    const auto results = verify::run_all(seed, f.instances);
    bool all = true;
    std::ostringstream s;
    s << "# cogarq " << io::kVersion << " seed=" << seed << "\n";
    for (const auto& r : results) {
        all = all && r.passed();
        s << std::left << std::setw(24) << r.name << (r.passed() ? "pass" : "FAIL") << "  n=" << r.instances
          << " failures=" << r.failures << " worst=" << std::setprecision(3) << r.worst;
        if (!r.detail.empty()) s << "  (" << r.detail << ")";
        s << "\n";
    }
    out << s.str();
    return all ? ok : validation_failed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Secondary-user transmission policies over an ARQ primary link", "cogarq"};
    app.require_subcommand(1);
    Flags f;

    auto common = [&f](CLI::App* sub) {
        sub->add_option("--config", f.config, "experiment config (JSON)");
        sub->add_option("--out", f.out, "write data here instead of stdout");
        sub->add_option("--seed", f.seed, "seed for simulation and Monte Carlo");
    };
    auto solving = [&f](CLI::App* sub) {
        sub->add_option("--solver", f.solver, "lp | vertical | horizontal | enumerate");
        sub->add_option("--metric", f.metric, "throughput | failure_prob | num_tx");
        sub->add_option("--epsilon", f.epsilon, "relative constraint slack");
    };

    auto* phy_cmd = app.add_subcommand("phy", "failure probabilities from a link budget");
    common(phy_cmd);
    auto* analyze = app.add_subcommand("analyze", "metrics of a given policy");
    common(analyze);
    analyze->add_option("--policy", f.policy, "comma-separated kappa_0..kappa_T");
    auto* optimize = app.add_subcommand("optimize", "optimal policy under the constraint");
    common(optimize);
    solving(optimize);
    optimize->add_option("--dump-lp", f.dump_lp, "write the occupancy LP as plain text to this file");
    auto* sweep = app.add_subcommand("sweep", "optimize over a parameter range");
    common(sweep);
    solving(sweep);
    sweep->add_option("--format", f.format, "csv | json");
    sweep->add_option("--workers", f.workers, "concurrent sweep points");
    sweep->add_option("--slots", f.slots, "simulated slots per point (enables validation columns)");
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo run of a policy");
    common(simulate_cmd);
    solving(simulate_cmd);
    simulate_cmd->add_option("--policy", f.policy, "comma-separated kappa_0..kappa_T");
    simulate_cmd->add_option("--slots", f.slots, "counted slots");
    simulate_cmd->add_option("--trace", f.trace, "per-slot CSV trace file");
    simulate_cmd->add_flag("--validate", f.validate, "exit 1 if an analytic value is outside 5 standard errors");
    auto* verify_cmd = app.add_subcommand("verify", "randomized checks of the analytic results");
    verify_cmd->add_option("--seed", f.seed, "seed");
    verify_cmd->add_option("--instances", f.instances, "instances per check")->check(CLI::PositiveNumber);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? ok : usage;
    }

    try {
        if (phy_cmd->parsed()) return cmd_phy(f, out);
        if (analyze->parsed()) return cmd_analyze(f, out);
        if (optimize->parsed()) return cmd_optimize(f, out, err);
        if (sweep->parsed()) return cmd_sweep(f, out);
        if (simulate_cmd->parsed()) return cmd_simulate(f, out, err);
        if (verify_cmd->parsed()) return cmd_verify(f, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const InvariantError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return infeasible;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical;
    }
    return usage;
}

}  // namespace cogarq::cli
