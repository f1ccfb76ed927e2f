#include "cogarq/solver_structured.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cogarq/errors.hpp"
#include "cogarq/root_finding.hpp"
#include "cogarq/solver_lp.hpp"

namespace cogarq {

namespace {

// Far below the 1e-10 activeness target; the bracket width limit usually
// stops the search first. A loose tolerance here shows up as kappa error
// whenever the cost is flat in the searched entry.
constexpr double kRootTol = 1e-15;
constexpr int kMaxEnumerateT = 16;

SolveReport start_report(Method method, const SystemParams& params, const ConstraintSpec& spec, const Sigma& sigma) {
    SolveReport rep;
    rep.method = method;
    rep.metric = spec.metric;
    rep.epsilon = spec.epsilon;
    rep.sigma = sigma.delta_bound;
    rep.policy = Policy::ones(params.t_max);
    return rep;
}

void check_structured(const SystemParams& params, const ConstraintSpec& spec, StructuredOptions opts,
                      SolveReport& rep, const char* who) {
    if (spec.metric == Metric::num_tx)
        throw ConfigError(std::string(who) + ": num_tx is handled by the lp and enumerate solvers");
    if (params.nu_star() != params.nu) {
        if (!opts.allow_general)
            throw ConfigError(std::string(who) + ": nu* > nu needs allow_general (structure not guaranteed)");
        rep.method_valid = false;
    }
}

// Largest x in [0,1] with delta(make(x)) <= sigma, assuming make(0) is
// admissible and make(1) is not.
template <class Make>
double fill_to_bound(const SystemParams& params, const ConstraintSpec& spec, const Sigma& sigma, Make make) {
    auto gap = [&](double x) { return delta_loss(params, make(x), spec.metric) - sigma.delta_bound; };
    return bisect_root(gap, 0.0, 1.0, kRootTol).x;
}

}  // namespace

SolveReport solve_vertical(const SystemParams& params, const ConstraintSpec& spec, StructuredOptions opts) {
    const Sigma sigma = sigma_from_epsilon(params, spec);
    SolveReport rep = start_report(Method::vertical, params, spec, sigma);
    check_structured(params, spec, opts, rep, "solve_vertical");

    Policy k = Policy::ones(params.t_max);
    if (!admissible(params, k, spec, sigma)) {
        for (int j = params.t_max; j >= 1; --j) {
            k = k.with(j, 0.0);
            ++rep.iterations;
            if (admissible(params, k, spec, sigma)) {
                const Policy base = k;
                const double x = fill_to_bound(params, spec, sigma, [&](double v) { return base.with(j, v); });
                k = base.with(j, x);
                ++rep.iterations;
                break;
            }
        }
    }
    rep.policy = k;
    finalize_report(params, rep);
    return rep;
}

SolveReport solve_horizontal(const SystemParams& params, const ConstraintSpec& spec, StructuredOptions opts) {
    const Sigma sigma = sigma_from_epsilon(params, spec);
    SolveReport rep = start_report(Method::horizontal, params, spec, sigma);
    check_structured(params, spec, opts, rep, "solve_horizontal");

    if (!admissible(params, rep.policy, spec, sigma)) {
        const int T = params.t_max;
        rep.policy = Policy::flat(T, fill_to_bound(params, spec, sigma, [T](double v) { return Policy::flat(T, v); }));
        rep.iterations = 1;
    }
    finalize_report(params, rep);
    return rep;
}

SolveReport solve_enumerate(const SystemParams& params, const ConstraintSpec& spec) {
    params.validate();
    if (params.t_max > kMaxEnumerateT)
        throw BudgetError("solve_enumerate: T=" + std::to_string(params.t_max) + " exceeds the limit of 16");
    const Sigma sigma = sigma_from_epsilon(params, spec);
    SolveReport rep = start_report(Method::enumerate, params, spec, sigma);

    const int T = params.t_max;
    bool have = false;
    double best_w = 0.0;
    std::vector<double> best;

    auto consider = [&](const Policy& k) {
        ++rep.iterations;
        const double w = secondary_reward(params, k);
        const bool better = !have || w > best_w + 1e-12 ||
                            (w >= best_w - 1e-12 && k.vector() > best);
        if (better) {
            have = true;
            best_w = w;
            best = k.vector();
        }
    };

    const unsigned patterns = 1u << T;
    for (unsigned mask = 0; mask < patterns; ++mask) {
        std::vector<double> k(T + 1, 1.0);
        for (int t = 1; t <= T; ++t) k[t] = (mask >> (t - 1)) & 1u ? 1.0 : 0.0;
        const Policy det(k);
        if (admissible(params, det, spec, sigma)) consider(det);

        // Randomize one state whose pattern bit is 0: every (position,
        // pattern-elsewhere) pair is reached exactly once this way.
        for (int p = 1; p <= T; ++p) {
            if (k[p] != 0.0) continue;
            const Policy lo = det;
            const Policy hi = det.with(p, 1.0);
            if (admissible(params, hi, spec, sigma)) continue;
            if (!admissible(params, lo, spec, sigma)) continue;
            const double x = fill_to_bound(params, spec, sigma, [&](double v) { return det.with(p, v); });
            consider(det.with(p, x));
        }
    }
    if (!have) throw InfeasibleError("solve_enumerate: no admissible policy");
    rep.policy = Policy(best);
    finalize_report(params, rep);
    return rep;
}

SolveReport solve(const SystemParams& params, const ConstraintSpec& spec, Method method, StructuredOptions opts) {
    switch (method) {
        case Method::lp: return lp::solve_lp(params, spec);
        case Method::vertical: return solve_vertical(params, spec, opts);
        case Method::horizontal: return solve_horizontal(params, spec, opts);
        case Method::enumerate: return solve_enumerate(params, spec);
    }
    throw ConfigError("unknown solver");
}

}  // namespace cogarq
