#include "cogarq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cogarq/analysis.hpp"
#include "cogarq/root_finding.hpp"
#include "cogarq/solver_lp.hpp"
#include "cogarq/solver_structured.hpp"

namespace cogarq::verify {

namespace {

double between(Stream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

// Closed form against finite difference: relative 1e-6, with an absolute
// floor for derivatives small enough that rounding in f dominates.
bool gradient_close(double closed, double fd, double& err) {
    err = std::abs(closed - fd);
    return err <= 1e-6 * std::abs(fd) || err <= 1e-9;
}

template <class Body>
CheckResult check(const std::string& name, int instances, Body body) {
    CheckResult r;
    r.name = name;
    for (int i = 0; i < instances; ++i) {
        ++r.instances;
        if (!body(r)) ++r.failures;
    }
    return r;
}

}  // namespace

SystemParams random_params(Stream& rng, const InstanceRanges& r) {
    SystemParams p;
    p.t_max = r.t_min + static_cast<int>(rng.uniform() * (r.t_max - r.t_min + 1));
    p.alpha = between(rng, r.alpha_lo, r.alpha_hi);
    p.rho = between(rng, r.rho_lo, r.rho_hi);
    p.lambda = between(rng, r.lambda_lo, r.lambda_hi);
    p.nu = between(rng, 0.0, r.nu_hi);
    p.lambda_s = r.z_channel ? 0.0 : rng.uniform();
    return p;
}

Policy random_policy(Stream& rng, int t_max) {
    std::vector<double> k(t_max + 1);
    for (auto& x : k) x = rng.uniform();
    return Policy(std::move(k));
}

double finite_difference(const std::function<double(const Policy&)>& f, const Policy& k, int i, double h) {
    const double x = k[i];
    if (x - h >= 0.0 && x + h <= 1.0) return (f(k.with(i, x + h)) - f(k.with(i, x - h))) / (2.0 * h);
    if (x + 2.0 * h <= 1.0)
        return (-3.0 * f(k) + 4.0 * f(k.with(i, x + h)) - f(k.with(i, x + 2.0 * h))) / (2.0 * h);
    return (3.0 * f(k) - 4.0 * f(k.with(i, x - h)) + f(k.with(i, x - 2.0 * h))) / (2.0 * h);
}

std::vector<CheckResult> run_all(std::uint64_t seed, int instances) {
    std::vector<CheckResult> out;
    Stream rng(seed, 100);

    out.push_back(check("stationary_balance", instances, [&](CheckResult& r) {
        const auto p = random_params(rng);
        const auto k = random_policy(rng, p.t_max);
        const auto pi = steady_state(p, k).pi;
        const auto m = transition_matrix(p, k);
        double worst = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.n; ++i) s += pi[i] * m(i, j);
            worst = std::max(worst, std::abs(s - pi[j]));
        }
        r.worst = std::max(r.worst, worst);
        return worst <= 1e-10;
    }));

    out.push_back(check("cost_gradient", instances, [&](CheckResult& r) {
        const auto p = random_params(rng);
        const auto k = random_policy(rng, p.t_max);
        const auto g = analysis::cost_gradient(p, k);
        auto f = [&](const Policy& q) { return primary_cost(p, q); };
        bool ok = g[0] == 0.0;
        for (int t = 1; t <= p.t_max; ++t) {
            double err = 0.0;
            ok = gradient_close(g[t], finite_difference(f, k, t), err) && g[t] > 0.0 && ok;
            r.worst = std::max(r.worst, err);
        }
        return ok;
    }));

    out.push_back(check("reward_gradient", instances, [&](CheckResult& r) {
        const auto p = random_params(rng);
        const auto k = random_policy(rng, p.t_max);
        const auto g = analysis::reward_gradient(p, k);
        auto f = [&](const Policy& q) { return secondary_reward(p, q); };
        bool ok = true;
        for (int t = 0; t <= p.t_max; ++t) {
            double err = 0.0;
            ok = gradient_close(g[t], finite_difference(f, k, t), err) && g[t] > 0.0 && ok;
            r.worst = std::max(r.worst, err);
        }
        return ok;
    }));

    for (auto dir : {analysis::Exchange::increase, analysis::Exchange::decrease}) {
        const bool up = dir == analysis::Exchange::increase;
        auto res = check(up ? "exchange_increase" : "exchange_decrease", instances, [&](CheckResult& r) {
            InstanceRanges ranges;
            ranges.t_min = 2;
            const auto p = random_params(rng, ranges);
            const int j = 1 + static_cast<int>(rng.uniform() * (p.t_max - 1));
            const int rr = j + 1 + static_cast<int>(rng.uniform() * (p.t_max - j));
            auto kv = random_policy(rng, p.t_max).vector();
            const double v = up ? between(rng, 0.0, 0.9) : between(rng, 0.1, 1.0);
            kv[j] = kv[rr] = v;
            for (int t = rr + 1; t <= p.t_max; ++t) kv[t] = 0.0;
            const double room = up ? 1.0 - v : v;
            const double dr = between(rng, 0.05, 1.0) * room;
            const auto rep = analysis::verify_exchange(p, Policy(kv), j, rr, dr, dir);
            if (!rep.hypotheses_hold) {
                r.detail = rep.message;
                return false;
            }
            r.worst = r.worst == 0.0 ? rep.margin : std::min(r.worst, rep.margin);
            return rep.ordering_holds && rep.margin > 1e-12 && rep.delta_j > 0.0 && rep.delta_j < rep.delta_r &&
                   std::abs(rep.cost_j - rep.cost_r) <= 1e-10;
        });
        out.push_back(res);
    }

    out.push_back(check("fp_insensitivity", instances, [&](CheckResult& r) {
        InstanceRanges ranges;
        ranges.t_min = 2;
        const auto p = random_params(rng, ranges);
        const int j = 1 + static_cast<int>(rng.uniform() * (p.t_max - 1));
        const int rr = j + 1 + static_cast<int>(rng.uniform() * (p.t_max - j));
        auto kv = random_policy(rng, p.t_max).vector();
        kv[rr] = kv[j];
        const double d = between(rng, -kv[j], 1.0 - kv[j]);
        const auto rep = analysis::fp_insensitivity(p, Policy(kv), j, rr, d);
        r.worst = std::max(r.worst, rep.difference);
        return rep.difference <= 1e-14;
    }));

    out.push_back(check("t2_partials", instances, [&](CheckResult& r) {
        InstanceRanges ranges;
        ranges.t_min = ranges.t_max = 2;
        ranges.z_channel = false;
        const auto p = random_params(rng, ranges);
        const auto k = random_policy(rng, 2);
        const auto d = analysis::t2_reward_partials(p, k);
        auto f = [&](const Policy& q) { return secondary_reward(p, q); };
        const double e0 = std::abs(d.d_k0 - finite_difference(f, k, 0));
        const double e1 = std::abs(d.d_k1 - finite_difference(f, k, 1));
        const double e2 = std::abs(d.d_k2 - finite_difference(f, k, 2));
        const double e = std::max({e0, e1, e2});
        r.worst = std::max(r.worst, e);
        return e <= 1e-8 && d.d_k0 > 0.0 && d.d_k2 > 0.0;
    }));

    out.push_back(check("nu_star_threshold", instances, [&](CheckResult& r) {
        InstanceRanges ranges;
        ranges.t_min = ranges.t_max = 2;
        auto p = random_params(rng, ranges);
        const double k2 = rng.uniform();
        const Policy k({1.0, rng.uniform(), k2});
        const double th = analysis::nu_star_threshold(p, k2);
        bool ok = analysis::nu_star_threshold(p, 1.0) <= 1.0;
        if (th > p.nu) {
            auto dk1 = [&](double ls) {
                SystemParams q = p;
                q.lambda_s = ls;
                return analysis::t2_reward_partials(q, k).d_k1;
            };
            const double ls = bisect_root(dk1, 0.0, 1.0, 0.0).x;
            const double at = p.nu + (1.0 - p.nu) * ls;
            r.worst = std::max(r.worst, std::abs(at - th));
            ok = ok && std::abs(at - th) <= 1e-8;
        }
        return ok;
    }));

    out.push_back(check("perturbation_constants", instances, [&](CheckResult& r) {
        InstanceRanges ranges;
        ranges.t_min = 2;
        const auto p = random_params(rng, ranges);
        const int j = 1 + static_cast<int>(rng.uniform() * (p.t_max - 1));
        const int rr = j + 1 + static_cast<int>(rng.uniform() * (p.t_max - j));
        auto kv = random_policy(rng, p.t_max).vector();
        kv[j] = kv[rr] = 0.5 * rng.uniform();
        for (int t = rr + 1; t <= p.t_max; ++t) kv[t] = 0.0;
        const Policy k(kv);
        const auto pc = analysis::perturbation_constants(p, k, j, rr);
        const double d = 0.5 * rng.uniform();
        const double jr = primary_cost(p, k.with(rr, kv[rr] + d));
        const double jj = primary_cost(p, k.with(j, kv[j] + d));
        const double e1 = std::abs(jr - (pc.n_j + pc.b * d) / (pc.d + pc.a * d));
        const double e2 = std::abs(jj - (pc.n_j + (pc.b + pc.c) * d) / (pc.d + (pc.a + pc.c) * d));
        const double rho_j = p.rho + (1.0 - p.rho) * p.lambda * kv[j];
        const double e3 = std::abs((pc.b - pc.a) - pc.x * (1.0 - p.rho) * p.lambda / rho_j);
        const double e = std::max({e1, e2, e3});
        r.worst = std::max(r.worst, e);
        return e <= 1e-12 && pc.f > pc.c && pc.c > 0.0;
    }));

    out.push_back(check("solver_agreement", instances, [&](CheckResult& r) {
        const auto p = random_params(rng);
        ConstraintSpec spec;
        spec.metric = rng.uniform() < 0.5 ? Metric::throughput : Metric::failure_prob;
        spec.epsilon = between(rng, 0.0, spec.metric == Metric::throughput ? 0.3 : 2.0);
        const auto v = solve_vertical(p, spec);
        const auto e = solve_enumerate(p, spec);
        const auto l = lp::solve_lp(p, spec);
        const double gap = std::max(std::abs(v.w_s - e.w_s), std::abs(v.w_s - l.w_s));
        r.worst = std::max(r.worst, gap);
        return gap <= 1e-7;
    }));

    return out;
}

}  // namespace cogarq::verify
