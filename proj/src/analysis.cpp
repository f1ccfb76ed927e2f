#include "cogarq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cogarq/root_finding.hpp"

namespace cogarq::analysis {

namespace {

// Per-state failure rates and the products the closed forms are built from.
class Chain {
public:
    Chain(const SystemParams& p, const Policy& k)
        : alpha_(p.alpha), slope_((1.0 - p.rho) * p.lambda), t_max_(p.t_max), kappa_(k.vector()),
          rates_(p.num_states(), 1.0) {
        for (int t = 1; t <= t_max_; ++t) rates_[t] = p.rho + slope_ * kappa_[t];
    }

    double alpha() const { return alpha_; }
    double slope() const { return slope_; }
    int t_max() const { return t_max_; }
    double kappa(int t) const { return kappa_[t]; }

    // prod_{i=1}^{t} rho_i, skipping index `skip` (0 skips nothing).
    double prod(int t, int skip = 0) const {
        double p = 1.0;
        for (int i = 1; i <= t; ++i)
            if (i != skip) p *= rates_[i];
        return p;
    }

    // Per-unit increments of D, N_J and N_W when kappa_q grows.
    double inc_d(int q) const {
        double s = 0.0;
        for (int t = q; t < t_max_; ++t) s += prod(t, q);
        return alpha_ * slope_ * s;
    }
    double inc_nj(int q) const {
        double s = 0.0;
        for (int t = q; t <= t_max_; ++t) s += prod(t, q);
        return alpha_ * slope_ * s;
    }
    double inc_nw(int q) const {
        double s = 0.0;
        for (int t = q + 1; t <= t_max_; ++t) s += kappa_[t] * prod(t - 1, q);
        return alpha_ * prod(q - 1) + alpha_ * slope_ * s;
    }

private:
    double alpha_;
    double slope_;
    int t_max_;
    std::vector<double> kappa_;
    std::vector<double> rates_;
};

void require_pair(const SystemParams& params, const Policy& policy, int j, int r) {
    if (!(0 < j && j < r && r <= params.t_max)) {
        std::ostringstream err;
        err << "state pair must satisfy 0 < j < r <= T (got j=" << j << ", r=" << r << ", T=" << params.t_max << ")";
        throw std::domain_error(err.str());
    }
    if (policy[j] != policy[r]) throw std::domain_error("kappa_j must equal kappa_r");
}

}  // namespace

std::vector<double> cost_gradient(const SystemParams& params, const Policy& policy) {
    check_compatible(params, policy);
    const Chain ch(params, policy);
    const auto terms = chain_terms(params, policy);
    const double a = ch.alpha();
    const double full = ch.prod(ch.t_max());

    std::vector<double> grad(params.num_states(), 0.0);
    for (int th = 1; th <= ch.t_max(); ++th) {
        double s = 0.0;
        for (int t = th; t < ch.t_max(); ++t) s += ch.prod(t, th);
        s *= ch.slope();
        const double l = ch.slope() * ch.prod(ch.t_max(), th);
        const double numer = a * l * terms.d + a * a * s * (1.0 - full);
        grad[th] = numer / (terms.d * terms.d);
    }
    return grad;
}

std::vector<double> reward_gradient(const SystemParams& params, const Policy& policy) {
    check_compatible(params, policy);
    if (params.nu_star() != params.nu)
        throw std::domain_error("reward_gradient: closed form needs nu* == nu (lambda_s = 0); use finite differences");
    const Chain ch(params, policy);
    const auto terms = chain_terms(params, policy);
    const double scale = 1.0 - params.nu;

    std::vector<double> grad(params.num_states(), 0.0);
    grad[0] = scale * (1.0 - params.alpha) / terms.d;
    for (int th = 1; th <= ch.t_max(); ++th) {
        const double numer = ch.inc_nw(th) * terms.d - ch.inc_d(th) * terms.n_w;
        grad[th] = scale * numer / (terms.d * terms.d);
    }
    return grad;
}

std::vector<double> numerator_slope_margin(const SystemParams& params, const Policy& policy) {
    check_compatible(params, policy);
    const Chain ch(params, policy);
    std::vector<double> margin(params.num_states(), 0.0);
    margin[0] = 1.0 - params.alpha;
    for (int th = 1; th <= ch.t_max(); ++th) margin[th] = ch.inc_nw(th) - ch.inc_d(th);
    return margin;
}

T2Partials t2_reward_partials(const SystemParams& params, const Policy& policy) {
    check_compatible(params, policy);
    if (params.t_max != 2) throw std::domain_error("t2_reward_partials: requires T = 2");
    const double a = params.alpha;
    const double c = (1.0 - params.rho) * params.lambda;
    const double ns = params.nu_star();
    const double rho1 = params.rho + c * policy[1];
    const double d = 1.0 + a * rho1;

    T2Partials p;
    p.d_k0 = (1.0 - a) * (1.0 - params.nu) / d;
    p.d_k1 = a * ((1.0 - ns) * (1.0 + a * params.rho + c * policy[2])
                  - c * (1.0 - a) * (1.0 - params.nu) * policy[0]) / (d * d);
    p.d_k2 = (1.0 - ns) - (1.0 - ns) / d;
    return p;
}

double nu_star_threshold(const SystemParams& params, double kappa_2) {
    params.validate();
    if (params.t_max != 2) throw std::domain_error("nu_star_threshold: requires T = 2");
    if (!(kappa_2 >= 0.0 && kappa_2 <= 1.0)) throw std::domain_error("nu_star_threshold: kappa_2 must be in [0,1]");
    const double a = params.alpha;
    const double c = (1.0 - params.rho) * params.lambda;
    const double base = 1.0 + a * params.rho + c * kappa_2;
    return (base - c * (1.0 - a) * (1.0 - params.nu)) / base;
}

PerturbationConstants perturbation_constants(const SystemParams& params, const Policy& policy, int j, int r) {
    check_compatible(params, policy);
    require_pair(params, policy, j, r);
    for (int t = r + 1; t <= params.t_max; ++t)
        if (policy[t] != 0.0) throw std::domain_error("perturbation_constants: kappa_t must be zero above r");

    const Chain ch(params, policy);
    const auto terms = chain_terms(params, policy);
    const double a = ch.alpha();
    const double sl = ch.slope();

    PerturbationConstants pc;
    pc.a = ch.inc_d(r);
    pc.b = ch.inc_nj(r);
    pc.g = ch.inc_nw(r);

    // Differences between moving j and moving r, summed directly over the
    // states the two increments do not share.
    double cs = 0.0;
    for (int t = j; t < r; ++t) cs += ch.prod(t, j);
    pc.c = a * sl * cs;

    double fs = 0.0;
    for (int t = j + 1; t <= r; ++t) fs += ch.kappa(t) * ch.prod(t - 1, j);
    pc.f = a * (ch.prod(j - 1) - ch.prod(r - 1)) + a * sl * fs;

    pc.n_j = terms.n_j;
    pc.n_w = terms.n_w;
    pc.d = terms.d;
    pc.x = a * ch.prod(ch.t_max());
    return pc;
}

ExchangeReport verify_exchange(const SystemParams& params, const Policy& policy, int j, int r,
                               double delta_r, Exchange direction, Metric metric) {
    ExchangeReport rep;
    rep.delta_r = delta_r;

    try {
        check_compatible(params, policy);
        require_pair(params, policy, j, r);
    } catch (const std::exception& e) {
        rep.message = e.what();
        return rep;
    }
    for (int t = r + 1; t <= params.t_max; ++t) {
        if (policy[t] != 0.0) {
            rep.message = "kappa_t must be zero above r";
            return rep;
        }
    }
    if (params.nu_star() != params.nu) {
        rep.message = "exchange ordering is only claimed for nu* == nu";
        return rep;
    }
    const double sign = direction == Exchange::increase ? 1.0 : -1.0;
    const double room = direction == Exchange::increase ? 1.0 - policy[r] : policy[r];
    if (!(delta_r > 0.0 && delta_r <= room)) {
        std::ostringstream err;
        err << "delta_r=" << delta_r << " outside (0, " << room << "]";
        rep.message = err.str();
        return rep;
    }

    const Policy moved_r = policy.with(r, policy[r] + sign * delta_r);
    rep.cost_r = metric_cost(params, moved_r, metric);
    auto gap = [&](double x) {
        return metric_cost(params, policy.with(j, policy[j] + sign * x), metric) - rep.cost_r;
    };
    try {
        rep.delta_j = bisect_root(gap, 0.0, delta_r, 1e-14).x;
    } catch (const BracketError&) {
        rep.message = "no equal-cost delta_j in (0, delta_r]";
        return rep;
    }
    const Policy moved_j = policy.with(j, policy[j] + sign * rep.delta_j);
    rep.cost_j = metric_cost(params, moved_j, metric);

    if (metric == Metric::throughput) {
        const auto pc = perturbation_constants(params, policy, j, r);
        const double z = rep.cost_r;
        rep.delta_j_closed_form = sign * (pc.d * z - pc.n_j) / (pc.b + pc.c - (pc.a + pc.c) * z);
    }

    rep.reward_r = secondary_reward(params, moved_r);
    rep.reward_j = secondary_reward(params, moved_j);
    rep.margin = sign * (rep.reward_j - rep.reward_r);
    rep.ordering_holds = rep.margin > 0.0;
    rep.hypotheses_hold = true;
    return rep;
}

InsensitivityReport fp_insensitivity(const SystemParams& params, const Policy& policy, int j, int r, double delta) {
    check_compatible(params, policy);
    require_pair(params, policy, j, r);
    const double lo = -std::min(policy[j], policy[r]);
    const double hi = std::min(1.0 - policy[j], 1.0 - policy[r]);
    if (!(delta >= lo && delta <= hi)) throw std::domain_error("fp_insensitivity: delta out of range");

    InsensitivityReport rep;
    rep.cost_j = failure_prob_cost(params, policy.with(j, policy[j] + delta));
    rep.cost_r = failure_prob_cost(params, policy.with(r, policy[r] + delta));
    rep.difference = std::abs(rep.cost_j - rep.cost_r);
    return rep;
}

}  // namespace cogarq::analysis
