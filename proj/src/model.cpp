#include "cogarq/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cogarq/errors.hpp"

namespace cogarq {

namespace {

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

// prefix[t] = prod_{i=1}^{t} rho_i, prefix[0] = 1.
std::vector<double> failure_prefix(const SystemParams& p, const Policy& k) {
    const double slope = (1.0 - p.rho) * p.lambda;
    std::vector<double> prefix(p.num_states(), 1.0);
    for (int t = 1; t <= p.t_max; ++t) prefix[t] = prefix[t - 1] * (p.rho + slope * k[t]);
    return prefix;
}

}  // namespace

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::throughput: return "throughput";
        case Metric::failure_prob: return "failure_prob";
        case Metric::num_tx: return "num_tx";
    }
    return "unknown";
}

Metric metric_from_string(std::string_view s) {
    if (s == "throughput") return Metric::throughput;
    if (s == "failure_prob" || s == "fp") return Metric::failure_prob;
    if (s == "num_tx" || s == "ntx") return Metric::num_tx;
    throw ConfigError("unknown metric '" + std::string(s) + "'");
}

void SystemParams::validate() const {
    std::ostringstream err;
    if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0)) err << " alpha=" << alpha << " not in (0,1);";
    if (!in_unit(rho)) err << " rho=" << rho << " not in [0,1];";
    if (!in_unit(lambda)) err << " lambda=" << lambda << " not in [0,1];";
    if (!(std::isfinite(nu) && nu >= 0.0 && nu < 1.0)) err << " nu=" << nu << " not in [0,1);";
    if (!in_unit(lambda_s)) err << " lambda_s=" << lambda_s << " not in [0,1];";
    if (t_max < 1) err << " t_max=" << t_max << " < 1;";
    if (!err.str().empty()) throw InvariantError("invalid system parameters:" + err.str());
}

Policy::Policy(std::vector<double> kappa) : kappa_(std::move(kappa)) {
    if (kappa_.size() < 2) throw InvariantError("policy needs at least two entries (T >= 1)");
    for (std::size_t i = 0; i < kappa_.size(); ++i) {
        if (!in_unit(kappa_[i])) {
            std::ostringstream err;
            err << "policy entry kappa[" << i << "]=" << kappa_[i] << " not in [0,1]";
            throw InvariantError(err.str());
        }
    }
}

Policy Policy::zeros(int t_max) { return Policy(std::vector<double>(t_max + 1, 0.0)); }
Policy Policy::ones(int t_max) { return Policy(std::vector<double>(t_max + 1, 1.0)); }

Policy Policy::flat(int t_max, double x) {
    std::vector<double> k(t_max + 1, x);
    k[0] = 1.0;
    return Policy(std::move(k));
}

Policy Policy::with(std::size_t i, double value) const {
    auto k = kappa_;
    k.at(i) = value;
    return Policy(std::move(k));
}

void check_compatible(const SystemParams& params, const Policy& policy) {
    params.validate();
    if (policy.size() != params.num_states()) {
        std::ostringstream err;
        err << "policy length " << policy.size() << " != T+1 = " << params.num_states();
        throw InvariantError(err.str());
    }
}

double effective_failure(const SystemParams& params, const Policy& policy, int theta) {
    check_compatible(params, policy);
    if (theta < 1 || theta > params.t_max)
        throw std::domain_error("effective_failure: state must be in 1..T (no primary transmission in state 0)");
    return params.rho + (1.0 - params.rho) * params.lambda * policy[theta];
}

Matrix transition_matrix(const SystemParams& params, const Policy& policy) {
    check_compatible(params, policy);
    const std::size_t n = params.num_states();
    const double a = params.alpha;
    Matrix m(n);
    m(0, 0) = 1.0 - a;
    m(0, 1) = a;
    for (int t = 1; t < params.t_max; ++t) {
        const double f = params.rho + (1.0 - params.rho) * params.lambda * policy[t];
        m(t, 0) = (1.0 - a) * (1.0 - f);
        m(t, 1) = a * (1.0 - f);
        m(t, t + 1) = f;
    }
    // Last transmission always resets, success or not.
    m(n - 1, 0) = 1.0 - a;
    m(n - 1, 1) = a;
    return m;
}

StateDistribution steady_state(const SystemParams& params, const Policy& policy) {
    check_compatible(params, policy);
    const auto prefix = failure_prefix(params, policy);
    double denom = 1.0;
    for (int t = 1; t < params.t_max; ++t) denom += params.alpha * prefix[t];

    StateDistribution out;
    out.pi.resize(params.num_states());
    out.pi[0] = (1.0 - params.alpha) / denom;
    for (int t = 1; t <= params.t_max; ++t) out.pi[t] = params.alpha * prefix[t - 1] / denom;
    return out;
}

ChainTerms chain_terms(const SystemParams& params, const Policy& policy) {
    check_compatible(params, policy);
    const auto prefix = failure_prefix(params, policy);
    const double a = params.alpha;
    ChainTerms c;
    c.n_j = 1.0 - a;
    c.n_w = (1.0 - a) * policy[0];
    c.d = 1.0;
    for (int t = 1; t <= params.t_max; ++t) {
        c.n_j += a * prefix[t];
        c.n_w += a * policy[t] * prefix[t - 1];
        if (t < params.t_max) c.d += a * prefix[t];
    }
    return c;
}

double primary_cost(const SystemParams& params, const Policy& policy) {
    const auto c = chain_terms(params, policy);
    return c.n_j / c.d;
}

double secondary_reward(const SystemParams& params, const Policy& policy) {
    const auto st = steady_state(params, policy);
    double busy = 0.0;
    for (int t = 1; t <= params.t_max; ++t) busy += st.pi[t] * policy[t];
    return st.pi[0] * policy[0] * (1.0 - params.nu) + busy * (1.0 - params.nu_star());
}

double failure_prob_cost(const SystemParams& params, const Policy& policy) {
    check_compatible(params, policy);
    return failure_prefix(params, policy).back();
}

double num_tx_cost(const SystemParams& params, const Policy& policy) {
    check_compatible(params, policy);
    const auto prefix = failure_prefix(params, policy);
    double n = 1.0;
    for (int t = 1; t < params.t_max; ++t) n += prefix[t];
    return n;
}

double metric_cost(const SystemParams& params, const Policy& policy, Metric metric) {
    switch (metric) {
        case Metric::throughput: return primary_cost(params, policy);
        case Metric::failure_prob: return failure_prob_cost(params, policy);
        case Metric::num_tx: return num_tx_cost(params, policy);
    }
    throw ConfigError("unknown metric");
}

double delta_loss(const SystemParams& params, const Policy& policy, Metric metric) {
    return metric_cost(params, policy, metric) - metric_cost(params, Policy::zeros(params.t_max), metric);
}

Metrics evaluate(const SystemParams& params, const Policy& policy) {
    Metrics m;
    m.j_p = primary_cost(params, policy);
    m.w_p = 1.0 - m.j_p;
    m.w_s = secondary_reward(params, policy);
    m.j_fp = failure_prob_cost(params, policy);
    m.j_ntx = num_tx_cost(params, policy);
    return m;
}

}  // namespace cogarq
