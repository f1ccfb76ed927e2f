#include "cogarq/constraint.hpp"

#include <cmath>
#include <sstream>

#include "cogarq/errors.hpp"

namespace cogarq {

void ConstraintSpec::validate() const {
    if (!(std::isfinite(epsilon) && epsilon >= 0.0)) {
        std::ostringstream err;
        err << "epsilon must be a finite value >= 0 (got " << epsilon << ")";
        throw ConfigError(err.str());
    }
}

Sigma sigma_from_epsilon(const SystemParams& params, const ConstraintSpec& spec) {
    params.validate();
    spec.validate();
    const Policy base = Policy::zeros(params.t_max);
    Sigma s;
    switch (spec.metric) {
        case Metric::throughput: {
            const double j0 = primary_cost(params, base);
            s.delta_bound = spec.epsilon * (1.0 - j0);
            s.cost_bound = j0 + s.delta_bound;
            break;
        }
        case Metric::failure_prob:
        case Metric::num_tx: {
            const double c0 = metric_cost(params, base, spec.metric);
            s.delta_bound = c0 * spec.epsilon;
            s.cost_bound = c0 * (1.0 + spec.epsilon);
            break;
        }
    }
    return s;
}

bool admissible(const SystemParams& params, const Policy& policy, const ConstraintSpec& spec,
                const Sigma& sigma, double tol) {
    return delta_loss(params, policy, spec.metric) <= sigma.delta_bound + tol;
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::lp: return "lp";
        case Method::vertical: return "vertical";
        case Method::horizontal: return "horizontal";
        case Method::enumerate: return "enumerate";
    }
    return "unknown";
}

Method method_from_string(std::string_view s) {
    if (s == "lp") return Method::lp;
    if (s == "vertical") return Method::vertical;
    if (s == "horizontal") return Method::horizontal;
    if (s == "enumerate") return Method::enumerate;
    throw ConfigError("unknown solver '" + std::string(s) + "'");
}

void finalize_report(const SystemParams& params, SolveReport& report) {
    const Metrics m = evaluate(params, report.policy);
    report.w_s = m.w_s;
    report.w_p = m.w_p;
    report.delta = delta_loss(params, report.policy, report.metric);
    report.binding = std::abs(report.delta - report.sigma) <= 1e-9 &&
                     delta_loss(params, Policy::ones(params.t_max), report.metric) > report.sigma + 1e-12;
}

}  // namespace cogarq
