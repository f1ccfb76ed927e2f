#pragma once

// Constraint specification shared by every solver, and the report they all
// return.

#include <string>
#include <string_view>

#include "cogarq/model.hpp"

namespace cogarq {

struct ConstraintSpec {
    Metric metric = Metric::throughput;
    double epsilon = 0.0;  // relative slack, >= 0

    /// Throws ConfigError for epsilon < 0 or non-finite.
    void validate() const;
};

/// The same allowance expressed two ways: as a bound on delta_loss and as
/// a bound on the metric cost itself (cost_bound = cost(0) + delta_bound).
struct Sigma {
    double delta_bound = 0.0;
    double cost_bound = 0.0;
};

/// throughput: delta_bound = epsilon * W_P(0).
/// failure_prob: cost_bound = rho^T (1 + epsilon).
/// num_tx: cost_bound = J_ntx(0) (1 + epsilon).
Sigma sigma_from_epsilon(const SystemParams& params, const ConstraintSpec& spec);

/// delta_loss(policy) <= delta_bound + tol.
bool admissible(const SystemParams& params, const Policy& policy, const ConstraintSpec& spec,
                const Sigma& sigma, double tol = 1e-12);

enum class Method { lp, vertical, horizontal, enumerate };

std::string_view to_string(Method m);
/// Throws ConfigError for unknown names.
Method method_from_string(std::string_view s);

struct SolveReport {
    Method method = Method::vertical;
    Metric metric = Metric::throughput;
    double epsilon = 0.0;
    double sigma = 0.0;  // delta bound
    Policy policy;
    double w_s = 0.0;
    double w_p = 0.0;
    double delta = 0.0;
    bool binding = false;
    int iterations = 0;
    /// False when the method ran outside the regime where it is known to be
    /// optimal (vertical/horizontal with nu* > nu).
    bool method_valid = true;
};

/// Fills w_s, w_p, delta and binding from the policy. Binding means the
/// all-ones policy is inadmissible and |delta - sigma| <= 1e-9.
void finalize_report(const SystemParams& params, SolveReport& report);

}  // namespace cogarq
