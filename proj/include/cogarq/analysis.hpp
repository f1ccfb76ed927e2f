#pragma once

// Closed-form derivatives and numeric checkers for the monotonicity and
// exchange properties of the cost/reward functionals. Everything here is a
// pure function of (params, policy); the test suite and `cogarq verify` use
// these as oracles against the solvers.

#include <string>
#include <vector>

#include "cogarq/model.hpp"

namespace cogarq::analysis {

/// dJ_P/dkappa_theta. Entry 0 is exactly zero; entries theta >= 1 use the
/// expanded quotient-rule numerator
///   alpha*L*D + alpha^2 * S * (1 - prod_{i=1}^{T} rho_i),
/// with S = c*sum_{t=theta}^{T-1} prod_{i<=t, i!=theta} rho_i,
///      L = c*prod_{i<=T, i!=theta} rho_i,  c = (1-rho)*lambda.
std::vector<double> cost_gradient(const SystemParams& params, const Policy& policy);

/// dW_S/dkappa_theta for nu* = nu. Throws std::domain_error otherwise.
std::vector<double> reward_gradient(const SystemParams& params, const Policy& policy);

/// dN_W/dkappa_theta - dD/dkappa_theta for every theta (normalized reward
/// numerator vs. common denominator). Strictly positive in the
/// non-degenerate regime; this is what makes the reward increasing.
std::vector<double> numerator_slope_margin(const SystemParams& params, const Policy& policy);

struct T2Partials {
    double d_k0 = 0.0;
    double d_k1 = 0.0;
    double d_k2 = 0.0;
};

/// Partials of the general (nu* free) reward for T = 2. kappa_0 is taken
/// from the policy; with kappa_0 = 1 d_k1 > 0 iff nu* < nu_star_threshold.
/// Throws std::domain_error unless T = 2.
T2Partials t2_reward_partials(const SystemParams& params, const Policy& policy);

/// nu* value at which dW_S/dkappa_1 changes sign (T = 2, kappa_0 = 1).
double nu_star_threshold(const SystemParams& params, double kappa_2);

/// Linear-increment constants of J_P and the normalized reward around a
/// policy with kappa_j = kappa_r and zero tail above r:
///   J(k + u_r d) = (n_j + b d) / (d + a d),   J(k + u_j d) = (n_j + (b+c) d) / (d + (a+c) d)
///   W(k + u_r d) = (n_w + g d) / (d + a d),   W(k + u_j d) = (n_w + (g+f) d) / (d + (a+c) d)
struct PerturbationConstants {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double f = 0.0;
    double g = 0.0;
    double n_j = 0.0;
    double n_w = 0.0;
    double d = 0.0;
    double x = 0.0;  // alpha * prod_{i=1}^{T} rho_i
};

/// Throws std::domain_error if 0 < j < r <= T, kappa_j == kappa_r or the
/// zero-tail condition fails.
PerturbationConstants perturbation_constants(const SystemParams& params, const Policy& policy, int j, int r);

enum class Exchange { increase, decrease };

struct ExchangeReport {
    bool hypotheses_hold = false;
    std::string message;
    double delta_r = 0.0;
    double delta_j = 0.0;              // found by root-finding
    double delta_j_closed_form = 0.0;  // from the perturbation constants (throughput only)
    double cost_r = 0.0;
    double cost_j = 0.0;
    double reward_r = 0.0;
    double reward_j = 0.0;
    /// reward_j - reward_r for Exchange::increase, reward_r - reward_j for
    /// Exchange::decrease; the exchange argument needs margin > 0.
    double margin = 0.0;
    bool ordering_holds = false;
};

/// Moves kappa_r by delta_r (up or down), finds the delta_j that moves
/// kappa_j to the same primary cost, and compares the two rewards. A report
/// with hypotheses_hold = false is returned (not thrown) when the inputs do
/// not satisfy the exchange hypotheses or no equal-cost delta_j exists.
ExchangeReport verify_exchange(const SystemParams& params, const Policy& policy, int j, int r,
                               double delta_r, Exchange direction,
                               Metric metric = Metric::throughput);

struct InsensitivityReport {
    double cost_j = 0.0;
    double cost_r = 0.0;
    double difference = 0.0;  // |cost_j - cost_r|
};

/// Failure-probability cost after adding delta to kappa_j vs. to kappa_r.
/// Requires 0 < j < r <= T, kappa_j == kappa_r and the delta range
/// -min(kappa_j,kappa_r) <= delta <= min(1-kappa_j,1-kappa_r);
/// throws std::domain_error otherwise.
InsensitivityReport fp_insensitivity(const SystemParams& params, const Policy& policy, int j, int r, double delta);

}  // namespace cogarq::analysis
