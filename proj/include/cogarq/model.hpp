#pragma once

// Markov chain of the primary ARQ process and the analytic cost/reward
// functionals of a secondary transmission policy.
//
// State 0 is the idle primary; state t in 1..T is the t-th transmission of
// the packet in service. Packet size and slot length are normalized to one.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cogarq {

enum class Metric { throughput, failure_prob, num_tx };

std::string_view to_string(Metric m);
/// Accepts "throughput", "failure_prob"/"fp", "num_tx"/"ntx".
Metric metric_from_string(std::string_view s);

struct SystemParams {
    double alpha = 0.5;     // fresh-packet probability in a free slot, (0,1)
    double rho = 0.0;       // primary failure prob, secondary silent
    double lambda = 0.0;    // primary failure increasing factor
    double nu = 0.0;        // secondary failure prob, primary silent, [0,1)
    double lambda_s = 0.0;  // secondary failure increasing factor
    int t_max = 1;          // maximum transmissions per primary packet

    /// Throws InvariantError on any out-of-range field.
    void validate() const;

    double rho_star() const { return rho + (1.0 - rho) * lambda; }
    double nu_star() const { return nu + (1.0 - nu) * lambda_s; }
    std::size_t num_states() const { return static_cast<std::size_t>(t_max) + 1; }
};

/// Transmission probabilities kappa[0..T]; kappa[0] is the idle state.
class Policy {
public:
    Policy() = default;
    /// Throws InvariantError if any entry is outside [0,1] or not finite.
    explicit Policy(std::vector<double> kappa);

    static Policy zeros(int t_max);
    static Policy ones(int t_max);
    /// kappa_0 = 1, kappa_t = x for every busy state.
    static Policy flat(int t_max, double x);

    std::size_t size() const { return kappa_.size(); }
    int t_max() const { return static_cast<int>(kappa_.size()) - 1; }
    double operator[](std::size_t i) const { return kappa_[i]; }
    std::span<const double> values() const { return kappa_; }
    const std::vector<double>& vector() const { return kappa_; }

    /// Copy with entry i replaced; the new value is validated.
    Policy with(std::size_t i, double value) const;

    friend bool operator==(const Policy&, const Policy&) = default;

private:
    std::vector<double> kappa_;
};

struct StateDistribution {
    std::vector<double> pi;
};

struct Metrics {
    double j_p = 0.0;
    double w_p = 0.0;
    double w_s = 0.0;
    double j_fp = 0.0;
    double j_ntx = 0.0;
};

/// Dense row-major square matrix, just enough for the (T+1)x(T+1) kernel.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> data;

    explicit Matrix(std::size_t size) : n(size), data(size * size, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// Numerator/denominator split shared by the cost and the reward:
/// J_P = n_j / d and, for nu* = nu, W_S / (1 - nu) = n_w / d.
struct ChainTerms {
    double n_j = 0.0;
    double n_w = 0.0;
    double d = 0.0;
};

/// Throws InvariantError unless policy.size() == T + 1.
void check_compatible(const SystemParams& params, const Policy& policy);

/// rho + (1 - rho) * lambda * kappa_theta, for 1 <= theta <= T.
double effective_failure(const SystemParams& params, const Policy& policy, int theta);

Matrix transition_matrix(const SystemParams& params, const Policy& policy);
StateDistribution steady_state(const SystemParams& params, const Policy& policy);
ChainTerms chain_terms(const SystemParams& params, const Policy& policy);

double primary_cost(const SystemParams& params, const Policy& policy);
double secondary_reward(const SystemParams& params, const Policy& policy);
double failure_prob_cost(const SystemParams& params, const Policy& policy);
double num_tx_cost(const SystemParams& params, const Policy& policy);

/// Cost of the primary under the selected metric.
double metric_cost(const SystemParams& params, const Policy& policy, Metric metric);

/// metric_cost(policy) - metric_cost(all-zero policy).
double delta_loss(const SystemParams& params, const Policy& policy, Metric metric);

Metrics evaluate(const SystemParams& params, const Policy& policy);

}  // namespace cogarq
