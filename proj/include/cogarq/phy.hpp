#pragma once

// Average decoding-failure probabilities of the two links from rates,
// powers and channel statistics, reduced to the four numbers the Markov
// model consumes.

#include <cstdint>
#include <string_view>
#include <utility>

namespace cogarq::phy {

enum class SecondaryRx { treat_as_noise, opportunistic_cancel };
enum class Fading { rayleigh, deterministic };
enum class CapacityUnit { bits, nats };

std::string_view to_string(SecondaryRx mode);
std::string_view to_string(Fading fading);
SecondaryRx secondary_rx_from_string(std::string_view s);
Fading fading_from_string(std::string_view s);

/// Rates in bit/s/Hz, powers normalized to the noise power, linear mean gains.
/// gain naming: gbar_xy is the mean power gain from source x to destination y.
struct LinkBudget {
    double r_p = 1.0;
    double r_s = 1.0;
    double p_p = 1.0;
    double p_s = 1.0;
    double gbar_pp = 1.0;
    double gbar_ps = 1.0;
    double gbar_ss = 1.0;
    double gbar_sp = 1.0;
    SecondaryRx secondary_rx_mode = SecondaryRx::treat_as_noise;

    void validate() const;
};

struct FailureProbs {
    double rho = 0.0;
    double rho_star = 0.0;
    double nu = 0.0;
    double nu_star = 0.0;

    void validate() const;
};

struct IncreasingFactors {
    double lambda = 0.0;
    double lambda_s = 0.0;
};

/// log2(1 + x) by default. Throws std::domain_error for x < 0.
double capacity(double x, CapacityUnit unit = CapacityUnit::bits);

/// Smallest SINR that supports `rate` (inverse of capacity).
double sinr_threshold(double rate, CapacityUnit unit = CapacityUnit::bits);

/// Rayleigh: closed form for rho and nu, Monte Carlo (one set of gain draws
/// shared by both starred quantities) for rho* and nu*. The starred values
/// are estimated as conditional increments on top of the closed forms, so
/// rho* >= rho and nu* >= nu hold for every sample size.
/// Deterministic: gains fixed at their means, exact indicators.
/// Throws ConfigError if Rayleigh is requested with mc_samples < 10^4.
FailureProbs failure_probs(const LinkBudget& budget, Fading fading,
                           std::uint64_t mc_samples, std::uint64_t seed);

/// lambda = (rho* - rho) / (1 - rho), 0 when rho = 1; lambda_s likewise.
/// Throws InvariantError if rho* < rho or nu* < nu.
IncreasingFactors increasing_factors(const FailureProbs& fp);

}  // namespace cogarq::phy
