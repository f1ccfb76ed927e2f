#pragma once

// Randomized property checks behind `cogarq verify`: closed forms against
// finite differences and re-evaluation, exchange orderings, solver agreement.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cogarq/model.hpp"
#include "cogarq/rng.hpp"

namespace cogarq::verify {

struct InstanceRanges {
    int t_min = 1;
    int t_max = 6;
    double alpha_lo = 0.05, alpha_hi = 0.95;
    double rho_lo = 0.1, rho_hi = 0.9;
    double lambda_lo = 0.1, lambda_hi = 1.0;
    double nu_hi = 0.5;
    bool z_channel = true;  // lambda_s = 0
};

SystemParams random_params(Stream& rng, const InstanceRanges& r = {});
Policy random_policy(Stream& rng, int t_max);

/// Derivative of f(kappa) in entry i: central difference with step h, or
/// the second-order one-sided stencil when kappa_i is within h of 0 or 1.
double finite_difference(const std::function<double(const Policy&)>& f, const Policy& k, int i, double h = 1e-6);

struct CheckResult {
    std::string name;
    int instances = 0;
    int failures = 0;
    double worst = 0.0;  // largest observed error / smallest margin, per check
    std::string detail;

    bool passed() const { return failures == 0 && instances > 0; }
};

/// Runs every check on `instances` random draws each.
std::vector<CheckResult> run_all(std::uint64_t seed, int instances);

}  // namespace cogarq::verify
