#include "cogarq/phy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cogarq/errors.hpp"
#include "cogarq/rng.hpp"

namespace cogarq::phy {

namespace {

bool prob(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

// Decoding outcomes for one realization of the four gains.
struct Outcome {
    bool primary_alone;      // D_P decodes with the secondary silent
    bool primary_interfered; // D_P decodes with the secondary transmitting
    bool secondary_alone;
    bool secondary_interfered;
};

Outcome decode(const LinkBudget& b, double g_pp, double g_ps, double g_ss, double g_sp) {
    Outcome o{};
    o.primary_alone = b.r_p <= capacity(g_pp * b.p_p);
    o.primary_interfered = b.r_p <= capacity(g_pp * b.p_p / (1.0 + g_sp * b.p_s));
    o.secondary_alone = b.r_s <= capacity(g_ss * b.p_s);
    const bool as_noise = b.r_s <= capacity(g_ss * b.p_s / (1.0 + g_ps * b.p_p));
    if (b.secondary_rx_mode == SecondaryRx::opportunistic_cancel) {
        // Joint decoding region at D_S (multiple-access pentagon corner).
        const bool joint = o.secondary_alone && b.r_p + b.r_s <= capacity(g_ps * b.p_p + g_ss * b.p_s);
        o.secondary_interfered = joint || as_noise;
    } else {
        o.secondary_interfered = as_noise;
    }
    return o;
}

// P{g * power < threshold} for exponential g with the given mean.
double rayleigh_outage(double threshold, double power, double mean_gain) {
    if (threshold <= 0.0) return 0.0;
    return -std::expm1(-threshold / (power * mean_gain));
}

}  // namespace

std::string_view to_string(SecondaryRx mode) {
    return mode == SecondaryRx::treat_as_noise ? "treat-as-noise" : "opportunistic-cancel";
}

std::string_view to_string(Fading fading) {
    return fading == Fading::rayleigh ? "rayleigh" : "deterministic";
}

SecondaryRx secondary_rx_from_string(std::string_view s) {
    if (s == "treat-as-noise") return SecondaryRx::treat_as_noise;
    if (s == "opportunistic-cancel") return SecondaryRx::opportunistic_cancel;
    throw ConfigError("unknown secondary_rx_mode '" + std::string(s) + "'");
}

Fading fading_from_string(std::string_view s) {
    if (s == "rayleigh" || s == "Rayleigh") return Fading::rayleigh;
    if (s == "deterministic" || s == "Deterministic") return Fading::deterministic;
    throw ConfigError("unknown fading model '" + std::string(s) + "'");
}

void LinkBudget::validate() const {
    std::ostringstream err;
    if (!(r_p >= 0.0) || !(r_s >= 0.0)) err << " rates must be >= 0;";
    if (!(p_p > 0.0) || !(p_s > 0.0)) err << " powers must be > 0;";
    if (!(gbar_pp > 0.0 && gbar_ps > 0.0 && gbar_ss > 0.0 && gbar_sp > 0.0)) err << " mean gains must be > 0;";
    if (!err.str().empty()) throw InvariantError("invalid link budget:" + err.str());
}

void FailureProbs::validate() const {
    if (!(prob(rho) && prob(rho_star) && prob(nu) && prob(nu_star)))
        throw InvariantError("failure probabilities must lie in [0,1]");
    if (rho_star < rho) throw InvariantError("rho_star < rho");
    if (nu_star < nu) throw InvariantError("nu_star < nu");
}

double capacity(double x, CapacityUnit unit) {
    if (!(x >= 0.0)) throw std::domain_error("capacity: argument must be >= 0");
    return unit == CapacityUnit::bits ? std::log2(1.0 + x) : std::log1p(x);
}

double sinr_threshold(double rate, CapacityUnit unit) {
    return unit == CapacityUnit::bits ? std::exp2(rate) - 1.0 : std::expm1(rate);
}

FailureProbs failure_probs(const LinkBudget& budget, Fading fading,
                           std::uint64_t mc_samples, std::uint64_t seed) {
    budget.validate();
    FailureProbs fp;

    if (fading == Fading::deterministic) {
        const auto o = decode(budget, budget.gbar_pp, budget.gbar_ps, budget.gbar_ss, budget.gbar_sp);
        fp.rho = o.primary_alone ? 0.0 : 1.0;
        fp.rho_star = o.primary_interfered ? 0.0 : 1.0;
        fp.nu = o.secondary_alone ? 0.0 : 1.0;
        fp.nu_star = o.secondary_interfered ? 0.0 : 1.0;
        // Interference can only hurt; the indicators above respect that.
        fp.validate();
        return fp;
    }

    if (mc_samples < 10000)
        throw ConfigError("Rayleigh failure probabilities need mc_samples >= 10000");

    fp.rho = rayleigh_outage(sinr_threshold(budget.r_p), budget.p_p, budget.gbar_pp);
    fp.nu = rayleigh_outage(sinr_threshold(budget.r_s), budget.p_s, budget.gbar_ss);

    Stream gains(seed, 0);
    std::uint64_t p_ok = 0, p_lost = 0, s_ok = 0, s_lost = 0;
    for (std::uint64_t n = 0; n < mc_samples; ++n) {
        const double g_pp = gains.exponential(budget.gbar_pp);
        const double g_ps = gains.exponential(budget.gbar_ps);
        const double g_ss = gains.exponential(budget.gbar_ss);
        const double g_sp = gains.exponential(budget.gbar_sp);
        const auto o = decode(budget, g_pp, g_ps, g_ss, g_sp);
        if (o.primary_alone) {
            ++p_ok;
            if (!o.primary_interfered) ++p_lost;
        }
        if (o.secondary_alone) {
            ++s_ok;
            if (!o.secondary_interfered) ++s_lost;
        }
    }
    const double lam = p_ok ? static_cast<double>(p_lost) / static_cast<double>(p_ok) : 0.0;
    const double lam_s = s_ok ? static_cast<double>(s_lost) / static_cast<double>(s_ok) : 0.0;
    fp.rho_star = fp.rho + (1.0 - fp.rho) * lam;
    fp.nu_star = fp.nu + (1.0 - fp.nu) * lam_s;
    fp.validate();
    return fp;
}

IncreasingFactors increasing_factors(const FailureProbs& fp) {
    fp.validate();
    IncreasingFactors f;
    f.lambda = fp.rho < 1.0 ? (fp.rho_star - fp.rho) / (1.0 - fp.rho) : 0.0;
    f.lambda_s = fp.nu < 1.0 ? (fp.nu_star - fp.nu) / (1.0 - fp.nu) : 0.0;
    f.lambda = std::fmin(1.0, std::fmax(0.0, f.lambda));
    f.lambda_s = std::fmin(1.0, std::fmax(0.0, f.lambda_s));
    return f;
}

}  // namespace cogarq::phy
