#pragma once

// Slot-by-slot Monte Carlo of the primary ARQ process with a secondary
// following a randomized policy.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cogarq/model.hpp"

namespace cogarq {

struct SimConfig {
    std::uint64_t n_slots = 1000000;  // counted slots, after warmup
    std::uint64_t seed = 1;
    std::uint64_t warmup_slots = 1000;
    int batches = 100;

    /// Throws ConfigError unless n_slots >= batches >= 2.
    void validate() const;
};

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;  // batch-means standard error
};

struct SimStats {
    Estimate w_p_hat;  // primary packets delivered per slot
    Estimate w_s_hat;  // secondary packets delivered per slot
    Estimate fp_hat;   // dropped / completed primary packets
    Estimate ntx_hat;  // transmissions per completed primary packet
    std::vector<Estimate> occupancy_hat;
    std::uint64_t slots_counted = 0;
    std::uint64_t packets_completed = 0;
    std::string prng;
};

/// Optional per-slot trace sink: CSV rows slot,state,secondary_tx,primary_success,secondary_success.
SimStats simulate(const SystemParams& params, const Policy& policy, const SimConfig& config,
                  std::ostream* trace = nullptr);

}  // namespace cogarq
