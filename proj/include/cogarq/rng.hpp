#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cogarq {

/// SplitMix64 step; used only to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// mt19937_64 stream whose output is fixed by the C++ standard, with a
/// portable [0,1) conversion so results are bit-identical across toolchains.
class Stream {
public:
    static constexpr const char* algorithm = "mt19937_64/splitmix64-seeded";

    Stream(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t s = master_seed ^ (0xD1B54A32D192ED03ULL * (stream_id + 1));
        engine_.seed(splitmix64(s));
    }

    /// Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability p (p = 1 always true, p = 0 never).
    bool bernoulli(double p) { return uniform() < p; }

    /// Exponential with the given mean.
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

private:
    std::mt19937_64 engine_;
};

}  // namespace cogarq
