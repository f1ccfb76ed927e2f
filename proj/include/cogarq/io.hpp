#pragma once

// JSON views of the library types and the experiment config file.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "cogarq/constraint.hpp"
#include "cogarq/model.hpp"
#include "cogarq/phy.hpp"
#include "cogarq/simulator.hpp"

namespace cogarq::io {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

json to_json(const SystemParams& p);
json to_json(const Metrics& m);
json to_json(const SolveReport& r);
json to_json(const SimStats& s);
json to_json(const phy::FailureProbs& fp, const phy::IncreasingFactors& f);

/// Parsers throw ConfigError with the offending key in the message.
SystemParams params_from_json(const json& j);
phy::LinkBudget link_budget_from_json(const json& j);
Policy policy_from_json(const json& j);

struct PhySetup {
    phy::LinkBudget budget;
    phy::Fading fading = phy::Fading::rayleigh;
    std::uint64_t mc_samples = 100000;
    std::uint64_t seed = 1;
};

struct SweepSpec {
    std::string variable;  // epsilon, alpha, rho, lambda, lambda_s
    double from = 0.0;
    double to = 0.0;
    int steps = 1;

    double value(int i) const { return steps == 1 ? from : from + (to - from) * i / (steps - 1); }
};

struct ExperimentConfig {
    std::optional<SystemParams> params;  // explicit, or derived from phy
    std::optional<PhySetup> phy;
    int t_max = 4;                       // traffic block, used with phy
    double alpha = 0.5;
    ConstraintSpec constraint;
    Method solver = Method::vertical;
    bool allow_general = false;
    std::optional<Policy> policy;
    std::optional<SweepSpec> sweep;
    std::optional<SimConfig> sim;
    std::optional<std::string> output_path;
    std::string format = "csv";

    /// Explicit params, or params derived through the phy block.
    SystemParams system() const;
};

/// Throws ConfigError on malformed content (json parse errors included).
ExperimentConfig config_from_json(const json& j);
ExperimentConfig load_config(const std::string& path);

/// Applies a sweep variable value to a copy of (params, constraint).
void apply_sweep_value(const std::string& variable, double value, SystemParams& params, ConstraintSpec& spec);

}  // namespace cogarq::io
