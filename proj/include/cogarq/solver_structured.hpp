#pragma once

// Structured solvers: vertical flooding (threshold structure), horizontal
// flooding (one common busy-state probability) and exhaustive enumeration
// over policies that randomize in at most one state.

#include "cogarq/constraint.hpp"
#include "cogarq/model.hpp"

namespace cogarq {

struct StructuredOptions {
    /// Run vertical/horizontal even when nu* > nu; the report is then
    /// flagged method_valid = false. Without it such calls throw ConfigError.
    bool allow_general = false;
};

/// Scans j = T..1 zeroing kappa_j while the policy is inadmissible, then
/// bisects the last zeroed entry onto the constraint. Metrics throughput and
/// failure_prob only (ConfigError for num_tx).
SolveReport solve_vertical(const SystemParams& params, const ConstraintSpec& spec,
                           StructuredOptions opts = {});

/// kappa_0 = 1 and the largest common kappa in the busy states.
SolveReport solve_horizontal(const SystemParams& params, const ConstraintSpec& spec,
                             StructuredOptions opts = {});

/// Exact optimum over kappa_0 = 1 and {0,1} busy entries with at most one
/// randomized state; ties go to the lexicographically largest kappa.
/// Throws BudgetError for T > 16.
SolveReport solve_enumerate(const SystemParams& params, const ConstraintSpec& spec);

/// Dispatch on method (lp included).
SolveReport solve(const SystemParams& params, const ConstraintSpec& spec, Method method,
                  StructuredOptions opts = {});

}  // namespace cogarq
