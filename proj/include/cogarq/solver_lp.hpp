#pragma once

// Occupancy-measure linear program of the constrained MDP and a small dense
// simplex to solve it.
//
// Column order is z_0(0), z_1(0), z_0(1), z_1(1), ..., z_0(T), z_1(T):
// variable 2*theta + u is the stationary probability of being in state
// theta and taking action u (u = 1 means the secondary transmits).

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogarq/constraint.hpp"
#include "cogarq/model.hpp"

namespace cogarq::lp {

/// maximize c.x  s.t.  eq_rows x = eq_rhs,  le_rows x <= le_rhs,  x >= 0,
/// and x_i = 0 for every i in fixed_zero.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> le_rows;
    std::vector<double> le_rhs;
    std::vector<std::size_t> fixed_zero;

    /// Throws InvariantError on inconsistent dimensions.
    void validate() const;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(Status s);

struct Solution {
    Status status = Status::infeasible;
    std::vector<double> x;
    double objective = 0.0;
    int iterations = 0;
    std::size_t dropped_rows = 0;  // redundant equality rows removed after phase 1
};

/// Dense two-phase primal simplex with Bland's rule, pivot tolerance 1e-9.
Solution simplex_solve(const LinearProgram& lp);

struct StateValues {
    // [theta][u]
    std::vector<std::array<double, 2>> cost;    // throughput cost (gamma tilde)
    std::vector<std::array<double, 2>> reward;  // secondary reward (omega tilde)
};

/// Per-state, per-action expected primary cost and secondary reward.
StateValues per_state_values(const SystemParams& params);

/// Coefficients and right-hand side of the single metric inequality row.
/// `bound` is the delta bound for throughput and the cost bound otherwise.
std::pair<std::vector<double>, double> constraint_row(const SystemParams& params, Metric metric, double bound);

LinearProgram build_lp(const SystemParams& params, const ConstraintSpec& spec);

inline std::size_t var_index(int theta, int u) { return 2 * static_cast<std::size_t>(theta) + u; }

struct Occupancy {
    int t_max = 1;
    std::vector<double> z;  // column order above

    double operator()(int theta, int u) const { return z[var_index(theta, u)]; }
};

/// Clamps entries in [-1e-12, 0) to zero. Throws InvariantError for wrong
/// length or entries below -1e-12.
Occupancy make_occupancy(int t_max, std::vector<double> z);

/// Largest absolute violation of normalization and flow balance.
double flow_balance_residual(const SystemParams& params, const Occupancy& occ);

/// kappa_theta = z_1 / (z_0 + z_1) when the denominator exceeds 1e-10, else 0.
Policy extract_policy(const Occupancy& occ);

/// Builds, solves and extracts. Throws InfeasibleError or NumericalError.
SolveReport solve_lp(const SystemParams& params, const ConstraintSpec& spec);

/// Plain-text dump of the program (one row per line, full precision).
void write_lp(std::ostream& os, const LinearProgram& lp, int t_max);

}  // namespace cogarq::lp
