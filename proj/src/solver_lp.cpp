#include "cogarq/solver_lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "cogarq/errors.hpp"

namespace cogarq::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kMaxIterations = 50000;

// Tableau in canonical form: rows_[i] holds the row of basis_[i], last column
// is the right-hand side. cost_ holds reduced costs (minimization) and
// cost_.back() is minus the current objective.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows, std::vector<double>(cols + 1, 0.0)), basis_(rows, 0), cols_(cols) {}

    std::vector<std::vector<double>> rows_;
    std::vector<double> cost_;
    std::vector<std::size_t> basis_;
    std::size_t cols_;

    double rhs(std::size_t i) const { return rows_[i][cols_]; }

    void pivot(std::size_t r, std::size_t c) {
        auto& pr = rows_[r];
        const double p = pr[c];
        for (auto& v : pr) v /= p;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == r) continue;
            const double f = rows_[i][c];
            if (f == 0.0) continue;
            for (std::size_t k = 0; k <= cols_; ++k) rows_[i][k] -= f * pr[k];
            rows_[i][c] = 0.0;
        }
        const double f = cost_[c];
        if (f != 0.0) {
            for (std::size_t k = 0; k <= cols_; ++k) cost_[k] -= f * pr[k];
            cost_[c] = 0.0;
        }
        basis_[r] = c;
    }

    // Reduced costs for objective c (minimize), given the current basis.
    void price(const std::vector<double>& c) {
        cost_.assign(cols_ + 1, 0.0);
        for (std::size_t k = 0; k < cols_; ++k) cost_[k] = c[k];
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t k = 0; k <= cols_; ++k) cost_[k] -= cb * rows_[i][k];
        }
    }

    // Bland's rule. Returns the final status of the minimization.
    Status run(const std::vector<bool>& allowed, int& iterations) {
        while (true) {
            std::size_t enter = cols_;
            for (std::size_t k = 0; k < cols_; ++k) {
                if (allowed[k] && cost_[k] < -kPivotTol) {
                    enter = k;
                    break;
                }
            }
            if (enter == cols_) return Status::optimal;
            if (iterations >= kMaxIterations) return Status::iteration_limit;

            std::size_t leave = rows_.size();
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                const double a = rows_[i][enter];
                if (a <= kPivotTol) continue;
                const double ratio = rhs(i) / a;
                if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == rows_.size()) return Status::unbounded;
            pivot(leave, enter);
            ++iterations;
        }
    }
};

}  // namespace

std::string_view to_string(Status s) {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
        case Status::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

void LinearProgram::validate() const {
    auto bad = [](const std::string& what) { throw InvariantError("linear program: " + what); };
    if (objective.size() != num_vars) bad("objective length != num_vars");
    if (eq_rows.size() != eq_rhs.size()) bad("equality rows/rhs mismatch");
    if (le_rows.size() != le_rhs.size()) bad("inequality rows/rhs mismatch");
    for (const auto& r : eq_rows)
        if (r.size() != num_vars) bad("equality row length != num_vars");
    for (const auto& r : le_rows)
        if (r.size() != num_vars) bad("inequality row length != num_vars");
    for (auto i : fixed_zero)
        if (i >= num_vars) bad("fixed_zero index out of range");
}

Solution simplex_solve(const LinearProgram& lp) {
    lp.validate();
    const std::size_t n = lp.num_vars;
    const std::size_t m_eq = lp.eq_rows.size();
    const std::size_t m_le = lp.le_rows.size();
    const std::size_t m = m_eq + m_le;
    // Columns: originals, one slack per inequality, one artificial per row.
    const std::size_t slack0 = n;
    const std::size_t art0 = n + m_le;
    const std::size_t cols = art0 + m;

    Tableau tab(m, cols);
    for (std::size_t i = 0; i < m; ++i) {
        auto& row = tab.rows_[i];
        const bool is_eq = i < m_eq;
        const auto& src = is_eq ? lp.eq_rows[i] : lp.le_rows[i - m_eq];
        double b = is_eq ? lp.eq_rhs[i] : lp.le_rhs[i - m_eq];
        for (std::size_t k = 0; k < n; ++k) row[k] = src[k];
        if (!is_eq) row[slack0 + (i - m_eq)] = 1.0;
        if (b < 0.0) {
            for (std::size_t k = 0; k < art0; ++k) row[k] = -row[k];
            b = -b;
        }
        row[art0 + i] = 1.0;
        row[cols] = b;
        tab.basis_[i] = art0 + i;
    }

    std::vector<bool> allowed(cols, true);
    for (auto i : lp.fixed_zero) allowed[i] = false;

    Solution sol;
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1[art0 + i] = 1.0;
    tab.price(phase1);
    Status st = tab.run(allowed, sol.iterations);
    if (st == Status::iteration_limit) {
        sol.status = st;
        return sol;
    }
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis_[i] >= art0) infeas += tab.rhs(i);
    if (infeas > 1e-9) {
        sol.status = Status::infeasible;
        return sol;
    }

    // Drive remaining (zero-valued) artificials out; rows where that is
    // impossible are linear combinations of the others.
    for (std::size_t i = 0; i < tab.rows_.size();) {
        if (tab.basis_[i] < art0) {
            ++i;
            continue;
        }
        std::size_t enter = art0;
        for (std::size_t k = 0; k < art0; ++k) {
            if (allowed[k] && std::abs(tab.rows_[i][k]) > kPivotTol) {
                enter = k;
                break;
            }
        }
        if (enter < art0) {
            tab.pivot(i, enter);
            ++i;
        } else {
            tab.rows_.erase(tab.rows_.begin() + static_cast<std::ptrdiff_t>(i));
            tab.basis_.erase(tab.basis_.begin() + static_cast<std::ptrdiff_t>(i));
            ++sol.dropped_rows;
        }
    }

    for (std::size_t i = 0; i < m; ++i) allowed[art0 + i] = false;
    std::vector<double> phase2(cols, 0.0);
    for (std::size_t k = 0; k < n; ++k) phase2[k] = -lp.objective[k];
    tab.price(phase2);
    st = tab.run(allowed, sol.iterations);
    sol.status = st;
    if (st != Status::optimal) return sol;

    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < tab.rows_.size(); ++i)
        if (tab.basis_[i] < n) sol.x[tab.basis_[i]] = tab.rhs(i);
    sol.objective = 0.0;
    for (std::size_t k = 0; k < n; ++k) sol.objective += lp.objective[k] * sol.x[k];
    return sol;
}

StateValues per_state_values(const SystemParams& params) {
    params.validate();
    StateValues v;
    v.cost.assign(params.num_states(), {1.0, 1.0});
    v.reward.assign(params.num_states(), {0.0, 1.0 - params.nu_star()});
    v.reward[0][1] = 1.0 - params.nu;
    for (int t = 1; t <= params.t_max; ++t) v.cost[t] = {params.rho, params.rho_star()};
    return v;
}

std::pair<std::vector<double>, double> constraint_row(const SystemParams& params, Metric metric, double bound) {
    params.validate();
    const int T = params.t_max;
    std::vector<double> row(2 * params.num_states(), 0.0);
    double rhs = 0.0;
    switch (metric) {
        case Metric::throughput: {
            const auto v = per_state_values(params);
            for (int t = 0; t <= T; ++t)
                for (int u = 0; u < 2; ++u) row[var_index(t, u)] = v.cost[t][u];
            rhs = bound + primary_cost(params, Policy::zeros(T));
            break;
        }
        case Metric::failure_prob:
            // rho_T * pi(T) <= bound * pi(1); for T = 1 both land on the same columns.
            row[var_index(T, 0)] += params.rho;
            row[var_index(T, 1)] += params.rho_star();
            row[var_index(1, 0)] -= bound;
            row[var_index(1, 1)] -= bound;
            break;
        case Metric::num_tx:
            for (int t = 1; t <= T; ++t)
                for (int u = 0; u < 2; ++u) row[var_index(t, u)] += 1.0;
            row[var_index(1, 0)] -= bound;
            row[var_index(1, 1)] -= bound;
            break;
    }
    return {row, rhs};
}

LinearProgram build_lp(const SystemParams& params, const ConstraintSpec& spec) {
    params.validate();
    spec.validate();
    const int T = params.t_max;
    const double a = params.alpha;
    const std::size_t n = 2 * params.num_states();
    const double fail[2] = {params.rho, params.rho_star()};

    LinearProgram lp;
    lp.num_vars = n;
    const auto v = per_state_values(params);
    lp.objective.assign(n, 0.0);
    for (int t = 0; t <= T; ++t)
        for (int u = 0; u < 2; ++u) lp.objective[var_index(t, u)] = v.reward[t][u];

    lp.eq_rows.emplace_back(n, 1.0);
    lp.eq_rhs.push_back(1.0);

    // Flow balance for states 1..T; state 0's row is implied by the others.
    for (int s = 1; s <= T; ++s) {
        std::vector<double> row(n, 0.0);
        row[var_index(s, 0)] += 1.0;
        row[var_index(s, 1)] += 1.0;
        if (s == 1) {
            for (int u = 0; u < 2; ++u) {
                row[var_index(0, u)] -= a;
                row[var_index(T, u)] -= a;
                for (int t = 1; t < T; ++t) row[var_index(t, u)] -= a * (1.0 - fail[u]);
            }
        } else {
            for (int u = 0; u < 2; ++u) row[var_index(s - 1, u)] -= fail[u];
        }
        lp.eq_rows.push_back(std::move(row));
        lp.eq_rhs.push_back(0.0);
    }

    const Sigma sigma = sigma_from_epsilon(params, spec);
    auto [row, rhs] = constraint_row(params, spec.metric, spec.metric == Metric::throughput ? sigma.delta_bound : sigma.cost_bound);
    lp.le_rows.push_back(std::move(row));
    lp.le_rhs.push_back(rhs);

    lp.fixed_zero.push_back(var_index(0, 0));
    return lp;
}

Occupancy make_occupancy(int t_max, std::vector<double> z) {
    if (t_max < 1 || z.size() != 2 * static_cast<std::size_t>(t_max + 1))
        throw InvariantError("occupancy length must be 2(T+1)");
    for (auto& x : z) {
        if (x < -1e-12) throw InvariantError("occupancy entry below -1e-12");
        if (x < 0.0) x = 0.0;
    }
    return Occupancy{t_max, std::move(z)};
}

double flow_balance_residual(const SystemParams& params, const Occupancy& occ) {
    if (occ.t_max != params.t_max) throw InvariantError("occupancy/params T mismatch");
    const int T = params.t_max;
    const double a = params.alpha;
    const double fail[2] = {params.rho, params.rho_star()};

    double total = 0.0;
    for (double x : occ.z) total += x;
    double worst = std::abs(total - 1.0);

    std::vector<double> inflow(params.num_states(), 0.0);
    for (int t = 0; t <= T; ++t) {
        for (int u = 0; u < 2; ++u) {
            const double z = occ(t, u);
            if (t == 0 || t == T) {
                inflow[0] += z * (1.0 - a);
                inflow[1] += z * a;
            } else {
                inflow[0] += z * (1.0 - a) * (1.0 - fail[u]);
                inflow[1] += z * a * (1.0 - fail[u]);
                inflow[t + 1] += z * fail[u];
            }
        }
    }
    for (int t = 0; t <= T; ++t) worst = std::max(worst, std::abs(occ(t, 0) + occ(t, 1) - inflow[t]));
    return worst;
}

Policy extract_policy(const Occupancy& occ) {
    std::vector<double> k(occ.t_max + 1, 0.0);
    for (int t = 0; t <= occ.t_max; ++t) {
        const double den = occ(t, 0) + occ(t, 1);
        if (den > 1e-10) k[t] = std::clamp(occ(t, 1) / den, 0.0, 1.0);
    }
    return Policy(std::move(k));
}

SolveReport solve_lp(const SystemParams& params, const ConstraintSpec& spec) {
    const auto lp = build_lp(params, spec);
    const auto sol = simplex_solve(lp);
    switch (sol.status) {
        case Status::optimal: break;
        case Status::infeasible: throw InfeasibleError("occupancy LP is infeasible");
        case Status::unbounded: throw NumericalError("occupancy LP reported unbounded");
        case Status::iteration_limit: throw NumericalError("simplex hit the iteration limit");
    }

    SolveReport rep;
    rep.method = Method::lp;
    rep.metric = spec.metric;
    rep.epsilon = spec.epsilon;
    rep.sigma = sigma_from_epsilon(params, spec).delta_bound;
    rep.policy = extract_policy(make_occupancy(params.t_max, sol.x)).with(0, 1.0);
    rep.iterations = sol.iterations;
    finalize_report(params, rep);
    return rep;
}

void write_lp(std::ostream& os, const LinearProgram& lp, int t_max) {
    lp.validate();
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17);
    os << "# occupancy LP: maximize c.z, z >= 0\n# columns:";
    for (int t = 0; t <= t_max; ++t)
        for (int u = 0; u < 2; ++u) os << " z" << u << "(" << t << ")";
    os << "\n";
    auto row = [&](const char* tag, const std::vector<double>& r) {
        os << tag;
        for (double x : r) os << ' ' << x;
    };
    row("max", lp.objective);
    os << "\n";
    for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) {
        row("eq", lp.eq_rows[i]);
        os << " = " << lp.eq_rhs[i] << "\n";
    }
    for (std::size_t i = 0; i < lp.le_rows.size(); ++i) {
        row("le", lp.le_rows[i]);
        os << " <= " << lp.le_rhs[i] << "\n";
    }
    os << "fixed_zero";
    for (auto i : lp.fixed_zero) os << ' ' << i;
    os << "\n";
    os.flags(flags);
    os.precision(prec);
}

}  // namespace cogarq::lp
