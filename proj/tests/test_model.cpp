#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "cogarq/errors.hpp"
#include "cogarq/model.hpp"

using namespace cogarq;

namespace {

SystemParams ref_params() {
    SystemParams p;
    p.alpha = 0.8;
    p.rho = 0.3;
    p.lambda = 0.3;
    p.t_max = 2;
    return p;
}

struct Draw {
    SystemParams p;
    Policy k;
};

Draw random_draw(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> t(1, 6);
    SystemParams p;
    p.t_max = t(gen);
    p.alpha = 0.05 + 0.9 * u(gen);
    p.rho = 0.1 + 0.8 * u(gen);
    p.lambda = 0.05 + 0.95 * u(gen);
    p.nu = 0.5 * u(gen);
    std::vector<double> k(p.t_max + 1);
    for (auto& x : k) x = u(gen);
    return {p, Policy(k)};
}

// Stationary vector from the matrix alone: solve (P^T - I) pi = 0 with the
// last balance equation replaced by normalization.
Eigen::VectorXd eigen_stationary(const Matrix& m) {
    const auto n = static_cast<Eigen::Index>(m.n);
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m(j, i) - (i == j ? 1.0 : 0.0);
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    return a.colPivHouseholderQr().solve(b);
}

std::vector<double> power_iteration(const Matrix& m) {
    std::vector<double> pi(m.n, 1.0 / static_cast<double>(m.n));
    for (int it = 0; it < 10000; ++it) {
        std::vector<double> next(m.n, 0.0);
        for (std::size_t i = 0; i < m.n; ++i)
            for (std::size_t j = 0; j < m.n; ++j) next[j] += pi[i] * m(i, j);
        double diff = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) diff = std::max(diff, std::abs(next[j] - pi[j]));
        pi = next;
        if (diff < 1e-15) break;
    }
    return pi;
}

}  // namespace

TEST(Params, Validation) {
    SystemParams p = ref_params();
    EXPECT_NO_THROW(p.validate());
    p.alpha = 1.0;
    EXPECT_THROW(p.validate(), InvariantError);
    p = ref_params();
    p.nu = 1.0;
    EXPECT_THROW(p.validate(), InvariantError);
    p = ref_params();
    p.t_max = 0;
    EXPECT_THROW(p.validate(), InvariantError);
}

TEST(Policy, Invariants) {
    EXPECT_THROW(Policy({1.0, 1.5}), InvariantError);
    EXPECT_THROW(Policy({1.0}), InvariantError);
    EXPECT_THROW(primary_cost(ref_params(), Policy::zeros(3)), InvariantError);
    EXPECT_EQ(Policy::flat(3, 0.2).vector(), (std::vector<double>{1.0, 0.2, 0.2, 0.2}));
}

TEST(EffectiveFailure, Examples) {
    const auto p = ref_params();
    EXPECT_DOUBLE_EQ(effective_failure(p, Policy({1, 0, 0}), 1), 0.3);
    EXPECT_DOUBLE_EQ(effective_failure(p, Policy({1, 1, 0}), 1), 0.51);
    EXPECT_DOUBLE_EQ(effective_failure(p, Policy({1, 0.5, 0}), 1), 0.405);
    EXPECT_THROW(effective_failure(p, Policy({1, 0, 0}), 0), std::domain_error);
    EXPECT_THROW(effective_failure(p, Policy({1, 0, 0}), 3), std::domain_error);
}

TEST(TransitionMatrix, Examples) {
    auto p = ref_params();
    const auto m = transition_matrix(p, Policy::zeros(2));
    EXPECT_NEAR(m(1, 0), 0.14, 1e-15);
    EXPECT_NEAR(m(1, 1), 0.56, 1e-15);
    EXPECT_NEAR(m(1, 2), 0.30, 1e-15);
    EXPECT_NEAR(m(2, 0), 0.2, 1e-15);
    EXPECT_NEAR(m(2, 1), 0.8, 1e-15);

    p.t_max = 1;
    const auto m1 = transition_matrix(p, Policy::ones(1));
    EXPECT_NEAR(m1(0, 0), 0.2, 1e-15);
    EXPECT_NEAR(m1(1, 1), 0.8, 1e-15);

    p.t_max = 4;
    p.rho = 0.0;
    p.lambda = 0.0;
    const auto m4 = transition_matrix(p, Policy::ones(4));
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_NEAR(m4(i, 0), 0.2, 1e-15);
        EXPECT_NEAR(m4(i, 1), 0.8, 1e-15);
    }
}

TEST(TransitionMatrix, RowsSumToOne) {
    std::mt19937_64 gen(1);
    for (int i = 0; i < 200; ++i) {
        const auto d = random_draw(gen);
        const auto m = transition_matrix(d.p, d.k);
        for (std::size_t r = 0; r < m.n; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < m.n; ++c) s += m(r, c);
            EXPECT_NEAR(s, 1.0, 1e-12);
        }
    }
}

TEST(SteadyState, ReferenceInstanceByPowerIteration) {
    const auto p = ref_params();
    const Policy k({1, 0, 0});
    const auto pi = steady_state(p, k).pi;
    const auto oracle = power_iteration(transition_matrix(p, k));
    for (int t = 0; t < 3; ++t) EXPECT_NEAR(pi[t], oracle[t], 1e-12);
    EXPECT_NEAR(pi[0], 0.161290, 5e-7);
    EXPECT_NEAR(pi[1], 0.645161, 5e-7);
    EXPECT_NEAR(pi[2], 0.193548, 5e-7);
}

TEST(SteadyState, TrivialCases) {
    auto p = ref_params();
    p.t_max = 1;
    auto pi = steady_state(p, Policy::ones(1)).pi;
    EXPECT_NEAR(pi[0], 0.2, 1e-15);
    EXPECT_NEAR(pi[1], 0.8, 1e-15);

    p.t_max = 4;
    p.rho = 0.0;
    p.lambda = 0.0;
    pi = steady_state(p, Policy::ones(4)).pi;
    EXPECT_NEAR(pi[0], 0.2, 1e-15);
    EXPECT_NEAR(pi[1], 0.8, 1e-15);
    for (int t = 2; t <= 4; ++t) EXPECT_EQ(pi[t], 0.0);
}

TEST(SteadyState, MatchesEigenStationaryVector) {
    std::mt19937_64 gen(2);
    for (int i = 0; i < 1000; ++i) {
        const auto d = random_draw(gen);
        const auto pi = steady_state(d.p, d.k).pi;
        const auto ev = eigen_stationary(transition_matrix(d.p, d.k));
        double sum = 0.0;
        for (std::size_t t = 0; t < pi.size(); ++t) {
            ASSERT_NEAR(pi[t], ev(static_cast<Eigen::Index>(t)), 1e-10);
            sum += pi[t];
            if (t >= 2) {
                EXPECT_LE(pi[t], pi[t - 1]);
                EXPECT_NEAR(pi[t], pi[t - 1] * effective_failure(d.p, d.k, static_cast<int>(t - 1)), 1e-15);
            }
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(PrimaryCost, Examples) {
    auto p = ref_params();
    EXPECT_NEAR(primary_cost(p, Policy::zeros(2)), 0.412903, 5e-7);
    EXPECT_NEAR(1.0 - primary_cost(p, Policy::zeros(2)), 0.587097, 5e-7);
    EXPECT_NEAR(delta_loss(p, Policy::ones(2), Metric::throughput), 0.166699, 5e-7);

    p.rho = 0.0;
    p.lambda = 0.0;
    EXPECT_NEAR(primary_cost(p, Policy::ones(2)), 0.2, 1e-15);

    p = ref_params();
    p.lambda = 1.0;
    EXPECT_NEAR(1.0 - primary_cost(p, Policy::ones(2)), 0.0, 1e-15);
}

TEST(PrimaryCost, EqualsStateAverageOfCosts) {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 500; ++i) {
        const auto d = random_draw(gen);
        const auto pi = steady_state(d.p, d.k).pi;
        double avg = pi[0];
        for (int t = 1; t <= d.p.t_max; ++t) avg += pi[t] * effective_failure(d.p, d.k, t);
        EXPECT_NEAR(primary_cost(d.p, d.k), avg, 1e-12);
    }
}

TEST(SecondaryReward, Examples) {
    auto p = ref_params();
    EXPECT_NEAR(secondary_reward(p, Policy::ones(2)), 1.0, 1e-15);
    EXPECT_NEAR(secondary_reward(p, Policy({1, 0, 0})), 0.161290, 5e-7);
    EXPECT_NEAR(secondary_reward(p, Policy({1, 0, 0})), steady_state(p, Policy({1, 0, 0})).pi[0], 1e-15);

    p.nu = 0.2;
    p.lambda_s = 0.5;
    const Policy k({0.7, 0.4, 0.9});
    const auto pi = steady_state(p, k).pi;
    const double expect = pi[0] * 0.7 * 0.8 + (pi[1] * 0.4 + pi[2] * 0.9) * (1.0 - 0.6);
    EXPECT_NEAR(secondary_reward(p, k), expect, 1e-15);
}

TEST(FailureProbCost, Examples) {
    auto p = ref_params();
    p.t_max = 4;
    EXPECT_NEAR(failure_prob_cost(p, Policy::zeros(4)), 0.0081, 1e-15);
    p.t_max = 2;
    EXPECT_NEAR(failure_prob_cost(p, Policy({1, 0.5, 1})), 0.20655, 1e-15);
    p.lambda = 1.0;
    EXPECT_EQ(failure_prob_cost(p, Policy::ones(2)), 1.0);
}

TEST(FailureProbCost, EqualsOccupancyRatio) {
    std::mt19937_64 gen(4);
    for (int i = 0; i < 500; ++i) {
        const auto d = random_draw(gen);
        const auto pi = steady_state(d.p, d.k).pi;
        const int T = d.p.t_max;
        EXPECT_NEAR(failure_prob_cost(d.p, d.k), pi[T] / pi[1] * effective_failure(d.p, d.k, T), 1e-12);
    }
}

TEST(NumTxCost, Examples) {
    auto p = ref_params();
    p.t_max = 4;
    EXPECT_NEAR(num_tx_cost(p, Policy::zeros(4)), 1.417, 1e-14);
    p.lambda = 1.0;
    EXPECT_EQ(num_tx_cost(p, Policy::ones(4)), 4.0);
    p.rho = 0.0;
    p.lambda = 0.0;
    EXPECT_EQ(num_tx_cost(p, Policy::ones(4)), 1.0);
}

TEST(NumTxCost, EqualsBusyOverFirst) {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 500; ++i) {
        const auto d = random_draw(gen);
        const auto pi = steady_state(d.p, d.k).pi;
        double busy = 0.0;
        for (int t = 1; t <= d.p.t_max; ++t) busy += pi[t];
        const double n = num_tx_cost(d.p, d.k);
        EXPECT_NEAR(n, busy / pi[1], 1e-12);
        EXPECT_GE(n, 1.0);
        EXPECT_LE(n, d.p.t_max);
    }
}

TEST(DeltaLoss, Examples) {
    auto p = ref_params();
    for (auto m : {Metric::throughput, Metric::failure_prob, Metric::num_tx}) {
        EXPECT_EQ(delta_loss(p, Policy::zeros(2), m), 0.0);
        EXPECT_EQ(delta_loss(p, Policy({1, 0, 0}), m), 0.0);
    }
    p.lambda = 0.0;
    EXPECT_EQ(delta_loss(p, Policy({1, 0.3, 0.9}), Metric::throughput), 0.0);
}

TEST(Monotonicity, CostAndRewardIncreaseInEveryEntry) {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(0.0, 0.99);
    for (int i = 0; i < 1000; ++i) {
        auto d = random_draw(gen);
        d.p.nu = 0.3 * u(gen);
        const int theta = std::uniform_int_distribution<int>(0, d.p.t_max)(gen);
        const double x = u(gen);
        const Policy lo = d.k.with(theta, x);
        const Policy hi = d.k.with(theta, x + 0.01);
        if (theta >= 1) EXPECT_GT(primary_cost(d.p, hi), primary_cost(d.p, lo));
        else EXPECT_EQ(primary_cost(d.p, hi), primary_cost(d.p, lo));
        EXPECT_GT(secondary_reward(d.p, hi), secondary_reward(d.p, lo));
    }
}

TEST(Metric, Names) {
    EXPECT_EQ(metric_from_string("fp"), Metric::failure_prob);
    EXPECT_EQ(metric_from_string("ntx"), Metric::num_tx);
    EXPECT_EQ(to_string(Metric::throughput), "throughput");
    EXPECT_THROW(metric_from_string("latency"), ConfigError);
}
