#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cogarq/errors.hpp"
#include "cogarq/root_finding.hpp"
#include "cogarq/solver_lp.hpp"
#include "cogarq/solver_structured.hpp"

using namespace cogarq;

namespace {

SystemParams ref_params(int t_max = 2) {
    SystemParams p;
    p.alpha = 0.8;
    p.rho = 0.3;
    p.lambda = 0.3;
    p.t_max = t_max;
    return p;
}

SystemParams random_params(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SystemParams p;
    p.t_max = 1 + static_cast<int>(u(gen) * 6);
    p.alpha = 0.05 + 0.9 * u(gen);
    p.rho = 0.1 + 0.8 * u(gen);
    p.lambda = 0.1 + 0.9 * u(gen);
    p.nu = 0.5 * u(gen);
    return p;
}

// Shape [1..1, x, 0..0] on entries 1..T.
bool threshold_shape(const Policy& k, double tol) {
    int t = 1;
    const int T = k.t_max();
    while (t <= T && k[t] >= 1.0 - tol) ++t;
    if (t <= T && k[t] > tol) ++t;
    for (; t <= T; ++t)
        if (k[t] > tol) return false;
    return true;
}

}  // namespace

TEST(BisectRoot, Examples) {
    EXPECT_NEAR(bisect_root([](double x) { return x - 0.5; }, 0.0, 1.0, 1e-12).x, 0.5, 1e-12);
    EXPECT_NEAR(bisect_root([](double x) { return x * x * x; }, -1.0, 2.0, 1e-12).x, 0.0, 1e-4);
    EXPECT_THROW(bisect_root([](double x) { return x + 1.0; }, 0.0, 1.0, 1e-12), BracketError);
    EXPECT_EQ(bisect_root([](double x) { return x; }, 0.0, 1.0, 1e-12).x, 0.0);
}

TEST(SigmaFromEpsilon, Examples) {
    auto p = ref_params();
    EXPECT_EQ(sigma_from_epsilon(p, {Metric::throughput, 0.0}).delta_bound, 0.0);
    EXPECT_NEAR(sigma_from_epsilon(p, {Metric::throughput, 0.05}).delta_bound, 0.0293548, 5e-8);
    p.t_max = 4;
    const auto fp = sigma_from_epsilon(p, {Metric::failure_prob, 0.0});
    EXPECT_NEAR(fp.cost_bound, 0.0081, 1e-15);
    EXPECT_EQ(fp.delta_bound, 0.0);
    EXPECT_NEAR(sigma_from_epsilon(p, {Metric::failure_prob, 0.5}).delta_bound, 0.00405, 1e-15);
    EXPECT_NEAR(sigma_from_epsilon(p, {Metric::num_tx, 0.1}).cost_bound, 1.417 * 1.1, 1e-14);
    EXPECT_THROW(sigma_from_epsilon(p, {Metric::throughput, -1.0}), ConfigError);
}

TEST(Vertical, ReferenceInstanceByScalarSolve) {
    const auto p = ref_params();
    const auto r = solve_vertical(p, {Metric::throughput, 0.05});
    // J_P = (0.2 + 1.04 rho1) / (1 + 0.8 rho1) with kappa_2 = 0; solve for
    // the target cost, then invert rho1 = 0.3 + 0.21 kappa_1.
    const double j0 = 0.2 + 0.8 * 0.3 + 0.8 * 0.09;
    const double target = j0 / 1.24 + 0.05 * (1.0 - j0 / 1.24);
    const double rho1 = (target - 0.2) / (1.04 - 0.8 * target);
    const double k1 = (rho1 - 0.3) / 0.21;
    EXPECT_NEAR(k1, 0.2526, 5e-5);
    EXPECT_NEAR(r.policy[1], k1, 1e-10);
    EXPECT_EQ(r.policy[0], 1.0);
    EXPECT_EQ(r.policy[2], 0.0);
    EXPECT_TRUE(r.binding);
    EXPECT_LE(r.iterations, p.t_max + 1);
}

TEST(Vertical, EndpointsAndValidity) {
    auto p = ref_params(4);
    EXPECT_EQ(solve_vertical(p, {Metric::throughput, 0.0}).policy.vector(), (std::vector<double>{1, 0, 0, 0, 0}));
    EXPECT_EQ(solve_vertical(p, {Metric::failure_prob, 0.0}).policy.vector(), (std::vector<double>{1, 0, 0, 0, 0}));
    EXPECT_THROW(solve_vertical(p, {Metric::num_tx, 0.1}), ConfigError);
    p.lambda = 0.0;
    EXPECT_EQ(solve_vertical(p, {Metric::throughput, 0.0}).policy, Policy::ones(4));
    p.lambda = 0.3;
    p.lambda_s = 0.2;
    EXPECT_THROW(solve_vertical(p, {Metric::throughput, 0.1}), ConfigError);
    const auto r = solve_vertical(p, {Metric::throughput, 0.1}, {true});
    EXPECT_FALSE(r.method_valid);
}

TEST(Horizontal, Endpoints) {
    auto p = ref_params(4);
    const auto z = solve_horizontal(p, {Metric::throughput, 0.0});
    for (int t = 1; t <= 4; ++t) EXPECT_EQ(z.policy[t], 0.0);
    p.lambda = 0.0;
    EXPECT_EQ(solve_horizontal(p, {Metric::throughput, 0.0}).policy, Policy::ones(4));
}

TEST(Horizontal, NeverBeatsVertical) {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const auto p = random_params(gen);
        const ConstraintSpec spec{i % 2 ? Metric::throughput : Metric::failure_prob, 0.3 * u(gen)};
        const auto h = solve_horizontal(p, spec);
        const auto v = solve_vertical(p, spec);
        EXPECT_LE(h.w_s, v.w_s + 1e-9);
        EXPECT_LE(h.delta, h.sigma + 1e-9);
    }
}

TEST(Enumerate, AgreesWithVerticalAndLp) {
    std::mt19937_64 gen(32);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const auto p = random_params(gen);
        const ConstraintSpec spec{i % 2 ? Metric::throughput : Metric::failure_prob,
                                  (i % 2 ? 0.3 : 2.0) * u(gen)};
        const auto v = solve_vertical(p, spec);
        const auto e = solve_enumerate(p, spec);
        const auto l = lp::solve_lp(p, spec);
        EXPECT_NEAR(v.w_s, e.w_s, 1e-7);
        EXPECT_NEAR(v.w_s, l.w_s, 1e-7);
        EXPECT_TRUE(threshold_shape(e.policy, 1e-7));
        EXPECT_TRUE(threshold_shape(l.policy, 1e-7));
        EXPECT_LE(e.delta, e.sigma + 1e-9);
        if (v.binding) EXPECT_NEAR(v.delta, v.sigma, 1e-9);
    }
}

TEST(Enumerate, NumTxMatchesLp) {
    std::mt19937_64 gen(33);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        auto p = random_params(gen);
        p.lambda_s = u(gen) < 0.5 ? 0.0 : u(gen);
        const ConstraintSpec spec{Metric::num_tx, 0.3 * u(gen)};
        EXPECT_NEAR(solve_enumerate(p, spec).w_s, lp::solve_lp(p, spec).w_s, 1e-7);
    }
}

TEST(Enumerate, GeneralCaseMatchesLp) {
    std::mt19937_64 gen(34);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        auto p = random_params(gen);
        p.lambda_s = u(gen);
        const ConstraintSpec spec{i % 2 ? Metric::throughput : Metric::failure_prob, 0.3 * u(gen)};
        const auto e = solve_enumerate(p, spec);
        EXPECT_NEAR(e.w_s, lp::solve_lp(p, spec).w_s, 1e-7);
        EXPECT_LE(e.delta, e.sigma + 1e-9);
    }
}

TEST(Enumerate, SecondaryBlindedWhilePrimaryBusy) {
    SystemParams p;
    p.alpha = 0.5;
    p.lambda = 0.6;
    p.rho = 0.2;
    p.nu = 0.2;
    p.lambda_s = 1.0;
    p.t_max = 4;
    const auto r = solve_enumerate(p, {Metric::throughput, 0.05});
    EXPECT_EQ(r.policy[1], 0.0);
    EXPECT_EQ(r.policy[4], 1.0);
}

TEST(Enumerate, Budget) {
    auto p = ref_params(17);
    EXPECT_THROW(solve_enumerate(p, {Metric::throughput, 0.1}), BudgetError);
}

TEST(Sweeps, MonotoneInEpsilonAndAlpha) {
    auto p = ref_params(4);
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
        const double w = solve_vertical(p, {Metric::throughput, 0.004 * i}).w_s;
        EXPECT_GE(w, prev - 1e-12);
        prev = w;
    }
    prev = 2.0;
    for (int i = 1; i <= 49; ++i) {
        p.alpha = 0.02 * i;
        const double w = solve_vertical(p, {Metric::throughput, 0.1}).w_s;
        EXPECT_LE(w, prev + 1e-12);
        prev = w;
    }
}

TEST(MethodNames, RoundTrip) {
    for (auto m : {Method::lp, Method::vertical, Method::horizontal, Method::enumerate})
        EXPECT_EQ(method_from_string(to_string(m)), m);
    EXPECT_THROW(method_from_string("simplex"), ConfigError);
}
