#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cogarq/errors.hpp"
#include "cogarq/simulator.hpp"

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

void expect_within(const Estimate& e, double truth, double k = 3.0) {
    EXPECT_LE(std::abs(e.mean - truth), k * e.stderr_) << "estimate " << e.mean << " truth " << truth;
}

}  // namespace

TEST(Simulator, NoFailuresGivesExactSecondaryThroughput) {
    SystemParams p = ref_params();
    p.rho = 0.0;
    p.lambda = 0.0;
    SimConfig c;
    c.n_slots = 200000;
    c.seed = 3;
    const auto s = simulate(p, Policy::ones(2), c);
    EXPECT_EQ(s.w_s_hat.mean, 1.0);
    EXPECT_EQ(s.w_s_hat.stderr_, 0.0);
    expect_within(s.w_p_hat, 0.8);
    EXPECT_EQ(s.fp_hat.mean, 0.0);
    EXPECT_EQ(s.ntx_hat.mean, 1.0);
}

TEST(Simulator, FullInterferenceStopsPrimary) {
    SystemParams p = ref_params();
    p.lambda = 1.0;
    SimConfig c;
    c.n_slots = 200000;
    const auto s = simulate(p, Policy::ones(2), c);
    EXPECT_EQ(s.w_p_hat.mean, 0.0);
    EXPECT_EQ(s.fp_hat.mean, 1.0);
    EXPECT_EQ(s.ntx_hat.mean, 2.0);
}

TEST(Simulator, ReferenceInstanceMatchesModel) {
    const auto p = ref_params();
    const Policy k({1.0, 0.2526, 0.0});
    SimConfig c;
    c.n_slots = 1000000;
    c.seed = 42;
    const auto s = simulate(p, k, c);
    const auto m = evaluate(p, k);
    const auto pi = steady_state(p, k).pi;
    expect_within(s.w_p_hat, m.w_p);
    expect_within(s.w_s_hat, m.w_s);
    expect_within(s.fp_hat, m.j_fp);
    expect_within(s.ntx_hat, m.j_ntx);
    for (int t = 0; t <= 2; ++t) expect_within(s.occupancy_hat[t], pi[t]);
    EXPECT_EQ(s.slots_counted, 1000000u);
    EXPECT_EQ(s.prng, "mt19937_64/splitmix64-seeded");

    double total = 0.0;
    for (const auto& e : s.occupancy_hat) total += e.mean;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Simulator, BitIdenticalForSameSeed) {
    const auto p = ref_params();
    const Policy k({1.0, 0.5, 0.5});
    SimConfig c;
    c.n_slots = 50000;
    c.seed = 9;
    const auto a = simulate(p, k, c);
    const auto b = simulate(p, k, c);
    EXPECT_EQ(a.w_p_hat.mean, b.w_p_hat.mean);
    EXPECT_EQ(a.w_s_hat.stderr_, b.w_s_hat.stderr_);
    EXPECT_EQ(a.ntx_hat.mean, b.ntx_hat.mean);
    c.seed = 10;
    EXPECT_NE(simulate(p, k, c).w_p_hat.mean, a.w_p_hat.mean);
}

TEST(Simulator, TraceRows) {
    SimConfig c;
    c.n_slots = 100;
    c.warmup_slots = 0;
    std::ostringstream trace;
    simulate(ref_params(), Policy({1.0, 0.5, 0.0}), c, &trace);
    std::istringstream in(trace.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "slot,state,secondary_tx,primary_success,secondary_success");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 100);
    EXPECT_EQ(trace.str().find("\n0,0,"), trace.str().find('\n'));
}

TEST(Simulator, ConfigValidation) {
    SimConfig c;
    c.n_slots = 10;
    EXPECT_THROW(simulate(ref_params(), Policy::zeros(2), c), ConfigError);
}
