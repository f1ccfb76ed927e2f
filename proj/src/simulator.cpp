#include "cogarq/simulator.hpp"

#include <cmath>
#include <ostream>

#include "cogarq/errors.hpp"
#include "cogarq/rng.hpp"

namespace cogarq {

namespace {

enum StreamId : std::uint64_t { kArrival = 1, kPrimaryFail = 2, kSecondaryAction = 3, kSecondaryFail = 4 };

// Batch sums of a per-slot numerator (and denominator for ratio estimates).
struct Batches {
    std::vector<double> num;
    std::vector<double> den;

    explicit Batches(int n) : num(n, 0.0), den(n, 0.0) {}

    // Mean of batch means for rates; ratio of totals for ratio estimates, with
    // the standard error of the per-batch ratios.
    Estimate rate(std::uint64_t per_batch) const {
        const std::size_t b = num.size();
        std::vector<double> m(b);
        for (std::size_t i = 0; i < b; ++i) m[i] = num[i] / static_cast<double>(per_batch);
        return summarize(m, mean_of(m));
    }
    Estimate ratio() const {
        double tn = 0.0, td = 0.0;
        std::vector<double> m;
        for (std::size_t i = 0; i < num.size(); ++i) {
            tn += num[i];
            td += den[i];
            if (den[i] > 0.0) m.push_back(num[i] / den[i]);
        }
        return summarize(m, td > 0.0 ? tn / td : 0.0);
    }

private:
    static double mean_of(const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    }
    static Estimate summarize(const std::vector<double>& v, double centre) {
        Estimate e;
        e.mean = centre;
        if (v.size() < 2) return e;
        const double mu = mean_of(v);
        double ss = 0.0;
        for (double x : v) ss += (x - mu) * (x - mu);
        e.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
        return e;
    }
};

}  // namespace

void SimConfig::validate() const {
    if (batches < 2) throw ConfigError("sim: batches must be >= 2");
    if (n_slots < static_cast<std::uint64_t>(batches)) throw ConfigError("sim: n_slots must be >= batches");
}

SimStats simulate(const SystemParams& params, const Policy& policy, const SimConfig& config, std::ostream* trace) {
    check_compatible(params, policy);
    config.validate();

    Stream arrival(config.seed, kArrival);
    Stream primary_fail(config.seed, kPrimaryFail);
    Stream secondary_action(config.seed, kSecondaryAction);
    Stream secondary_fail(config.seed, kSecondaryFail);

    const int T = params.t_max;
    const double rho = params.rho;
    const double rho_star = params.rho_star();
    const double nu = params.nu;
    const double nu_star = params.nu_star();

    // Slots beyond an even split go to the last batch's trailing remainder
    // and are dropped, so every batch has the same length.
    const int nb = config.batches;
    const std::uint64_t per_batch = config.n_slots / static_cast<std::uint64_t>(nb);
    const std::uint64_t counted = per_batch * static_cast<std::uint64_t>(nb);
    const std::uint64_t total = config.warmup_slots + counted;

    Batches wp(nb), ws(nb), fp(nb), ntx(nb);
    std::vector<Batches> occ(T + 1, Batches(nb));
    std::uint64_t completed = 0;

    if (trace) *trace << "slot,state,secondary_tx,primary_success,secondary_success\n";

    int state = 0;
    for (std::uint64_t slot = 0; slot < total; ++slot) {
        const bool tx = secondary_action.bernoulli(policy[state]);
        bool p_ok = false;
        bool s_ok = false;
        if (tx) s_ok = !secondary_fail.bernoulli(state == 0 ? nu : nu_star);

        int next = 0;
        bool finished = false;
        if (state == 0) {
            next = arrival.bernoulli(params.alpha) ? 1 : 0;
        } else {
            p_ok = !primary_fail.bernoulli(tx ? rho_star : rho);
            if (!p_ok && state < T) {
                next = state + 1;
            } else {
                finished = true;
                next = arrival.bernoulli(params.alpha) ? 1 : 0;
            }
        }

        if (trace) *trace << slot << ',' << state << ',' << tx << ',' << p_ok << ',' << s_ok << '\n';

        if (slot >= config.warmup_slots) {
            const auto b = static_cast<std::size_t>((slot - config.warmup_slots) / per_batch);
            wp.num[b] += p_ok;
            ws.num[b] += s_ok;
            occ[state].num[b] += 1.0;
            if (finished) {
                ++completed;
                fp.num[b] += p_ok ? 0.0 : 1.0;
                fp.den[b] += 1.0;
                ntx.num[b] += state;
                ntx.den[b] += 1.0;
            }
        }
        state = next;
    }

    SimStats st;
    st.w_p_hat = wp.rate(per_batch);
    st.w_s_hat = ws.rate(per_batch);
    st.fp_hat = fp.ratio();
    st.ntx_hat = ntx.ratio();
    for (const auto& o : occ) st.occupancy_hat.push_back(o.rate(per_batch));
    st.slots_counted = counted;
    st.packets_completed = completed;
    st.prng = Stream::algorithm;
    return st;
}

}  // namespace cogarq
