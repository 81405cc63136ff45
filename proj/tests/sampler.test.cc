// Copyright 2026 The markovsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "markovsim/sampler.h"

#include <cmath>
#include <map>

#include "gtest/gtest.h"
#include "markovsim/diagnostics.h"
#include "markovsim/errors.h"
#include "oracle.h"

using namespace markovsim;

TEST(sampler_distribution, full_radius_is_exact) {
    for (uint64_t seed = 0; seed < 4; ++seed) {
        CircuitSpec c = make_brickwork_1d(6, 2, 0.2, GateFamily::kHaar, seed);
        DistributionTable p = full_distribution(c);
        DistributionTable q = sampler_distribution(c, 5, default_order(c));
        EXPECT_LT(tvd(p, q), 1e-10);
    }
}

TEST(sampler_distribution, matches_chain_rule_oracle_at_every_radius) {
    for (uint64_t seed = 0; seed < 3; ++seed) {
        CircuitSpec c = make_brickwork_2d(2, 3, 3, 0.1, GateFamily::kHaar, seed);
        std::vector<double> p = oracle::distribution(c);
        std::vector<int> order = {4, 0, 5, 2, 1, 3};
        for (int l = 0; l <= 3; ++l) {
            DistributionTable q = sampler_distribution(c, l, order);
            EXPECT_LT(oracle::l1(q.probs, oracle::sampler_distribution(c, p, l, order)), 1e-12) << l;
            EXPECT_NEAR(q.total(), 1.0, 1e-9);
        }
    }
}

TEST(sampler_distribution, radius_zero_is_product_of_marginals) {
    CircuitSpec c = make_brickwork_1d(5, 2, 0.1, GateFamily::kHaar, 7);
    DistributionTable p = full_distribution(c);
    DistributionTable q = sampler_distribution(c, 0, default_order(c));
    for (size_t x = 0; x < q.size(); ++x) {
        double prod = 1.0;
        std::vector<int> d = q.outcome(x);
        for (int s = 0; s < 5; ++s) prod *= p.marginal({s}).probs[d[s]];
        EXPECT_NEAR(q.probs[x], prod, 1e-12);
    }
}

TEST(sampler_distribution, order_invariant_at_full_radius) {
    CircuitSpec c = make_brickwork_2d(2, 3, 2, 0.3, GateFamily::kHaar, 4);
    DistributionTable a = sampler_distribution(c, 3, default_order(c));
    DistributionTable b = sampler_distribution(c, 3, {5, 3, 1, 0, 2, 4});
    EXPECT_LT(tvd(a, b), 1e-10);
}

TEST(sampler_distribution, rejects_bad_arguments) {
    CircuitSpec c = make_brickwork_1d(4, 1, 0.1, GateFamily::kHaar, 1);
    EXPECT_THROW(sampler_distribution(c, 1, {0, 1, 2}), ConfigError);
    EXPECT_THROW(sampler_distribution(c, 1, {0, 1, 1, 2}), ConfigError);
    EXPECT_THROW(sampler_distribution(c, -1, default_order(c)), ConfigError);
    SamplerOptions tight;
    tight.max_log2_outcomes = 3;
    EXPECT_THROW(sampler_distribution(c, 1, default_order(c), tight), BudgetExceeded);
}

TEST(sample, deterministic_for_a_seed) {
    CircuitSpec c = make_brickwork_1d(6, 2, 0.2, GateFamily::kHaar, 3);
    SampleTrace a = sample(c, 2, default_order(c), 99);
    SampleTrace b = sample(c, 2, default_order(c), 99);
    EXPECT_EQ(a.outcomes, b.outcomes);
    ASSERT_EQ(a.steps.size(), 6u);
    for (size_t i = 0; i < a.steps.size(); ++i) {
        EXPECT_EQ(a.steps[i].draw, b.steps[i].draw);
        EXPECT_EQ(a.steps[i].conditional, b.steps[i].conditional);
        double total = 0.0;
        for (double v : a.steps[i].conditional) total += v;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(sample, steps_follow_order_and_ball) {
    CircuitSpec c = make_brickwork_1d(6, 2, 0.2, GateFamily::kHaar, 3);
    std::vector<int> order = {3, 0, 5, 1, 4, 2};
    SampleTrace t = sample(c, 1, order, 5);
    for (size_t i = 0; i < order.size(); ++i) {
        EXPECT_EQ(t.steps[i].site, order[i]);
        EXPECT_EQ(t.outcomes[order[i]], t.steps[i].outcome);
        for (int s : t.steps[i].conditioned_sites) EXPECT_LE(std::abs(s - order[i]), 1);
    }
    EXPECT_EQ(t.steps[5].conditioned_sites, (std::vector<int>{1, 3}));
}

TEST(sample, empirical_frequencies_match_exact_distribution) {
    CircuitSpec c = make_brickwork_1d(4, 2, 0.2, GateFamily::kHaar, 11);
    DistributionTable q = sampler_distribution(c, 1, default_order(c));
    const int shots = 20000;
    std::vector<double> freq(q.size(), 0.0);
    for (int s = 0; s < shots; ++s) {
        SampleTrace t = sample(c, 1, default_order(c), 1000 + s);
        freq[q.index_of(t.outcomes)] += 1.0 / shots;
    }
    // chi-square with 15 degrees of freedom; 40 is far in the tail
    double chi2 = 0.0;
    for (size_t x = 0; x < q.size(); ++x) {
        if (q.probs[x] > 0) chi2 += shots * std::pow(freq[x] - q.probs[x], 2) / q.probs[x];
    }
    EXPECT_LT(chi2, 40.0);
}

TEST(sample, full_noise_is_uniform) {
    CircuitSpec c = make_brickwork_1d(4, 2, 1.0, GateFamily::kHaar, 11);
    SampleTrace t = sample(c, 1, default_order(c), 3);
    for (const auto &st : t.steps) {
        for (double v : st.conditional) EXPECT_NEAR(v, 0.5, 1e-12);
    }
}

TEST(suggested_radius, formula) {
    EXPECT_EQ(suggested_radius(2.0, 100, 1.0, 0.01), int(std::ceil(2.0 * std::log(1e4))));
    EXPECT_EQ(suggested_radius(2.0, 1, 1.0, 10.0), 0);
    EXPECT_THROW(suggested_radius(0.0, 10, 1.0, 0.1), ConfigError);
}

TEST(markov_scan, exact_mode) {
    CircuitSpec c = make_brickwork_1d(6, 2, 0.2, GateFamily::kHaar, 5);
    auto rows = markov_scan(c, {0, 1, 5}, default_order(c), 0, 1);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_TRUE(rows[0].exact);
    EXPECT_LT(rows[2].tvd, 1e-10);
    CircuitSpec noisy = c.with_uniform_noise(1.0);
    for (const auto &r : markov_scan(noisy, {0, 1, 2}, default_order(c), 0, 1)) EXPECT_LT(r.tvd, 1e-12);
}

TEST(markov_scan, empirical_mode_agrees_with_exact) {
    CircuitSpec c = make_brickwork_1d(4, 2, 0.2, GateFamily::kHaar, 5);
    SamplerOptions o;
    o.max_log2_outcomes = 2;
    auto rows = markov_scan(c, {0, 3}, default_order(c), 3000, 9, o);
    EXPECT_FALSE(rows[0].exact);
    const double exact0 = tvd(full_distribution(c), sampler_distribution(c, 0, default_order(c)));
    EXPECT_NEAR(rows[0].tvd, exact0, 5 * rows[0].stderr_ + 0.05);
    EXPECT_LT(rows[1].tvd, 0.1);
    auto again = markov_scan(c, {0, 3}, default_order(c), 3000, 9, o);
    EXPECT_EQ(again[0].tvd, rows[0].tvd);
    EXPECT_EQ(again[0].stderr_, rows[0].stderr_);
}

TEST(markov_scan, reference_falls_back_to_largest_affordable_radius) {
    CircuitSpec c = make_brickwork_1d(8, 2, 0.2, GateFamily::kHaar, 5);
    SamplerOptions o;
    o.budget.max_log2_entries = 15;
    auto rows = markov_scan(c, {0, 2}, default_order(c), 500, 3, o);
    for (const auto &r : rows) {
        EXPECT_FALSE(r.exact);
        EXPECT_EQ(r.reference_radius, 2);
    }
    EXPECT_THROW(markov_scan(c, {0, 3}, default_order(c), 50, 3, o), BudgetExceeded);
    auto exact = markov_scan(c, {0}, default_order(c), 0, 3);
    EXPECT_EQ(exact[0].reference_radius, 7);
}
