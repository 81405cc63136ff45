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

#include "markovsim/diagnostics.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "markovsim/errors.h"
#include "markovsim/rng.h"
#include "oracle.h"

using namespace markovsim;

namespace {

DistributionTable table(std::vector<double> probs, int bits) {
    DistributionTable t;
    t.h = 2;
    for (int i = 0; i < bits; ++i) t.sites.push_back(i);
    t.probs = std::move(probs);
    return t;
}

// Entropies straight from the definition, on explicit bit masks.
double entropy_oracle(const std::vector<double> &p, int n, const std::vector<int> &sites) {
    std::vector<double> m = oracle::marginal(p, n, 2, sites);
    double h = 0.0;
    for (double v : m)
        if (v > 0) h -= v * std::log(v);
    return h;
}

std::vector<int> cat(std::vector<int> a, const std::vector<int> &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST(tvd, examples) {
    DistributionTable a = table({0.75, 0.25}, 1), u = DistributionTable::uniform(2, {0});
    EXPECT_DOUBLE_EQ(tvd(a, a), 0.0);
    EXPECT_DOUBLE_EQ(tvd(a, u), 0.5);
    EXPECT_DOUBLE_EQ(tvd(table({1, 0}, 1), table({0, 1}, 1)), 2.0);
    EXPECT_THROW(tvd(a, DistributionTable::uniform(2, {1})), ConfigError);
}

TEST(cmi, examples) {
    // product distribution
    std::vector<double> prod(8);
    const double pa[2] = {0.3, 0.7}, pb[2] = {0.6, 0.4}, pc[2] = {0.9, 0.1};
    for (int x = 0; x < 8; ++x) prod[x] = pa[x >> 2] * pb[(x >> 1) & 1] * pc[x & 1];
    EXPECT_NEAR(cmi(table(prod, 3), {0}, {1}, {2}), 0.0, 1e-15);
    // GHZ-like: B reveals everything
    EXPECT_NEAR(cmi(table({0.5, 0, 0, 0, 0, 0, 0, 0.5}, 3), {0}, {1}, {2}), 0.0, 1e-15);
    // parity: sites 0 and 2 independent bits, site 1 their parity
    std::vector<double> parity(8, 0.0);
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) parity[(a << 2) | ((a ^ c) << 1) | c] = 0.25;
    EXPECT_NEAR(cmi(table(parity, 3), {0}, {}, {2}), 0.0, 1e-15);
    EXPECT_NEAR(cmi(table(parity, 3), {0}, {1}, {2}), std::log(2.0), 1e-15);
    EXPECT_THROW(cmi(table(parity, 3), {0}, {0}, {2}), ConfigError);
}

TEST(markov_gap, examples) {
    // Markov chain 0 -> 1 -> 2
    std::vector<double> chain(8);
    const double t1[2][2] = {{0.8, 0.2}, {0.3, 0.7}}, t2[2][2] = {{0.6, 0.4}, {0.1, 0.9}};
    for (int x = 0; x < 8; ++x) {
        int a = x >> 2, b = (x >> 1) & 1, c = x & 1;
        chain[x] = (a ? 0.35 : 0.65) * t1[a][b] * t2[b][c];
    }
    EXPECT_NEAR(markov_gap(table(chain, 3), {0}, {1}, {2}), 0.0, 1e-12);
    std::vector<double> parity(8, 0.0);
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) parity[(a << 2) | ((a ^ c) << 1) | c] = 0.25;
    // P_AB P_C|B is uniform on all 8 strings: gap = 4 * 0.125 + 4 * 0.125
    EXPECT_NEAR(markov_gap(table(parity, 3), {0}, {1}, {2}), 1.0, 1e-15);
    EXPECT_EQ(markov_gap(table(parity, 3), {0}, {1}, {}), 0.0);
}

TEST(cmi, matches_definition_and_pinsker_on_circuits) {
    std::mt19937_64 rng(2);
    for (uint64_t seed = 0; seed < 5; ++seed) {
        CircuitSpec c = make_brickwork_1d(6, 2, 0.1 + 0.1 * double(seed), GateFamily::kHaar, seed);
        DistributionTable p = full_distribution(c);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<int> parts[3];
            for (int s = 0; s < 6; ++s) {
                int r = int(rng() % 4);
                if (r < 3) parts[r].push_back(s);
            }
            if (parts[0].empty() || parts[2].empty()) continue;
            const auto &a = parts[0], &b = parts[1], &cc = parts[2];
            double expect = entropy_oracle(p.probs, 6, cat(a, b)) + entropy_oracle(p.probs, 6, cat(b, cc)) -
                            entropy_oracle(p.probs, 6, b) - entropy_oracle(p.probs, 6, cat(cat(a, b), cc));
            TripartitionStats s = tripartition_stats(p, a, b, cc);
            EXPECT_NEAR(s.cmi_nats, std::max(expect, 0.0), 1e-12);
            EXPECT_GE(s.cmi_nats, 0.0);
            EXPECT_LE(s.markov_gap, 2.0);
            EXPECT_LE(s.markov_gap, s.pinsker_rhs + 1e-6);
        }
    }
}

TEST(fit_markov_length, exact_exponential) {
    std::vector<DecayPoint> pts;
    for (int l = 1; l <= 6; ++l) pts.push_back({double(l), std::exp(-l / 2.0), 0.0});
    MarkovFit f = fit_markov_length(pts, {1e-6, 3.0});
    EXPECT_NEAR(f.xi, 2.0, 1e-9);
    EXPECT_NEAR(f.prefactor, 1.0, 1e-9);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
    EXPECT_EQ(f.used.size(), 6u);
}

TEST(fit_markov_length, constant_data_gives_infinite_length) {
    std::vector<DecayPoint> pts;
    for (int l = 1; l <= 5; ++l) pts.push_back({double(l), 0.5, 0.0});
    MarkovFit f = fit_markov_length(pts);
    EXPECT_TRUE(std::isinf(f.xi));
    EXPECT_EQ(f.r_squared, 1.0);
}

TEST(fit_markov_length, noisy_synthetic) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> eta(-0.1, 0.1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<DecayPoint> pts;
        for (int l = 1; l <= 8; ++l) pts.push_back({double(l), std::exp(-l / 3.0) * (1 + eta(rng)), 0.0});
        double xi = fit_markov_length(pts, {1e-6, 3.0}).xi;
        EXPECT_GE(xi, 2.5);
        EXPECT_LE(xi, 3.6);
    }
}

TEST(fit_markov_length, noise_floor_excludes_points) {
    std::vector<DecayPoint> pts = {{1, 0.5, 0.01}, {2, 0.1, 0.01}, {3, 0.02, 0.005}, {4, 0.0005, 0.0001},
                                   {5, 0.01, 0.005}};
    MarkovFit f = fit_markov_length(pts);
    EXPECT_EQ(f.used.size(), 3u);
    EXPECT_EQ(f.excluded.size(), 2u);
    std::vector<DecayPoint> few = {{1, 0.5, 0.0}, {2, 0.1, 0.0}, {3, 0.0, 0.0}};
    EXPECT_THROW(fit_markov_length(few), InsufficientData);
}

TEST(bound_uniform, examples) {
    EXPECT_EQ(bound_uniform(10, 1.0, 3).value, 0.0);
    EXPECT_EQ(bound_uniform(10, 0.3, 0).value, 10.0);
    EXPECT_NEAR(bound_uniform(10, 0.3, 5).value, 1.6807, 1e-12);
    EXPECT_THROW(bound_uniform(10, 1.3, 5), ConfigError);
}

TEST(bound_uniform, dominates_measured_distance) {
    for (int d : {1, 2, 4, 6}) {
        for (double p : {0.05, 0.2, 0.5, 1.0}) {
            CircuitSpec c = make_brickwork_1d(5, d, p, GateFamily::kHaar, uint64_t(d * 10));
            DistributionTable dist = full_distribution(c);
            EXPECT_LE(tvd(dist, DistributionTable::uniform(2, dist.sites)), bound_uniform(5, p, d).value + 1e-9);
        }
    }
}

TEST(critical_q, examples) {
    const double e = std::numbers::e;
    EXPECT_NEAR(critical_q(2, 2, 4), 1.0 / (2 * 4 * (1 + 3 * e) * (2 * e * 5)), 1e-18);
    EXPECT_NEAR(critical_q(2, 2, 4), 5.02e-4, 5e-7);
}

TEST(bound_cmi_threshold, examples) {
    const double qc = critical_q(2, 2, 4);
    BoundReport zero = bound_cmi_threshold(2, 2, 4, 0.0, 3, 5, 7, 2);
    EXPECT_EQ(zero.status, BoundStatus::kOk);
    EXPECT_EQ(zero.value, 0.0);
    BoundReport half = bound_cmi_threshold(2, 2, 4, qc / 2, 3, 5, 7, 10);
    const double e = std::numbers::e;
    const double c_prime = 4 * e * 4 / (1 + 3 * e);
    EXPECT_NEAR(half.value, c_prime / 0.5 * 5 * std::pow(0.5, 10), 1e-12);
    EXPECT_NEAR(half.extra("q_c"), qc, 1e-18);
    BoundReport above = bound_cmi_threshold(2, 2, 4, qc, 3, 5, 7, 10);
    EXPECT_EQ(above.status, BoundStatus::kNotApplicable);
    EXPECT_TRUE(std::isnan(above.value));
    EXPECT_NEAR(above.extra("q_c"), qc, 1e-18);
}

TEST(potts_large_h, examples) {
    BoundReport z = potts_large_h(2, 1, 0.0);
    EXPECT_EQ(z.extra("p_prime"), 0.0);
    EXPECT_EQ(z.extra("z1_bound"), 1.0);
    EXPECT_EQ(z.extra("delta_z_bound"), 1.0);
    BoundReport one = potts_large_h(2, 1, 1.0);
    EXPECT_EQ(one.extra("p_prime"), 1.0);
    EXPECT_EQ(one.extra("z1_bound"), 0.0);
    BoundReport half = potts_large_h(2, 1, 0.5);
    EXPECT_DOUBLE_EQ(half.extra("p_prime"), 0.75);
    EXPECT_DOUBLE_EQ(half.extra("z1_bound"), 0.0625);
    EXPECT_EQ(half.extra("z2"), 0.0);
    EXPECT_NEAR(potts_large_h(2, 1, 0.5, 2.0).extra("xi_p"), -1.0 / (2.0 * std::log(0.25)), 1e-15);
}

TEST(potts_large_h, monotone_in_p_and_size) {
    for (int n = 1; n < 5; ++n) {
        for (int d = 1; d < 5; ++d) {
            double prev = 2.0;
            for (int i = 0; i <= 10; ++i) {
                double v = potts_large_h(n, d, 0.1 * i).extra("delta_z_bound");
                EXPECT_LE(v, prev);
                prev = v;
                EXPECT_LE(potts_large_h(n + 1, d, 0.1 * i).extra("delta_z_bound"), v);
                EXPECT_LE(potts_large_h(n, d + 1, 0.1 * i).extra("delta_z_bound"), v);
            }
        }
    }
}

TEST(product_distance, matches_dense_oracle) {
    CircuitSpec c = make_brickwork_1d(4, 2, 0.1, GateFamily::kHaar, 3);
    DensityPatch rho = full_state(c);
    oracle::Matrix full = rho.matrix();
    oracle::Matrix ra = oracle::partial_trace(full, 4, 2, {0, 2});
    oracle::Matrix rc = oracle::partial_trace(full, 4, 2, {1, 3});
    oracle::Matrix prod = oracle::kron(ra, rc);
    // prod is in order (0, 2, 1, 3); bring full into that order too
    oracle::Matrix reordered = oracle::partial_trace(full, 4, 2, {0, 2, 1, 3});
    EXPECT_NEAR(product_distance(rho, {0, 2}, {1, 3}), oracle::trace_norm(reordered - prod), 1e-12);
    EXPECT_THROW(product_distance(rho, {0}, {1}), ConfigError);
}

TEST(dbar_haar_mc, full_noise_is_zero_and_reproducible) {
    CircuitSpec c = make_brickwork_1d(6, 2, 1.0, GateFamily::kHaar, 1);
    DbarEstimate e = dbar_haar_mc(c, {0, 1}, {2, 3}, {4, 5}, 20, 3);
    EXPECT_LT(e.mean, 1e-12);
    CircuitSpec noisy = c.with_uniform_noise(0.2);
    DbarEstimate a = dbar_haar_mc(noisy, {0, 1}, {2, 3}, {4, 5}, 20, 3);
    DbarEstimate b = dbar_haar_mc(noisy, {0, 1}, {2, 3}, {4, 5}, 20, 3, 2);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.stderr_, b.stderr_);
    EXPECT_GT(a.mean, 0.0);
    EXPECT_TRUE(a.exact_outcomes);
}

TEST(dbar_haar_mc, empty_b_is_plain_correlation) {
    CircuitSpec c = make_brickwork_1d(4, 2, 0.2, GateFamily::kHaar, 1);
    DbarEstimate e = dbar_haar_mc(c, {0, 1}, {}, {2, 3}, 5, 7);
    double expect = 0.0;
    for (uint64_t t = 0; t < 5; ++t) {
        oracle::Matrix rho = oracle::state(c.reseeded(derive_seed(7, {t})));
        oracle::Matrix ra = oracle::partial_trace(rho, 4, 2, {0, 1}), rc = oracle::partial_trace(rho, 4, 2, {2, 3});
        expect += oracle::trace_norm(rho - oracle::kron(ra, rc)) / 5.0;
    }
    EXPECT_NEAR(e.mean, expect, 1e-11);
}

TEST(dbar_haar_mc, enumerated_b_matches_oracle) {
    CircuitSpec c = make_brickwork_1d(4, 2, 0.2, GateFamily::kHaar, 1);
    DbarEstimate e = dbar_haar_mc(c, {0}, {1, 2}, {3}, 3, 4);
    double expect = 0.0;
    for (uint64_t t = 0; t < 3; ++t) {
        oracle::Matrix rho = oracle::state(c.reseeded(derive_seed(4, {t})));
        for (int b = 0; b < 4; ++b) {
            // project sites 1, 2 onto |b>
            oracle::Matrix proj = oracle::Matrix::Zero(16, 16);
            for (int x = 0; x < 16; ++x)
                if (((x >> 1) & 3) == b) proj(x, x) = 1.0;
            oracle::Matrix cond = proj * rho * proj;
            double pb = cond.trace().real();
            if (pb < 1e-14) continue;
            oracle::Matrix ac = oracle::partial_trace(cond / pb, 4, 2, {0, 3});
            oracle::Matrix ra = oracle::partial_trace(cond / pb, 4, 2, {0});
            oracle::Matrix rc = oracle::partial_trace(cond / pb, 4, 2, {3});
            expect += pb * oracle::trace_norm(ac - oracle::kron(ra, rc)) / 3.0;
        }
    }
    EXPECT_NEAR(e.mean, expect, 1e-11);
}
