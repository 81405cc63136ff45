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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "markovsim/diagnostics.h"
#include "markovsim/errors.h"
#include "markovsim/parallel.h"
#include "markovsim/rng.h"

namespace markovsim {

namespace {

void check_order(const CircuitSpec &spec, const std::vector<int> &order) {
    std::vector<char> seen(spec.n(), 0);
    if (int(order.size()) != spec.n()) {
        throw ConfigError("order must list every site exactly once");
    }
    for (int s : order) {
        if (s < 0 || s >= spec.n() || seen[s]) {
            throw ConfigError("order must be a permutation of the sites");
        }
        seen[s] = 1;
    }
}

int pick(const std::vector<double> &probs, double u) {
    double acc = 0.0;
    int last_positive = 0;
    for (size_t a = 0; a < probs.size(); ++a) {
        if (probs[a] > 0.0) {
            last_positive = int(a);
        }
        acc += probs[a];
        if (u < acc) {
            return int(a);
        }
    }
    return last_positive;
}

// Conditional tables of one sampling step: cond[assignment of used sites][outcome].
struct StepTable {
    int site = 0;
    std::vector<int> used;
    std::vector<std::vector<double>> cond;
};

StepTable step_table(const CircuitSpec &spec, int radius, const std::vector<int> &order, size_t step,
                     const SamplerOptions &options) {
    StepTable t;
    t.site = order[step];
    for (size_t i = 0; i < step; ++i) {
        if (spec.geometry().distance(t.site, order[i], options.metric) <= radius) {
            t.used.push_back(order[i]);
        }
    }
    std::sort(t.used.begin(), t.used.end());
    std::vector<int> sites = t.used;
    sites.push_back(t.site);
    DistributionTable joint = run_cone(spec, backward_cone(spec, sites), options.budget);
    const size_t h = size_t(spec.h());
    const size_t rows = joint.size() / h;
    t.cond.resize(rows);
    for (size_t r = 0; r < rows; ++r) {
        std::vector<double> v(joint.probs.begin() + long(r * h), joint.probs.begin() + long((r + 1) * h));
        double mass = std::accumulate(v.begin(), v.end(), 0.0);
        if (mass < kZeroConditionalFloor) {
            std::fill(v.begin(), v.end(), 1.0 / double(h));
        } else {
            for (double &p : v) p /= mass;
        }
        t.cond[r] = std::move(v);
    }
    return t;
}

std::string sample_key(const SampleTrace &trace, int h) {
    return outcome_string(trace.outcomes, h);
}

}  // namespace

size_t SampleTrace::num_zero_conditionals() const {
    size_t count = 0;
    for (const auto &s : steps) {
        count += s.zero_conditional;
    }
    return count;
}

std::vector<int> default_order(const CircuitSpec &spec) {
    std::vector<int> order(spec.n());
    std::iota(order.begin(), order.end(), 0);
    return order;
}

int suggested_radius(double xi, int n, double c, double eps) {
    if (!(xi > 0.0) || !(c > 0.0) || !(eps > 0.0) || n < 1) {
        throw ConfigError("suggested_radius needs xi, c, eps > 0 and n >= 1");
    }
    return std::max(0, int(std::ceil(xi * std::log(double(n) * c / eps))));
}

SampleTrace sample(const CircuitSpec &spec, int radius, const std::vector<int> &order, uint64_t seed,
                   const SamplerOptions &options) {
    if (radius < 0) {
        throw ConfigError("radius must be nonnegative");
    }
    check_order(spec, order);
    SampleTrace trace;
    trace.seed = seed;
    trace.radius = radius;
    trace.order = order;
    trace.outcomes.assign(spec.n(), -1);
    std::mt19937_64 rng(seed);
    std::map<int, int> assigned;
    for (int site : order) {
        ConditionalResult cr = conditional_distribution(spec, site, assigned, radius, options.metric, options.budget);
        SampleStep step;
        step.site = site;
        step.conditioned_sites = cr.used_sites;
        for (int s : cr.used_sites) {
            step.conditioned_values.push_back(assigned.at(s));
        }
        step.conditional = cr.dist.probs;
        step.zero_conditional = cr.zero_conditional;
        step.draw = uniform01(rng);
        step.outcome = pick(step.conditional, step.draw);
        assigned[site] = step.outcome;
        trace.outcomes[site] = step.outcome;
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

DistributionTable sampler_distribution(const CircuitSpec &spec, int radius, const std::vector<int> &order,
                                       const SamplerOptions &options) {
    if (radius < 0) {
        throw ConfigError("radius must be nonnegative");
    }
    check_order(spec, order);
    const int n = spec.n();
    const size_t h = size_t(spec.h());
    if (double(n) * std::log2(double(h)) >= options.max_log2_outcomes) {
        throw BudgetExceeded("exact P' enumeration over " + std::to_string(n) + " sites exceeds the outcome limit");
    }
    std::vector<StepTable> steps(order.size());
    parallel_for(order.size(), options.threads,
                 [&](size_t i) { steps[i] = step_table(spec, radius, order, i, options); });

    std::vector<int> sites(n);
    std::iota(sites.begin(), sites.end(), 0);
    DistributionTable out;
    out.h = spec.h();
    out.sites = sites;
    size_t total = 1;
    for (int i = 0; i < n; ++i) total *= h;
    out.probs.assign(total, 0.0);
    std::vector<int> digits(n);
    for (size_t x = 0; x < total; ++x) {
        size_t rest = x;
        for (int k = n - 1; k >= 0; --k) {
            digits[k] = int(rest % h);
            rest /= h;
        }
        double p = 1.0;
        for (const StepTable &st : steps) {
            size_t row = 0;
            for (int s : st.used) {
                row = row * h + size_t(digits[s]);
            }
            p *= st.cond[row][size_t(digits[st.site])];
            if (p == 0.0) break;
        }
        out.probs[x] = p;
    }
    return out;
}

std::vector<ScanRow> markov_scan(const CircuitSpec &spec, const std::vector<int> &radii,
                                 const std::vector<int> &order, size_t trials, uint64_t seed,
                                 const SamplerOptions &options) {
    for (int l : radii) {
        if (l < 0) throw ConfigError("radius must be nonnegative");
    }
    check_order(spec, order);
    const double log2_h = std::log2(double(spec.h()));
    const bool exact = double(spec.n()) * log2_h < options.max_log2_outcomes &&
                       2.0 * double(spec.n()) * log2_h < options.budget.max_log2_entries;
    std::vector<ScanRow> rows(radii.size());
    SamplerOptions inner = options;
    inner.threads = 1;
    if (exact) {
        DistributionTable p = full_distribution(spec, options.budget);
        parallel_for(radii.size(), options.threads, [&](size_t i) {
            DistributionTable q = sampler_distribution(spec, radii[i], order, inner);
            rows[i] = ScanRow{radii[i], tvd(p, q), 0.0, true, 0, spec.geometry().diameter(options.metric)};
        });
        return rows;
    }
    if (trials == 0) {
        throw ConfigError("empirical markov scan needs trials > 0");
    }
    auto draw_keys = [&](int radius, uint64_t stream) {
        std::vector<std::string> keys(trials);
        parallel_for(trials, options.threads, [&](size_t t) {
            keys[t] = sample_key(sample(spec, radius, order, derive_seed(seed, {stream, uint64_t(t)}), inner),
                                 spec.h());
        });
        return keys;
    };
    // Reference samples come from the lattice diameter (exact P) when its patches
    // fit the budget, otherwise from the largest requested radius that fits.
    std::vector<int> candidates = radii;
    std::sort(candidates.rbegin(), candidates.rend());
    candidates.insert(candidates.begin(), spec.geometry().diameter(options.metric));
    int reference_radius = -1;
    std::vector<std::string> reference;
    for (size_t c = 0; c < candidates.size() && reference_radius < 0; ++c) {
        try {
            reference = draw_keys(candidates[c], 0xFFFFFFFFull);
            reference_radius = candidates[c];
        } catch (const BudgetExceeded &) {
            if (c + 1 == candidates.size()) throw;
        }
    }
    auto plug_in = [](const std::vector<std::string> &x, const std::vector<std::string> &y,
                      const std::vector<size_t> *ix, const std::vector<size_t> *iy) {
        std::map<std::string, double> diff;
        const double wx = 1.0 / double(x.size()), wy = 1.0 / double(y.size());
        for (size_t t = 0; t < x.size(); ++t) diff[x[ix ? (*ix)[t] : t]] += wx;
        for (size_t t = 0; t < y.size(); ++t) diff[y[iy ? (*iy)[t] : t]] -= wy;
        double total = 0.0;
        for (const auto &[k, v] : diff) total += std::abs(v);
        return total;
    };
    for (size_t i = 0; i < radii.size(); ++i) {
        const std::vector<std::string> draws = draw_keys(radii[i], uint64_t(radii[i]));
        const double estimate = plug_in(draws, reference, nullptr, nullptr);
        std::mt19937_64 rng(derive_seed(seed, {uint64_t(radii[i]), 0xB007ull}));
        std::uniform_int_distribution<size_t> pick_index(0, trials - 1);
        const int resamples = 50;
        double s1 = 0.0, s2 = 0.0;
        std::vector<size_t> ix(trials), iy(trials);
        for (int r = 0; r < resamples; ++r) {
            for (size_t t = 0; t < trials; ++t) {
                ix[t] = pick_index(rng);
                iy[t] = pick_index(rng);
            }
            double v = plug_in(draws, reference, &ix, &iy);
            s1 += v;
            s2 += v * v;
        }
        double mean = s1 / resamples;
        double var = std::max(0.0, s2 / resamples - mean * mean);
        rows[i] = ScanRow{radii[i], estimate, std::sqrt(var), false, trials, reference_radius};
    }
    return rows;
}

}  // namespace markovsim
