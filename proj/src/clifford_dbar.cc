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

#include "markovsim/clifford_dbar.h"

#include <cmath>

#include "markovsim/circuit.h"
#include "markovsim/errors.h"
#include "markovsim/parallel.h"
#include "markovsim/rng.h"
#include "markovsim/stabilizer.h"

namespace markovsim {

namespace {

std::vector<size_t> columns(const CliffordLayout &layout, int first, int count) {
    std::vector<size_t> out;
    for (int r = 0; r < layout.rows; ++r) {
        for (int c = first; c < first + count; ++c) {
            out.push_back(size_t(r * layout.cols() + c));
        }
    }
    return out;
}

void check_args(int rows, int depth, double p, int l_ac, int width) {
    if (rows < 1 || depth < 1 || l_ac < 0 || width < 1) {
        throw ConfigError("clifford-dbar needs rows, depth, width >= 1 and l_AC >= 0");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("noise rate must lie in [0, 1]");
    }
}

}  // namespace

std::vector<size_t> CliffordLayout::region_a() const { return columns(*this, 0, width); }
std::vector<size_t> CliffordLayout::region_b() const { return columns(*this, width, l_ac); }
std::vector<size_t> CliffordLayout::region_c() const { return columns(*this, width + l_ac, width); }

double clifford_dbar_shot(const CliffordLayout &layout, int depth, double p, uint64_t shot_seed, bool *consistent) {
    std::mt19937_64 rng(shot_seed);
    const size_t n = size_t(layout.num_qubits());
    StabilizerState state(n);
    for (int j = 0; j < depth; ++j) {
        for (const auto &[u, v] : brickwork_2d_pairs(layout.rows, layout.cols(), j)) {
            const CliffordGate gate = CliffordGate::random(2, rng);
            const size_t q[2] = {size_t(u), size_t(v)};
            state.apply(gate, q);
        }
        for (size_t q = 0; q < n; ++q) {
            if (uniform01(rng) < p) state.trace_out(q);
        }
    }
    const std::vector<size_t> b = layout.region_b();
    PostselectResult post = postselect_zero(state, b);
    if (consistent) *consistent = post.consistent;
    // After dropping B the remaining qubits are renumbered: A keeps its rows'
    // leading columns, C the trailing ones.
    const int kept_cols = 2 * layout.width;
    std::vector<size_t> a, c;
    for (int r = 0; r < layout.rows; ++r) {
        for (int col = 0; col < kept_cols; ++col) {
            (col < layout.width ? a : c).push_back(size_t(r * kept_cols + col));
        }
    }
    std::vector<size_t> ac = a;
    ac.insert(ac.end(), c.begin(), c.end());
    const StabilizerState joint = marginal(post.state, ac);
    const StabilizerState product = tensor_product(marginal(post.state, a), marginal(post.state, c));
    return stab_trace_distance(joint, product);
}

CliffordDbarResult clifford_dbar(int rows, int depth, double p, int l_ac, size_t shots, uint64_t seed, int threads,
                                 int width) {
    if (width < 0) width = depth;
    check_args(rows, depth, p, l_ac, width);
    if (shots == 0) {
        throw ConfigError("clifford-dbar needs shots > 0");
    }
    const CliffordLayout layout{rows, width, l_ac};
    std::vector<double> values(shots);
    std::vector<char> ok(shots);
    parallel_for(shots, threads, [&](size_t s) {
        bool consistent = true;
        values[s] = clifford_dbar_shot(layout, depth, p, derive_seed(seed, {uint64_t(l_ac), uint64_t(s)}), &consistent);
        ok[s] = consistent;
    });
    CliffordDbarResult r;
    r.l_ac = l_ac;
    r.shots = shots;
    double s1 = 0.0;
    for (size_t s = 0; s < shots; ++s) {
        s1 += values[s];
        r.inconsistent += ok[s] ? 0 : 1;
    }
    r.dbar = s1 / double(shots);
    if (shots > 1) {
        double s2 = 0.0;
        for (double v : values) s2 += (v - r.dbar) * (v - r.dbar);
        r.stderr_ = std::sqrt(s2 / double(shots - 1) / double(shots));
    }
    return r;
}

MarkovLengthRow markov_length_scan(int rows, int depth, double p, const std::vector<int> &l_acs, size_t shots,
                                   uint64_t seed, int threads, const FitOptions &fit) {
    MarkovLengthRow row;
    row.depth = depth;
    row.p = p;
    std::vector<DecayPoint> points;
    for (int l : l_acs) {
        CliffordDbarResult r = clifford_dbar(rows, depth, p, l, shots, seed, threads);
        points.push_back(DecayPoint{double(l), r.dbar, r.stderr_});
        row.points.push_back(r);
    }
    try {
        row.fit = fit_markov_length(points, fit);
        row.fitted = true;
    } catch (const InsufficientData &) {
        row.fitted = false;
        for (const DecayPoint &pt : points) {
            row.fit.excluded.push_back(pt);
        }
    }
    return row;
}

}  // namespace markovsim
