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

#include "markovsim/lightcone.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "markovsim/errors.h"

namespace markovsim {

int LightCone::max_width() const {
    size_t best = 0;
    for (const auto &a : active) {
        best = std::max(best, a.size());
    }
    return int(best);
}

LightCone backward_cone(const CircuitSpec &spec, const std::vector<int> &targets) {
    if (targets.empty()) {
        throw ConfigError("light cone needs at least one target");
    }
    const int n = spec.n();
    const int depth = spec.depth();
    LightCone cone;
    std::vector<char> in(n, 0);
    for (int t : targets) {
        if (t < 0 || t >= n) {
            throw ConfigError("target site " + std::to_string(t) + " out of range");
        }
        if (!in[t]) {
            cone.targets.push_back(t);
        }
        in[t] = 1;
    }
    cone.active.assign(size_t(depth) + 1, {});
    cone.gates.assign(size_t(depth), {});
    auto snapshot = [&] {
        std::vector<int> s;
        for (int i = 0; i < n; ++i) {
            if (in[i]) s.push_back(i);
        }
        return s;
    };
    cone.active[depth] = snapshot();
    for (int j = depth - 1; j >= 0; --j) {
        const Layer &layer = spec.layers()[j];
        std::vector<int> included;
        for (int g = 0; g < int(layer.size()); ++g) {
            if (std::any_of(layer[g].sites.begin(), layer[g].sites.end(), [&](int s) { return in[s] != 0; })) {
                included.push_back(g);
            }
        }
        for (int g : included) {
            for (int s : layer[g].sites) {
                in[s] = 1;
            }
        }
        cone.gates[j] = std::move(included);
        cone.active[j] = snapshot();
    }
    return cone;
}

double cone_cost(const LightCone &cone, int h) {
    return 2.0 * double(cone.max_width()) * std::log2(double(h));
}

void check_budget(double log2_entries, const SimBudget &budget, const char *what) {
    if (log2_entries >= budget.max_log2_entries) {
        std::ostringstream msg;
        msg << what << " needs 2^" << log2_entries << " density-matrix entries; budget is below 2^"
            << budget.max_log2_entries;
        throw BudgetExceeded(msg.str());
    }
}

}  // namespace markovsim
