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

#pragma once

#include <vector>

#include "markovsim/circuit.h"

namespace markovsim {

/// Work limit for dense patches, as log2 of the density-matrix entry count.
/// A patch whose cost reaches the limit is refused.
struct SimBudget {
    double max_log2_entries = 28.0;
};

/// Backward light cone of a set of output sites.
struct LightCone {
    /// Output sites, in the order results are reported.
    std::vector<int> targets;
    /// active[j] (ascending) holds the sites whose state after layer j still
    /// matters; active[depth] is the target set and active[0] the initial sites.
    std::vector<std::vector<int>> active;
    /// Per 0-based layer, indices of the gates inside the cone.
    std::vector<std::vector<int>> gates;

    const std::vector<int> &initial_sites() const { return active.front(); }
    int max_width() const;
};

/// A gate is included iff its support meets the active set after its layer.
LightCone backward_cone(const CircuitSpec &spec, const std::vector<int> &targets);

/// log2 of the density-matrix entry count, h^(2 * max width).
double cone_cost(const LightCone &cone, int h);

/// Throws BudgetExceeded when `log2_entries` reaches the budget.
void check_budget(double log2_entries, const SimBudget &budget, const char *what);

}  // namespace markovsim
