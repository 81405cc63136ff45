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

#include <cstdint>
#include <vector>

#include "markovsim/circuit.h"
#include "markovsim/dense.h"

namespace markovsim {

struct SamplerOptions {
    LatticeMetric metric = LatticeMetric::kManhattan;
    SimBudget budget;
    /// Exact enumeration of P' is used while h^n stays below 2^this.
    double max_log2_outcomes = 20.0;
    int threads = 1;
};

struct SampleStep {
    int site = 0;
    std::vector<int> conditioned_sites;
    std::vector<int> conditioned_values;
    std::vector<double> conditional;
    double draw = 0.0;
    int outcome = 0;
    bool zero_conditional = false;
};

struct SampleTrace {
    uint64_t seed = 0;
    int radius = 0;
    std::vector<int> order;
    /// outcomes[site], each in [0, h).
    std::vector<int> outcomes;
    std::vector<SampleStep> steps;

    size_t num_zero_conditionals() const;
};

/// Raster order 0, 1, ..., n - 1.
std::vector<int> default_order(const CircuitSpec &spec);

/// ceil(xi * ln(n * c / eps)), clipped at zero.
int suggested_radius(double xi, int n, double c, double eps);

/// One draw from P' = prod_i P(X_i | B(X_i, l) and X_<i), sampling the sites
/// in `order`.
SampleTrace sample(const CircuitSpec &spec, int radius, const std::vector<int> &order, uint64_t seed,
                   const SamplerOptions &options = {});

/// The exact distribution P' over all n sites (site order 0..n-1).
DistributionTable sampler_distribution(const CircuitSpec &spec, int radius, const std::vector<int> &order,
                                       const SamplerOptions &options = {});

struct ScanRow {
    int radius = 0;
    double tvd = 0.0;
    double stderr_ = 0.0;
    bool exact = true;
    size_t trials = 0;
    /// Radius whose distribution stands in for P; the lattice diameter means P itself.
    int reference_radius = 0;
};

/// ||P - P'_l||_1 for each radius. Exact when both P and P' can be enumerated,
/// otherwise a plug-in estimate from `trials` samples of P'_l against `trials`
/// reference samples, with a bootstrap standard error. The reference is P' at
/// the lattice diameter (equal to P) when its light-cone patches fit the budget,
/// otherwise P' at the largest requested radius that fits.
std::vector<ScanRow> markov_scan(const CircuitSpec &spec, const std::vector<int> &radii,
                                 const std::vector<int> &order, size_t trials, uint64_t seed,
                                 const SamplerOptions &options = {});

}  // namespace markovsim
