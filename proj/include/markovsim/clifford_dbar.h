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

#include "markovsim/diagnostics.h"

namespace markovsim {

/// Region layout on a rows x (2 * width + l_ac) grid: A is the left `width`
/// columns, B the middle l_ac columns and C the right `width` columns.
struct CliffordLayout {
    int rows = 10;
    int width = 3;
    int l_ac = 2;

    int cols() const { return 2 * width + l_ac; }
    int num_qubits() const { return rows * cols(); }
    std::vector<size_t> region_a() const;
    std::vector<size_t> region_b() const;
    std::vector<size_t> region_c() const;
};

struct CliffordDbarResult {
    int l_ac = 0;
    double dbar = 0.0;
    double stderr_ = 0.0;
    size_t shots = 0;
    /// Shots whose all-zero outcome on B had probability zero.
    size_t inconsistent = 0;
};

/// ||rho_AC|0 - rho_A|0 (x) rho_C|0||_1 for one circuit realization: staggered
/// 2D brickwork of depth d with uniformly random two-qubit Cliffords, each qubit
/// traced out with probability p after every layer, B post-selected on all zeros.
double clifford_dbar_shot(const CliffordLayout &layout, int depth, double p, uint64_t shot_seed,
                          bool *consistent = nullptr);

/// Average over `shots` realizations; shot s uses derive_seed(seed, {l_ac, s}).
/// The region width defaults to the depth.
CliffordDbarResult clifford_dbar(int rows, int depth, double p, int l_ac, size_t shots, uint64_t seed,
                                 int threads = 1, int width = -1);

struct MarkovLengthRow {
    int depth = 0;
    double p = 0.0;
    std::vector<CliffordDbarResult> points;
    MarkovFit fit;
    /// False when fewer than three points survived the noise floor.
    bool fitted = false;
};

/// D-bar for every l_AC, then a log-linear fit of D-bar against l_AC.
MarkovLengthRow markov_length_scan(int rows, int depth, double p, const std::vector<int> &l_acs, size_t shots,
                                   uint64_t seed, int threads = 1, const FitOptions &fit = {});

}  // namespace markovsim
