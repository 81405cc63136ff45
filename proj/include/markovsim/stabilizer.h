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

#include <cstddef>
#include <span>
#include <vector>

#include "markovsim/clifford.h"

namespace markovsim {

/// Mixed stabilizer state rho = 2^-n * sum_{g in <generators>} g.
///
/// The generators are independent and mutually commuting; there may be fewer
/// than n of them (rank r < n means entropy n - r bits).
class StabilizerState {
   public:
    /// |0...0>.
    explicit StabilizerState(size_t num_qubits);

    static StabilizerState maximally_mixed(size_t num_qubits);

    /// Validates commutation and independence.
    static StabilizerState from_generators(size_t num_qubits, std::vector<PauliString> generators);

    size_t num_qubits() const { return num_qubits_; }
    size_t rank() const { return generators_.size(); }
    const std::vector<PauliString> &generators() const { return generators_; }

    /// Conjugates every generator by the gate acting on `qubits` (in gate order).
    void apply(const CliffordGate &gate, std::span<const size_t> qubits);

    /// Replaces qubit q by the maximally mixed state.
    void trace_out(size_t q);

    /// Keeps only the subgroup acting trivially on every qubit in `qubits`.
    void trace_out_all(std::span<const size_t> qubits);

   private:
    StabilizerState(size_t num_qubits, std::vector<PauliString> generators);

    size_t num_qubits_;
    std::vector<PauliString> generators_;
};

StabilizerState apply_clifford(StabilizerState state, const CliffordGate &gate, std::span<const size_t> sites);

StabilizerState trace_out(StabilizerState state, size_t site);

struct PostselectResult {
    /// State on the complement of B, qubits renumbered in increasing order.
    StabilizerState state;
    /// False when the all-zero outcome on B has probability zero. The state then
    /// carries the Pauli content shared by every realizable outcome.
    bool consistent;
};

/// Projects B onto |0...0> and drops it.
PostselectResult postselect_zero(const StabilizerState &state, std::span<const size_t> b_sites);

/// Partial trace onto `sites`; the result has |sites| qubits in the given order.
StabilizerState marginal(const StabilizerState &state, std::span<const size_t> sites);

/// a (x) b, with a's qubits first.
StabilizerState tensor_product(const StabilizerState &a, const StabilizerState &b);

/// Rearranges qubits: result qubit i is input qubit order[i]. `order` is a permutation.
StabilizerState permute_qubits(const StabilizerState &state, std::span<const size_t> order);

/// Unnormalized trace norm ||rho1 - rho2||_1 in [0, 2].
///
/// Closed form from the stabilizer groups: let K be the Pauli subgroup shared by
/// both (ignoring signs). A sign disagreement on K means orthogonal supports and
/// distance 2. Otherwise, with a = r1 - |K|, b = r2 - |K| and t the F2-rank of
/// the cross commutation matrix, a Clifford maps the pair to t copies of
/// (|0>, |+>), a - t copies of (|0>, I/2) and b - t copies of (I/2, |0>), whose
/// trace distance is evaluated exactly.
double stab_trace_distance(const StabilizerState &s1, const StabilizerState &s2);

}  // namespace markovsim
