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

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace markovsim {

/// Signed Hermitian Pauli string over n qubits, bit-packed.
///
/// Qubit q carries (x, z) bits with (1, 1) meaning Y (not XZ). `negative`
/// holds the overall sign.
class PauliString {
   public:
    explicit PauliString(size_t num_qubits = 0);

    /// Parses "+XZ_Y", "-IZ" etc. `_` and `I` both mean identity.
    static PauliString from_text(std::string_view text);

    size_t num_qubits() const { return num_qubits_; }
    bool x(size_t q) const { return (xs_[q >> 6] >> (q & 63)) & 1; }
    bool z(size_t q) const { return (zs_[q >> 6] >> (q & 63)) & 1; }
    void set(size_t q, bool x, bool z);

    bool negative = false;

    bool commutes(const PauliString &other) const;
    bool is_identity() const;
    /// Number of qubits acted on non-trivially.
    size_t weight() const;

    /// Replaces *this with other * (*this). Both must commute.
    void left_multiply(const PauliString &other);

    std::string str() const;

    const std::vector<uint64_t> &xs() const { return xs_; }
    const std::vector<uint64_t> &zs() const { return zs_; }
    std::vector<uint64_t> &xs() { return xs_; }
    std::vector<uint64_t> &zs() { return zs_; }

    bool operator==(const PauliString &other) const = default;

   private:
    size_t num_qubits_;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
};

/// Exponent e (mod 4) such that left * right = i^e * P where P is the unsigned
/// Hermitian product; includes the signs of both factors. Writes P into `out`.
int multiply_paulis(const PauliString &left, const PauliString &right, PauliString &out);

/// One- or two-qubit Clifford gate stored as the images of X_q and Z_q under
/// conjugation, plus a 16-entry lookup table for fast application.
class CliffordGate {
   public:
    static CliffordGate from_images(std::vector<PauliString> x_images, std::vector<PauliString> z_images);

    /// I, X, Y, Z, H, S, SDG, CNOT (= CX, control first), CZ, SWAP.
    static CliffordGate named(std::string_view name);

    /// Uniformly random element of the 1- or 2-qubit Clifford group (up to
    /// global phase): a uniform symplectic matrix times uniform image signs.
    static CliffordGate random(size_t num_qubits, std::mt19937_64 &rng);

    size_t num_qubits() const { return x_images_.size(); }
    const PauliString &x_image(size_t q) const { return x_images_[q]; }
    const PauliString &z_image(size_t q) const { return z_images_[q]; }

    /// U P U^dagger for a Pauli on the gate's own qubits.
    PauliString conjugate(const PauliString &p) const;

    /// Table entry for local bits (x_0, z_0, x_1, z_1) packed as x_q << 2q | z_q << (2q+1).
    struct Entry {
        uint8_t bits;
        bool flip;
    };
    const Entry &entry(unsigned local_bits) const { return table_[local_bits]; }

    /// Dense unitary (up to global phase) in the computational basis, first qubit
    /// most significant.
    Eigen::MatrixXcd unitary() const;

   private:
    CliffordGate() = default;
    void build_table();

    std::vector<PauliString> x_images_;
    std::vector<PauliString> z_images_;
    Entry table_[16]{};
};

/// All 4x4 binary symplectic matrices (rows are images of X0, Z0, X1, Z1 in
/// (x0, z0, x1, z1) bit order). There are 720.
const std::vector<std::array<uint8_t, 4>> &two_qubit_symplectic_group();

/// Dense matrix of a signed Pauli string, first qubit most significant.
Eigen::MatrixXcd pauli_matrix(const PauliString &p);

}  // namespace markovsim
