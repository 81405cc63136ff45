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

#include "markovsim/stabilizer.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "markovsim/errors.h"

namespace markovsim {

namespace {

// Removes one pivot per (qubit, x|z) column so that every surviving row is
// trivial on `qubits`. Survivors generate the subgroup supported elsewhere.
void eliminate_qubits(std::vector<PauliString> &gens, std::span<const size_t> qubits) {
    for (size_t q : qubits) {
        for (int pass = 0; pass < 2; ++pass) {
            auto has = [&](const PauliString &g) { return pass == 0 ? g.x(q) : g.z(q); };
            auto pivot = std::find_if(gens.begin(), gens.end(), has);
            if (pivot == gens.end()) {
                continue;
            }
            for (auto it = gens.begin(); it != gens.end(); ++it) {
                if (it != pivot && has(*it)) {
                    it->left_multiply(*pivot);
                }
            }
            std::swap(*pivot, gens.back());
            gens.pop_back();
        }
    }
}

PauliString restrict_to(const PauliString &p, std::span<const size_t> sites) {
    PauliString out(sites.size());
    out.negative = p.negative;
    for (size_t i = 0; i < sites.size(); ++i) {
        out.set(i, p.x(sites[i]), p.z(sites[i]));
    }
    return out;
}

std::vector<size_t> complement(size_t n, std::span<const size_t> sites) {
    std::vector<bool> in(n, false);
    for (size_t s : sites) {
        if (s >= n) {
            throw ConfigError("qubit index " + std::to_string(s) + " out of range");
        }
        in[s] = true;
    }
    std::vector<size_t> out;
    for (size_t q = 0; q < n; ++q) {
        if (!in[q]) {
            out.push_back(q);
        }
    }
    return out;
}

// Dense F2 row with fixed word count.
using BitRow = std::vector<uint64_t>;

bool get_bit(const BitRow &r, size_t i) {
    return (r[i >> 6] >> (i & 63)) & 1;
}

void flip_bit(BitRow &r, size_t i) {
    r[i >> 6] ^= uint64_t{1} << (i & 63);
}

void xor_into(BitRow &dst, const BitRow &src) {
    for (size_t w = 0; w < dst.size(); ++w) {
        dst[w] ^= src[w];
    }
}

size_t f2_rank(std::vector<BitRow> rows, size_t num_cols) {
    size_t rank = 0;
    for (size_t c = 0; c < num_cols && rank < rows.size(); ++c) {
        size_t p = rank;
        while (p < rows.size() && !get_bit(rows[p], c)) {
            ++p;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[p], rows[rank]);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i != rank && get_bit(rows[i], c)) {
                xor_into(rows[i], rows[rank]);
            }
        }
        ++rank;
    }
    return rank;
}

bool signed_product_negative(const std::vector<PauliString> &gens, const BitRow &tag, size_t offset) {
    PauliString acc(gens.empty() ? 0 : gens[0].num_qubits());
    for (size_t i = 0; i < gens.size(); ++i) {
        if (get_bit(tag, offset + i)) {
            acc.left_multiply(gens[i]);
        }
    }
    return acc.negative;
}

}  // namespace

StabilizerState::StabilizerState(size_t num_qubits) : num_qubits_(num_qubits) {
    for (size_t q = 0; q < num_qubits; ++q) {
        PauliString z(num_qubits);
        z.set(q, false, true);
        generators_.push_back(std::move(z));
    }
}

StabilizerState::StabilizerState(size_t num_qubits, std::vector<PauliString> generators)
    : num_qubits_(num_qubits), generators_(std::move(generators)) {
}

StabilizerState StabilizerState::maximally_mixed(size_t num_qubits) {
    return StabilizerState(num_qubits, {});
}

StabilizerState StabilizerState::from_generators(size_t num_qubits, std::vector<PauliString> generators) {
    size_t words = (2 * num_qubits + 63) / 64;
    std::vector<BitRow> rows;
    for (size_t i = 0; i < generators.size(); ++i) {
        if (generators[i].num_qubits() != num_qubits) {
            throw ConfigError("generator qubit count mismatch");
        }
        for (size_t j = 0; j < i; ++j) {
            if (!generators[i].commutes(generators[j])) {
                throw ConfigError("stabilizer generators must commute");
            }
        }
        BitRow r(words, 0);
        for (size_t q = 0; q < num_qubits; ++q) {
            if (generators[i].x(q)) flip_bit(r, 2 * q);
            if (generators[i].z(q)) flip_bit(r, 2 * q + 1);
        }
        rows.push_back(std::move(r));
    }
    if (f2_rank(rows, 2 * num_qubits) != generators.size()) {
        throw ConfigError("stabilizer generators must be independent");
    }
    return StabilizerState(num_qubits, std::move(generators));
}

void StabilizerState::apply(const CliffordGate &gate, std::span<const size_t> qubits) {
    size_t k = gate.num_qubits();
    if (qubits.size() != k) {
        throw ConfigError("gate arity does not match target count");
    }
    for (size_t q : qubits) {
        if (q >= num_qubits_) {
            throw ConfigError("gate target out of range");
        }
    }
    if (k == 2 && qubits[0] == qubits[1]) {
        throw ConfigError("two-qubit gate targets must differ");
    }
    for (auto &g : generators_) {
        unsigned bits = 0;
        for (size_t i = 0; i < k; ++i) {
            bits |= unsigned(g.x(qubits[i])) << (2 * i);
            bits |= unsigned(g.z(qubits[i])) << (2 * i + 1);
        }
        const auto &e = gate.entry(bits);
        for (size_t i = 0; i < k; ++i) {
            g.set(qubits[i], (e.bits >> (2 * i)) & 1, (e.bits >> (2 * i + 1)) & 1);
        }
        g.negative ^= e.flip;
    }
}

void StabilizerState::trace_out(size_t q) {
    if (q >= num_qubits_) {
        throw ConfigError("trace_out target out of range");
    }
    size_t one[1] = {q};
    eliminate_qubits(generators_, one);
}

void StabilizerState::trace_out_all(std::span<const size_t> qubits) {
    eliminate_qubits(generators_, qubits);
}

StabilizerState apply_clifford(StabilizerState state, const CliffordGate &gate, std::span<const size_t> sites) {
    state.apply(gate, sites);
    return state;
}

StabilizerState trace_out(StabilizerState state, size_t site) {
    state.trace_out(site);
    return state;
}

PostselectResult postselect_zero(const StabilizerState &state, std::span<const size_t> b_sites) {
    size_t n = state.num_qubits();
    std::vector<PauliString> gens = state.generators();
    for (size_t q : b_sites) {
        if (q >= n) {
            throw ConfigError("postselection site out of range");
        }
        auto pivot = std::find_if(gens.begin(), gens.end(), [&](const PauliString &g) { return g.x(q); });
        if (pivot == gens.end()) {
            continue;
        }
        for (auto it = gens.begin(); it != gens.end(); ++it) {
            if (it != pivot && it->x(q)) {
                it->left_multiply(*pivot);
            }
        }
        // Random outcome; keep the |0> branch.
        PauliString z(n);
        z.set(q, false, true);
        *pivot = std::move(z);
    }
    // Every generator is now Z-type on B, and <0_B| g |0_B> = +1 for the B part,
    // so g -> sign(g) * g|_rest is a group homomorphism.
    std::vector<size_t> rest = complement(n, b_sites);
    std::vector<PauliString> restricted;
    restricted.reserve(gens.size());
    for (const auto &g : gens) {
        restricted.push_back(restrict_to(g, rest));
    }
    std::vector<PauliString> independent;
    for (size_t q = 0; q < rest.size(); ++q) {
        for (int pass = 0; pass < 2; ++pass) {
            auto has = [&](const PauliString &g) { return pass == 0 ? g.x(q) : g.z(q); };
            auto pivot = std::find_if(restricted.begin(), restricted.end(), has);
            if (pivot == restricted.end()) {
                continue;
            }
            for (auto it = restricted.begin(); it != restricted.end(); ++it) {
                if (it != pivot && has(*it)) {
                    it->left_multiply(*pivot);
                }
            }
            independent.push_back(std::move(*pivot));
            restricted.erase(pivot);
        }
    }
    // What is left is the kernel: +I is fine, -I means the projection vanishes.
    bool consistent = std::none_of(restricted.begin(), restricted.end(), [](const PauliString &g) { return g.negative; });
    return PostselectResult{StabilizerState::from_generators(rest.size(), std::move(independent)), consistent};
}

StabilizerState marginal(const StabilizerState &state, std::span<const size_t> sites) {
    std::vector<PauliString> gens = state.generators();
    std::vector<size_t> others = complement(state.num_qubits(), sites);
    eliminate_qubits(gens, others);
    std::vector<PauliString> out;
    out.reserve(gens.size());
    for (const auto &g : gens) {
        out.push_back(restrict_to(g, sites));
    }
    return StabilizerState::from_generators(sites.size(), std::move(out));
}

StabilizerState tensor_product(const StabilizerState &a, const StabilizerState &b) {
    size_t n = a.num_qubits() + b.num_qubits();
    std::vector<PauliString> gens;
    for (const auto &g : a.generators()) {
        PauliString p(n);
        p.negative = g.negative;
        for (size_t q = 0; q < a.num_qubits(); ++q) {
            p.set(q, g.x(q), g.z(q));
        }
        gens.push_back(std::move(p));
    }
    for (const auto &g : b.generators()) {
        PauliString p(n);
        p.negative = g.negative;
        for (size_t q = 0; q < b.num_qubits(); ++q) {
            p.set(a.num_qubits() + q, g.x(q), g.z(q));
        }
        gens.push_back(std::move(p));
    }
    return StabilizerState::from_generators(n, std::move(gens));
}

StabilizerState permute_qubits(const StabilizerState &state, std::span<const size_t> order) {
    if (order.size() != state.num_qubits()) {
        throw ConfigError("permutation size mismatch");
    }
    std::vector<PauliString> gens;
    for (const auto &g : state.generators()) {
        gens.push_back(restrict_to(g, order));
    }
    return StabilizerState::from_generators(order.size(), std::move(gens));
}

double stab_trace_distance(const StabilizerState &s1, const StabilizerState &s2) {
    size_t n = s1.num_qubits();
    if (s2.num_qubits() != n) {
        throw ConfigError("trace distance between states of different size");
    }
    const auto &g1 = s1.generators();
    const auto &g2 = s2.generators();
    size_t r1 = g1.size(), r2 = g2.size();

    // t: rank of the cross commutation matrix.
    std::vector<BitRow> comm(r1, BitRow((r2 + 63) / 64 + 1, 0));
    for (size_t i = 0; i < r1; ++i) {
        for (size_t j = 0; j < r2; ++j) {
            if (!g1[i].commutes(g2[j])) {
                flip_bit(comm[i], j);
            }
        }
    }
    size_t t = f2_rank(comm, r2);

    // Shared subgroup: null combinations of the stacked unsigned generators.
    size_t data_words = (2 * n + 63) / 64;
    size_t tag_bits = r1 + r2;
    size_t words = data_words + (tag_bits + 63) / 64 + 1;
    std::vector<BitRow> rows;
    rows.reserve(tag_bits);
    auto push = [&](const PauliString &g, size_t tag) {
        BitRow r(words, 0);
        for (size_t q = 0; q < n; ++q) {
            if (g.x(q)) flip_bit(r, 2 * q);
            if (g.z(q)) flip_bit(r, 2 * q + 1);
        }
        flip_bit(r, data_words * 64 + tag);
        rows.push_back(std::move(r));
    };
    for (size_t i = 0; i < r1; ++i) push(g1[i], i);
    for (size_t j = 0; j < r2; ++j) push(g2[j], r1 + j);

    size_t rank = 0;
    for (size_t c = 0; c < 2 * n && rank < rows.size(); ++c) {
        size_t p = rank;
        while (p < rows.size() && !get_bit(rows[p], c)) {
            ++p;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[p], rows[rank]);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i != rank && get_bit(rows[i], c)) {
                xor_into(rows[i], rows[rank]);
            }
        }
        ++rank;
    }
    size_t shared = rows.size() - rank;
    for (size_t i = rank; i < rows.size(); ++i) {
        // rows[i] encodes prod g1^x = prod g2^y as unsigned Paulis.
        BitRow tag(words, 0);
        for (size_t b = 0; b < tag_bits; ++b) {
            if (get_bit(rows[i], data_words * 64 + b)) {
                flip_bit(tag, b);
            }
        }
        bool neg1 = signed_product_negative(g1, tag, 0);
        bool neg2 = signed_product_negative(g2, tag, r1);
        if (neg1 != neg2) {
            return 2.0;
        }
    }
    size_t a = r1 - shared;
    size_t b = r2 - shared;
    double alpha = std::ldexp(1.0, -int(b - t));
    double beta = std::ldexp(1.0, -int(a - t));
    double overlap = std::ldexp(1.0, -int(t));
    double core = std::sqrt((alpha - beta) * (alpha - beta) + 4.0 * alpha * beta * (1.0 - overlap));
    return core + (1.0 - alpha) + (1.0 - beta);
}

}  // namespace markovsim
