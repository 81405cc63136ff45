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

#include "markovsim/clifford.h"

#include <bit>
#include <complex>

#include "markovsim/errors.h"

namespace markovsim {

namespace {

size_t num_words(size_t n) {
    return (n + 63) / 64;
}

// Bit layout of a local (<= 2 qubit) Pauli index.
unsigned local_index(const PauliString &p) {
    unsigned bits = 0;
    for (size_t q = 0; q < p.num_qubits(); ++q) {
        bits |= unsigned(p.x(q)) << (2 * q);
        bits |= unsigned(p.z(q)) << (2 * q + 1);
    }
    return bits;
}

PauliString from_local_index(size_t k, unsigned bits) {
    PauliString p(k);
    for (size_t q = 0; q < k; ++q) {
        p.set(q, (bits >> (2 * q)) & 1, (bits >> (2 * q + 1)) & 1);
    }
    return p;
}

}  // namespace

PauliString::PauliString(size_t num_qubits)
    : num_qubits_(num_qubits), xs_(num_words(num_qubits), 0), zs_(num_words(num_qubits), 0) {
}

PauliString PauliString::from_text(std::string_view text) {
    bool neg = false;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
        neg = text[0] == '-';
        text.remove_prefix(1);
    }
    PauliString p(text.size());
    p.negative = neg;
    for (size_t q = 0; q < text.size(); ++q) {
        switch (text[q]) {
            case 'I':
            case '_':
                break;
            case 'X':
                p.set(q, true, false);
                break;
            case 'Y':
                p.set(q, true, true);
                break;
            case 'Z':
                p.set(q, false, true);
                break;
            default:
                throw ConfigError("bad Pauli character '" + std::string(1, text[q]) + "'");
        }
    }
    return p;
}

void PauliString::set(size_t q, bool x, bool z) {
    uint64_t m = uint64_t{1} << (q & 63);
    xs_[q >> 6] = x ? (xs_[q >> 6] | m) : (xs_[q >> 6] & ~m);
    zs_[q >> 6] = z ? (zs_[q >> 6] | m) : (zs_[q >> 6] & ~m);
}

bool PauliString::commutes(const PauliString &other) const {
    uint64_t acc = 0;
    for (size_t w = 0; w < xs_.size(); ++w) {
        acc ^= (xs_[w] & other.zs_[w]) ^ (zs_[w] & other.xs_[w]);
    }
    return (std::popcount(acc) & 1) == 0;
}

bool PauliString::is_identity() const {
    for (size_t w = 0; w < xs_.size(); ++w) {
        if (xs_[w] | zs_[w]) {
            return false;
        }
    }
    return true;
}

size_t PauliString::weight() const {
    size_t total = 0;
    for (size_t w = 0; w < xs_.size(); ++w) {
        total += std::popcount(xs_[w] | zs_[w]);
    }
    return total;
}

int multiply_paulis(const PauliString &left, const PauliString &right, PauliString &out) {
    if (left.num_qubits() != right.num_qubits()) {
        throw ConfigError("Pauli strings act on different qubit counts");
    }
    int exponent = 2 * int(left.negative) + 2 * int(right.negative);
    const auto &x1 = left.xs();
    const auto &z1 = left.zs();
    const auto &x2 = right.xs();
    const auto &z2 = right.zs();
    int plus = 0;
    int minus = 0;
    for (size_t w = 0; w < x1.size(); ++w) {
        uint64_t a = x1[w], b = z1[w], c = x2[w], d = z2[w];
        uint64_t xl = a & ~b, zl = ~a & b, yl = a & b;
        plus += std::popcount((xl & c & d) | (zl & c & ~d) | (yl & d & ~c));
        minus += std::popcount((xl & ~c & d) | (zl & c & d) | (yl & c & ~d));
    }
    if (&out != &left && &out != &right) {
        out = PauliString(left.num_qubits());
    }
    for (size_t w = 0; w < x1.size(); ++w) {
        out.xs()[w] = x1[w] ^ x2[w];
        out.zs()[w] = z1[w] ^ z2[w];
    }
    out.negative = false;
    return ((exponent + plus - minus) % 4 + 4) % 4;
}

void PauliString::left_multiply(const PauliString &other) {
    int e = multiply_paulis(other, *this, *this);
    if (e & 1) {
        throw NumericalError("left_multiply on anticommuting Pauli strings");
    }
    negative = e == 2;
}

std::string PauliString::str() const {
    std::string s(1, negative ? '-' : '+');
    for (size_t q = 0; q < num_qubits_; ++q) {
        s += "_XZY"[x(q) | (z(q) << 1)];
    }
    return s;
}

const std::vector<std::array<uint8_t, 4>> &two_qubit_symplectic_group() {
    static const std::vector<std::array<uint8_t, 4>> group = [] {
        auto omega = [](unsigned u, unsigned v) {
            // bits: x0=1, z0=2, x1=4, z1=8
            unsigned s = ((u & 1) & (v >> 1)) ^ ((u >> 1) & v & 1) ^ ((u >> 2) & (v >> 3) & 1) ^
                         ((u >> 3) & (v >> 2) & 1);
            return s & 1;
        };
        std::vector<std::array<uint8_t, 4>> out;
        for (unsigned m = 0; m < (1u << 16); ++m) {
            std::array<uint8_t, 4> rows{uint8_t(m & 15), uint8_t((m >> 4) & 15), uint8_t((m >> 8) & 15),
                                        uint8_t((m >> 12) & 15)};
            // rows: images of X0, Z0, X1, Z1
            bool ok = omega(rows[0], rows[1]) == 1 && omega(rows[2], rows[3]) == 1 &&
                      omega(rows[0], rows[2]) == 0 && omega(rows[0], rows[3]) == 0 &&
                      omega(rows[1], rows[2]) == 0 && omega(rows[1], rows[3]) == 0;
            if (ok) {
                out.push_back(rows);
            }
        }
        return out;
    }();
    return group;
}

CliffordGate CliffordGate::from_images(std::vector<PauliString> x_images, std::vector<PauliString> z_images) {
    size_t k = x_images.size();
    if (k == 0 || k > 2 || z_images.size() != k) {
        throw ConfigError("Clifford gates act on one or two qubits");
    }
    for (size_t a = 0; a < k; ++a) {
        if (x_images[a].num_qubits() != k || z_images[a].num_qubits() != k) {
            throw ConfigError("Clifford image has wrong qubit count");
        }
    }
    for (size_t a = 0; a < k; ++a) {
        for (size_t b = 0; b < k; ++b) {
            bool xz = x_images[a].commutes(z_images[b]);
            if (xz == (a == b) || !x_images[a].commutes(x_images[b]) || !z_images[a].commutes(z_images[b])) {
                throw ConfigError("Clifford images do not preserve commutation relations");
            }
        }
    }
    CliffordGate g;
    g.x_images_ = std::move(x_images);
    g.z_images_ = std::move(z_images);
    g.build_table();
    return g;
}

CliffordGate CliffordGate::named(std::string_view name) {
    auto P = [](const char *t) { return PauliString::from_text(t); };
    if (name == "I") return from_images({P("X")}, {P("Z")});
    if (name == "X") return from_images({P("X")}, {P("-Z")});
    if (name == "Y") return from_images({P("-X")}, {P("-Z")});
    if (name == "Z") return from_images({P("-X")}, {P("Z")});
    if (name == "H") return from_images({P("Z")}, {P("X")});
    if (name == "S") return from_images({P("Y")}, {P("Z")});
    if (name == "SDG") return from_images({P("-Y")}, {P("Z")});
    if (name == "CNOT" || name == "CX") return from_images({P("XX"), P("IX")}, {P("ZI"), P("ZZ")});
    if (name == "CZ") return from_images({P("XZ"), P("ZX")}, {P("ZI"), P("IZ")});
    if (name == "SWAP") return from_images({P("IX"), P("XI")}, {P("IZ"), P("ZI")});
    throw ConfigError("unknown Clifford gate '" + std::string(name) + "'");
}

CliffordGate CliffordGate::random(size_t num_qubits, std::mt19937_64 &rng) {
    std::vector<PauliString> xi, zi;
    if (num_qubits == 1) {
        // Sp(2, F2): images (x, z) of X and Z with omega = 1.
        static const std::array<std::array<unsigned, 2>, 6> sp2{
            {{1, 2}, {2, 1}, {3, 2}, {1, 3}, {2, 3}, {3, 1}}};
        const auto &pick = sp2[std::uniform_int_distribution<size_t>(0, sp2.size() - 1)(rng)];
        unsigned signs = std::uniform_int_distribution<unsigned>(0, 3)(rng);
        xi.push_back(from_local_index(1, pick[0]));
        zi.push_back(from_local_index(1, pick[1]));
        xi[0].negative = signs & 1;
        zi[0].negative = (signs >> 1) & 1;
    } else if (num_qubits == 2) {
        const auto &group = two_qubit_symplectic_group();
        const auto &rows = group[std::uniform_int_distribution<size_t>(0, group.size() - 1)(rng)];
        unsigned signs = std::uniform_int_distribution<unsigned>(0, 15)(rng);
        for (size_t q = 0; q < 2; ++q) {
            xi.push_back(from_local_index(2, rows[2 * q]));
            zi.push_back(from_local_index(2, rows[2 * q + 1]));
            xi[q].negative = (signs >> (2 * q)) & 1;
            zi[q].negative = (signs >> (2 * q + 1)) & 1;
        }
    } else {
        throw ConfigError("random Clifford gates act on one or two qubits");
    }
    return from_images(std::move(xi), std::move(zi));
}

PauliString CliffordGate::conjugate(const PauliString &p) const {
    size_t k = num_qubits();
    // p = s * i^{#Y} * prod_q X_q^{x_q} Z_q^{z_q}; map factor by factor.
    PauliString acc(k);
    int exponent = p.negative ? 2 : 0;
    for (size_t q = 0; q < k; ++q) {
        if (p.x(q) && p.z(q)) {
            exponent += 1;
        }
        if (p.x(q)) {
            exponent += multiply_paulis(acc, x_images_[q], acc);
        }
        if (p.z(q)) {
            exponent += multiply_paulis(acc, z_images_[q], acc);
        }
    }
    exponent %= 4;
    if (exponent & 1) {
        throw NumericalError("Clifford conjugation produced a non-Hermitian Pauli");
    }
    acc.negative = exponent == 2;
    return acc;
}

void CliffordGate::build_table() {
    size_t k = num_qubits();
    for (unsigned bits = 0; bits < (1u << (2 * k)); ++bits) {
        PauliString image = conjugate(from_local_index(k, bits));
        table_[bits] = Entry{uint8_t(local_index(image)), image.negative};
    }
}

Eigen::MatrixXcd pauli_matrix(const PauliString &p) {
    using C = std::complex<double>;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (size_t q = 0; q < p.num_qubits(); ++q) {
        Eigen::Matrix2cd s;
        if (p.x(q) && p.z(q)) {
            s << 0, C(0, -1), C(0, 1), 0;
        } else if (p.x(q)) {
            s << 0, 1, 1, 0;
        } else if (p.z(q)) {
            s << 1, 0, 0, -1;
        } else {
            s.setIdentity();
        }
        Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                next.block(2 * r, 2 * c, 2, 2) = m(r, c) * s;
            }
        }
        m = std::move(next);
    }
    return p.negative ? Eigen::MatrixXcd(-m) : m;
}

Eigen::MatrixXcd CliffordGate::unitary() const {
    size_t k = num_qubits();
    Eigen::Index dim = Eigen::Index{1} << k;
    // U|0..0> spans the joint +1 eigenspace of the Z images.
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(dim, dim);
    for (size_t q = 0; q < k; ++q) {
        proj = proj * (Eigen::MatrixXcd::Identity(dim, dim) + pauli_matrix(z_images_[q])) * 0.5;
    }
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < dim; ++c) {
        if (proj.col(c).norm() > proj.col(best).norm()) {
            best = c;
        }
    }
    Eigen::VectorXcd u0 = proj.col(best).normalized();
    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        Eigen::VectorXcd v = u0;
        for (size_t q = 0; q < k; ++q) {
            // first qubit is the most significant bit of the column index
            if ((col >> (k - 1 - q)) & 1) {
                v = pauli_matrix(x_images_[q]) * v;
            }
        }
        u.col(col) = v;
    }
    return u;
}

}  // namespace markovsim
