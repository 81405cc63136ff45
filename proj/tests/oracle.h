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

// Brute-force reference implementations used by the tests. Everything here
// works on full h^n matrices with explicit index arithmetic and shares no code
// with the library's simulators.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "markovsim/circuit.h"
#include "markovsim/dense.h"
#include "markovsim/stabilizer.h"

namespace oracle {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline size_t ipow(size_t b, size_t e) {
    size_t r = 1;
    while (e--) r *= b;
    return r;
}

/// Digits of x in base h, site 0 first (most significant).
inline std::vector<int> digits(size_t x, int n, int h) {
    std::vector<int> d(n);
    for (int i = n - 1; i >= 0; --i) {
        d[i] = int(x % size_t(h));
        x /= size_t(h);
    }
    return d;
}

inline size_t number(const std::vector<int> &d, int h) {
    size_t x = 0;
    for (int v : d) x = x * size_t(h) + size_t(v);
    return x;
}

/// Operator `u` on `sites` (u's first site most significant) lifted to n sites.
inline Matrix embed(const Matrix &u, const std::vector<int> &sites, int n, int h) {
    const size_t dim = ipow(h, n);
    Matrix out = Matrix::Zero(long(dim), long(dim));
    for (size_t col = 0; col < dim; ++col) {
        std::vector<int> dc = digits(col, n, h);
        std::vector<int> local_c;
        for (int s : sites) local_c.push_back(dc[s]);
        size_t lc = number(local_c, h);
        for (size_t lr = 0; lr < size_t(u.rows()); ++lr) {
            Complex v = u(long(lr), long(lc));
            if (v == Complex(0)) continue;
            std::vector<int> dr = dc;
            std::vector<int> local_r = digits(lr, int(sites.size()), h);
            for (size_t k = 0; k < sites.size(); ++k) dr[sites[k]] = local_r[k];
            out(long(number(dr, h)), long(col)) += v;
        }
    }
    return out;
}

/// Generalized Weyl operator X^a Z^b on one qudit.
inline Matrix weyl(int h, int a, int b) {
    const double pi = std::acos(-1.0);
    Matrix w = Matrix::Zero(h, h);
    for (int k = 0; k < h; ++k) {
        w((k + a) % h, k) = std::polar(1.0, 2.0 * pi * double(b * k) / h);
    }
    return w;
}

/// Depolarizing channel as a Weyl twirl: (1-p) rho + p/h^2 sum_W W rho W^dagger.
inline Matrix depolarize(const Matrix &rho, int site, double p, int n, int h) {
    Matrix twirl = Matrix::Zero(rho.rows(), rho.cols());
    for (int a = 0; a < h; ++a) {
        for (int b = 0; b < h; ++b) {
            Matrix w = embed(weyl(h, a, b), {site}, n, h);
            twirl += w * rho * w.adjoint();
        }
    }
    return (1.0 - p) * rho + (p / double(h * h)) * twirl;
}

inline Matrix state(const markovsim::CircuitSpec &spec) {
    const int n = spec.n(), h = spec.h();
    const size_t dim = ipow(h, n);
    Matrix rho = Matrix::Zero(long(dim), long(dim));
    rho(0, 0) = 1.0;
    for (int j = 0; j < spec.depth(); ++j) {
        for (size_t g = 0; g < spec.layers()[j].size(); ++g) {
            Matrix u = embed(spec.unitary(j, int(g)), spec.layers()[j][g].sites, n, h);
            rho = u * rho * u.adjoint();
        }
        for (int s = 0; s < n; ++s) {
            if (spec.noise(s, j) != 0.0) rho = depolarize(rho, s, spec.noise(s, j), n, h);
        }
    }
    return rho;
}

/// probs[x] over all n sites, x with site 0 most significant.
inline std::vector<double> distribution(const markovsim::CircuitSpec &spec) {
    Matrix rho = state(spec);
    std::vector<double> p(size_t(rho.rows()));
    for (size_t i = 0; i < p.size(); ++i) p[i] = rho(long(i), long(i)).real();
    return p;
}

/// Marginal of a full distribution on `sites` (in that order).
inline std::vector<double> marginal(const std::vector<double> &p, int n, int h, const std::vector<int> &sites) {
    std::vector<double> out(ipow(h, sites.size()), 0.0);
    for (size_t x = 0; x < p.size(); ++x) {
        std::vector<int> d = digits(x, n, h);
        std::vector<int> sub;
        for (int s : sites) sub.push_back(d[s]);
        out[number(sub, h)] += p[x];
    }
    return out;
}

/// P' by the chain rule over marginals of the exact distribution.
inline std::vector<double> sampler_distribution(const markovsim::CircuitSpec &spec, const std::vector<double> &p,
                                                int radius, const std::vector<int> &order) {
    const int n = spec.n(), h = spec.h();
    std::vector<std::vector<int>> used(order.size());
    std::vector<std::vector<double>> joint(order.size()), cond_base(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
        for (size_t k = 0; k < i; ++k) {
            if (spec.geometry().distance(order[i], order[k]) <= radius) used[i].push_back(order[k]);
        }
        std::vector<int> with = used[i];
        with.push_back(order[i]);
        joint[i] = marginal(p, n, h, with);
        cond_base[i] = marginal(p, n, h, used[i]);
    }
    std::vector<double> out(p.size(), 0.0);
    for (size_t x = 0; x < p.size(); ++x) {
        std::vector<int> d = digits(x, n, h);
        double prob = 1.0;
        for (size_t i = 0; i < order.size(); ++i) {
            std::vector<int> sub;
            for (int s : used[i]) sub.push_back(d[s]);
            const double base = cond_base[i][number(sub, h)];
            sub.push_back(d[order[i]]);
            prob *= base < 1e-12 ? 1.0 / h : joint[i][number(sub, h)] / base;
        }
        out[x] = prob;
    }
    return out;
}

inline double l1(const std::vector<double> &a, const std::vector<double> &b) {
    double t = 0.0;
    for (size_t i = 0; i < a.size(); ++i) t += std::abs(a[i] - b[i]);
    return t;
}

/// Pauli matrix built from the text form, first qubit most significant.
inline Matrix pauli(const markovsim::PauliString &p) {
    Matrix m = Matrix::Identity(1, 1);
    for (size_t q = 0; q < p.num_qubits(); ++q) {
        Matrix s(2, 2);
        if (p.x(q) && p.z(q)) {
            s << 0, Complex(0, -1), Complex(0, 1), 0;
        } else if (p.x(q)) {
            s << 0, 1, 1, 0;
        } else if (p.z(q)) {
            s << 1, 0, 0, -1;
        } else {
            s << 1, 0, 0, 1;
        }
        Matrix next(m.rows() * 2, m.cols() * 2);
        for (long r = 0; r < m.rows(); ++r)
            for (long c = 0; c < m.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = m(r, c) * s;
        m = next;
    }
    return p.negative ? Matrix(-m) : m;
}

/// rho = 2^-n prod_i (I + g_i).
inline Matrix stabilizer(const markovsim::StabilizerState &s) {
    const long dim = long(ipow(2, s.num_qubits()));
    Matrix rho = Matrix::Identity(dim, dim);
    for (const auto &g : s.generators()) {
        rho = rho * (Matrix::Identity(dim, dim) + pauli(g)) * 0.5;
    }
    return rho / double(ipow(2, s.num_qubits() - s.rank()));
}

inline double trace_norm(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

/// Partial trace of an n-qubit (or qudit) matrix keeping `keep` in the given order.
inline Matrix partial_trace(const Matrix &rho, int n, int h, const std::vector<int> &keep) {
    const size_t kd = ipow(h, keep.size());
    Matrix out = Matrix::Zero(long(kd), long(kd));
    const size_t dim = ipow(h, n);
    for (size_t r = 0; r < dim; ++r) {
        std::vector<int> dr = digits(r, n, h);
        for (size_t c = 0; c < dim; ++c) {
            std::vector<int> dc = digits(c, n, h);
            bool same = true;
            for (int s = 0; s < n && same; ++s) {
                if (std::find(keep.begin(), keep.end(), s) == keep.end() && dr[s] != dc[s]) same = false;
            }
            if (!same) continue;
            std::vector<int> kr, kc;
            for (int s : keep) {
                kr.push_back(dr[s]);
                kc.push_back(dc[s]);
            }
            out(long(number(kr, h)), long(number(kc, h))) += rho(long(r), long(c));
        }
    }
    return out;
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long r = 0; r < a.rows(); ++r)
        for (long c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

}  // namespace oracle
