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

#include "markovsim/circuit.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "markovsim/clifford.h"
#include "markovsim/errors.h"
#include "markovsim/rng.h"

namespace markovsim {

namespace {

using Complex = std::complex<double>;

std::string site_list(const std::vector<int> &sites) {
    std::ostringstream out;
    for (size_t i = 0; i < sites.size(); ++i) {
        out << (i ? "," : "") << sites[i];
    }
    return out.str();
}

int int_pow(int base, int exp) {
    int r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

bool is_connected_on_lattice(const Geometry &geo, const std::vector<int> &sites) {
    std::vector<bool> seen(sites.size(), false);
    std::vector<size_t> stack{0};
    seen[0] = true;
    size_t count = 1;
    while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        for (size_t j = 0; j < sites.size(); ++j) {
            if (!seen[j] && geo.distance(sites[i], sites[j]) == 1) {
                seen[j] = true;
                ++count;
                stack.push_back(j);
            }
        }
    }
    return count == sites.size();
}

}  // namespace

Geometry::Geometry(std::vector<int> extents) : extents_(std::move(extents)), num_sites_(1) {
    if (extents_.empty()) {
        throw ConfigError("geometry needs at least one dimension");
    }
    for (int e : extents_) {
        if (e < 1) {
            throw ConfigError("geometry extents must be positive");
        }
        num_sites_ *= e;
    }
}

std::vector<int> Geometry::coords(int site) const {
    std::vector<int> c(extents_.size());
    for (int k = int(extents_.size()) - 1; k >= 0; --k) {
        c[k] = site % extents_[k];
        site /= extents_[k];
    }
    return c;
}

int Geometry::site(const std::vector<int> &coords) const {
    int s = 0;
    for (size_t k = 0; k < extents_.size(); ++k) {
        s = s * extents_[k] + coords[k];
    }
    return s;
}

int Geometry::distance(int a, int b, LatticeMetric metric) const {
    int total = 0;
    for (int k = int(extents_.size()) - 1; k >= 0; --k) {
        int e = extents_[k];
        int delta = std::abs(a % e - b % e);
        a /= e;
        b /= e;
        total = metric == LatticeMetric::kManhattan ? total + delta : std::max(total, delta);
    }
    return total;
}

int Geometry::diameter(LatticeMetric metric) const {
    int total = 0;
    for (int e : extents_) {
        total = metric == LatticeMetric::kManhattan ? total + (e - 1) : std::max(total, e - 1);
    }
    return total;
}

Eigen::MatrixXcd named_unitary(const std::string &name, int h, int arity) {
    const double two_pi = 2.0 * std::numbers::pi;
    auto omega = [&](int e) { return std::polar(1.0, two_pi * double(e % h) / double(h)); };
    int dim = int_pow(h, arity);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    if (name == "identity") {
        u.setIdentity();
        return u;
    }
    if (arity == 1) {
        if (name == "shift") {
            for (int a = 0; a < h; ++a) u((a + 1) % h, a) = 1.0;
            return u;
        }
        if (name == "phase") {
            for (int a = 0; a < h; ++a) u(a, a) = omega(a);
            return u;
        }
        if (name == "fourier" || name == "hadamard") {
            for (int a = 0; a < h; ++a)
                for (int b = 0; b < h; ++b) u(b, a) = omega(a * b) / std::sqrt(double(h));
            return u;
        }
    }
    if (arity == 2) {
        for (int a = 0; a < h; ++a) {
            for (int b = 0; b < h; ++b) {
                int in = a * h + b;
                if (name == "cshift" || name == "cnot") {
                    u(a * h + (a + b) % h, in) = 1.0;
                } else if (name == "cphase" || name == "cz") {
                    u(in, in) = omega(a * b);
                } else if (name == "swap") {
                    u(b * h + a, in) = 1.0;
                } else {
                    throw ConfigError("unknown two-site gate '" + name + "'");
                }
            }
        }
        return u;
    }
    throw ConfigError("unknown gate '" + name + "' on " + std::to_string(arity) + " site(s)");
}

Eigen::MatrixXcd haar_unitary(int dim, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd z(dim, dim);
    for (int c = 0; c < dim; ++c) {
        for (int r = 0; r < dim; ++r) {
            double re = normal(rng);
            double im = normal(rng);
            z(r, c) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        Complex d = r(i, i);
        q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
    }
    return q;
}

CircuitSpec::CircuitSpec(int h, Geometry geometry, std::vector<Layer> layers, std::vector<std::vector<double>> noise,
                         uint64_t seed, int k_max)
    : h_(h), k_max_(k_max), seed_(seed), geometry_(std::move(geometry)), layers_(std::move(layers)),
      noise_(std::move(noise)) {
    const int n = geometry_.num_sites();
    if (h_ < 2) {
        throw ConfigError("local dimension h must be at least 2");
    }
    if (k_max_ < 1) {
        throw ConfigError("k_max must be positive");
    }
    if (noise_.size() != layers_.size()) {
        throw ConfigError("noise table has " + std::to_string(noise_.size()) + " layers, circuit has " +
                          std::to_string(layers_.size()));
    }
    for (size_t j = 0; j < noise_.size(); ++j) {
        if (int(noise_[j].size()) != n) {
            throw ConfigError("noise table layer " + std::to_string(j) + " has wrong site count");
        }
        for (double p : noise_[j]) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw ConfigError("noise rate outside [0,1] in layer " + std::to_string(j));
            }
        }
    }
    unitaries_.resize(layers_.size());
    for (size_t j = 0; j < layers_.size(); ++j) {
        std::vector<int> owner(n, -1);
        for (size_t g = 0; g < layers_[j].size(); ++g) {
            const Gate &gate = layers_[j][g];
            const int k = int(gate.sites.size());
            if (k == 0 || k > k_max_) {
                throw ConfigError("layer " + std::to_string(j) + " gate " + std::to_string(g) + " acts on " +
                                  std::to_string(k) + " sites (k_max " + std::to_string(k_max_) + ")");
            }
            for (int s : gate.sites) {
                if (s < 0 || s >= n) {
                    throw ConfigError("layer " + std::to_string(j) + " gate " + std::to_string(g) + " site " +
                                      std::to_string(s) + " out of range");
                }
                if (owner[s] >= 0) {
                    throw ConfigError("layer " + std::to_string(j) + ": gates " + std::to_string(owner[s]) +
                                      " [" + site_list(layers_[j][owner[s]].sites) + "] and " +
                                      std::to_string(g) + " [" + site_list(gate.sites) + "] overlap on site " +
                                      std::to_string(s));
                }
                owner[s] = int(g);
            }
            if (!is_connected_on_lattice(geometry_, gate.sites)) {
                throw ConfigError("layer " + std::to_string(j) + " gate [" + site_list(gate.sites) +
                                  "] is not nearest-neighbour");
            }
            const int dim = int_pow(h_, k);
            Eigen::MatrixXcd u;
            switch (gate.kind) {
                case GateKind::kNamed:
                    u = named_unitary(gate.name, h_, k);
                    break;
                case GateKind::kMatrix:
                    if (gate.matrix.rows() != dim || gate.matrix.cols() != dim) {
                        throw ConfigError("layer " + std::to_string(j) + " gate " + std::to_string(g) +
                                          ": matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
                    }
                    if (!(gate.matrix.adjoint() * gate.matrix).isIdentity(1e-10)) {
                        throw ConfigError("layer " + std::to_string(j) + " gate " + std::to_string(g) +
                                          ": matrix is not unitary");
                    }
                    u = gate.matrix;
                    break;
                case GateKind::kHaar:
                    u = haar_unitary(dim, gate.seed.value_or(derive_seed(seed_, {uint64_t(j), uint64_t(g)})));
                    break;
                case GateKind::kClifford: {
                    if (h_ != 2) {
                        throw ConfigError("Clifford gates require h = 2");
                    }
                    std::mt19937_64 rng(gate.seed.value_or(derive_seed(seed_, {uint64_t(j), uint64_t(g)})));
                    u = CliffordGate::random(size_t(k), rng).unitary();
                    break;
                }
            }
            unitaries_[j].push_back(std::move(u));
        }
    }
}

std::vector<std::vector<double>> CircuitSpec::uniform_noise(int n, int depth, double p) {
    return std::vector<std::vector<double>>(size_t(depth), std::vector<double>(size_t(n), p));
}

std::optional<double> CircuitSpec::uniform_rate() const {
    if (noise_.empty()) {
        return std::nullopt;
    }
    double p = noise_[0][0];
    for (const auto &row : noise_) {
        for (double q : row) {
            if (q != p) {
                return std::nullopt;
            }
        }
    }
    return p;
}

CircuitSpec CircuitSpec::reseeded(uint64_t seed) const {
    std::vector<Layer> layers = layers_;
    for (auto &layer : layers) {
        for (auto &gate : layer) {
            gate.seed.reset();
        }
    }
    return CircuitSpec(h_, geometry_, std::move(layers), noise_, seed, k_max_);
}

CircuitSpec CircuitSpec::with_uniform_noise(double p) const {
    return CircuitSpec(h_, geometry_, layers_, uniform_noise(n(), depth(), p), seed_, k_max_);
}

uint64_t gate_seed(const CircuitSpec &spec, int layer, int index) {
    const Gate &g = spec.layers()[layer][index];
    return g.seed.value_or(derive_seed(spec.seed(), {uint64_t(layer), uint64_t(index)}));
}

namespace {

Gate family_gate(GateFamily family, std::vector<int> sites) {
    Gate g;
    g.sites = std::move(sites);
    g.kind = family == GateFamily::kHaar ? GateKind::kHaar : GateKind::kClifford;
    return g;
}

}  // namespace

CircuitSpec make_brickwork_1d(int n, int depth, double p, GateFamily family, uint64_t seed, int h) {
    std::vector<Layer> layers(size_t(std::max(depth, 0)));
    for (int j = 0; j < depth; ++j) {
        for (int i = j % 2; i + 1 < n; i += 2) {
            layers[j].push_back(family_gate(family, {i, i + 1}));
        }
    }
    return CircuitSpec(h, Geometry({n}), std::move(layers), CircuitSpec::uniform_noise(n, depth, p), seed);
}

std::vector<std::pair<int, int>> brickwork_2d_pairs(int rows, int cols, int layer) {
    std::vector<std::pair<int, int>> pairs;
    int round = layer / 2;
    if (layer % 2 == 0) {
        for (int r = 0; r < rows; ++r) {
            for (int c = (r + round) % 2; c + 1 < cols; c += 2) {
                pairs.emplace_back(r * cols + c, r * cols + c + 1);
            }
        }
    } else {
        for (int c = 0; c < cols; ++c) {
            for (int r = (c + round) % 2; r + 1 < rows; r += 2) {
                pairs.emplace_back(r * cols + c, (r + 1) * cols + c);
            }
        }
    }
    return pairs;
}

CircuitSpec make_brickwork_2d(int rows, int cols, int depth, double p, GateFamily family, uint64_t seed, int h) {
    std::vector<Layer> layers(size_t(std::max(depth, 0)));
    for (int j = 0; j < depth; ++j) {
        for (auto [a, b] : brickwork_2d_pairs(rows, cols, j)) {
            layers[j].push_back(family_gate(family, {a, b}));
        }
    }
    return CircuitSpec(h, Geometry({rows, cols}), std::move(layers), CircuitSpec::uniform_noise(rows * cols, depth, p),
                       seed);
}

InteractionGraph::InteractionGraph(const CircuitSpec &spec) : n_(spec.n()), depth_(spec.depth()) {
    std::set<std::pair<int, int>> edges;
    auto add = [&](int u, int v) {
        if (u != v) {
            edges.emplace(std::min(u, v), std::max(u, v));
        }
    };
    for (int j = 0; j < depth_; ++j) {
        for (const Gate &g : spec.layers()[j]) {
            for (int a : g.sites) {
                for (int b : g.sites) {
                    if (a == b) {
                        continue;
                    }
                    // Gate in layer j sits right before noise layer j and right
                    // after noise layer j - 1.
                    add(vertex(a, j), vertex(b, j));
                    if (j > 0) {
                        add(vertex(a, j - 1), vertex(b, j - 1));
                        add(vertex(a, j - 1), vertex(b, j));
                    }
                }
            }
        }
    }
    adjacency_.assign(size_t(n_) * size_t(depth_), {});
    for (auto [u, v] : edges) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto &adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
    }
}

bool InteractionGraph::has_edge(int u, int v) const {
    const auto &adj = adjacency_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
}

size_t InteractionGraph::num_edges() const {
    size_t total = 0;
    for (const auto &adj : adjacency_) {
        total += adj.size();
    }
    return total / 2;
}

int InteractionGraph::max_degree() const {
    size_t best = 0;
    for (const auto &adj : adjacency_) {
        best = std::max(best, adj.size());
    }
    return int(best);
}

InteractionGraph build_interaction_graph(const CircuitSpec &spec) {
    return InteractionGraph(spec);
}

int graph_distance(const InteractionGraph &g, const std::vector<int> &a, const std::vector<int> &c) {
    if (a.empty() || c.empty()) {
        throw ConfigError("graph_distance needs nonempty site sets");
    }
    const int n = g.num_sites();
    std::vector<char> in_a(n, 0), in_c(n, 0);
    for (int s : a) {
        if (s < 0 || s >= n) throw ConfigError("site out of range");
        in_a[s] = 1;
    }
    for (int s : c) {
        if (s < 0 || s >= n) throw ConfigError("site out of range");
        if (in_a[s]) throw ConfigError("graph_distance needs disjoint site sets");
        in_c[s] = 1;
    }
    std::vector<int> dist(size_t(g.num_vertices()), -1);
    std::deque<int> queue;
    for (int s : a) {
        for (int j = 0; j < g.depth(); ++j) {
            int v = g.vertex(s, j);
            if (dist[v] < 0) {
                dist[v] = 0;
                queue.push_back(v);
            }
        }
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (in_c[v % n]) {
            return dist[v];
        }
        for (int w : g.neighbors(v)) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return InteractionGraph::kInfinite;
}

int vertex_distance(const InteractionGraph &g, int u, int v) {
    if (u < 0 || v < 0 || u >= g.num_vertices() || v >= g.num_vertices()) {
        throw ConfigError("vertex out of range");
    }
    std::vector<int> dist(size_t(g.num_vertices()), -1);
    std::deque<int> queue{u};
    dist[u] = 0;
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        if (x == v) return dist[x];
        for (int w : g.neighbors(x)) {
            if (dist[w] < 0) {
                dist[w] = dist[x] + 1;
                queue.push_back(w);
            }
        }
    }
    return InteractionGraph::kInfinite;
}

size_t boundary_size(const InteractionGraph &g, const std::vector<int> &l) {
    const int n = g.num_sites();
    std::vector<char> in(n, 0);
    for (int s : l) {
        if (s < 0 || s >= n) throw ConfigError("site out of range");
        in[s] = 1;
    }
    size_t count = 0;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (!in[v % n]) {
            continue;
        }
        for (int w : g.neighbors(v)) {
            if (!in[w % n]) {
                ++count;
            }
        }
    }
    return count;
}

std::vector<int> ball(const CircuitSpec &spec, int center, int radius, LatticeMetric metric) {
    if (center < 0 || center >= spec.n()) {
        throw ConfigError("ball center out of range");
    }
    std::vector<int> out;
    for (int s = 0; s < spec.n(); ++s) {
        if (spec.geometry().distance(center, s, metric) <= radius) {
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace markovsim
