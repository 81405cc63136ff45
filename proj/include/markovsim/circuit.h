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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace markovsim {

enum class LatticeMetric { kManhattan, kChebyshev };

/// D-dimensional grid. Sites are numbered in row-major raster order (last
/// coordinate fastest).
class Geometry {
   public:
    Geometry() = default;
    explicit Geometry(std::vector<int> extents);

    const std::vector<int> &extents() const { return extents_; }
    int dimension() const { return int(extents_.size()); }
    int num_sites() const { return num_sites_; }

    std::vector<int> coords(int site) const;
    int site(const std::vector<int> &coords) const;
    int distance(int a, int b, LatticeMetric metric = LatticeMetric::kManhattan) const;
    /// Largest pairwise distance.
    int diameter(LatticeMetric metric = LatticeMetric::kManhattan) const;

   private:
    std::vector<int> extents_;
    int num_sites_ = 0;
};

enum class GateKind { kNamed, kMatrix, kHaar, kClifford };

struct Gate {
    std::vector<int> sites;
    GateKind kind = GateKind::kNamed;
    /// For kNamed: identity, shift, phase, fourier (hadamard), cshift (cnot),
    /// cphase (cz), swap.
    std::string name;
    /// For kMatrix.
    Eigen::MatrixXcd matrix;
    /// For seeded kinds; derived from (circuit seed, layer, index) when absent.
    std::optional<uint64_t> seed;
};

using Layer = std::vector<Gate>;

/// Layered noisy circuit: |0>^n, then per layer j the gates of layer j followed
/// by depolarizing noise with rate p(site, j) on every site, then a
/// computational-basis measurement.
class CircuitSpec {
   public:
    /// Validates everything and resolves each gate to its unitary. `noise` is
    /// indexed [layer][site].
    CircuitSpec(int h, Geometry geometry, std::vector<Layer> layers, std::vector<std::vector<double>> noise,
                uint64_t seed = 0, int k_max = 2);

    static std::vector<std::vector<double>> uniform_noise(int n, int depth, double p);

    int n() const { return geometry_.num_sites(); }
    int h() const { return h_; }
    int depth() const { return int(layers_.size()); }
    int k_max() const { return k_max_; }
    uint64_t seed() const { return seed_; }
    const Geometry &geometry() const { return geometry_; }
    const std::vector<Layer> &layers() const { return layers_; }
    /// 0-based layer index.
    double noise(int site, int layer) const { return noise_[layer][site]; }
    const std::vector<std::vector<double>> &noise_table() const { return noise_; }
    /// Resolved unitary of gate `index` in 0-based `layer`.
    const Eigen::MatrixXcd &unitary(int layer, int index) const { return unitaries_[layer][index]; }
    /// True when every noise rate equals the first one.
    std::optional<double> uniform_rate() const;

    /// Same circuit with all seeded gates redrawn from `seed` (per-gate seeds dropped).
    CircuitSpec reseeded(uint64_t seed) const;
    /// Same gates with a different uniform noise rate.
    CircuitSpec with_uniform_noise(double p) const;

   private:
    int h_;
    int k_max_;
    uint64_t seed_;
    Geometry geometry_;
    std::vector<Layer> layers_;
    std::vector<std::vector<double>> noise_;
    std::vector<std::vector<Eigen::MatrixXcd>> unitaries_;
};

/// Named single/two-qudit unitaries for local dimension h.
Eigen::MatrixXcd named_unitary(const std::string &name, int h, int arity);

/// Haar-random unitary of size dim (QR of a complex Ginibre matrix, phases fixed).
Eigen::MatrixXcd haar_unitary(int dim, uint64_t seed);

/// Seed used for gate `index` of 0-based `layer`.
uint64_t gate_seed(const CircuitSpec &spec, int layer, int index);

enum class GateFamily { kHaar, kClifford };

/// 1D brickwork on a chain: layer j (0-based) pairs (i, i+1) with i = j mod 2.
CircuitSpec make_brickwork_1d(int n, int depth, double p, GateFamily family, uint64_t seed, int h = 2);

/// Staggered 2D brickwork on a rows x cols grid. Even layers are horizontal,
/// odd layers vertical; within a layer the pairing offset alternates between
/// neighbouring rows (or columns) and flips every time the orientation recurs.
CircuitSpec make_brickwork_2d(int rows, int cols, int depth, double p, GateFamily family, uint64_t seed,
                              int h = 2);

/// Gate supports of the 2D brickwork layer `layer` (0-based), shared with the
/// Clifford backend.
std::vector<std::pair<int, int>> brickwork_2d_pairs(int rows, int cols, int layer);

/// Spacetime graph on noise locations (site, layer).
class InteractionGraph {
   public:
    static constexpr int kInfinite = std::numeric_limits<int>::max();

    explicit InteractionGraph(const CircuitSpec &spec);

    int num_sites() const { return n_; }
    int depth() const { return depth_; }
    /// Vertex id of (site, 0-based layer).
    int vertex(int site, int layer) const { return layer * n_ + site; }
    int num_vertices() const { return n_ * depth_; }
    const std::vector<int> &neighbors(int v) const { return adjacency_[v]; }
    bool has_edge(int u, int v) const;
    size_t num_edges() const;
    int max_degree() const;

   private:
    int n_;
    int depth_;
    std::vector<std::vector<int>> adjacency_;
};

InteractionGraph build_interaction_graph(const CircuitSpec &spec);

/// Shortest path length between two vertices; InteractionGraph::kInfinite when disconnected.
int vertex_distance(const InteractionGraph &g, int u, int v);

/// Shortest path between {(i, j) : i in a} and {(i', j') : i' in c};
/// InteractionGraph::kInfinite when disconnected.
int graph_distance(const InteractionGraph &g, const std::vector<int> &a, const std::vector<int> &c);

/// Number of edges leaving {(i, j) : i in l}.
size_t boundary_size(const InteractionGraph &g, const std::vector<int> &l);

/// Sites within lattice distance `radius` of `center`, ascending.
std::vector<int> ball(const CircuitSpec &spec, int center, int radius,
                      LatticeMetric metric = LatticeMetric::kManhattan);

}  // namespace markovsim
