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

#include <queue>
#include <random>

#include "gtest/gtest.h"
#include "markovsim/errors.h"

using namespace markovsim;

namespace {

Gate named(std::vector<int> sites, const std::string &name) {
    Gate g;
    g.sites = std::move(sites);
    g.kind = GateKind::kNamed;
    g.name = name;
    return g;
}

CircuitSpec chain(int n, std::vector<Layer> layers, double p = 0.1) {
    const int d = int(layers.size());
    return CircuitSpec(2, Geometry({n}), std::move(layers), CircuitSpec::uniform_noise(n, d, p));
}

// Plain BFS on the vertex set, independent of graph_distance.
int bfs(const InteractionGraph &g, int from, int to) {
    std::vector<int> dist(g.num_vertices(), -1);
    std::queue<int> q;
    dist[from] = 0;
    q.push(from);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
        }
    }
    return dist[to];
}

}  // namespace

TEST(geometry, coords_and_distance) {
    Geometry g({3, 4});
    EXPECT_EQ(g.num_sites(), 12);
    EXPECT_EQ(g.coords(7), (std::vector<int>{1, 3}));
    EXPECT_EQ(g.site({2, 1}), 9);
    EXPECT_EQ(g.distance(0, 11), 5);
    EXPECT_EQ(g.distance(0, 11, LatticeMetric::kChebyshev), 3);
    EXPECT_EQ(g.diameter(), 5);
    EXPECT_THROW(Geometry({0}), ConfigError);
}

TEST(ball, examples) {
    CircuitSpec c = chain(10, {});
    EXPECT_EQ(ball(c, 5, 0), (std::vector<int>{5}));
    EXPECT_EQ(ball(c, 5, 2), (std::vector<int>{3, 4, 5, 6, 7}));
    EXPECT_EQ(ball(c, 0, 2), (std::vector<int>{0, 1, 2}));
    CircuitSpec grid(2, Geometry({4, 4}), {}, {});
    EXPECT_EQ(ball(grid, grid.geometry().site({1, 1}), 1).size(), 5u);
}

TEST(ball, monotone_in_radius) {
    CircuitSpec grid(2, Geometry({5, 4}), {}, {});
    for (int c = 0; c < grid.n(); ++c) {
        for (int l = 0; l < 6; ++l) {
            auto small = ball(grid, c, l), big = ball(grid, c, l + 1);
            EXPECT_TRUE(std::includes(big.begin(), big.end(), small.begin(), small.end()));
        }
    }
}

TEST(circuit_spec, rejects_overlap_with_named_layer_and_site) {
    try {
        chain(4, {{named({0, 1}, "cnot"), named({1, 2}, "cz")}});
        FAIL();
    } catch (const ConfigError &e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("layer 0"), std::string::npos);
        EXPECT_NE(msg.find("site 1"), std::string::npos);
    }
}

TEST(circuit_spec, rejects_invalid_input) {
    EXPECT_THROW(chain(4, {{named({0, 2}, "cnot")}}), ConfigError);
    EXPECT_THROW(chain(4, {{named({0, 4}, "cnot")}}), ConfigError);
    EXPECT_THROW(chain(4, {{named({0}, "nonsense")}}), ConfigError);
    EXPECT_THROW(chain(4, {{named({0, 1}, "swap")}}, 1.5), ConfigError);
    EXPECT_THROW(CircuitSpec(1, Geometry({2}), {}, {}), ConfigError);
    Gate m;
    m.sites = {0};
    m.kind = GateKind::kMatrix;
    m.matrix = Eigen::MatrixXcd::Ones(2, 2);
    EXPECT_THROW(chain(2, {{m}}), ConfigError);
    Gate cl;
    cl.sites = {0, 1};
    cl.kind = GateKind::kClifford;
    EXPECT_THROW(CircuitSpec(3, Geometry({2}), {{cl}}, CircuitSpec::uniform_noise(2, 1, 0.0)), ConfigError);
}

TEST(circuit_spec, named_and_haar_gates_are_unitary) {
    for (int h : {2, 3}) {
        for (const char *name : {"identity", "shift", "phase", "fourier"}) {
            auto u = named_unitary(name, h, 1);
            EXPECT_TRUE((u * u.adjoint()).isIdentity(1e-12)) << name;
        }
        for (const char *name : {"cshift", "cphase", "swap"}) {
            auto u = named_unitary(name, h, 2);
            EXPECT_TRUE((u * u.adjoint()).isIdentity(1e-12)) << name;
        }
    }
    auto a = haar_unitary(4, 9), b = haar_unitary(4, 9), c = haar_unitary(4, 10);
    EXPECT_TRUE((a * a.adjoint()).isIdentity(1e-12));
    EXPECT_TRUE(a.isApprox(b, 0.0));
    EXPECT_FALSE(a.isApprox(c, 1e-3));
}

TEST(circuit_spec, seeded_gates_are_reproducible) {
    CircuitSpec a = make_brickwork_1d(6, 3, 0.1, GateFamily::kHaar, 5);
    CircuitSpec b = make_brickwork_1d(6, 3, 0.1, GateFamily::kHaar, 5);
    CircuitSpec c = a.reseeded(6);
    EXPECT_TRUE(a.unitary(2, 1).isApprox(b.unitary(2, 1), 0.0));
    EXPECT_FALSE(a.unitary(2, 1).isApprox(c.unitary(2, 1), 1e-3));
    EXPECT_EQ(gate_seed(a, 1, 0), gate_seed(b, 1, 0));
    EXPECT_NE(gate_seed(a, 1, 0), gate_seed(a, 1, 1));
}

TEST(brickwork, one_dimensional_layout) {
    CircuitSpec c = make_brickwork_1d(5, 2, 0.1, GateFamily::kHaar, 1);
    ASSERT_EQ(c.layers()[0].size(), 2u);
    ASSERT_EQ(c.layers()[1].size(), 2u);
    EXPECT_EQ(c.layers()[0][1].sites, (std::vector<int>{2, 3}));
    EXPECT_EQ(c.layers()[1][0].sites, (std::vector<int>{1, 2}));
}

TEST(brickwork, two_dimensional_layers_are_disjoint_and_local) {
    for (int layer = 0; layer < 6; ++layer) {
        auto pairs = brickwork_2d_pairs(4, 5, layer);
        std::set<int> used;
        for (auto [a, b] : pairs) {
            EXPECT_TRUE(used.insert(a).second);
            EXPECT_TRUE(used.insert(b).second);
            EXPECT_EQ(Geometry({4, 5}).distance(a, b), 1);
        }
    }
    EXPECT_NO_THROW(make_brickwork_2d(3, 3, 4, 0.1, GateFamily::kClifford, 2));
}

TEST(interaction_graph, single_layer_example) {
    CircuitSpec c = chain(4, {{named({0, 1}, "cnot"), named({2, 3}, "cnot")}});
    InteractionGraph g = build_interaction_graph(c);
    EXPECT_EQ(g.num_edges(), 2u);
    EXPECT_TRUE(g.has_edge(g.vertex(0, 0), g.vertex(1, 0)));
    EXPECT_TRUE(g.has_edge(g.vertex(2, 0), g.vertex(3, 0)));
    EXPECT_EQ(boundary_size(g, {0}), 1u);
    EXPECT_EQ(boundary_size(g, {0, 1, 2, 3}), 0u);
    EXPECT_EQ(boundary_size(g, {}), 0u);
}

TEST(interaction_graph, no_gates_no_edges) {
    CircuitSpec c = chain(2, {{}});
    InteractionGraph g = build_interaction_graph(c);
    EXPECT_EQ(g.num_edges(), 0u);
    EXPECT_EQ(graph_distance(g, {0}, {1}), InteractionGraph::kInfinite);
}

TEST(interaction_graph, brickwork_degree_bound) {
    for (int n : {4, 8}) {
        for (int d : {2, 3, 5}) {
            InteractionGraph g = build_interaction_graph(make_brickwork_1d(n, d, 0.1, GateFamily::kHaar, 1));
            EXPECT_LE(g.max_degree(), 4);
        }
    }
    EXPECT_EQ(build_interaction_graph(make_brickwork_1d(8, 4, 0.1, GateFamily::kHaar, 1)).max_degree(), 4);
    EXPECT_LE(build_interaction_graph(make_brickwork_2d(4, 4, 4, 0.1, GateFamily::kHaar, 1)).max_degree(), 8);
}

TEST(interaction_graph, edges_are_symmetric) {
    InteractionGraph g = build_interaction_graph(make_brickwork_2d(3, 4, 3, 0.1, GateFamily::kHaar, 1));
    for (int u = 0; u < g.num_vertices(); ++u) {
        for (int v : g.neighbors(u)) EXPECT_TRUE(g.has_edge(v, u));
    }
}

TEST(graph_distance, matches_bfs_and_adjacency) {
    CircuitSpec c = make_brickwork_1d(8, 2, 0.1, GateFamily::kHaar, 3);
    InteractionGraph g = build_interaction_graph(c);
    int best = InteractionGraph::kInfinite;
    for (int j = 0; j < 2; ++j)
        for (int jj = 0; jj < 2; ++jj) {
            int d = bfs(g, g.vertex(0, j), g.vertex(7, jj));
            if (d >= 0) best = std::min(best, d);
        }
    EXPECT_EQ(graph_distance(g, {0}, {7}), best);
    EXPECT_EQ(graph_distance(g, {0}, {1}), 1);
    EXPECT_THROW(graph_distance(g, {}, {1}), ConfigError);
    EXPECT_THROW(graph_distance(g, {1}, {1}), ConfigError);
}

TEST(graph_distance, metric_properties_on_random_circuits) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 7, d = 3;
        std::vector<Layer> layers(d);
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i + 1 < n; ++i) {
                if (rng() % 2) {
                    layers[j].push_back(named({i, i + 1}, "cz"));
                    ++i;
                }
            }
        }
        InteractionGraph g = build_interaction_graph(chain(n, layers));
        const int nv = g.num_vertices();
        for (int a = 0; a < nv; ++a) {
            EXPECT_EQ(vertex_distance(g, a, a), 0);
            for (int b = 0; b < nv; ++b) {
                int ab = vertex_distance(g, a, b);
                EXPECT_EQ(ab, vertex_distance(g, b, a));
                if (a != b) EXPECT_GT(ab, 0);
                if (ab == InteractionGraph::kInfinite) continue;
                for (int c = 0; c < nv; ++c) {
                    int bc = vertex_distance(g, b, c);
                    if (bc != InteractionGraph::kInfinite) EXPECT_LE(vertex_distance(g, a, c), ab + bc);
                }
            }
        }
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                EXPECT_EQ(graph_distance(g, {a}, {b}), graph_distance(g, {b}, {a}));
            }
        }
    }
}

TEST(graph_distance, brickwork_tracks_site_gap) {
    InteractionGraph g = build_interaction_graph(make_brickwork_1d(10, 4, 0.1, GateFamily::kHaar, 1));
    for (int a = 0; a < 10; ++a) {
        for (int c = a + 1; c < 10; ++c) {
            int dist = graph_distance(g, {a}, {c});
            EXPECT_LE(std::abs(dist - (c - a)), 2) << a << " " << c;
        }
    }
}
