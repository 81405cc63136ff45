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

#include "markovsim/circuit_io.h"

#include <fstream>
#include <sstream>

#include "markovsim/errors.h"

namespace markovsim {

using nlohmann::json;

namespace {

GateKind parse_kind(const std::string &kind) {
    if (kind == "named") return GateKind::kNamed;
    if (kind == "matrix") return GateKind::kMatrix;
    if (kind == "haar") return GateKind::kHaar;
    if (kind == "clifford") return GateKind::kClifford;
    throw ConfigError("unknown gate kind '" + kind + "'");
}

const char *kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::kNamed:
            return "named";
        case GateKind::kMatrix:
            return "matrix";
        case GateKind::kHaar:
            return "haar";
        case GateKind::kClifford:
            return "clifford";
    }
    return "named";
}

Eigen::MatrixXcd parse_matrix(const json &rows) {
    if (!rows.is_array() || rows.empty()) {
        throw ConfigError("matrix must be a nonempty array of rows");
    }
    const Eigen::Index dim = Eigen::Index(rows.size());
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const json &row = rows[size_t(r)];
        if (!row.is_array() || Eigen::Index(row.size()) != dim) {
            throw ConfigError("matrix must be square");
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            const json &e = row[size_t(c)];
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else if (e.is_array() && e.size() == 2) {
                m(r, c) = {e[0].get<double>(), e[1].get<double>()};
            } else {
                throw ConfigError("matrix entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

}  // namespace

CircuitSpec circuit_from_json(const json &doc) {
    try {
        if (!doc.is_object()) {
            throw ConfigError("circuit description must be a JSON object");
        }
        int h = doc.value("h", 2);
        std::vector<int> extents;
        if (doc.contains("geometry")) {
            extents = doc.at("geometry").get<std::vector<int>>();
        } else if (doc.contains("n")) {
            extents = {doc.at("n").get<int>()};
        } else {
            throw ConfigError("circuit needs 'geometry' or 'n'");
        }
        Geometry geometry(extents);
        if (doc.contains("n") && doc.at("n").get<int>() != geometry.num_sites()) {
            throw ConfigError("'n' does not match the geometry");
        }
        uint64_t seed = doc.value("seed", uint64_t{0});
        int k_max = doc.value("k_max", 2);

        std::vector<Layer> layers;
        for (const json &jl : doc.value("layers", json::array())) {
            Layer layer;
            for (const json &jg : jl) {
                Gate g;
                g.sites = jg.at("sites").get<std::vector<int>>();
                g.kind = parse_kind(jg.value("kind", std::string("named")));
                if (g.kind == GateKind::kNamed) {
                    g.name = jg.at("name").get<std::string>();
                }
                if (g.kind == GateKind::kMatrix) {
                    g.matrix = parse_matrix(jg.at("matrix"));
                }
                if (jg.contains("seed")) {
                    g.seed = jg.at("seed").get<uint64_t>();
                }
                layer.push_back(std::move(g));
            }
            layers.push_back(std::move(layer));
        }

        const int n = geometry.num_sites();
        const int depth = int(layers.size());
        std::vector<std::vector<double>> noise = CircuitSpec::uniform_noise(n, depth, 0.0);
        if (doc.contains("noise")) {
            const json &jn = doc.at("noise");
            if (jn.contains("uniform")) {
                noise = CircuitSpec::uniform_noise(n, depth, jn.at("uniform").get<double>());
            } else if (jn.contains("table")) {
                noise = jn.at("table").get<std::vector<std::vector<double>>>();
            } else {
                throw ConfigError("noise must contain 'uniform' or 'table'");
            }
        }
        return CircuitSpec(h, std::move(geometry), std::move(layers), std::move(noise), seed, k_max);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed circuit description: ") + e.what());
    }
}

json circuit_to_json(const CircuitSpec &spec) {
    json doc;
    doc["n"] = spec.n();
    doc["h"] = spec.h();
    doc["geometry"] = spec.geometry().extents();
    doc["seed"] = spec.seed();
    doc["k_max"] = spec.k_max();
    json layers = json::array();
    for (const Layer &layer : spec.layers()) {
        json jl = json::array();
        for (const Gate &g : layer) {
            json jg;
            jg["sites"] = g.sites;
            jg["kind"] = kind_name(g.kind);
            if (g.kind == GateKind::kNamed) {
                jg["name"] = g.name;
            }
            if (g.kind == GateKind::kMatrix) {
                json rows = json::array();
                for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
                    json row = json::array();
                    for (Eigen::Index c = 0; c < g.matrix.cols(); ++c) {
                        row.push_back({g.matrix(r, c).real(), g.matrix(r, c).imag()});
                    }
                    rows.push_back(row);
                }
                jg["matrix"] = rows;
            }
            if (g.seed) {
                jg["seed"] = *g.seed;
            }
            jl.push_back(jg);
        }
        layers.push_back(jl);
    }
    doc["layers"] = layers;
    if (auto p = spec.uniform_rate()) {
        doc["noise"] = {{"uniform", *p}};
    } else if (spec.depth() == 0) {
        doc["noise"] = {{"uniform", 0.0}};
    } else {
        doc["noise"] = {{"table", spec.noise_table()}};
    }
    return doc;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CircuitSpec load_circuit(const std::string &path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception &e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
    return circuit_from_json(doc);
}

}  // namespace markovsim
