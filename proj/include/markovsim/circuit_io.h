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

#include <string>

#include "json.hpp"
#include "markovsim/circuit.h"

namespace markovsim {

/// Circuit description format (JSON):
///
///   {"n": 4, "h": 2, "geometry": [4], "seed": 7, "k_max": 2,
///    "layers": [[{"sites": [0, 1], "kind": "haar"},
///                {"sites": [2, 3], "kind": "named", "name": "cshift"}], ...],
///    "noise": {"uniform": 0.1}}
///
/// `kind` is one of named | matrix | haar | clifford. Matrix gates carry
/// "matrix": rows of [re, im] pairs (or plain reals). The noise entry may
/// instead be {"table": [[p per site] per layer]}. `n` is optional when it
/// matches the geometry.
CircuitSpec circuit_from_json(const nlohmann::json &doc);

nlohmann::json circuit_to_json(const CircuitSpec &spec);

CircuitSpec load_circuit(const std::string &path);

std::string read_text_file(const std::string &path);

}  // namespace markovsim
