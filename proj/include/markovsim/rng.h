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
#include <initializer_list>
#include <random>

namespace markovsim {

/// SplitMix64 finalizer.
uint64_t splitmix64(uint64_t x);

/// Derives an independent stream seed from a master seed and a key path, e.g.
/// (seed, layer, gate) or (seed, shot). Independent of thread scheduling.
uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> keys);

inline std::mt19937_64 make_stream(uint64_t master, std::initializer_list<uint64_t> keys) {
    return std::mt19937_64(derive_seed(master, keys));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace markovsim
