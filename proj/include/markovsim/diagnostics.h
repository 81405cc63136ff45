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
#include <string>
#include <utility>
#include <vector>

#include "markovsim/circuit.h"
#include "markovsim/dense.h"

namespace markovsim {

/// Unnormalized 1-norm sum |p - q|, in [0, 2]. Tables must share the site list.
double tvd(const DistributionTable &p, const DistributionTable &q);

/// Shannon entropy (nats) of the marginal on `sites`.
double entropy(const DistributionTable &p, const std::vector<int> &sites);

/// I(A:C|B) = H(AB) + H(BC) - H(B) - H(ABC) in nats. Negative roundoff down to
/// -1e-9 is clipped to zero.
double cmi(const DistributionTable &p, const std::vector<int> &a, const std::vector<int> &b,
           const std::vector<int> &c);

/// ||P_ABC - P_AB P_C|B||_1. Conditionals on zero-probability b are uniform.
double markov_gap(const DistributionTable &p, const std::vector<int> &a, const std::vector<int> &b,
                  const std::vector<int> &c);

struct TripartitionStats {
    std::vector<int> a, b, c;
    double cmi_nats = 0.0;
    double markov_gap = 0.0;
    double pinsker_rhs = 0.0;
};

TripartitionStats tripartition_stats(const DistributionTable &p, const std::vector<int> &a,
                                     const std::vector<int> &b, const std::vector<int> &c);

struct DecayPoint {
    double distance = 0.0;
    double value = 0.0;
    double stderr_ = 0.0;
};

struct FitOptions {
    /// Points with value <= max(stderr_factor * stderr, floor) are excluded.
    double floor = 1e-3;
    double stderr_factor = 3.0;
};

struct MarkovFit {
    /// +infinity when the fitted slope is not negative.
    double xi = 0.0;
    double prefactor = 0.0;
    double r_squared = 0.0;
    std::vector<DecayPoint> used;
    std::vector<DecayPoint> excluded;
};

/// Least squares of log(value) = log(c) - distance / xi over usable points.
/// Throws InsufficientData with fewer than three usable points.
MarkovFit fit_markov_length(const std::vector<DecayPoint> &points, const FitOptions &options = {});

/// Least-squares slope of y against x.
double least_squares_slope(const std::vector<double> &x, const std::vector<double> &y);

enum class BoundKind { kUniformProp1, kCmiThresholded, kPottsLargeH };
enum class BoundStatus { kOk, kNotApplicable };

struct BoundReport {
    BoundKind kind = BoundKind::kUniformProp1;
    BoundStatus status = BoundStatus::kOk;
    std::vector<std::pair<std::string, double>> inputs;
    double value = 0.0;
    /// Derived quantities (q_c, p', Z bounds, xi_p ...), in emission order.
    std::vector<std::pair<std::string, double>> extras;

    double extra(const std::string &key) const;
};

const char *bound_kind_name(BoundKind kind);

/// Distance to uniform: n (1 - p)^d.
BoundReport bound_uniform(int n, double p, int d);

/// Critical noise parameter q_c = [2 h^k (1 + e(deg - 1)) (2 e (deg + 1))]^-1.
double critical_q(int h, int k, int degree);

/// CMI bound c' / (1 - q/q_c) * min(|dA|, |dC|) * (q/q_c)^l_AC with
/// c' = 4 e deg / (1 + e (deg - 1)). NotApplicable (value NaN) when q >= q_c.
BoundReport bound_cmi_threshold(int h, int k, int degree, double q, int d, size_t boundary_a, size_t boundary_c,
                                int l_ac);

/// Infinite-h limit of the replica Potts model: p' = 2p - p^2, Z1 <= (1 - p')^(d n),
/// Z2 = Z3 = Z4 = 0, Delta Z <= Z1 bound and xi_p = -1 / (area ln(1 - p')).
BoundReport potts_large_h(int n, int d, double p, double area = 1.0);

struct DbarEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    size_t draws = 0;
    /// True when outcomes on B were enumerated, false when sampled.
    bool exact_outcomes = true;
};

/// Monte-Carlo over gate draws of sum_b p_b ||rho_AC|b - rho_A|b (x) rho_C|b||_1.
/// Each draw re-seeds every seeded gate of `circuit` from (seed, draw). B is
/// enumerated when it has at most 12 bits of outcomes, otherwise one b ~ p_b
/// is sampled per draw.
DbarEstimate dbar_haar_mc(const CircuitSpec &circuit, const std::vector<int> &a, const std::vector<int> &b,
                          const std::vector<int> &c, size_t draws, uint64_t seed, int threads = 1,
                          const SimBudget &budget = {});

/// ||rho_AC - rho_A (x) rho_C||_1 for a dense state whose sites are exactly a and c.
double product_distance(const DensityPatch &state, const std::vector<int> &a, const std::vector<int> &c);

}  // namespace markovsim
