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

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "markovsim/circuit.h"
#include "markovsim/lightcone.h"

namespace markovsim {

using Complex = std::complex<double>;

/// Probability vector over outcome strings of an ordered site list. Index
/// digits are base h with the first site most significant.
struct DistributionTable {
    int h = 2;
    std::vector<int> sites;
    std::vector<double> probs;

    static DistributionTable uniform(int h, std::vector<int> sites);

    size_t size() const { return probs.size(); }
    /// Outcome digits of `index`, one per site.
    std::vector<int> outcome(size_t index) const;
    size_t index_of(std::span<const int> outcome) const;
    /// Marginal on `keep` (any order, all present in `sites`).
    DistributionTable marginal(const std::vector<int> &keep) const;
    double total() const;
};

/// "outcome,probability" lines; outcomes as digit strings ('.'-joined for h > 10).
std::string to_csv(const DistributionTable &table);
std::string outcome_string(std::span<const int> digits, int h);

/// Dense density matrix over an ordered list of sites (first site most significant).
class DensityPatch {
   public:
    /// Empty patch: the scalar 1.
    explicit DensityPatch(int h);
    static DensityPatch zero_state(int h, std::vector<int> sites);

    int h() const { return h_; }
    const std::vector<int> &sites() const { return sites_; }
    size_t dim() const { return dim_; }
    Complex at(size_t row, size_t col) const { return rho_[row * dim_ + col]; }
    Eigen::MatrixXcd matrix() const;
    double trace() const;

    /// rho <- U rho U^dagger on `sites` (gate order = matrix digit order).
    void apply_unitary(const Eigen::MatrixXcd &u, std::span<const int> sites);
    /// rho <- (1 - p) rho + p Tr_site(rho) (x) I / h.
    void depolarize(int site, double p);
    void trace_out(int site);
    void scale(double factor);
    /// rho <- rho (x) local, new site last.
    void append_site(int site, const Eigen::MatrixXcd &local);
    /// rho <- <b| rho |b> on `site` (unnormalized), site removed.
    void project(int site, int outcome);
    int position(int site) const;

   private:
    std::vector<size_t> zero_digit_bases(std::span<const int> positions) const;
    size_t stride(int position) const;

    int h_;
    std::vector<int> sites_;
    size_t dim_ = 1;
    std::vector<Complex> rho_;
};

DensityPatch apply_gate(DensityPatch state, const Eigen::MatrixXcd &u, std::span<const int> sites);
DensityPatch apply_depolarizing(DensityPatch state, int site, double p);

/// Computational-basis diagonal. Negative entries down to -1e-9 are clipped,
/// and the result is renormalized when the sum is within 1e-9 of one;
/// otherwise NormalizationError.
DistributionTable dephase(const DensityPatch &state);

/// Exact output distribution on cone.targets (in that order), simulating only
/// the cone. Sites enter the patch at their first gate and leave after their
/// last one.
DistributionTable run_cone(const CircuitSpec &spec, const LightCone &cone, const SimBudget &budget = {});

/// Output state of the whole circuit before measurement, simulated directly
/// on all n sites.
DensityPatch full_state(const CircuitSpec &spec, const SimBudget &budget = {});

/// Brute-force output distribution over all n sites (site order 0..n-1).
DistributionTable full_distribution(const CircuitSpec &spec, const SimBudget &budget = {});

/// Conditioning events below this probability return a uniform conditional.
inline constexpr double kZeroConditionalFloor = 1e-12;

struct ConditionalResult {
    /// Distribution over the target's h outcomes.
    DistributionTable dist;
    /// Conditioning sites actually used (conditioned sites inside the ball), ascending.
    std::vector<int> used_sites;
    bool zero_conditional = false;
};

/// P(target | conditioned sites within lattice distance `radius` of target).
ConditionalResult conditional_distribution(const CircuitSpec &spec, int target, const std::map<int, int> &conditioned,
                                           int radius, LatticeMetric metric = LatticeMetric::kManhattan,
                                           const SimBudget &budget = {});

}  // namespace markovsim
