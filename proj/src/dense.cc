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

#include "markovsim/dense.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "markovsim/errors.h"

namespace markovsim {

namespace {

size_t ipow(size_t base, size_t exp) {
    size_t r = 1;
    for (size_t i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

}  // namespace

DistributionTable DistributionTable::uniform(int h, std::vector<int> sites) {
    DistributionTable t;
    t.h = h;
    t.sites = std::move(sites);
    size_t size = ipow(size_t(h), t.sites.size());
    t.probs.assign(size, 1.0 / double(size));
    return t;
}

std::vector<int> DistributionTable::outcome(size_t index) const {
    std::vector<int> digits(sites.size());
    for (size_t k = sites.size(); k-- > 0;) {
        digits[k] = int(index % size_t(h));
        index /= size_t(h);
    }
    return digits;
}

size_t DistributionTable::index_of(std::span<const int> outcome) const {
    size_t index = 0;
    for (int d : outcome) {
        index = index * size_t(h) + size_t(d);
    }
    return index;
}

DistributionTable DistributionTable::marginal(const std::vector<int> &keep) const {
    std::vector<size_t> pos;
    for (int s : keep) {
        auto it = std::find(sites.begin(), sites.end(), s);
        if (it == sites.end()) {
            throw ConfigError("marginal site " + std::to_string(s) + " not in table");
        }
        if (std::find(pos.begin(), pos.end(), size_t(it - sites.begin())) != pos.end()) {
            throw ConfigError("marginal site " + std::to_string(s) + " repeated");
        }
        pos.push_back(size_t(it - sites.begin()));
    }
    DistributionTable out;
    out.h = h;
    out.sites = keep;
    out.probs.assign(ipow(size_t(h), keep.size()), 0.0);
    std::vector<int> digits(sites.size());
    for (size_t i = 0; i < probs.size(); ++i) {
        size_t rest = i;
        for (size_t k = sites.size(); k-- > 0;) {
            digits[k] = int(rest % size_t(h));
            rest /= size_t(h);
        }
        size_t j = 0;
        for (size_t p : pos) {
            j = j * size_t(h) + size_t(digits[p]);
        }
        out.probs[j] += probs[i];
    }
    return out;
}

double DistributionTable::total() const {
    double s = 0.0;
    for (double p : probs) {
        s += p;
    }
    return s;
}

std::string outcome_string(std::span<const int> digits, int h) {
    std::string s;
    for (size_t k = 0; k < digits.size(); ++k) {
        if (h <= 10) {
            s += char('0' + digits[k]);
        } else {
            if (k) s += '.';
            s += std::to_string(digits[k]);
        }
    }
    return s;
}

std::string to_csv(const DistributionTable &table) {
    std::ostringstream out;
    out.precision(17);
    out << "outcome,probability\n";
    for (size_t i = 0; i < table.size(); ++i) {
        out << outcome_string(table.outcome(i), table.h) << ',' << table.probs[i] << '\n';
    }
    return out.str();
}

DensityPatch::DensityPatch(int h) : h_(h), rho_{Complex(1.0)} {
    if (h < 2) {
        throw ConfigError("local dimension must be at least 2");
    }
}

DensityPatch DensityPatch::zero_state(int h, std::vector<int> sites) {
    DensityPatch p(h);
    p.sites_ = std::move(sites);
    p.dim_ = ipow(size_t(h), p.sites_.size());
    p.rho_.assign(p.dim_ * p.dim_, Complex(0.0));
    p.rho_[0] = 1.0;
    return p;
}

Eigen::MatrixXcd DensityPatch::matrix() const {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (size_t r = 0; r < dim_; ++r) {
        for (size_t c = 0; c < dim_; ++c) {
            m(Eigen::Index(r), Eigen::Index(c)) = rho_[r * dim_ + c];
        }
    }
    return m;
}

double DensityPatch::trace() const {
    double t = 0.0;
    for (size_t i = 0; i < dim_; ++i) {
        t += rho_[i * dim_ + i].real();
    }
    return t;
}

int DensityPatch::position(int site) const {
    auto it = std::find(sites_.begin(), sites_.end(), site);
    if (it == sites_.end()) {
        throw ConfigError("site " + std::to_string(site) + " is not in the patch");
    }
    return int(it - sites_.begin());
}

size_t DensityPatch::stride(int position) const {
    return ipow(size_t(h_), sites_.size() - 1 - size_t(position));
}

std::vector<size_t> DensityPatch::zero_digit_bases(std::span<const int> positions) const {
    std::vector<size_t> strides;
    for (int p : positions) {
        strides.push_back(stride(p));
    }
    std::vector<size_t> bases;
    bases.reserve(dim_ / ipow(size_t(h_), positions.size()));
    for (size_t i = 0; i < dim_; ++i) {
        bool zero = true;
        for (size_t s : strides) {
            if ((i / s) % size_t(h_) != 0) {
                zero = false;
                break;
            }
        }
        if (zero) {
            bases.push_back(i);
        }
    }
    return bases;
}

void DensityPatch::apply_unitary(const Eigen::MatrixXcd &u, std::span<const int> sites) {
    const size_t k = sites.size();
    const size_t local = ipow(size_t(h_), k);
    if (size_t(u.rows()) != local || size_t(u.cols()) != local) {
        throw ConfigError("gate matrix dimension does not match its support");
    }
    std::vector<int> pos;
    for (int s : sites) {
        pos.push_back(position(s));
    }
    std::vector<size_t> offsets(local, 0);
    for (size_t a = 0; a < local; ++a) {
        size_t rest = a;
        for (size_t t = k; t-- > 0;) {
            offsets[a] += (rest % size_t(h_)) * stride(pos[t]);
            rest /= size_t(h_);
        }
    }
    const std::vector<size_t> bases = zero_digit_bases(pos);
    std::vector<Complex> in(local), out(local);
    // Rows: rho <- U rho.
    for (size_t r0 : bases) {
        for (size_t c = 0; c < dim_; ++c) {
            for (size_t a = 0; a < local; ++a) {
                in[a] = rho_[(r0 + offsets[a]) * dim_ + c];
            }
            for (size_t a = 0; a < local; ++a) {
                Complex acc = 0.0;
                for (size_t b = 0; b < local; ++b) {
                    acc += u(Eigen::Index(a), Eigen::Index(b)) * in[b];
                }
                out[a] = acc;
            }
            for (size_t a = 0; a < local; ++a) {
                rho_[(r0 + offsets[a]) * dim_ + c] = out[a];
            }
        }
    }
    // Columns: rho <- rho U^dagger.
    for (size_t r = 0; r < dim_; ++r) {
        Complex *row = &rho_[r * dim_];
        for (size_t c0 : bases) {
            for (size_t a = 0; a < local; ++a) {
                in[a] = row[c0 + offsets[a]];
            }
            for (size_t a = 0; a < local; ++a) {
                Complex acc = 0.0;
                for (size_t b = 0; b < local; ++b) {
                    acc += in[b] * std::conj(u(Eigen::Index(a), Eigen::Index(b)));
                }
                out[a] = acc;
            }
            for (size_t a = 0; a < local; ++a) {
                row[c0 + offsets[a]] = out[a];
            }
        }
    }
}

void DensityPatch::depolarize(int site, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("depolarizing rate outside [0,1]");
    }
    if (p == 0.0) {
        return;
    }
    int pos[1] = {position(site)};
    const size_t st = stride(pos[0]);
    const size_t h = size_t(h_);
    const std::vector<size_t> bases = zero_digit_bases(pos);
    for (size_t r0 : bases) {
        for (size_t c0 : bases) {
            Complex tr = 0.0;
            for (size_t a = 0; a < h; ++a) {
                tr += rho_[(r0 + a * st) * dim_ + c0 + a * st];
            }
            for (size_t a = 0; a < h; ++a) {
                for (size_t b = 0; b < h; ++b) {
                    Complex &e = rho_[(r0 + a * st) * dim_ + c0 + b * st];
                    e *= (1.0 - p);
                    if (a == b) {
                        e += p * tr / double(h);
                    }
                }
            }
        }
    }
}

void DensityPatch::scale(double factor) {
    for (Complex &v : rho_) v *= factor;
}

void DensityPatch::trace_out(int site) {
    int pos[1] = {position(site)};
    const size_t st = stride(pos[0]);
    const std::vector<size_t> bases = zero_digit_bases(pos);
    const size_t nd = bases.size();
    std::vector<Complex> next(nd * nd, Complex(0.0));
    for (size_t i = 0; i < nd; ++i) {
        for (size_t j = 0; j < nd; ++j) {
            Complex acc = 0.0;
            for (size_t a = 0; a < size_t(h_); ++a) {
                acc += rho_[(bases[i] + a * st) * dim_ + bases[j] + a * st];
            }
            next[i * nd + j] = acc;
        }
    }
    rho_ = std::move(next);
    dim_ = nd;
    sites_.erase(sites_.begin() + pos[0]);
}

void DensityPatch::project(int site, int outcome) {
    if (outcome < 0 || outcome >= h_) {
        throw ConfigError("outcome out of range");
    }
    int pos[1] = {position(site)};
    const size_t shift = size_t(outcome) * stride(pos[0]);
    const std::vector<size_t> bases = zero_digit_bases(pos);
    const size_t nd = bases.size();
    std::vector<Complex> next(nd * nd);
    for (size_t i = 0; i < nd; ++i) {
        for (size_t j = 0; j < nd; ++j) {
            next[i * nd + j] = rho_[(bases[i] + shift) * dim_ + bases[j] + shift];
        }
    }
    rho_ = std::move(next);
    dim_ = nd;
    sites_.erase(sites_.begin() + pos[0]);
}

void DensityPatch::append_site(int site, const Eigen::MatrixXcd &local) {
    const size_t h = size_t(h_);
    if (size_t(local.rows()) != h || size_t(local.cols()) != h) {
        throw ConfigError("appended site state must be h x h");
    }
    if (std::find(sites_.begin(), sites_.end(), site) != sites_.end()) {
        throw ConfigError("site " + std::to_string(site) + " already in the patch");
    }
    const size_t nd = dim_ * h;
    std::vector<Complex> next(nd * nd);
    for (size_t r = 0; r < dim_; ++r) {
        for (size_t c = 0; c < dim_; ++c) {
            const Complex v = rho_[r * dim_ + c];
            for (size_t a = 0; a < h; ++a) {
                for (size_t b = 0; b < h; ++b) {
                    next[(r * h + a) * nd + c * h + b] = v * local(Eigen::Index(a), Eigen::Index(b));
                }
            }
        }
    }
    rho_ = std::move(next);
    dim_ = nd;
    sites_.push_back(site);
}

DensityPatch apply_gate(DensityPatch state, const Eigen::MatrixXcd &u, std::span<const int> sites) {
    state.apply_unitary(u, sites);
    return state;
}

DensityPatch apply_depolarizing(DensityPatch state, int site, double p) {
    state.depolarize(site, p);
    return state;
}

DistributionTable dephase(const DensityPatch &state) {
    DistributionTable t;
    t.h = state.h();
    t.sites = state.sites();
    t.probs.resize(state.dim());
    double sum = 0.0;
    for (size_t i = 0; i < state.dim(); ++i) {
        double v = state.at(i, i).real();
        if (v < -1e-9) {
            throw NormalizationError("diagonal entry " + std::to_string(v) + " is negative beyond roundoff");
        }
        v = std::max(v, 0.0);
        t.probs[i] = v;
        sum += v;
    }
    if (std::abs(1.0 - sum) > 1e-9) {
        throw NormalizationError("diagonal sums to " + std::to_string(sum));
    }
    for (double &p : t.probs) {
        p /= sum;
    }
    return t;
}

namespace {

// lambda |0><0| + (1 - lambda) I / h
Eigen::MatrixXcd partially_mixed_zero(int h, double lambda) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(h, h) * ((1.0 - lambda) / double(h));
    m(0, 0) += lambda;
    return m;
}

}  // namespace

DistributionTable run_cone(const CircuitSpec &spec, const LightCone &cone, const SimBudget &budget) {
    check_budget(cone_cost(cone, spec.h()), budget, "light-cone patch");
    const int n = spec.n();
    const int depth = spec.depth();
    std::vector<char> is_target(n, 0);
    for (int t : cone.targets) {
        is_target[t] = 1;
    }
    std::vector<int> last_gate_layer(n, -1);
    for (int j = 0; j < depth; ++j) {
        for (int g : cone.gates[j]) {
            for (int s : spec.layers()[j][g].sites) {
                last_gate_layer[s] = j;
            }
        }
    }
    std::vector<double> survive(n, 1.0);
    std::vector<char> live(n, 0);
    DensityPatch patch(spec.h());
    for (int j = 0; j < depth; ++j) {
        for (int g : cone.gates[j]) {
            const Gate &gate = spec.layers()[j][g];
            for (int s : gate.sites) {
                if (!live[s]) {
                    patch.append_site(s, partially_mixed_zero(spec.h(), survive[s]));
                    live[s] = 1;
                }
            }
            patch.apply_unitary(spec.unitary(j, g), gate.sites);
        }
        for (int s : std::vector<int>(patch.sites())) {
            if (!is_target[s] && last_gate_layer[s] == j) {
                patch.trace_out(s);
                live[s] = 0;
            }
        }
        for (int s : patch.sites()) {
            patch.depolarize(s, spec.noise(s, j));
        }
        for (int s : cone.initial_sites()) {
            if (!live[s]) {
                survive[s] *= 1.0 - spec.noise(s, j);
            }
        }
    }
    for (int s : cone.targets) {
        if (!live[s]) {
            patch.append_site(s, partially_mixed_zero(spec.h(), survive[s]));
            live[s] = 1;
        }
    }
    return dephase(patch).marginal(cone.targets);
}

DensityPatch full_state(const CircuitSpec &spec, const SimBudget &budget) {
    const int n = spec.n();
    check_budget(2.0 * double(n) * std::log2(double(spec.h())), budget, "full-system density matrix");
    std::vector<int> sites(n);
    for (int i = 0; i < n; ++i) {
        sites[i] = i;
    }
    DensityPatch state = DensityPatch::zero_state(spec.h(), sites);
    for (int j = 0; j < spec.depth(); ++j) {
        const Layer &layer = spec.layers()[j];
        for (int g = 0; g < int(layer.size()); ++g) {
            state.apply_unitary(spec.unitary(j, g), layer[g].sites);
        }
        for (int s = 0; s < n; ++s) {
            state.depolarize(s, spec.noise(s, j));
        }
    }
    return state;
}

DistributionTable full_distribution(const CircuitSpec &spec, const SimBudget &budget) {
    return dephase(full_state(spec, budget));
}

ConditionalResult conditional_distribution(const CircuitSpec &spec, int target, const std::map<int, int> &conditioned,
                                           int radius, LatticeMetric metric, const SimBudget &budget) {
    if (target < 0 || target >= spec.n()) {
        throw ConfigError("target site out of range");
    }
    if (conditioned.count(target)) {
        throw ConfigError("target site is already assigned");
    }
    ConditionalResult result;
    std::vector<int> outcome;
    for (auto [site, value] : conditioned) {
        if (site < 0 || site >= spec.n() || value < 0 || value >= spec.h()) {
            throw ConfigError("conditioning assignment out of range");
        }
        if (spec.geometry().distance(target, site, metric) <= radius) {
            result.used_sites.push_back(site);
            outcome.push_back(value);
        }
    }
    std::vector<int> sites = result.used_sites;
    sites.push_back(target);
    DistributionTable joint = run_cone(spec, backward_cone(spec, sites), budget);
    const size_t h = size_t(spec.h());
    const size_t base = joint.index_of(outcome) * h;
    result.dist.h = spec.h();
    result.dist.sites = {target};
    result.dist.probs.assign(joint.probs.begin() + long(base), joint.probs.begin() + long(base + h));
    double mass = result.dist.total();
    if (mass < kZeroConditionalFloor) {
        result.dist = DistributionTable::uniform(spec.h(), {target});
        result.zero_conditional = true;
    } else {
        for (double &p : result.dist.probs) {
            p /= mass;
        }
    }
    return result;
}

}  // namespace markovsim
