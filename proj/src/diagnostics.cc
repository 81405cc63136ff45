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

#include "markovsim/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "markovsim/errors.h"
#include "markovsim/parallel.h"
#include "markovsim/rng.h"

namespace markovsim {

namespace {

void check_disjoint(const std::vector<int> &a, const std::vector<int> &b, const std::vector<int> &c) {
    std::set<int> seen;
    for (const auto *part : {&a, &b, &c}) {
        for (int s : *part) {
            if (!seen.insert(s).second) {
                throw ConfigError("site " + std::to_string(s) + " appears in more than one region");
            }
        }
    }
}

std::vector<int> join(std::initializer_list<const std::vector<int> *> parts) {
    std::vector<int> out;
    for (const auto *p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
}

size_t power(int h, size_t e) {
    size_t out = 1;
    for (size_t i = 0; i < e; ++i) out *= size_t(h);
    return out;
}

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("noise rate must lie in [0, 1]");
    }
}

}  // namespace

double tvd(const DistributionTable &p, const DistributionTable &q) {
    if (p.sites != q.sites || p.h != q.h || p.probs.size() != q.probs.size()) {
        throw ConfigError("tvd needs tables over the same sites");
    }
    double total = 0.0;
    for (size_t i = 0; i < p.probs.size(); ++i) {
        total += std::abs(p.probs[i] - q.probs[i]);
    }
    return total;
}

double entropy(const DistributionTable &p, const std::vector<int> &sites) {
    if (sites.empty()) return 0.0;
    DistributionTable m = p.marginal(sites);
    double h = 0.0;
    for (double v : m.probs) {
        if (v > 0.0) h -= v * std::log(v);
    }
    return h;
}

double cmi(const DistributionTable &p, const std::vector<int> &a, const std::vector<int> &b,
           const std::vector<int> &c) {
    check_disjoint(a, b, c);
    double v = entropy(p, join({&a, &b})) + entropy(p, join({&b, &c})) - entropy(p, b) -
               entropy(p, join({&a, &b, &c}));
    if (v < 0.0 && v >= -1e-9) v = 0.0;
    return v;
}

double markov_gap(const DistributionTable &p, const std::vector<int> &a, const std::vector<int> &b,
                  const std::vector<int> &c) {
    check_disjoint(a, b, c);
    if (a.empty() || c.empty()) return 0.0;
    const DistributionTable abc = p.marginal(join({&a, &b, &c}));
    const size_t na = power(p.h, a.size()), nb = power(p.h, b.size()), nc = power(p.h, c.size());
    std::vector<double> pab(na * nb, 0.0), pbc(nb * nc, 0.0), pb(nb, 0.0);
    for (size_t ia = 0; ia < na; ++ia) {
        for (size_t ib = 0; ib < nb; ++ib) {
            for (size_t ic = 0; ic < nc; ++ic) {
                double v = abc.probs[(ia * nb + ib) * nc + ic];
                pab[ia * nb + ib] += v;
                pbc[ib * nc + ic] += v;
                pb[ib] += v;
            }
        }
    }
    double total = 0.0;
    for (size_t ia = 0; ia < na; ++ia) {
        for (size_t ib = 0; ib < nb; ++ib) {
            for (size_t ic = 0; ic < nc; ++ic) {
                double cond = pb[ib] > 0.0 ? pbc[ib * nc + ic] / pb[ib] : 1.0 / double(nc);
                total += std::abs(abc.probs[(ia * nb + ib) * nc + ic] - pab[ia * nb + ib] * cond);
            }
        }
    }
    return total;
}

TripartitionStats tripartition_stats(const DistributionTable &p, const std::vector<int> &a,
                                     const std::vector<int> &b, const std::vector<int> &c) {
    TripartitionStats s;
    s.a = a;
    s.b = b;
    s.c = c;
    s.cmi_nats = cmi(p, a, b, c);
    s.markov_gap = markov_gap(p, a, b, c);
    s.pinsker_rhs = 2.0 * std::sqrt(std::max(0.0, s.cmi_nats));
    return s;
}

double least_squares_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InsufficientData("slope needs at least two paired points");
    }
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) {
        throw InsufficientData("slope needs at least two distinct x values");
    }
    return sxy / sxx;
}

MarkovFit fit_markov_length(const std::vector<DecayPoint> &points, const FitOptions &options) {
    MarkovFit fit;
    for (const DecayPoint &pt : points) {
        if (pt.value > std::max(options.stderr_factor * pt.stderr_, options.floor)) {
            fit.used.push_back(pt);
        } else {
            fit.excluded.push_back(pt);
        }
    }
    if (fit.used.size() < 3) {
        throw InsufficientData("Markov length fit needs three points above the noise floor, got " +
                               std::to_string(fit.used.size()));
    }
    std::vector<double> x, y;
    for (const DecayPoint &pt : fit.used) {
        x.push_back(pt.distance);
        y.push_back(std::log(pt.value));
    }
    const double slope = least_squares_slope(x, y);
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(x.size());
    const double intercept = my - slope * mx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (intercept + slope * x[i]);
        ss_res += r * r;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    if (ss_tot > 1e-300) {
        fit.r_squared = 1.0 - ss_res / ss_tot;
    } else {
        fit.r_squared = ss_res <= 1e-24 ? 1.0 : 0.0;
    }
    fit.prefactor = std::exp(intercept);
    fit.xi = slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();
    return fit;
}

double BoundReport::extra(const std::string &key) const {
    for (const auto &[k, v] : extras) {
        if (k == key) return v;
    }
    throw ConfigError("bound report has no entry '" + key + "'");
}

const char *bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::kUniformProp1:
            return "uniform_prop1";
        case BoundKind::kCmiThresholded:
            return "cmi_thresholded";
        case BoundKind::kPottsLargeH:
            return "potts_large_h";
    }
    return "unknown";
}

BoundReport bound_uniform(int n, double p, int d) {
    check_probability(p);
    if (n < 0 || d < 0) {
        throw ConfigError("bound_uniform needs n, d >= 0");
    }
    BoundReport r;
    r.kind = BoundKind::kUniformProp1;
    r.inputs = {{"n", n}, {"p", p}, {"d", d}};
    r.value = double(n) * std::pow(1.0 - p, d);
    return r;
}

double critical_q(int h, int k, int degree) {
    if (h < 2 || k < 1 || degree < 1) {
        throw ConfigError("critical_q needs h >= 2, k >= 1 and degree >= 1");
    }
    const double e = std::numbers::e;
    const double hk = std::pow(double(h), k);
    return 1.0 / (2.0 * hk * (1.0 + e * (degree - 1)) * (2.0 * e * (degree + 1)));
}

BoundReport bound_cmi_threshold(int h, int k, int degree, double q, int d, size_t boundary_a, size_t boundary_c,
                                int l_ac) {
    if (!(q >= 0.0 && q <= 1.0) || d < 0 || l_ac < 0) {
        throw ConfigError("bound_cmi_threshold needs q in [0, 1] and d, l_AC >= 0");
    }
    const double e = std::numbers::e;
    const double qc = critical_q(h, k, degree);
    // Prefactor convention: c' = 4 e deg / (1 + e (deg - 1)).
    const double c_prime = 4.0 * e * degree / (1.0 + e * (degree - 1));
    BoundReport r;
    r.kind = BoundKind::kCmiThresholded;
    r.inputs = {{"h", h},
                {"k", k},
                {"degree", degree},
                {"q", q},
                {"d", d},
                {"boundary_a", double(boundary_a)},
                {"boundary_c", double(boundary_c)},
                {"l_ac", l_ac}};
    r.extras = {{"q_c", qc}, {"c_prime", c_prime}, {"ratio", q / qc}};
    if (q >= qc) {
        r.status = BoundStatus::kNotApplicable;
        r.value = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const double ratio = q / qc;
    r.value = c_prime / (1.0 - ratio) * double(std::min(boundary_a, boundary_c)) * std::pow(ratio, l_ac);
    return r;
}

BoundReport potts_large_h(int n, int d, double p, double area) {
    check_probability(p);
    if (n < 0 || d < 0 || !(area > 0.0)) {
        throw ConfigError("potts_large_h needs n, d >= 0 and area > 0");
    }
    const double pp = 2.0 * p - p * p;
    const double z1 = std::pow(1.0 - pp, double(d) * double(n));
    BoundReport r;
    r.kind = BoundKind::kPottsLargeH;
    r.inputs = {{"n", n}, {"d", d}, {"p", p}, {"area", area}};
    r.value = z1;
    const double xi = pp >= 1.0 ? 0.0
                      : pp <= 0.0 ? std::numeric_limits<double>::infinity()
                                  : -1.0 / (area * std::log1p(-pp));
    r.extras = {{"p_prime", pp}, {"z1_bound", z1}, {"z2", 0.0}, {"z3", 0.0}, {"z4", 0.0},
                {"delta_z_bound", z1}, {"xi_p", xi}};
    return r;
}

double product_distance(const DensityPatch &state, const std::vector<int> &a, const std::vector<int> &c) {
    std::vector<int> all = join({&a, &c});
    std::vector<int> sorted_state = state.sites(), sorted_all = all;
    std::sort(sorted_state.begin(), sorted_state.end());
    std::sort(sorted_all.begin(), sorted_all.end());
    if (sorted_state != sorted_all || std::adjacent_find(sorted_all.begin(), sorted_all.end()) != sorted_all.end()) {
        throw ConfigError("product_distance needs a state on exactly the disjoint union of A and C");
    }
    DensityPatch ra = state, rc = state;
    for (int s : c) ra.trace_out(s);
    for (int s : a) rc.trace_out(s);
    const size_t dim = state.dim();
    const int h = state.h();
    const int m = int(state.sites().size());
    // digit weights of each state position inside the reduced index of ra or rc
    std::vector<size_t> wa(m, 0), wc(m, 0);
    for (int pos = 0; pos < m; ++pos) {
        int s = state.sites()[pos];
        bool in_a = std::find(a.begin(), a.end(), s) != a.end();
        const DensityPatch &part = in_a ? ra : rc;
        int ppos = part.position(s);
        size_t w = 1;
        for (int j = int(part.sites().size()) - 1; j > ppos; --j) w *= size_t(h);
        (in_a ? wa : wc)[pos] = w;
    }
    std::vector<size_t> ia(dim, 0), ic(dim, 0);
    for (size_t x = 0; x < dim; ++x) {
        size_t rest = x;
        for (int pos = m - 1; pos >= 0; --pos) {
            size_t digit = rest % size_t(h);
            rest /= size_t(h);
            ia[x] += digit * wa[pos];
            ic[x] += digit * wc[pos];
        }
    }
    Eigen::MatrixXcd diff(dim, dim);
    for (size_t r = 0; r < dim; ++r) {
        for (size_t s = 0; s < dim; ++s) {
            diff(long(r), long(s)) = state.at(r, s) - ra.at(ia[r], ia[s]) * rc.at(ic[r], ic[s]);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalue solver failed in product_distance");
    }
    return solver.eigenvalues().cwiseAbs().sum();
}

DbarEstimate dbar_haar_mc(const CircuitSpec &circuit, const std::vector<int> &a, const std::vector<int> &b,
                          const std::vector<int> &c, size_t draws, uint64_t seed, int threads,
                          const SimBudget &budget) {
    check_disjoint(a, b, c);
    if (draws == 0) {
        throw ConfigError("dbar_haar_mc needs at least one draw");
    }
    for (int s : join({&a, &b, &c})) {
        if (s < 0 || s >= circuit.n()) {
            throw ConfigError("site " + std::to_string(s) + " out of range");
        }
    }
    const bool enumerate = double(b.size()) * std::log2(double(circuit.h())) <= 12.0;
    const std::vector<int> abc = join({&a, &b, &c});
    std::vector<double> values(draws, 0.0);
    parallel_for(draws, threads, [&](size_t t) {
        const uint64_t draw_seed = derive_seed(seed, {uint64_t(t)});
        DensityPatch rho = full_state(circuit.reseeded(draw_seed), budget);
        for (int s = 0; s < circuit.n(); ++s) {
            if (std::find(abc.begin(), abc.end(), s) == abc.end()) rho.trace_out(s);
        }
        if (enumerate) {
            const size_t count = power(circuit.h(), b.size());
            double total = 0.0;
            for (size_t x = 0; x < count; ++x) {
                DensityPatch cond = rho;
                size_t rest = x;
                for (size_t i = b.size(); i-- > 0;) {
                    cond.project(b[i], int(rest % size_t(circuit.h())));
                    rest /= size_t(circuit.h());
                }
                const double weight = cond.trace();
                if (weight <= 1e-14) continue;
                cond.scale(1.0 / weight);
                total += weight * product_distance(cond, a, c);
            }
            values[t] = total;
        } else {
            std::mt19937_64 rng = make_stream(seed, {uint64_t(t), 1});
            DensityPatch cond = rho;
            for (int s : b) {
                const double norm = cond.trace();
                std::vector<double> probs(size_t(circuit.h()));
                for (int o = 0; o < circuit.h(); ++o) {
                    DensityPatch trial = cond;
                    trial.project(s, o);
                    probs[size_t(o)] = std::max(0.0, trial.trace()) / norm;
                }
                double u = uniform01(rng), acc = 0.0;
                int pick = circuit.h() - 1;
                for (int o = 0; o < circuit.h(); ++o) {
                    acc += probs[size_t(o)];
                    if (u < acc) {
                        pick = o;
                        break;
                    }
                }
                cond.project(s, pick);
            }
            cond.scale(1.0 / cond.trace());
            values[t] = product_distance(cond, a, c);
        }
    });
    DbarEstimate est;
    est.draws = draws;
    est.exact_outcomes = enumerate;
    double s1 = 0.0;
    for (double v : values) s1 += v;
    est.mean = s1 / double(draws);
    if (draws > 1) {
        double s2 = 0.0;
        for (double v : values) s2 += (v - est.mean) * (v - est.mean);
        est.stderr_ = std::sqrt(s2 / double(draws - 1) / double(draws));
    }
    return est;
}

}  // namespace markovsim
