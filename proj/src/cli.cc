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

#include "markovsim/cli.h"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "markovsim/circuit.h"
#include "markovsim/circuit_io.h"
#include "markovsim/clifford_dbar.h"
#include "markovsim/dense.h"
#include "markovsim/diagnostics.h"
#include "markovsim/errors.h"
#include "markovsim/parallel.h"
#include "markovsim/rng.h"
#include "markovsim/sampler.h"

namespace markovsim::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Bound reports use fixed notation so that rounded hand values are visible.
std::string fmt_fixed(double v) {
    if (std::isnan(v) || std::isinf(v)) return fmt(v);
    char buf[64];
    if (v == 0.0 || std::abs(v) >= 1e-3) {
        std::snprintf(buf, sizeof buf, "%.12f", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.12e", v);
    }
    return buf;
}

std::string join_ints(const std::vector<int> &v, const char *sep = " ") {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_doubles(const std::vector<double> &v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += fmt(v[i]);
    }
    return out;
}

template <typename T>
T get(const json &cfg, const std::string &pointer, T fallback) {
    const json::json_pointer ptr(pointer);
    if (!cfg.contains(ptr)) return fallback;
    try {
        return cfg.at(ptr).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError("config entry " + pointer + ": " + e.what());
    }
}

bool has(const json &cfg, const std::string &pointer) { return cfg.contains(json::json_pointer(pointer)); }

std::vector<int> range(int lo, int hi) {
    std::vector<int> out;
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
}

struct Context {
    json cfg;
    uint64_t seed = 0;
    int threads = 1;
    SimBudget budget;
    std::string circuit_hash = "none";
    std::vector<std::string> notes;
};

struct Circuit {
    CircuitSpec spec;
    std::string text;
};

GateFamily parse_family(const std::string &name) {
    if (name == "haar") return GateFamily::kHaar;
    if (name == "clifford") return GateFamily::kClifford;
    throw ConfigError("unknown gate family '" + name + "' (expected haar or clifford)");
}

Circuit load_or_generate(Context &ctx) {
    const json &cfg = ctx.cfg;
    if (has(cfg, "/circuit")) {
        const std::string path = get<std::string>(cfg, "/circuit", "");
        std::string text = read_text_file(path);
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception &e) {
            throw ConfigError("circuit file " + path + ": " + e.what());
        }
        Circuit c{circuit_from_json(doc), text};
        ctx.circuit_hash = git_blob_sha1(c.text);
        return c;
    }
    const std::string kind = get<std::string>(cfg, "/generator/kind", "brickwork1d");
    const int depth = get<int>(cfg, "/generator/depth", 2);
    const double p = get<double>(cfg, "/generator/p", 0.1);
    const int h = get<int>(cfg, "/generator/h", 2);
    const GateFamily family = parse_family(get<std::string>(cfg, "/generator/family", "haar"));
    const uint64_t gseed = get<uint64_t>(cfg, "/generator/seed", ctx.seed);
    std::optional<CircuitSpec> spec;
    if (kind == "brickwork1d") {
        spec.emplace(make_brickwork_1d(get<int>(cfg, "/generator/n", 8), depth, p, family, gseed, h));
    } else if (kind == "brickwork2d") {
        const int rows = get<int>(cfg, "/generator/rows", 3);
        spec.emplace(make_brickwork_2d(rows, get<int>(cfg, "/generator/cols", rows), depth, p, family, gseed, h));
        ctx.notes.push_back("boundary: open");
    } else {
        throw ConfigError("unknown generator kind '" + kind + "' (expected brickwork1d or brickwork2d)");
    }
    Circuit c{*spec, circuit_to_json(*spec).dump()};
    ctx.circuit_hash = git_blob_sha1(c.text);
    return c;
}

std::vector<int> read_order(const Context &ctx, const CircuitSpec &spec) {
    const json &cfg = ctx.cfg;
    if (!has(cfg, "/order")) return default_order(spec);
    const json &o = cfg.at("order");
    if (o.is_string()) {
        if (o.get<std::string>() == "raster") return default_order(spec);
        throw ConfigError("order must be \"raster\" or a list of sites");
    }
    return get<std::vector<int>>(cfg, "/order", {});
}

SamplerOptions sampler_options(const Context &ctx) {
    SamplerOptions o;
    o.budget = ctx.budget;
    o.threads = ctx.threads;
    const std::string metric = get<std::string>(ctx.cfg, "/metric", "manhattan");
    if (metric == "manhattan") {
        o.metric = LatticeMetric::kManhattan;
    } else if (metric == "chebyshev") {
        o.metric = LatticeMetric::kChebyshev;
    } else {
        throw ConfigError("metric must be manhattan or chebyshev");
    }
    return o;
}

struct Table {
    std::string schema;
    std::vector<std::string> comments;
    std::string body;
};

Table cmd_sample(Context &ctx) {
    Circuit c = load_or_generate(ctx);
    const CircuitSpec &spec = c.spec;
    const SamplerOptions options = sampler_options(ctx);
    const std::vector<int> order = read_order(ctx, spec);
    int radius = spec.geometry().diameter(options.metric);
    if (has(ctx.cfg, "/radius")) {
        radius = get<int>(ctx.cfg, "/radius", radius);
    } else if (has(ctx.cfg, "/xi")) {
        radius = suggested_radius(get<double>(ctx.cfg, "/xi", 1.0), spec.n(), get<double>(ctx.cfg, "/c", 1.0),
                                  get<double>(ctx.cfg, "/eps", 0.01));
    }
    const size_t shots = get<size_t>(ctx.cfg, "/shots", 1);
    const bool trace = get<bool>(ctx.cfg, "/trace", false);
    std::vector<SampleTrace> traces(shots);
    SamplerOptions inner = options;
    inner.threads = 1;
    parallel_for(shots, ctx.threads, [&](size_t s) {
        traces[s] = sample(spec, radius, order, derive_seed(ctx.seed, {uint64_t(s)}), inner);
    });
    Table t;
    t.comments.push_back("radius: " + std::to_string(radius));
    std::ostringstream body;
    if (trace) {
        t.schema = "markovsim.sample-trace/1";
        body << "shot,step,site,conditioned_sites,conditioned_values,conditional,draw,outcome,zero_conditional\n";
        for (size_t s = 0; s < shots; ++s) {
            for (size_t k = 0; k < traces[s].steps.size(); ++k) {
                const SampleStep &st = traces[s].steps[k];
                body << s << ',' << k << ',' << st.site << ',' << join_ints(st.conditioned_sites) << ','
                     << join_ints(st.conditioned_values) << ',' << join_doubles(st.conditional) << ','
                     << fmt(st.draw) << ',' << st.outcome << ',' << int(st.zero_conditional) << '\n';
            }
        }
    } else {
        t.schema = "markovsim.sample/1";
        body << "shot,outcome,zero_conditionals\n";
        for (size_t s = 0; s < shots; ++s) {
            body << s << ',' << outcome_string(traces[s].outcomes, spec.h()) << ','
                 << traces[s].num_zero_conditionals() << '\n';
        }
    }
    t.body = body.str();
    return t;
}

Table cmd_oracle(Context &ctx) {
    Circuit c = load_or_generate(ctx);
    const DistributionTable p = full_distribution(c.spec, ctx.budget);
    const DistributionTable u = DistributionTable::uniform(p.h, p.sites);
    Table t;
    t.schema = "markovsim.oracle/1";
    t.comments.push_back("tvd_to_uniform: " + fmt(tvd(p, u)));
    if (auto rate = c.spec.uniform_rate()) {
        t.comments.push_back("prop1_bound: " + fmt(bound_uniform(c.spec.n(), *rate, c.spec.depth()).value));
    }
    t.body = to_csv(p);
    return t;
}

Table cmd_markov_scan(Context &ctx) {
    Circuit c = load_or_generate(ctx);
    const SamplerOptions options = sampler_options(ctx);
    const std::vector<int> radii =
        get<std::vector<int>>(ctx.cfg, "/radii", range(0, c.spec.geometry().diameter(options.metric)));
    const size_t trials = get<size_t>(ctx.cfg, "/trials", 2000);
    const std::vector<ScanRow> rows = markov_scan(c.spec, radii, read_order(ctx, c.spec), trials, ctx.seed, options);
    Table t;
    t.schema = "markovsim.markov-scan/1";
    std::ostringstream body;
    body << "radius,tvd,stderr,exact,trials,reference_radius\n";
    for (const ScanRow &r : rows) {
        body << r.radius << ',' << fmt(r.tvd) << ',' << fmt(r.stderr_) << ',' << int(r.exact) << ',' << r.trials << ','
             << r.reference_radius << '\n';
    }
    t.body = body.str();
    return t;
}

Table cmd_cmi(Context &ctx) {
    Circuit c = load_or_generate(ctx);
    const DistributionTable p = full_distribution(c.spec, ctx.budget);
    const int n = c.spec.n();
    std::vector<std::array<std::vector<int>, 3>> parts;
    if (has(ctx.cfg, "/a") || has(ctx.cfg, "/c")) {
        parts.push_back({get<std::vector<int>>(ctx.cfg, "/a", {}), get<std::vector<int>>(ctx.cfg, "/b", {}),
                         get<std::vector<int>>(ctx.cfg, "/c", {})});
    } else {
        // Contiguous raster splits A = [0, i), B = [i, j), C = [j, n).
        for (int i = 1; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                parts.push_back({range(0, i - 1), range(i, j - 1), range(j, n - 1)});
            }
        }
    }
    const size_t random_count = get<size_t>(ctx.cfg, "/random_tripartitions", 0);
    std::mt19937_64 rng = make_stream(ctx.seed, {0xC311ull});
    std::uniform_int_distribution<int> region(0, 3);
    for (size_t added = 0; added < random_count && n >= 2;) {
        std::array<std::vector<int>, 3> abc;
        for (int s = 0; s < n; ++s) {
            int r = region(rng);
            if (r < 3) abc[size_t(r)].push_back(s);
        }
        if (!abc[0].empty() && !abc[2].empty()) {
            parts.push_back(abc);
            ++added;
        }
    }
    Table t;
    t.schema = "markovsim.cmi/1";
    std::ostringstream body;
    body << "a,b,c,cmi_nats,cmi_bits,markov_gap,pinsker_rhs\n";
    for (const auto &abc : parts) {
        TripartitionStats s = tripartition_stats(p, abc[0], abc[1], abc[2]);
        body << join_ints(s.a) << ',' << join_ints(s.b) << ',' << join_ints(s.c) << ',' << fmt(s.cmi_nats) << ','
             << fmt(s.cmi_nats / std::log(2.0)) << ',' << fmt(s.markov_gap) << ',' << fmt(s.pinsker_rhs) << '\n';
    }
    t.body = body.str();
    return t;
}

Table cmd_clifford_dbar(Context &ctx) {
    const int rows = get<int>(ctx.cfg, "/generator/rows", 10);
    const int depth = get<int>(ctx.cfg, "/generator/depth", 3);
    const double p = get<double>(ctx.cfg, "/generator/p", 0.1);
    const int width = get<int>(ctx.cfg, "/width", depth);
    const std::vector<int> l_acs = get<std::vector<int>>(ctx.cfg, "/l_ac", range(2, 12));
    const size_t shots = get<size_t>(ctx.cfg, "/shots", 2000);
    Table t;
    t.schema = "markovsim.clifford-dbar/1";
    t.comments.push_back("boundary: open");
    std::ostringstream body;
    body << "rows,d,p,l_ac,dbar,stderr,shots,inconsistent\n";
    for (int l : l_acs) {
        CliffordDbarResult r = clifford_dbar(rows, depth, p, l, shots, ctx.seed, ctx.threads, width);
        body << rows << ',' << depth << ',' << fmt(p) << ',' << l << ',' << fmt(r.dbar) << ',' << fmt(r.stderr_)
             << ',' << r.shots << ',' << r.inconsistent << '\n';
    }
    t.body = body.str();
    return t;
}

Table cmd_markov_length_scan(Context &ctx) {
    const int rows = get<int>(ctx.cfg, "/generator/rows", 10);
    const std::vector<int> depths =
        get<std::vector<int>>(ctx.cfg, "/depths", {get<int>(ctx.cfg, "/generator/depth", 3)});
    const std::vector<double> ps =
        get<std::vector<double>>(ctx.cfg, "/ps", {get<double>(ctx.cfg, "/generator/p", 0.1)});
    const std::vector<int> l_acs = get<std::vector<int>>(ctx.cfg, "/l_ac", range(2, 12));
    const size_t shots = get<size_t>(ctx.cfg, "/shots", 2000);
    FitOptions fit;
    fit.floor = get<double>(ctx.cfg, "/fit_floor", fit.floor);
    Table t;
    t.schema = "markovsim.markov-length-scan/1";
    t.comments.push_back("boundary: open");
    std::ostringstream body;
    body << "d,p,xi,inv_xi,r_squared,points_used,points_excluded\n";
    for (int d : depths) {
        for (double p : ps) {
            MarkovLengthRow r = markov_length_scan(rows, d, p, l_acs, shots, ctx.seed, ctx.threads, fit);
            if (r.fitted) {
                body << d << ',' << fmt(p) << ',' << fmt(r.fit.xi) << ',' << fmt(1.0 / r.fit.xi) << ','
                     << fmt(r.fit.r_squared) << ',' << r.fit.used.size() << ',' << r.fit.excluded.size() << '\n';
            } else {
                body << d << ',' << fmt(p) << ",nan,nan,nan,0," << r.fit.excluded.size() << '\n';
            }
        }
    }
    t.body = body.str();
    return t;
}

Table cmd_bounds(Context &ctx) {
    const json &cfg = ctx.cfg;
    int n = get<int>(cfg, "/generator/n", 8);
    int d = get<int>(cfg, "/generator/depth", 2);
    double p = get<double>(cfg, "/generator/p", 0.1);
    int h = get<int>(cfg, "/generator/h", 2);
    int degree = get<int>(cfg, "/degree", 4);
    size_t boundary_a = get<size_t>(cfg, "/boundary_a", 1);
    size_t boundary_c = get<size_t>(cfg, "/boundary_c", 1);
    int l_ac = get<int>(cfg, "/l_ac_graph", 1);
    if (has(cfg, "/circuit")) {
        Circuit c = load_or_generate(ctx);
        n = c.spec.n();
        d = c.spec.depth();
        h = c.spec.h();
        auto rate = c.spec.uniform_rate();
        if (!rate) throw ConfigError("bounds needs a circuit with uniform noise");
        p = *rate;
        const InteractionGraph g = build_interaction_graph(c.spec);
        if (!has(cfg, "/degree")) degree = g.max_degree();
        if (has(cfg, "/a") && has(cfg, "/c")) {
            const auto a = get<std::vector<int>>(cfg, "/a", {});
            const auto cc = get<std::vector<int>>(cfg, "/c", {});
            boundary_a = boundary_size(g, a);
            boundary_c = boundary_size(g, cc);
            l_ac = graph_distance(g, a, cc);
        }
    }
    const int k = get<int>(cfg, "/k", 2);
    const double q = get<double>(cfg, "/q", 1.0 - p);
    const double area = get<double>(cfg, "/area", 1.0);
    const std::vector<BoundReport> reports = {
        bound_uniform(n, p, d),
        bound_cmi_threshold(h, k, degree, q, d, boundary_a, boundary_c, l_ac),
        potts_large_h(n, d, p, area),
    };
    Table t;
    t.schema = "markovsim.bounds/1";
    std::ostringstream body;
    body << "bound,status,field,value\n";
    for (const BoundReport &r : reports) {
        const char *status = r.status == BoundStatus::kOk ? "ok" : "not_applicable";
        for (const auto &[key, v] : r.inputs) {
            body << bound_kind_name(r.kind) << ',' << status << ",input." << key << ',' << fmt_fixed(v) << '\n';
        }
        body << bound_kind_name(r.kind) << ',' << status << ",value," << fmt_fixed(r.value) << '\n';
        for (const auto &[key, v] : r.extras) {
            body << bound_kind_name(r.kind) << ',' << status << ',' << key << ',' << fmt_fixed(v) << '\n';
        }
    }
    t.body = body.str();
    return t;
}

// Flag overrides, applied on top of the config file.
class Overrides {
   public:
    template <typename T>
    void add(CLI::App *app, const std::string &flag, const std::string &pointer, const std::string &help) {
        auto value = std::make_shared<T>();
        CLI::Option *opt = app->add_option(flag, *value, help);
        appliers_.push_back([opt, value, pointer](json &cfg) {
            if (opt->count() > 0) cfg[json::json_pointer(pointer)] = *value;
        });
    }
    void add_flag(CLI::App *app, const std::string &flag, const std::string &pointer, const std::string &help) {
        auto value = std::make_shared<bool>(false);
        CLI::Option *opt = app->add_flag(flag, *value, help);
        appliers_.push_back([opt, value, pointer](json &cfg) {
            if (opt->count() > 0) cfg[json::json_pointer(pointer)] = *value;
        });
    }
    void apply(json &cfg) const {
        for (const auto &f : appliers_) f(cfg);
    }

   private:
    std::vector<std::function<void(json &)>> appliers_;
};

void add_common(CLI::App *sub, Overrides &ov, std::string &config_path) {
    sub->add_option("--config", config_path, "JSON config file");
    ov.add<std::string>(sub, "--circuit", "/circuit", "Circuit JSON file");
    ov.add<std::string>(sub, "-o,--output", "/output", "Output CSV path (default stdout)");
    ov.add<uint64_t>(sub, "--seed", "/seed", "Master seed");
    ov.add<int>(sub, "--threads", "/threads", "Worker threads");
    ov.add<double>(sub, "--budget-log2", "/budget_log2", "Dense work budget, log2 of entries");
    ov.add<std::string>(sub, "--kind", "/generator/kind", "Generator: brickwork1d or brickwork2d");
    ov.add<int>(sub, "--n", "/generator/n", "Chain length (brickwork1d, bounds)");
    ov.add<int>(sub, "--rows", "/generator/rows", "Grid rows");
    ov.add<int>(sub, "--cols", "/generator/cols", "Grid columns");
    ov.add<int>(sub, "--depth,--d", "/generator/depth", "Circuit depth");
    ov.add<double>(sub, "--p", "/generator/p", "Depolarizing or trace-out rate");
    ov.add<int>(sub, "--local-dim", "/generator/h", "Local dimension");
    ov.add<std::string>(sub, "--family", "/generator/family", "Gate family: haar or clifford");
}

}  // namespace

std::string git_blob_sha1(const std::string &content) {
    const std::string blob = "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
        throw NumericalError("sha1 digest failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Sequential Markov sampler for noisy local circuits", "markovsim"};
    app.set_version_flag("--version", std::string("markovsim ") + kVersion);
    app.require_subcommand(1);

    using Handler = Table (*)(Context &);
    struct Command {
        const char *name;
        const char *help;
        Handler handler;
    };
    const Command commands[] = {
        {"sample", "Draw outcome strings with the Markov sampler", cmd_sample},
        {"oracle", "Exact output distribution by dense simulation", cmd_oracle},
        {"markov-scan", "Distance between P and the truncated sampler vs radius", cmd_markov_scan},
        {"cmi", "Conditional mutual information and Markov gap over tripartitions", cmd_cmi},
        {"clifford-dbar", "Stabilizer Monte-Carlo estimate of D-bar vs l_AC", cmd_clifford_dbar},
        {"markov-length-scan", "Fitted Markov length of D-bar vs noise and depth", cmd_markov_length_scan},
        {"bounds", "Closed-form bound evaluators", cmd_bounds},
    };
    std::string config_path;
    std::vector<Overrides> overrides(std::size(commands));
    std::vector<CLI::App *> subs;
    for (size_t i = 0; i < std::size(commands); ++i) {
        CLI::App *sub = app.add_subcommand(commands[i].name, commands[i].help);
        add_common(sub, overrides[i], config_path);
        Overrides &ov = overrides[i];
        const std::string name = commands[i].name;
        if (name == "sample") {
            ov.add<int>(sub, "--radius,-l", "/radius", "Conditioning radius l");
            ov.add<size_t>(sub, "--shots", "/shots", "Number of samples");
            ov.add_flag(sub, "--trace", "/trace", "Emit per-step trace rows");
            ov.add<double>(sub, "--xi", "/xi", "Markov length used to pick the radius");
            ov.add<double>(sub, "--eps", "/eps", "Target accuracy used to pick the radius");
        } else if (name == "markov-scan") {
            ov.add<std::vector<int>>(sub, "--radii", "/radii", "Radii to scan");
            ov.add<size_t>(sub, "--trials", "/trials", "Samples per radius when P cannot be enumerated");
        } else if (name == "cmi") {
            ov.add<std::vector<int>>(sub, "--a", "/a", "Region A");
            ov.add<std::vector<int>>(sub, "--b", "/b", "Region B");
            ov.add<std::vector<int>>(sub, "--c", "/c", "Region C");
            ov.add<size_t>(sub, "--random", "/random_tripartitions", "Extra random tripartitions");
        } else if (name == "clifford-dbar" || name == "markov-length-scan") {
            ov.add<std::vector<int>>(sub, "--l-ac", "/l_ac", "Widths of B");
            ov.add<size_t>(sub, "--shots", "/shots", "Shots per point");
            ov.add<int>(sub, "--width", "/width", "Columns in A and in C");
            if (name == "markov-length-scan") {
                ov.add<std::vector<int>>(sub, "--depths", "/depths", "Depths to scan");
                ov.add<std::vector<double>>(sub, "--ps", "/ps", "Noise rates to scan");
            }
        } else if (name == "bounds") {
            ov.add<int>(sub, "--k", "/k", "Gate arity");
            ov.add<int>(sub, "--degree", "/degree", "Interaction graph degree");
            ov.add<double>(sub, "--q", "/q", "Noise parameter q (default 1 - p)");
            ov.add<size_t>(sub, "--boundary-a", "/boundary_a", "Boundary size of A");
            ov.add<size_t>(sub, "--boundary-c", "/boundary_c", "Boundary size of C");
            ov.add<int>(sub, "--l-ac", "/l_ac_graph", "Graph distance between A and C");
            ov.add<double>(sub, "--area", "/area", "Cross-section area");
            ov.add<std::vector<int>>(sub, "--a", "/a", "Region A (with --circuit)");
            ov.add<std::vector<int>>(sub, "--c", "/c", "Region C (with --circuit)");
        }
        subs.push_back(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        size_t which = 0;
        while (!subs[which]->parsed()) ++which;
        Context ctx;
        if (!config_path.empty()) {
            try {
                ctx.cfg = json::parse(read_text_file(config_path));
            } catch (const json::exception &e) {
                throw ConfigError("config file " + config_path + ": " + e.what());
            }
            if (!ctx.cfg.is_object()) throw ConfigError("config file must hold a JSON object");
        } else {
            ctx.cfg = json::object();
        }
        overrides[which].apply(ctx.cfg);
        if (!has(ctx.cfg, "/seed")) {
            ctx.cfg["seed"] = uint64_t(std::random_device{}()) << 32 | std::random_device{}();
        }
        ctx.seed = get<uint64_t>(ctx.cfg, "/seed", 0);
        ctx.threads = get<int>(ctx.cfg, "/threads", 1);
        if (ctx.threads < 1) throw ConfigError("threads must be at least 1");
        if (const char *env = std::getenv("MARKOVSIM_BUDGET_LOG2")) {
            char *end = nullptr;
            double v = std::strtod(env, &end);
            if (end == env || *end != '\0' || !(v > 0.0)) {
                throw ConfigError("MARKOVSIM_BUDGET_LOG2 must be a positive number");
            }
            ctx.budget.max_log2_entries = v;
        }
        ctx.budget.max_log2_entries = get<double>(ctx.cfg, "/budget_log2", ctx.budget.max_log2_entries);

        Table table = commands[which].handler(ctx);

        // The output path is not part of the run's identity.
        json echo = ctx.cfg;
        echo.erase("output");
        echo.erase("threads");
        std::ostringstream doc;
        doc << "# markovsim " << kVersion << '\n';
        doc << "# schema: " << table.schema << '\n';
        doc << "# command: " << commands[which].name << '\n';
        doc << "# config: " << echo.dump() << '\n';
        doc << "# seed: " << ctx.seed << '\n';
        doc << "# circuit_sha1: " << ctx.circuit_hash << '\n';
        for (const std::string &c : ctx.notes) doc << "# " << c << '\n';
        for (const std::string &c : table.comments) doc << "# " << c << '\n';
        doc << table.body;

        const std::string path = get<std::string>(ctx.cfg, "/output", "-");
        if (path == "-") {
            out << doc.str();
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw ConfigError("cannot open output file " + path);
            f << doc.str();
            if (!f) throw ConfigError("failed writing " + path);
        }
        return 0;
    } catch (const ConfigError &e) {
        err << "markovsim: configuration error: " << e.what() << '\n';
        return 2;
    } catch (const BudgetExceeded &e) {
        err << "markovsim: budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const NumericalError &e) {
        err << "markovsim: numerical failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception &e) {
        err << "markovsim: error: " << e.what() << '\n';
        return 4;
    }
}

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace markovsim::cli
