// Copyright 2026 The Iceberg Compiler Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iceberg/qaoa.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace iceberg {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

const char *graph_kind_name(GraphKind kind) {
    switch (kind) {
        case GraphKind::REGULAR_3: return "regular3";
        case GraphKind::ERDOS_RENYI: return "erdos_renyi";
        case GraphKind::CUSTOM: return "custom";
    }
    return "?";
}

GraphKind parse_graph_kind(std::string_view text) {
    if (text == "regular3" || text == "REGULAR_3") return GraphKind::REGULAR_3;
    if (text == "erdos_renyi" || text == "ERDOS_RENYI" || text == "er") return GraphKind::ERDOS_RENYI;
    if (text == "custom" || text == "CUSTOM") return GraphKind::CUSTOM;
    throw GraphError(fmt::format("unknown graph kind '{}'", text));
}

void ProblemGraph::validate() const {
    if (k < 1 || k > 62) throw GraphError(fmt::format("vertex count {} outside 1..62", k));
    std::set<std::pair<int, int>> seen;
    for (const auto &e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= k || e.v >= k) throw GraphError("edge endpoint out of range");
        if (e.u == e.v) throw GraphError(fmt::format("self-loop on vertex {}", e.u));
        if (!std::isfinite(e.w)) throw GraphError("edge weight not finite");
        if (!seen.insert(std::minmax(e.u, e.v)).second) {
            throw GraphError(fmt::format("duplicate edge ({}, {})", e.u, e.v));
        }
    }
    if (kind == GraphKind::REGULAR_3) {
        for (int d : degrees()) {
            if (d != 3) throw GraphError("regular graph has a vertex of degree != 3");
        }
    }
}

bool ProblemGraph::weighted() const {
    return std::any_of(edges.begin(), edges.end(), [](const Edge &e) { return e.w != 1.0; });
}

double ProblemGraph::total_weight() const {
    double s = 0;
    for (const auto &e : edges) s += e.w;
    return s;
}

std::vector<int> ProblemGraph::degrees() const {
    std::vector<int> d(k, 0);
    for (const auto &e : edges) {
        ++d[e.u];
        ++d[e.v];
    }
    return d;
}

namespace {

class Rng {
   public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    double uniform() { return uniform01(gen_()); }
    uint64_t below(uint64_t m) {
        // Rejection keeps the draw unbiased.
        uint64_t limit = UINT64_MAX - UINT64_MAX % m;
        uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % m;
    }

   private:
    std::mt19937_64 gen_;
};

ProblemGraph random_regular3(int k, uint64_t seed) {
    if (k < 4 || (3 * k) % 2 != 0) throw GraphError(fmt::format("no 3-regular graph on {} vertices", k));
    Rng rng(seed);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<int> points(3 * k);
        for (int i = 0; i < 3 * k; ++i) points[i] = i / 3;
        for (int i = 3 * k - 1; i > 0; --i) std::swap(points[i], points[rng.below(i + 1)]);
        std::set<std::pair<int, int>> seen;
        bool ok = true;
        for (int i = 0; i < 3 * k && ok; i += 2) {
            int u = points[i], v = points[i + 1];
            if (u == v || !seen.insert(std::minmax(u, v)).second) ok = false;
        }
        if (!ok) continue;
        ProblemGraph g;
        g.k = k;
        g.kind = GraphKind::REGULAR_3;
        g.seed = seed;
        for (auto [u, v] : seen) g.edges.push_back({u, v, 1.0});
        return g;
    }
    throw GraphError("pairing model did not produce a simple graph");
}

}  // namespace

ProblemGraph generate_instance(GraphKind kind, int k, std::optional<double> density, uint64_t seed) {
    switch (kind) {
        case GraphKind::REGULAR_3:
            return random_regular3(k, seed);
        case GraphKind::ERDOS_RENYI: {
            double p = density.value_or(0.5);
            if (!(p >= 0.0 && p <= 1.0)) throw GraphError(fmt::format("density {} outside [0, 1]", p));
            if (k < 1) throw GraphError("need at least one vertex");
            Rng rng(seed);
            ProblemGraph g;
            g.k = k;
            g.kind = kind;
            g.seed = seed;
            for (int u = 0; u < k; ++u) {
                for (int v = u + 1; v < k; ++v) {
                    if (rng.uniform() < p) g.edges.push_back({u, v, 1.0});
                }
            }
            return g;
        }
        case GraphKind::CUSTOM:
            break;
    }
    throw GraphError("custom graphs are read from files, not generated");
}

ProblemGraph petersen_graph() {
    ProblemGraph g;
    g.k = 10;
    for (int i = 0; i < 5; ++i) {
        g.edges.push_back({i, (i + 1) % 5, 1.0});
        g.edges.push_back({i, i + 5, 1.0});
        g.edges.push_back({5 + i, 5 + (i + 2) % 5, 1.0});
    }
    return g;
}

ProblemGraph cycle_graph(int k) {
    ProblemGraph g;
    g.k = k;
    for (int i = 0; i < k; ++i) g.edges.push_back({i, (i + 1) % k, 1.0});
    return g;
}

ProblemGraph complete_graph(int k) {
    ProblemGraph g;
    g.k = k;
    for (int u = 0; u < k; ++u) {
        for (int v = u + 1; v < k; ++v) g.edges.push_back({u, v, 1.0});
    }
    return g;
}

void QaoaParams::validate() const {
    if (p < 0) throw GraphError("negative QAOA depth");
    if (static_cast<int>(gammas.size()) != p || static_cast<int>(betas.size()) != p) {
        throw GraphError(fmt::format("expected {} gammas and betas, got {} and {}", p, gammas.size(), betas.size()));
    }
    for (double a : gammas) {
        if (!std::isfinite(a)) throw GraphError("gamma not finite");
    }
    for (double a : betas) {
        if (!std::isfinite(a)) throw GraphError("beta not finite");
    }
}

QaoaParams ramp_params(int p, double gamma_max, double beta_max) {
    QaoaParams q;
    q.p = p;
    for (int t = 0; t < p; ++t) {
        double s = (t + 0.5) / p;
        q.gammas.push_back(gamma_max * s);
        q.betas.push_back(beta_max * (1.0 - s));
    }
    return q;
}

size_t LogicalCircuit::count(RotationKind kind) const {
    size_t n = 0;
    for (const auto &c : components) {
        for (const auto &r : c.rotations) n += r.kind == kind;
    }
    return n;
}

LogicalCircuit build_qaoa(const ProblemGraph &graph, const QaoaParams &params) {
    graph.validate();
    params.validate();
    LogicalCircuit lc;
    lc.k = graph.k;
    for (int t = 0; t < params.p; ++t) {
        LogicalComponent phase{Role::PHASE_LAYER, {}};
        for (const auto &e : graph.edges) {
            phase.rotations.push_back({RotationKind::ZZ, e.u + 1, e.v + 1, params.gammas[t] * e.w});
        }
        LogicalComponent mixer{Role::MIXER_LAYER, {}};
        for (int v = 0; v < graph.k; ++v) mixer.rotations.push_back({RotationKind::X, v + 1, 0, params.betas[t]});
        lc.components.push_back(std::move(phase));
        lc.components.push_back(std::move(mixer));
    }
    return lc;
}

double cut_value(const ProblemGraph &graph, Bitstring x) {
    double cut = 0;
    for (const auto &e : graph.edges) {
        if (((x >> e.u) ^ (x >> e.v)) & 1) cut += e.w;
    }
    return cut;
}

double energy(const ProblemGraph &graph, Bitstring x) { return -cut_value(graph, x); }

double hamiltonian_value(const ProblemGraph &graph, Bitstring x) {
    return graph.total_weight() - 2.0 * cut_value(graph, x);
}

// Gray-code walk over the 2^(k-1) assignments with the last vertex pinned to
// 0; flipping one vertex changes the cut by its incident edges only.
double brute_force_optimum(const ProblemGraph &graph) {
    graph.validate();
    int k = graph.k;
    if (k > 30) throw GraphError("brute force is limited to k <= 30");
    if (k == 1) return 0.0;
    std::vector<std::vector<std::pair<int, double>>> adj(k);
    for (const auto &e : graph.edges) {
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({e.u, e.w});
    }
    Bitstring x = 0;
    double cut = 0, best = 0;
    uint64_t steps = uint64_t{1} << (k - 1);
    for (uint64_t i = 1; i < steps; ++i) {
        int v = std::countr_zero(i);
        int xv = (x >> v) & 1;
        for (auto [u, w] : adj[v]) cut += (((x >> u) & 1) == static_cast<Bitstring>(xv)) ? w : -w;
        x ^= Bitstring{1} << v;
        best = std::max(best, cut);
    }
    return best;
}

double approximation_ratio(const Distribution &dist, const ProblemGraph &graph, std::optional<double> f_max) {
    double fm = f_max ? *f_max : brute_force_optimum(graph);
    if (fm <= 0) throw GraphError("approximation ratio undefined for a graph with no cut");
    double total = 0, expect = 0;
    for (auto [x, p] : dist) {
        total += p;
        expect += p * cut_value(graph, x);
    }
    if (total <= 0) throw GraphError("empty distribution");
    return expect / total / fm;
}

double success_probability(const Distribution &dist, const ProblemGraph &graph, std::optional<double> f_max) {
    double fm = f_max ? *f_max : brute_force_optimum(graph);
    double total = 0, hit = 0;
    for (auto [x, p] : dist) {
        total += p;
        if (std::abs(cut_value(graph, x) - fm) < 1e-9) hit += p;
    }
    if (total <= 0) throw GraphError("empty distribution");
    return hit / total;
}

std::string write_graph(const ProblemGraph &graph) {
    std::string out = fmt::format("graph {} {}\n", graph.k, graph.edges.size());
    out += fmt::format("# kind {} seed {}\n", graph_kind_name(graph.kind), graph.seed);
    for (const auto &e : graph.edges) {
        if (e.w == 1.0) out += fmt::format("edge {} {}\n", e.u, e.v);
        else out += fmt::format("edge {} {} {}\n", e.u, e.v, e.w);
    }
    return out;
}

namespace {

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

template <typename T>
T parse_number(const std::string &tok, int line) {
    T v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line, fmt::format("expected number, got '{}'", tok));
    }
    return v;
}

}  // namespace

ProblemGraph read_graph(std::string_view text) {
    ProblemGraph g;
    bool header = false;
    size_t declared = 0;
    int line_no = 0;
    for (std::string line : split_lines(text)) {
        ++line_no;
        std::string meta;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            meta = line.substr(hash + 1);
            line = line.substr(0, hash);
        }
        std::istringstream in(line);
        std::vector<std::string> toks;
        for (std::string t; in >> t;) toks.push_back(t);
        if (toks.empty()) {
            std::istringstream m(meta);
            std::string key, kind, skey;
            uint64_t seed = 0;
            if (m >> key >> kind >> skey >> seed && key == "kind" && skey == "seed") {
                g.kind = parse_graph_kind(kind);
                g.seed = seed;
            }
            continue;
        }
        if (toks[0] == "graph") {
            if (toks.size() != 3) throw ParseError(line_no, "header is 'graph k m'");
            g.k = parse_number<int>(toks[1], line_no);
            declared = parse_number<size_t>(toks[2], line_no);
            header = true;
        } else if (toks[0] == "edge") {
            if (!header) throw ParseError(line_no, "edge before 'graph' header");
            if (toks.size() != 3 && toks.size() != 4) throw ParseError(line_no, "edge needs 'u v [w]'");
            Edge e{parse_number<int>(toks[1], line_no), parse_number<int>(toks[2], line_no), 1.0};
            if (toks.size() == 4) e.w = parse_number<double>(toks[3], line_no);
            g.edges.push_back(e);
        } else {
            throw ParseError(line_no, fmt::format("unknown directive '{}'", toks[0]));
        }
    }
    if (!header) throw ParseError(line_no, "missing 'graph k m' header");
    if (g.edges.size() != declared) {
        throw ParseError(line_no, fmt::format("header declares {} edges, found {}", declared, g.edges.size()));
    }
    try {
        g.validate();
    } catch (const GraphError &e) {
        throw ParseError(line_no, e.what());
    }
    return g;
}

std::string write_params(const QaoaParams &params) {
    auto list = [](const std::vector<double> &v) {
        std::string s = "[";
        for (size_t i = 0; i < v.size(); ++i) s += fmt::format("{}{}", i ? ", " : "", v[i]);
        return s + "]";
    };
    return fmt::format("p: {}\ngammas: {}\nbetas: {}\n", params.p, list(params.gammas), list(params.betas));
}

QaoaParams read_params(std::string_view text) {
    QaoaParams q;
    bool has_p = false;
    int line_no = 0;
    for (std::string line : split_lines(text)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        for (char &c : line) {
            if (c == ':' || c == '[' || c == ']' || c == ',') c = ' ';
        }
        std::istringstream in(line);
        std::string key;
        if (!(in >> key)) continue;
        std::vector<double> values;
        for (std::string t; in >> t;) values.push_back(parse_number<double>(t, line_no));
        if (key == "p") {
            if (values.size() != 1) throw ParseError(line_no, "p takes one value");
            q.p = static_cast<int>(values[0]);
            has_p = true;
        } else if (key == "gammas") {
            q.gammas = values;
        } else if (key == "betas") {
            q.betas = values;
        } else {
            throw ParseError(line_no, fmt::format("unknown field '{}'", key));
        }
    }
    if (!has_p) q.p = static_cast<int>(q.gammas.size());
    try {
        q.validate();
    } catch (const GraphError &e) {
        throw ParseError(line_no, e.what());
    }
    return q;
}

}  // namespace iceberg
