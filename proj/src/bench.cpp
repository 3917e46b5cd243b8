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

#include "iceberg/bench.hpp"

#include <Eigen/Core>
#include <fmt/core.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace iceberg {

namespace {

constexpr const char *kVersion = "1.0.0";

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw BenchError(fmt::format("cannot read {}", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

uint64_t mix(uint64_t h, uint64_t x) { return splitmix64(h ^ splitmix64(x)); }

uint64_t double_bits(double d) {
    uint64_t u;
    std::memcpy(&u, &d, sizeof u);
    return u;
}

CompileConfig config_of(const SweepSpec &spec, const SweepPoint &pt) {
    CompileConfig cfg;
    cfg.num_syndromes = pt.s;
    cfg.gadget_set = spec.gadgets;
    cfg.expansion_width = spec.width;
    cfg.queue_cap = spec.queue_cap;
    cfg.seed = pt.seed;
    return cfg;
}

std::vector<double> lambdas_of(const SweepSpec &spec) {
    return spec.lambdas.empty() ? std::vector<double>{spec.noise.scale} : spec.lambdas;
}

}  // namespace

void SweepSpec::validate() const {
    if (sizes.empty()) throw BenchError("sweep needs at least one size");
    if (seeds.empty()) throw BenchError("sweep needs explicit seeds");
    if (ps.empty()) throw BenchError("sweep needs at least one QAOA depth p");
    if (syndromes.empty()) throw BenchError("sweep needs at least one syndrome count");
    if (modes.empty()) throw BenchError("sweep needs at least one compiler mode");
    if (family == GraphKind::ERDOS_RENYI && densities.empty()) throw BenchError("Erdős–Rényi sweeps need densities");
    if (family == GraphKind::CUSTOM) throw BenchError("sweeps generate instances; custom graphs are not supported");
    for (int k : sizes) {
        if (k < 2 || k % 2) throw BenchError(fmt::format("k = {} must be even and >= 2", k));
    }
    for (double d : densities) {
        if (!(d >= 0 && d <= 1)) throw BenchError(fmt::format("density {} outside [0, 1]", d));
    }
    for (int p : ps) {
        if (p < 1) throw BenchError("p must be >= 1");
    }
    for (int s : syndromes) {
        if (s < 0) throw BenchError("syndrome count must be >= 0");
    }
    if (width < 1) throw BenchError("expansion width must be >= 1");
    if (shots == 0) throw BenchError("shots must be positive");
    if (bootstrap < 2) throw BenchError("bootstrap needs at least two resamples");
    if (!(truncate_eps >= 0 && truncate_eps < 1)) throw BenchError("truncate_eps must lie in [0, 1)");
    noise.validate();
    for (double l : lambdas) {
        NoiseModel n = noise;
        n.scale = l;
        n.validate();
    }
}

std::vector<SweepPoint> expand_points(const SweepSpec &spec) {
    std::vector<std::optional<double>> dens;
    if (spec.family == GraphKind::ERDOS_RENYI) {
        for (double d : spec.densities) dens.emplace_back(d);
    } else {
        dens.emplace_back(std::nullopt);
    }
    std::vector<SweepPoint> out;
    for (int k : spec.sizes) {
        for (auto d : dens) {
            for (uint64_t seed : spec.seeds) {
                for (int p : spec.ps) {
                    for (int s : spec.syndromes) out.push_back({spec.family, k, d, seed, p, s});
                }
            }
        }
    }
    return out;
}

std::string instance_id(const SweepPoint &pt) {
    std::string id = fmt::format("{}-k{}", graph_kind_name(pt.family), pt.k);
    if (pt.density) id += fmt::format("-d{}", *pt.density);
    return id + fmt::format("-s{}", pt.seed);
}

ProblemGraph instance_graph(const SweepPoint &pt) { return generate_instance(pt.family, pt.k, pt.density, pt.seed); }

// ---------------------------------------------------------------------------
// Report rows

namespace {

struct Column {
    const char *name;
    std::optional<double> ReportRow::*field;
};

const std::vector<Column> &metric_columns() {
    static const std::vector<Column> cols = {
        {"lambda", &ReportRow::lambda},
        {"gates_2q", &ReportRow::gates_2q},
        {"depth_2q", &ReportRow::depth_2q},
        {"area", &ReportRow::area},
        {"seconds", &ReportRow::seconds},
        {"expansions", &ReportRow::expansions},
        {"budget_exhausted", &ReportRow::budget_exhausted},
        {"shots", &ReportRow::shots},
        {"ar", &ReportRow::ar},
        {"ar_se", &ReportRow::ar_se},
        {"success", &ReportRow::success},
        {"success_se", &ReportRow::success_se},
        {"psr", &ReportRow::psr},
        {"psr_se", &ReportRow::psr_se},
        {"ar_exact", &ReportRow::ar_exact},
        {"tv", &ReportRow::tv},
        {"tv_se", &ReportRow::tv_se},
        {"tv_trunc", &ReportRow::tv_trunc},
        {"tv_trunc_se", &ReportRow::tv_trunc_se},
    };
    return cols;
}

std::string opt(const std::optional<double> &v) { return v ? fmt::format("{}", *v) : std::string(); }

std::optional<double> parse_opt(const std::string &s, int line) {
    if (s.empty()) return std::nullopt;
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception &) {
        throw BenchError(fmt::format("line {}: bad number '{}'", line, s));
    }
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string report_header() {
    std::string h = "bench,instance,family,k,density,seed,p,s,mode";
    for (const auto &c : metric_columns()) h += fmt::format(",{}", c.name);
    return h + "\n";
}

std::string report_line(const ReportRow &r) {
    std::string line = fmt::format("{},{},{},{},{},{},{},{},{}", r.bench, r.instance, r.family, r.k, opt(r.density),
                                   r.seed, r.p, r.s, r.mode);
    for (const auto &c : metric_columns()) line += "," + opt(r.*c.field);
    return line + "\n";
}

std::string report_csv(const std::vector<ReportRow> &rows) {
    std::string out = report_header();
    for (const auto &r : rows) out += report_line(r);
    return out;
}

std::vector<ReportRow> read_report_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.empty()) throw BenchError("empty report");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line + "\n" != report_header()) throw BenchError("report header does not match the expected schema");
    const size_t ncols = 9 + metric_columns().size();
    std::vector<ReportRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv(line);
        if (f.size() != ncols) throw BenchError(fmt::format("line {}: expected {} fields", lineno, ncols));
        ReportRow r;
        r.bench = f[0];
        r.instance = f[1];
        r.family = f[2];
        r.k = static_cast<int>(parse_opt(f[3], lineno).value_or(0));
        r.density = parse_opt(f[4], lineno);
        r.seed = static_cast<uint64_t>(parse_opt(f[5], lineno).value_or(0));
        r.p = static_cast<int>(parse_opt(f[6], lineno).value_or(0));
        r.s = static_cast<int>(parse_opt(f[7], lineno).value_or(0));
        r.mode = f[8];
        for (size_t c = 0; c < metric_columns().size(); ++c) r.*metric_columns()[c].field = parse_opt(f[9 + c], lineno);
        rows.push_back(std::move(r));
    }
    return rows;
}

void append_report(const std::string &path, const std::vector<ReportRow> &rows) {
    bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    if (!fresh) {
        std::ifstream in(path);
        std::string first;
        std::getline(in, first);
        if (first + "\n" != report_header()) throw BenchError(fmt::format("{} holds a different report schema", path));
    }
    std::ofstream out(path, std::ios::app);
    if (!out) throw BenchError(fmt::format("cannot write {}", path));
    if (fresh) out << report_header();
    for (const auto &r : rows) out << report_line(r);
}

ReportRow compile_row(const SweepPoint &pt, CompileMode mode, const CompileResult &result) {
    ReportRow r;
    r.instance = instance_id(pt);
    r.family = graph_kind_name(pt.family);
    r.k = pt.k;
    r.density = pt.density;
    r.seed = pt.seed;
    r.p = pt.p;
    r.s = pt.s;
    r.mode = compile_mode_name(mode);
    r.gates_2q = static_cast<double>(result.circuit.count_two_qubit());
    r.depth_2q = result.depth_2q;
    r.area = static_cast<double>(space_time_area(result.depth_2q, pt.k));
    r.seconds = std::round(result.seconds * 1000) / 1000;
    r.expansions = static_cast<double>(result.expansions);
    r.budget_exhausted = result.budget_exhausted ? 1 : 0;
    return r;
}

// ---------------------------------------------------------------------------
// Parameters

QaoaParams load_params(const std::string &dir, GraphKind family, int k, int p, std::string *source) {
    if (!dir.empty()) {
        for (int kk : {k, 10}) {
            auto path = std::filesystem::path(dir) / fmt::format("params_{}_k{}_p{}.txt", graph_kind_name(family), kk, p);
            if (std::filesystem::exists(path)) {
                QaoaParams params = read_params(read_file(path.string()));
                if (params.p != p) throw BenchError(fmt::format("{} holds p = {}", path.string(), params.p));
                if (source) *source = path.string();
                return params;
            }
        }
    }
    if (source) *source = "ramp";
    return ramp_params(p);
}

// ---------------------------------------------------------------------------
// Sweeps

void parallel_for(size_t n, int threads, const std::function<void(size_t)> &fn) {
    int t = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    t = static_cast<int>(std::min<size_t>(static_cast<size_t>(t), std::max<size_t>(n, 1)));
    if (t <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < t; ++w) {
        pool.emplace_back([&] {
            for (size_t i; (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!err) err = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto &th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

std::vector<ReportRow> run_depth_sweep(const SweepSpec &spec) {
    spec.validate();
    auto points = expand_points(spec);
    const size_t nm = spec.modes.size();
    std::vector<ReportRow> rows(points.size() * nm);
    parallel_for(rows.size(), spec.threads, [&](size_t i) {
        const SweepPoint &pt = points[i / nm];
        CompileMode mode = spec.modes[i % nm];
        auto logical = build_qaoa(instance_graph(pt), load_params(spec.params_dir, pt.family, pt.k, pt.p));
        rows[i] = compile_row(pt, mode, compile(logical, mode, config_of(spec, pt)));
        rows[i].bench = "depth";
    });
    return rows;
}

namespace {

struct Reference {
    ProblemGraph graph;
    LogicalCircuit logical;
    PhysicalCircuit unencoded;
    double f_max = 0;
    double ar_exact = 0;
    EnergyDistribution energies;
};

Reference reference_for(const SweepSpec &spec, const SweepPoint &pt) {
    Reference ref;
    ref.graph = instance_graph(pt);
    ref.logical = build_qaoa(ref.graph, load_params(spec.params_dir, pt.family, pt.k, pt.p));
    ref.unencoded = unencoded_circuit(ref.logical);
    ref.f_max = brute_force_optimum(ref.graph);
    auto exact = decode_distribution(ref.unencoded, simulate_exact(ref.unencoded)).logical;
    ref.ar_exact = approximation_ratio(exact, ref.graph, ref.f_max);
    ref.energies = energy_distribution(exact, ref.graph);
    return ref;
}

ReportRow unencoded_row(const SweepPoint &pt, const PhysicalCircuit &c) {
    ReportRow r;
    r.instance = instance_id(pt);
    r.family = graph_kind_name(pt.family);
    r.k = pt.k;
    r.density = pt.density;
    r.seed = pt.seed;
    r.p = pt.p;
    r.s = pt.s;
    r.mode = "unencoded";
    r.gates_2q = static_cast<double>(c.count_two_qubit());
    r.depth_2q = two_qubit_depth(c);
    return r;
}

uint64_t shot_seed(const SweepSpec &spec, const SweepPoint &pt, size_t mode, size_t lambda) {
    uint64_t h = spec.shot_seed;
    for (uint64_t x : {static_cast<uint64_t>(pt.k), pt.density ? double_bits(*pt.density) : 0, pt.seed,
                       static_cast<uint64_t>(pt.p), static_cast<uint64_t>(pt.s), static_cast<uint64_t>(mode),
                       static_cast<uint64_t>(lambda)}) {
        h = mix(h, x);
    }
    return h;
}

// Compiled circuits for every mode of a point plus the unencoded reference,
// which comes last.
std::vector<std::pair<ReportRow, PhysicalCircuit>> circuits_for(const SweepSpec &spec, const SweepPoint &pt,
                                                                const Reference &ref) {
    std::vector<std::pair<ReportRow, PhysicalCircuit>> out;
    for (CompileMode mode : spec.modes) {
        auto res = compile(ref.logical, mode, config_of(spec, pt));
        out.emplace_back(compile_row(pt, mode, res), std::move(res.circuit));
    }
    out.emplace_back(unencoded_row(pt, ref.unencoded), ref.unencoded);
    return out;
}

template <class Fill>
std::vector<ReportRow> run_shot_bench(const SweepSpec &spec, const char *bench, Fill &&fill) {
    spec.validate();
    for (int k : spec.sizes) {
        if (k + 4 > kMaxSimQubits) {
            throw BenchError(fmt::format("k = {} needs {} qubits; the simulator cap is {}", k, k + 4, kMaxSimQubits));
        }
    }
    auto points = expand_points(spec);
    auto lambdas = lambdas_of(spec);
    const size_t per_point = (spec.modes.size() + 1) * lambdas.size();
    std::vector<ReportRow> rows(points.size() * per_point);
    parallel_for(points.size(), spec.threads, [&](size_t i) {
        const SweepPoint &pt = points[i];
        Reference ref = reference_for(spec, pt);
        auto circuits = circuits_for(spec, pt, ref);
        size_t slot = i * per_point;
        for (size_t li = 0; li < lambdas.size(); ++li) {
            NoiseModel noise = spec.noise;
            noise.scale = lambdas[li];
            for (size_t m = 0; m < circuits.size(); ++m) {
                ReportRow row = circuits[m].first;
                row.bench = bench;
                row.lambda = lambdas[li];
                row.shots = static_cast<double>(spec.shots);
                auto shots = sample_shots(circuits[m].second, noise, spec.shots, shot_seed(spec, pt, m, li));
                auto psr = sampled_post_selection_rate(shots);
                row.psr = psr.mean;
                row.psr_se = psr.stderr_;
                fill(row, shots, ref, mix(shot_seed(spec, pt, m, li), 0xb007));
                rows[slot++] = std::move(row);
            }
        }
    });
    return rows;
}

}  // namespace

std::vector<ReportRow> run_qaoa_bench(const SweepSpec &spec) {
    return run_shot_bench(spec, "qaoa",
                          [&](ReportRow &row, const std::vector<ShotRecord> &shots, const Reference &ref, uint64_t) {
                              row.ar_exact = ref.ar_exact;
                              if (post_selection_rate(shots) == 0) return;
                              auto ar = sampled_approximation_ratio(shots, ref.graph, ref.f_max);
                              auto succ = sampled_success_probability(shots, ref.graph, ref.f_max);
                              row.ar = ar.mean;
                              row.ar_se = ar.stderr_;
                              row.success = succ.mean;
                              row.success_se = succ.stderr_;
                          });
}

std::vector<ReportRow> run_energy_bench(const SweepSpec &spec) {
    return run_shot_bench(spec, "energy",
                          [&](ReportRow &row, const std::vector<ShotRecord> &shots, const Reference &ref,
                              uint64_t boot_seed) {
                              row.ar_exact = ref.ar_exact;
                              if (post_selection_rate(shots) == 0) return;
                              auto dist = energy_distribution(shots, ref.graph);
                              Cutoff cut = Cutoff::energy(tail_cutoff(ref.energies, spec.truncate_eps));
                              row.tv = total_variation(dist, ref.energies);
                              row.tv_trunc = total_variation(postprocess_truncate(dist, cut).dist, ref.energies);
                              row.tv_se =
                                  bootstrap_tv_stderr(shots, ref.graph, ref.energies, spec.bootstrap, boot_seed);
                              row.tv_trunc_se = bootstrap_tv_stderr(shots, ref.graph, ref.energies, spec.bootstrap,
                                                                    boot_seed, cut);
                          });
}

// ---------------------------------------------------------------------------
// Summaries and plot data

std::vector<DepthSummary> summarize_depth(const std::vector<ReportRow> &rows) {
    using Key = std::tuple<std::string, double, int, int, int>;  // family, density, k, p, s
    std::map<Key, std::vector<std::string>> mode_order;
    std::map<std::pair<Key, std::string>, std::vector<double>> depths;
    for (const auto &r : rows) {
        if (!r.depth_2q) continue;
        Key key{r.family, r.density.value_or(-1), r.k, r.p, r.s};
        auto &order = mode_order[key];
        if (std::find(order.begin(), order.end(), r.mode) == order.end()) order.push_back(r.mode);
        depths[{key, r.mode}].push_back(*r.depth_2q);
    }
    std::vector<DepthSummary> out;
    for (const auto &[key, modes] : mode_order) {
        double base = 0;
        if (auto it = depths.find({key, "baseline"}); it != depths.end()) {
            for (double d : it->second) base += d / static_cast<double>(it->second.size());
        }
        for (const auto &mode : modes) {
            const auto &v = depths.at({key, mode});
            DepthSummary s;
            s.family = std::get<0>(key);
            if (std::get<1>(key) >= 0) s.density = std::get<1>(key);
            s.k = std::get<2>(key);
            s.mode = mode;
            s.count = static_cast<int>(v.size());
            s.min = *std::min_element(v.begin(), v.end());
            s.max = *std::max_element(v.begin(), v.end());
            for (double d : v) s.mean += d / static_cast<double>(v.size());
            s.reduction = base > 0 ? 1.0 - s.mean / base : 0.0;
            out.push_back(s);
        }
    }
    return out;
}

std::string depth_summary_csv(const std::vector<DepthSummary> &summary) {
    std::string out = "family,density,k,mode,count,min,mean,max,reduction\n";
    for (const auto &s : summary) {
        out += fmt::format("{},{},{},{},{},{},{:.3f},{},{:.4f}\n", s.family, opt(s.density), s.k, s.mode, s.count,
                           s.min, s.mean, s.max, s.reduction);
    }
    return out;
}

std::vector<std::string> plot_ids() {
    return {"depth-vs-k", "depth-vs-density", "ar-vs-p", "ar-vs-syndromes", "psr-vs-area", "tv-vs-lambda"};
}

namespace {

// Mean over seeds with the standard errors combined as independent.
struct Pooled {
    double mean = 0, se = 0;
    int n = 0;
    void add(double v, double e) {
        mean += v;
        se += e * e;
        ++n;
    }
    double m() const { return n ? mean / n : 0; }
    double s() const { return n ? std::sqrt(se) / n : 0; }
};

std::string tag(const ReportRow &r) {
    std::string t = fmt::format("{}_k{}", r.family, r.k);
    if (r.density) t += fmt::format("_d{}", *r.density);
    return t;
}

}  // namespace

std::map<std::string, std::string> emit_plotdata(std::string_view csv, const std::string &figure_id) {
    auto ids = plot_ids();
    if (std::find(ids.begin(), ids.end(), figure_id) == ids.end()) {
        throw BenchError(fmt::format("unknown figure id '{}'; valid ids: {}", figure_id, fmt::join(ids, ", ")));
    }
    if (csv.empty()) throw BenchError("empty report");
    auto all = read_report_csv(csv);
    std::vector<std::string> sources;
    if (figure_id.rfind("depth", 0) == 0) {
        sources = {"depth", "compile"};
    } else if (figure_id == "tv-vs-lambda") {
        sources = {"energy"};
    } else {
        sources = {"qaoa"};
    }
    std::vector<ReportRow> rows;
    for (auto &r : all) {
        if (std::find(sources.begin(), sources.end(), r.bench) != sources.end()) rows.push_back(std::move(r));
    }
    std::map<std::string, std::string> files;
    auto emit = [&](const std::string &name, const std::string &header, const std::string &line) {
        auto &f = files[fmt::format("{}_{}.dat", figure_id, name)];
        if (f.empty()) f = "# " + header + "\n";
        f += line + "\n";
    };

    if (figure_id == "depth-vs-k" || figure_id == "depth-vs-density") {
        bool by_k = figure_id == "depth-vs-k";
        for (const auto &s : summarize_depth(rows)) {
            if (!by_k && !s.density) continue;
            std::string name = by_k ? s.family + (s.density ? fmt::format("_d{}", *s.density) : "")
                                    : fmt::format("{}_k{}", s.family, s.k);
            if (by_k) {
                emit(name, "k mode mean min max", fmt::format("{} {} {:.3f} {} {}", s.k, s.mode, s.mean, s.min, s.max));
            } else {
                emit(name, "density mode mean min max reduction",
                     fmt::format("{} {} {:.3f} {} {} {:.4f}", *s.density, s.mode, s.mean, s.min, s.max, s.reduction));
            }
        }
    } else if (figure_id == "ar-vs-p" || figure_id == "ar-vs-syndromes") {
        bool by_p = figure_id == "ar-vs-p";
        std::map<std::tuple<std::string, double, int, std::string>, Pooled> pooled;
        for (const auto &r : rows) {
            if (!r.ar || !r.ar_se) continue;
            std::string name = by_p ? fmt::format("{}_s{}", tag(r), r.s) : fmt::format("{}_p{}", tag(r), r.p);
            pooled[{name, r.lambda.value_or(1), by_p ? r.p : r.s, r.mode}].add(*r.ar, *r.ar_se);
        }
        for (const auto &[key, v] : pooled) {
            const auto &[name, lambda, x, mode] = key;
            emit(name, fmt::format("{} mode lambda ar ar_se", by_p ? "p" : "s"),
                 fmt::format("{} {} {} {:.6f} {:.6f}", x, mode, lambda, v.m(), v.s()));
        }
    } else if (figure_id == "psr-vs-area") {
        for (const auto &r : rows) {
            if (!r.psr || !r.psr_se || !r.area) continue;
            emit(tag(r), "area mode lambda s psr psr_se",
                 fmt::format("{} {} {} {} {:.6f} {:.6f}", *r.area, r.mode, r.lambda.value_or(1), r.s, *r.psr, *r.psr_se));
        }
    } else {
        std::map<std::tuple<std::string, double, std::string>, std::pair<Pooled, Pooled>> pooled;
        for (const auto &r : rows) {
            if (!r.tv || !r.tv_se || !r.lambda) continue;
            auto &slot = pooled[{fmt::format("{}_p{}_s{}", tag(r), r.p, r.s), *r.lambda, r.mode}];
            slot.first.add(*r.tv, *r.tv_se);
            slot.second.add(r.tv_trunc.value_or(*r.tv), r.tv_trunc_se.value_or(*r.tv_se));
        }
        for (const auto &[key, v] : pooled) {
            const auto &[name, lambda, mode] = key;
            emit(name, "lambda mode tv tv_se tv_trunc tv_trunc_se",
                 fmt::format("{} {} {:.6f} {:.6f} {:.6f} {:.6f}", lambda, mode, v.first.m(), v.first.s(),
                             v.second.m(), v.second.s()));
        }
    }
    if (files.empty()) throw BenchError(fmt::format("report has no rows usable for '{}'", figure_id));
    return files;
}

// ---------------------------------------------------------------------------
// Manifest

std::string write_manifest(const SweepSpec &spec, const std::string &command,
                           const std::map<std::string, std::string> &extra) {
    std::vector<std::string> modes;
    for (auto m : spec.modes) modes.emplace_back(compile_mode_name(m));
    std::string out;
    out += fmt::format("command: {}\n", command);
    out += fmt::format("version: {}\n", kVersion);
    out += fmt::format("compiler: {}\n", __VERSION__);
    out += fmt::format("eigen: {}.{}.{}\n", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
    out += fmt::format("fmt: {}\n", FMT_VERSION);
    out += fmt::format("family: {}\n", graph_kind_name(spec.family));
    out += fmt::format("sizes: [{}]\n", fmt::join(spec.sizes, ", "));
    out += fmt::format("seeds: [{}]\n", fmt::join(spec.seeds, ", "));
    out += fmt::format("densities: [{}]\n", fmt::join(spec.densities, ", "));
    out += fmt::format("ps: [{}]\n", fmt::join(spec.ps, ", "));
    out += fmt::format("syndromes: [{}]\n", fmt::join(spec.syndromes, ", "));
    out += fmt::format("modes: [{}]\n", fmt::join(modes, ", "));
    out += fmt::format("gadgets: {}\n", gadget_set_name(spec.gadgets));
    out += fmt::format("width: {}\n", spec.width);
    out += fmt::format("queue_cap: {}\n", spec.queue_cap);
    out += fmt::format("shots: {}\n", spec.shots);
    out += fmt::format("shot_seed: {}\n", spec.shot_seed);
    out += fmt::format("noise: {{p2: {}, p1: {}, p_idle: {}, p_meas: {}, scale: {}}}\n", spec.noise.p2, spec.noise.p1,
                       spec.noise.p_idle, spec.noise.p_meas, spec.noise.scale);
    out += fmt::format("lambdas: [{}]\n", fmt::join(spec.lambdas, ", "));
    out += fmt::format("truncate_eps: {}\n", spec.truncate_eps);
    out += fmt::format("bootstrap: {}\n", spec.bootstrap);
    out += fmt::format("params_dir: {}\n", spec.params_dir);
    out += fmt::format("threads: {}\n", spec.threads);
    for (const auto &[k, v] : extra) out += fmt::format("{}: {}\n", k, v);
    return out;
}

}  // namespace iceberg
