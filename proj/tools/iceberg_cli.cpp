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

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ranges.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "iceberg/bench.hpp"
#include "iceberg/compiler.hpp"
#include "iceberg/ft.hpp"
#include "iceberg/gadgets.hpp"
#include "iceberg/qaoa.hpp"
#include "iceberg/simulator.hpp"

#ifndef ICEBERG_DEFAULT_DATA
#define ICEBERG_DEFAULT_DATA "data"
#endif

using namespace iceberg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot read {}", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string &path, const std::string &text) {
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path));
    out << text;
}

std::string out_dir_default() {
    const char *env = std::getenv("ICEBERG_OUT_DIR");
    return env && *env ? env : ".";
}

std::string data_dir_default() {
    const char *env = std::getenv("ICEBERG_DATA_DIR");
    return env && *env ? env : ICEBERG_DEFAULT_DATA;
}

// "1-10" or "3" or "1,4,9" (the comma split happens in CLI11).
std::vector<uint64_t> expand_seeds(const std::vector<std::string> &items) {
    std::vector<uint64_t> out;
    for (const auto &it : items) {
        auto dash = it.find('-');
        if (dash == std::string::npos) {
            out.push_back(std::stoull(it));
            continue;
        }
        uint64_t lo = std::stoull(it.substr(0, dash)), hi = std::stoull(it.substr(dash + 1));
        if (hi < lo) throw std::runtime_error(fmt::format("empty seed range {}", it));
        for (uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    }
    return out;
}

std::string command_line(int argc, char **argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) s += (i > 1 ? " " : "") + std::string(argv[i]);
    return s;
}

struct SweepArgs {
    std::string family = "regular3";
    std::vector<int> sizes;
    std::vector<std::string> seeds{"1-10"};
    std::vector<double> densities;
    std::vector<int> ps{10};
    std::vector<int> syndromes{3};
    std::vector<std::string> modes{"baseline", "resynth", "resynth+z2"};
    std::string gadgets = "new";
    int width = 3;
    size_t queue_cap = kDefaultQueueCap;
    std::string params_dir = data_dir_default();
    int threads = 0;
    std::string out_dir = out_dir_default();

    size_t shots = 10000;
    uint64_t shot_seed = 1;
    std::string noise_file;
    std::vector<double> lambdas;
    double truncate_eps = 1e-3;
    int bootstrap = 100;

    void add(CLI::App *app, bool shots_too) {
        app->add_option("--family", family, "regular3 or erdos_renyi")->capture_default_str();
        app->add_option("--sizes,--k", sizes, "problem sizes")->delimiter(',')->required();
        app->add_option("--seeds", seeds, "instance seeds, e.g. 1-10 or 1,2,5")->delimiter(',')->capture_default_str();
        app->add_option("--densities", densities, "edge densities for erdos_renyi")->delimiter(',');
        app->add_option("--p", ps, "QAOA depths")->delimiter(',')->capture_default_str();
        app->add_option("--syndromes,--s", syndromes, "syndrome counts")->delimiter(',')->capture_default_str();
        app->add_option("--modes", modes, "baseline, coschedule, resynth, resynth+z2")->delimiter(',')->capture_default_str();
        app->add_option("--gadgets", gadgets, "new or old")->capture_default_str();
        app->add_option("--width", width, "expansion width")->capture_default_str();
        app->add_option("--queue-cap", queue_cap, "search expansion budget")->capture_default_str();
        app->add_option("--params-dir", params_dir, "directory with fitted QAOA angles")->capture_default_str();
        app->add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();
        app->add_option("--out-dir", out_dir, "output directory (default $ICEBERG_OUT_DIR or .)")->capture_default_str();
        if (!shots_too) return;
        app->add_option("--shots", shots, "shots per circuit")->capture_default_str();
        app->add_option("--shot-seed", shot_seed, "base seed for shot sampling")->capture_default_str();
        app->add_option("--noise", noise_file, "noise model file");
        app->add_option("--lambdas", lambdas, "noise scales to sweep")->delimiter(',');
        app->add_option("--truncate-eps", truncate_eps, "noiseless tail mass allowed above the cutoff")->capture_default_str();
        app->add_option("--bootstrap", bootstrap, "bootstrap resamples for TV errors")->capture_default_str();
    }

    SweepSpec spec() const {
        SweepSpec s;
        s.family = parse_graph_kind(family);
        s.sizes = sizes;
        s.seeds = expand_seeds(seeds);
        s.densities = densities;
        s.ps = ps;
        s.syndromes = syndromes;
        for (const auto &m : modes) s.modes.push_back(parse_compile_mode(m));
        s.gadgets = parse_gadget_set(gadgets);
        s.width = width;
        s.queue_cap = queue_cap;
        s.params_dir = params_dir;
        s.threads = threads;
        s.shots = shots;
        s.shot_seed = shot_seed;
        if (!noise_file.empty()) s.noise = read_noise(slurp(noise_file));
        s.lambdas = lambdas;
        s.truncate_eps = truncate_eps;
        s.bootstrap = bootstrap;
        return s;
    }
};

void write_bench(const SweepArgs &args, const SweepSpec &spec, const std::string &name,
                 const std::vector<ReportRow> &rows, const std::string &cmd) {
    fs::create_directories(args.out_dir);
    auto csv = (fs::path(args.out_dir) / (name + ".csv")).string();
    append_report(csv, rows);
    spit((fs::path(args.out_dir) / (name + "_manifest.txt")).string(), write_manifest(spec, cmd));
    fmt::print("{} rows appended to {}\n", rows.size(), csv);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Iceberg-code QAOA co-compiler and benchmarks"};
    app.set_config("--config", "", "TOML/INI file with option values");
    app.require_subcommand(1);
    const std::string cmd = command_line(argc, argv);

    // gen
    auto *gen = app.add_subcommand("gen", "generate a problem graph (and optionally its angles)");
    std::string gen_family = "regular3", gen_out, gen_params_out, gen_params_dir = data_dir_default();
    int gen_k = 10, gen_p = 0;
    double gen_density = 0.5;
    uint64_t gen_seed = 1;
    gen->add_option("--family", gen_family)->capture_default_str();
    gen->add_option("--k", gen_k)->capture_default_str();
    gen->add_option("--density", gen_density, "erdos_renyi edge probability")->capture_default_str();
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--out", gen_out, "graph file (default <out dir>/<instance>.graph)");
    gen->add_option("--p", gen_p, "also write QAOA angles for this depth");
    gen->add_option("--params-dir", gen_params_dir)->capture_default_str();
    gen->add_option("--params-out", gen_params_out);

    // compile
    auto *comp = app.add_subcommand("compile", "compile a QAOA instance into an encoded circuit");
    std::string c_graph, c_params, c_out, c_report, c_gadgets = "new", c_mode, c_params_dir = data_dir_default();
    int c_p = 10, c_s = 3, c_width = 3;
    bool c_z2 = false, c_resynth = false;
    uint64_t c_seed = 1;
    size_t c_cap = kDefaultQueueCap;
    comp->add_option("--graph", c_graph)->required();
    comp->add_option("--params", c_params, "angle file; otherwise looked up in --params-dir");
    comp->add_option("--p", c_p, "QAOA depth when no angle file is given")->capture_default_str();
    comp->add_option("--params-dir", c_params_dir)->capture_default_str();
    comp->add_option("--syndromes", c_s)->capture_default_str();
    comp->add_option("--gadgets", c_gadgets)->capture_default_str();
    comp->add_flag("--z2", c_z2, "allow bottom-anchored mixers");
    comp->add_flag("--resynth", c_resynth, "search gadget orders jointly with the schedule");
    comp->add_option("--mode", c_mode, "explicit mode; overrides --z2/--resynth");
    comp->add_option("--width", c_width)->capture_default_str();
    comp->add_option("--queue-cap", c_cap)->capture_default_str();
    comp->add_option("--seed", c_seed)->capture_default_str();
    comp->add_option("--out", c_out, "circuit file");
    comp->add_option("--report", c_report, "append a report row to this CSV");

    // verify-ft
    auto *ver = app.add_subcommand("verify-ft", "exhaustive single-fault check of gadgets or a circuit");
    std::string v_gadget = "all", v_circuit, v_out;
    int v_k = 6, v_perms = 20;
    uint64_t v_seed = 1;
    ver->add_option("--gadget", v_gadget, "gadget kind or 'all'")->capture_default_str();
    ver->add_option("--k", v_k)->capture_default_str();
    ver->add_option("--perms", v_perms, "random slot orders per gadget besides the default")->capture_default_str();
    ver->add_option("--seed", v_seed)->capture_default_str();
    ver->add_option("--circuit", v_circuit, "check a compiled circuit instead");
    ver->add_option("--out", v_out, "per-fault CSV");

    // simulate
    auto *sim = app.add_subcommand("simulate", "sample noisy shots of a circuit");
    std::string s_circuit, s_noise, s_out, s_graph;
    size_t s_shots = 10000;
    uint64_t s_seed = 1;
    double s_lambda = -1;
    sim->add_option("--circuit", s_circuit)->required();
    sim->add_option("--noise", s_noise, "noise model file (defaults otherwise)");
    sim->add_option("--lambda", s_lambda, "override the noise scale");
    sim->add_option("--shots", s_shots)->capture_default_str();
    sim->add_option("--seed", s_seed)->capture_default_str();
    sim->add_option("--graph", s_graph, "graph for energies and approximation ratio");
    sim->add_option("--out", s_out, "shots CSV");

    SweepArgs depth_args, qaoa_args, energy_args;
    auto *bdepth = app.add_subcommand("bench-depth", "compile-only depth sweep");
    depth_args.add(bdepth, false);
    auto *bqaoa = app.add_subcommand("bench-qaoa", "shot-based approximation ratio and post-selection sweep");
    qaoa_args.ps = {1, 2, 3, 4};
    qaoa_args.syndromes = {0, 1, 2, 3};
    qaoa_args.seeds = {"1"};
    qaoa_args.add(bqaoa, true);
    auto *benergy = app.add_subcommand("bench-energy", "energy-distribution distance versus noise scale");
    energy_args.ps = {3};
    energy_args.syndromes = {1};
    energy_args.seeds = {"1"};
    energy_args.modes = {"resynth+z2"};
    energy_args.lambdas = {0, 0.25, 0.5, 1.0};
    energy_args.add(benergy, true);

    auto *rep = app.add_subcommand("report", "turn a report CSV into plot data");
    std::string r_in, r_figure = "all", r_out = out_dir_default();
    rep->add_option("--in", r_in)->required();
    rep->add_option("--figure", r_figure, "figure id or 'all'")->capture_default_str();
    rep->add_option("--out-dir", r_out)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            auto kind = parse_graph_kind(gen_family);
            SweepPoint pt{kind, gen_k, kind == GraphKind::ERDOS_RENYI ? std::optional(gen_density) : std::nullopt,
                          gen_seed, 0, 0};
            auto g = instance_graph(pt);
            if (gen_out.empty()) gen_out = (fs::path(out_dir_default()) / (instance_id(pt) + ".graph")).string();
            spit(gen_out, write_graph(g));
            fmt::print("wrote {} ({} vertices, {} edges)\n", gen_out, g.k, g.edges.size());
            if (gen_p > 0) {
                std::string source;
                auto params = load_params(gen_params_dir, kind, gen_k, gen_p, &source);
                if (gen_params_out.empty()) {
                    gen_params_out = (fs::path(out_dir_default()) / fmt::format("params_p{}.txt", gen_p)).string();
                }
                spit(gen_params_out, write_params(params));
                fmt::print("wrote {} (from {})\n", gen_params_out, source);
            }
        } else if (*comp) {
            auto g = read_graph(slurp(c_graph));
            std::string source = c_params;
            QaoaParams params = c_params.empty() ? load_params(c_params_dir, g.kind, g.k, c_p, &source)
                                                 : read_params(slurp(c_params));
            CompileMode mode = CompileMode::BASELINE;
            if (!c_mode.empty()) {
                mode = parse_compile_mode(c_mode);
            } else if (c_z2 && !c_resynth) {
                throw std::runtime_error("--z2 needs --resynth (or pass --mode)");
            } else if (c_resynth) {
                mode = c_z2 ? CompileMode::RESYNTH_Z2 : CompileMode::RESYNTH;
            }
            CompileConfig cfg;
            cfg.num_syndromes = c_s;
            cfg.gadget_set = parse_gadget_set(c_gadgets);
            cfg.expansion_width = c_width;
            cfg.queue_cap = c_cap;
            cfg.seed = c_seed;
            auto res = compile(build_qaoa(g, params), mode, cfg);
            SweepPoint pt{g.kind, g.k, std::nullopt, g.seed, params.p, c_s};
            ReportRow row = compile_row(pt, mode, res);
            row.bench = "compile";
            row.instance = fs::path(c_graph).stem().string();
            fmt::print("{} k={} p={} s={} mode={}: {} two-qubit gates, 2Q depth {}, area {}, {:.2f}s{}\n",
                       row.instance, g.k, params.p, c_s, row.mode, *row.gates_2q, *row.depth_2q, *row.area,
                       res.seconds, res.budget_exhausted ? " (budget exhausted)" : "");
            fmt::print("angles: {}\n", source);
            if (!c_out.empty()) spit(c_out, write_circuit(res.circuit));
            if (!c_report.empty()) append_report(c_report, {row});
        } else if (*ver) {
            std::string csv;
            bool ok = true;
            auto report = [&](const std::string &label, const FtSummary &s, const PhysicalCircuit &c) {
                fmt::print("{:28} locations {:6} branches {:6} detected {:6} benign {:6} logical {} nonpauli {}\n",
                           label, s.locations, s.branches, s.detected, s.stabilizer, s.logical, s.nonpauli);
                ok = ok && s.fault_tolerant();
                if (!v_out.empty()) {
                    std::string part = write_ft_report_csv(s, c);
                    csv += csv.empty() ? part : part.substr(part.find('\n') + 1);
                }
            };
            if (!v_circuit.empty()) {
                auto c = read_circuit(slurp(v_circuit));
                IcebergLayout layout(c.num_qubits - 4);
                FtContext ctx = code_context(layout);
                ctx.terminal_matters = false;
                report(v_circuit, check_circuit_ft(c, ctx), c);
                if (!v_out.empty()) spit(v_out, csv);
                fmt::print("note: faults inside encoded rotations include the undetectable XX/YY/ZZ class and\n"
                           "branch through later rotations; only gadget fragments are certified.\n");
                return 0;
            } else {
                std::vector<GadgetKind> kinds;
                if (v_gadget == "all") {
                    kinds = {GadgetKind::INIT_NEW, GadgetKind::SYNDROME_NEW, GadgetKind::FINAL_NEW,
                             GadgetKind::INIT_OLD, GadgetKind::SYNDROME_OLD, GadgetKind::FINAL_OLD};
                } else {
                    kinds = {parse_gadget_kind(v_gadget)};
                }
                std::mt19937_64 rng(v_seed);
                IcebergLayout layout(v_k);
                for (auto kind : kinds) {
                    if (kind == GadgetKind::SYNDROME_NEW && !layout.supports_new_syndrome()) {
                        fmt::print("{:28} skipped: needs k+2 divisible by 4\n", gadget_kind_name(kind));
                        continue;
                    }
                    for (int t = 0; t <= v_perms; ++t) {
                        auto order = layout.default_order();
                        if (t > 0) std::shuffle(order.begin(), order.end(), rng);
                        auto g = make_gadget(kind, v_k, order);
                        report(fmt::format("{} #{}", gadget_kind_name(kind), t), check_gadget_ft(g), g.fragment);
                    }
                }
                for (bool bottom : {false, true}) {
                    auto part = classify_rotation_faults(layout, 1, bottom);
                    fmt::print("rotation anchored on {}: undetectable {{{}}}\n", bottom ? "b" : "t",
                               fmt::join(part.undetectable, ", "));
                }
            }
            if (!v_out.empty()) spit(v_out, csv);
            fmt::print("{}\n", ok ? "fault tolerant" : "NOT fault tolerant");
            return ok ? 0 : 1;
        } else if (*sim) {
            auto c = read_circuit(slurp(s_circuit));
            NoiseModel noise = s_noise.empty() ? NoiseModel{} : read_noise(slurp(s_noise));
            if (s_lambda >= 0) noise.scale = s_lambda;
            noise.validate();
            auto shots = sample_shots(c, noise, s_shots, s_seed);
            auto psr = sampled_post_selection_rate(shots);
            fmt::print("post-selection rate {:.4f} +- {:.4f} over {} shots\n", psr.mean, psr.stderr_, shots.size());
            std::optional<ProblemGraph> g;
            if (!s_graph.empty()) {
                g = read_graph(slurp(s_graph));
                double fmax = brute_force_optimum(*g);
                auto ar = sampled_approximation_ratio(shots, *g, fmax);
                fmt::print("approximation ratio {:.4f} +- {:.4f}\n", ar.mean, ar.stderr_);
            }
            int k = c.logicals.empty() ? 0 : static_cast<int>(c.logicals.size());
            if (!s_out.empty()) spit(s_out, shots_csv(shots, k, g ? &*g : nullptr));
        } else if (*bdepth) {
            auto spec = depth_args.spec();
            auto rows = run_depth_sweep(spec);
            write_bench(depth_args, spec, "depth", rows, cmd);
            auto summary = summarize_depth(rows);
            spit((fs::path(depth_args.out_dir) / "depth_summary.csv").string(), depth_summary_csv(summary));
            std::cout << depth_summary_csv(summary);
        } else if (*bqaoa) {
            auto spec = qaoa_args.spec();
            write_bench(qaoa_args, spec, "qaoa", run_qaoa_bench(spec), cmd);
        } else if (*benergy) {
            auto spec = energy_args.spec();
            write_bench(energy_args, spec, "energy", run_energy_bench(spec), cmd);
        } else if (*rep) {
            std::string csv = slurp(r_in);
            std::vector<std::string> ids = r_figure == "all" ? plot_ids() : std::vector<std::string>{r_figure};
            int written = 0;
            for (const auto &id : ids) {
                try {
                    for (const auto &[name, text] : emit_plotdata(csv, id)) {
                        spit((fs::path(r_out) / name).string(), text);
                        fmt::print("wrote {}\n", (fs::path(r_out) / name).string());
                        ++written;
                    }
                } catch (const BenchError &) {
                    if (r_figure != "all") throw;
                }
            }
            if (written == 0) throw BenchError("no figure could be built from this report");
        }
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
    return 0;
}
