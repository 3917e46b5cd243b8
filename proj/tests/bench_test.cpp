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

#include <gtest/gtest.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace iceberg;

namespace {

SweepSpec small_spec() {
    SweepSpec spec;
    spec.family = GraphKind::REGULAR_3;
    spec.sizes = {4};
    spec.seeds = {1, 2};
    spec.ps = {1};
    spec.syndromes = {1};
    spec.modes = {CompileMode::BASELINE, CompileMode::RESYNTH_Z2};
    spec.shots = 3000;
    spec.bootstrap = 20;
    spec.threads = 1;
    return spec;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(bench, expand_points_is_a_cartesian_product) {
    SweepSpec spec = small_spec();
    spec.sizes = {4, 6};
    spec.ps = {1, 2};
    spec.syndromes = {0, 1, 2};
    EXPECT_EQ(expand_points(spec).size(), 2u * 2u * 2u * 3u);
    spec.family = GraphKind::ERDOS_RENYI;
    spec.densities = {0.2, 0.5};
    EXPECT_EQ(expand_points(spec).size(), 2u * 2u * 2u * 2u * 3u);
}

TEST(bench, spec_validation) {
    SweepSpec spec = small_spec();
    EXPECT_NO_THROW(spec.validate());
    spec.seeds.clear();
    EXPECT_THROW(spec.validate(), BenchError);
    spec = small_spec();
    spec.family = GraphKind::ERDOS_RENYI;
    EXPECT_THROW(spec.validate(), BenchError);  // no densities
    spec = small_spec();
    spec.modes.clear();
    EXPECT_THROW(spec.validate(), BenchError);
}

TEST(bench, depth_sweep_rows_and_summary) {
    SweepSpec spec = small_spec();
    auto rows = run_depth_sweep(spec);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto &r : rows) {
        EXPECT_EQ(r.bench, "depth");
        EXPECT_EQ(*r.area, 6.0 * *r.depth_2q);
        EXPECT_FALSE(r.ar_se.has_value());
    }
    EXPECT_EQ(rows[0].mode, "baseline");
    EXPECT_EQ(rows[1].mode, "resynth+z2");
    auto summary = summarize_depth(rows);
    ASSERT_EQ(summary.size(), 2u);
    EXPECT_EQ(summary[0].mode, "baseline");
    EXPECT_EQ(summary[0].count, 2);
    EXPECT_DOUBLE_EQ(summary[0].reduction, 0.0);
    EXPECT_LE(summary[0].min, summary[0].mean);
    EXPECT_LE(summary[0].mean, summary[0].max);
    EXPECT_GT(summary[1].reduction, 0.0);
}

TEST(bench, report_round_trip) {
    SweepSpec spec = small_spec();
    auto rows = run_depth_sweep(spec);
    std::string csv = report_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n') + 1), report_header());
    auto back = read_report_csv(csv);
    ASSERT_EQ(back.size(), rows.size());
    for (size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(report_line(back[i]), report_line(rows[i]));
    EXPECT_THROW(read_report_csv("a,b\n1,2\n"), BenchError);
}

TEST(bench, append_report_keeps_one_header) {
    auto path = (std::filesystem::temp_directory_path() / "iceberg_bench_append.csv").string();
    std::filesystem::remove(path);
    auto rows = run_depth_sweep(small_spec());
    append_report(path, rows);
    append_report(path, rows);
    auto back = read_report_csv(slurp(path));
    EXPECT_EQ(back.size(), 2 * rows.size());
    {
        std::ofstream out(path);
        out << "other,schema\n";
    }
    EXPECT_THROW(append_report(path, rows), BenchError);
    std::filesystem::remove(path);
}

TEST(bench, plotdata) {
    auto rows = run_depth_sweep(small_spec());
    auto files = emit_plotdata(report_csv(rows), "depth-vs-k");
    ASSERT_EQ(files.size(), 1u);
    const std::string &table = files.begin()->second;
    EXPECT_EQ(table.substr(0, table.find('\n')), "# k mode mean min max");
    EXPECT_NE(table.find("\n4 baseline "), std::string::npos);

    EXPECT_THROW(emit_plotdata("", "depth-vs-k"), BenchError);
    EXPECT_THROW(emit_plotdata(report_header(), "depth-vs-k"), BenchError);
    try {
        emit_plotdata(report_csv(rows), "nope");
        FAIL() << "unknown id accepted";
    } catch (const BenchError &e) {
        for (const auto &id : plot_ids()) EXPECT_NE(std::string(e.what()).find(id), std::string::npos);
    }
}

TEST(bench, noiseless_qaoa_bench_matches_exact) {
    SweepSpec spec = small_spec();
    spec.seeds = {3};
    spec.noise = NoiseModel::noiseless();
    auto rows = run_qaoa_bench(spec);
    ASSERT_EQ(rows.size(), 3u);  // two modes plus the unencoded reference
    for (const auto &r : rows) {
        EXPECT_EQ(*r.psr, 1.0);
        ASSERT_TRUE(r.ar_se.has_value());
        EXPECT_NEAR(*r.ar, *r.ar_exact, 4 * *r.ar_se + 1e-12) << r.mode;
    }
    EXPECT_EQ(rows.back().mode, "unencoded");
}

TEST(bench, energy_bench_without_noise_is_close) {
    SweepSpec spec = small_spec();
    spec.seeds = {3};
    spec.modes = {CompileMode::RESYNTH_Z2};
    spec.lambdas = {0.0, 1.0};
    auto rows = run_energy_bench(spec);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto &r : rows) {
        ASSERT_TRUE(r.tv && r.tv_se && r.tv_trunc && r.tv_trunc_se);
        if (*r.lambda == 0.0) EXPECT_LT(*r.tv, 0.05);
    }
}

TEST(bench, params_lookup) {
    std::string source;
    auto ramp = load_params("/nonexistent", GraphKind::REGULAR_3, 10, 2, &source);
    EXPECT_EQ(source, "ramp");
    EXPECT_EQ(ramp.gammas, ramp_params(2).gammas);

    auto dir = std::filesystem::temp_directory_path() / "iceberg_params";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "params_regular3_k10_p2.txt");
        out << "p: 2\ngammas: [0.1, 0.2]\nbetas: [0.3, 0.4]\n";
    }
    auto fit = load_params(dir.string(), GraphKind::REGULAR_3, 14, 2, &source);
    EXPECT_EQ(fit.gammas, (std::vector<double>{0.1, 0.2}));
    EXPECT_NE(source.find("params_regular3_k10_p2.txt"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(bench, manifest_records_seeds) {
    SweepSpec spec = small_spec();
    spec.seeds = {11, 12};
    std::string m = write_manifest(spec, "bench-depth --k 4");
    EXPECT_NE(m.find("seeds: [11, 12]"), std::string::npos);
    EXPECT_NE(m.find("command: bench-depth --k 4"), std::string::npos);
    EXPECT_NE(m.find("eigen:"), std::string::npos);
}

TEST(bench, parallel_for_covers_every_index) {
    std::vector<int> hits(100, 0);
    std::atomic<int> total{0};
    parallel_for(hits.size(), 4, [&](size_t i) {
        hits[i] += 1;
        total += 1;
    });
    EXPECT_EQ(total.load(), 100);
    for (int h : hits) EXPECT_EQ(h, 1);
}
