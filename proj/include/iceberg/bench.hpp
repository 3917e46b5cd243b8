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

#ifndef ICEBERG_BENCH_HPP
#define ICEBERG_BENCH_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iceberg/compiler.hpp"
#include "iceberg/qaoa.hpp"
#include "iceberg/simulator.hpp"

namespace iceberg {

class BenchError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Cartesian product of instances, QAOA depths, syndrome counts and modes.
struct SweepSpec {
    GraphKind family = GraphKind::REGULAR_3;
    std::vector<int> sizes;
    std::vector<uint64_t> seeds;
    std::vector<double> densities;  // Erdős–Rényi only
    std::vector<int> ps;
    std::vector<int> syndromes;
    std::vector<CompileMode> modes;
    GadgetSet gadgets = GadgetSet::NEW;
    int width = 3;
    size_t queue_cap = kDefaultQueueCap;

    size_t shots = 10000;
    uint64_t shot_seed = 1;
    NoiseModel noise;
    std::vector<double> lambdas;  // noise scales; empty means noise.scale only
    double truncate_eps = 1e-3;
    int bootstrap = 100;
    std::string params_dir;  // fitted angles; the linear ramp is used when absent
    int threads = 0;         // 0 picks the hardware concurrency

    void validate() const;
};

struct SweepPoint {
    GraphKind family = GraphKind::REGULAR_3;
    int k = 0;
    std::optional<double> density;
    uint64_t seed = 0;
    int p = 0;
    int s = 0;
};

std::vector<SweepPoint> expand_points(const SweepSpec &spec);
std::string instance_id(const SweepPoint &pt);
ProblemGraph instance_graph(const SweepPoint &pt);

// One row of every report; metrics that do not apply are left empty and the
// *_se columns are only filled for shot-sampled metrics.
struct ReportRow {
    std::string bench;
    std::string instance;
    std::string family;
    int k = 0;
    std::optional<double> density;
    uint64_t seed = 0;
    int p = 0;
    int s = 0;
    std::string mode;
    std::optional<double> lambda;
    std::optional<double> gates_2q, depth_2q, area;
    std::optional<double> seconds, expansions, budget_exhausted;
    std::optional<double> shots;
    std::optional<double> ar, ar_se, success, success_se, psr, psr_se, ar_exact;
    std::optional<double> tv, tv_se, tv_trunc, tv_trunc_se;
};

std::string report_header();
std::string report_line(const ReportRow &row);
std::string report_csv(const std::vector<ReportRow> &rows);
std::vector<ReportRow> read_report_csv(std::string_view text);
// Appends rows, writing the header only when the file is new; refuses to mix
// schemas.
void append_report(const std::string &path, const std::vector<ReportRow> &rows);

ReportRow compile_row(const SweepPoint &pt, CompileMode mode, const CompileResult &result);

// Angle files are looked up as <dir>/params_<family>_k<k>_p<p>.txt, then the
// k=10 file of the same family; `source` names what was used.
QaoaParams load_params(const std::string &dir, GraphKind family, int k, int p, std::string *source = nullptr);

std::vector<ReportRow> run_depth_sweep(const SweepSpec &spec);
std::vector<ReportRow> run_qaoa_bench(const SweepSpec &spec);
std::vector<ReportRow> run_energy_bench(const SweepSpec &spec);

struct DepthSummary {
    std::string family;
    std::optional<double> density;
    int k = 0;
    std::string mode;
    int count = 0;
    double min = 0, mean = 0, max = 0;
    double reduction = 0;  // 1 - mean depth / mean baseline depth of the same group
};
std::vector<DepthSummary> summarize_depth(const std::vector<ReportRow> &rows);
std::string depth_summary_csv(const std::vector<DepthSummary> &summary);

std::vector<std::string> plot_ids();
// Long-format, whitespace-separated tables keyed by file name.
std::map<std::string, std::string> emit_plotdata(std::string_view csv, const std::string &figure_id);

std::string write_manifest(const SweepSpec &spec, const std::string &command,
                           const std::map<std::string, std::string> &extra = {});

// Runs fn(i) for i in [0, n) on a small pool; results must be written by index.
void parallel_for(size_t n, int threads, const std::function<void(size_t)> &fn);

}  // namespace iceberg

#endif  // ICEBERG_BENCH_HPP
