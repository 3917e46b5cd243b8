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


#ifndef ICEBERG_COMPILER_HPP
#define ICEBERG_COMPILER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iceberg/circuit.hpp"
#include "iceberg/gadgets.hpp"
#include "iceberg/qaoa.hpp"

namespace iceberg {

enum class GadgetSet { OLD, NEW };
const char *gadget_set_name(GadgetSet set);
GadgetSet parse_gadget_set(std::string_view text);

// BASELINE inserts default-order gadgets and lists gates as written.
// COSCHEDULE runs the search with fixed gadget orders and top-anchored X.
// RESYNTH lets the search pick gadget orders; RESYNTH_Z2 also lets each
// logical X rotation use either the top or the bottom qubit.
enum class CompileMode { BASELINE, COSCHEDULE, RESYNTH, RESYNTH_Z2 };
const char *compile_mode_name(CompileMode mode);
CompileMode parse_compile_mode(std::string_view text);

// How the merged ancilla vertex `a` enters the heuristic.
enum class AncillaWeighting { HALVED, MERGED_FULL };

struct CompileConfig {
    int num_syndromes = 3;
    GadgetSet gadget_set = GadgetSet::NEW;
    bool use_z2 = false;
    bool resynthesize = false;
    int expansion_width = 3;
    std::optional<size_t> queue_cap;  // node expansions before falling back to a greedy rollout
    uint64_t seed = 0;
    AncillaWeighting ancilla_weighting = AncillaWeighting::HALVED;

    void validate() const;
};

CompileConfig config_for(CompileMode mode, CompileConfig base = {});

inline constexpr size_t kDefaultQueueCap = 20000;

class CompileError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// One gadget instance inside a compiled circuit.
struct PlacedGadget {
    GadgetKind kind;
    std::vector<int> order;
    int component = 0;
    int clbit_offset = 0;
};

struct CompileResult {
    PhysicalCircuit circuit;
    int depth_2q = 0;
    int depth_before_final = 0;  // 2Q depth of everything except the FINAL gadget
    int search_cost = 0;         // G at the goal node; 0 for the baseline
    int source_heuristic = 0;
    size_t expansions = 0;
    bool budget_exhausted = false;
    bool list_fallback = false;  // the plain list schedule beat the search
    double seconds = 0.0;
    std::vector<PlacedGadget> gadgets;
};

CompileResult compile_baseline(const LogicalCircuit &logical, const CompileConfig &cfg);
CompileResult compile_cooptimized(const LogicalCircuit &logical, const CompileConfig &cfg);
CompileResult compile(const LogicalCircuit &logical, CompileMode mode, CompileConfig cfg = {});

// Aggregated remaining work. Vertices 0..n-1 are the data qubits (t=0,
// b=n-1); vertex n is the merged ancilla `a`. X rotations whose anchor may be
// t or b are kept apart as flexible counts.
struct UncompiledGraph {
    int n = 0;
    std::map<std::pair<int, int>, int> edges;
    std::map<int, int> flexible;  // data qubit -> X rotations anchored on t or b

    void add(int u, int v, int w);
    int ancilla() const { return n; }
    std::vector<int> vertex_weights(AncillaWeighting weighting = AncillaWeighting::HALVED) const;
    int heuristic(AncillaWeighting weighting = AncillaWeighting::HALVED) const;
};

// Graph of the whole circuit minus the FINAL gadget, as seen by the search
// before any layer is placed.
UncompiledGraph source_uncompiled_graph(const LogicalCircuit &logical, const CompileConfig &cfg);

// Data-qubit order for the INIT gadget: t and b at the branch roots, then
// data qubits by descending problem-graph degree.
std::vector<int> predetermine_init_order(const std::vector<int> &degrees, GadgetSet set);
std::vector<int> predetermine_init_order(const ProblemGraph &graph, GadgetSet set);

// Places the 2p algorithmic components into s+1 chunks of balanced gate count;
// entry i is the number of algorithmic components before syndrome i.
std::vector<int> syndrome_positions(const LogicalCircuit &logical, int num_syndromes);

// Per-qubit index of the first free two-qubit slot after the circuit.
std::vector<int> qubit_free_slots(const PhysicalCircuit &circuit);

}  // namespace iceberg

#endif  // ICEBERG_COMPILER_HPP
