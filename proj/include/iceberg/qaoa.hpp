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

#ifndef ICEBERG_QAOA_HPP
#define ICEBERG_QAOA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iceberg/circuit.hpp"
#include "iceberg/gadgets.hpp"

namespace iceberg {

enum class GraphKind { REGULAR_3, ERDOS_RENYI, CUSTOM };
const char *graph_kind_name(GraphKind kind);
GraphKind parse_graph_kind(std::string_view text);

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
    bool operator==(const Edge &) const = default;
};

// Vertices are 0..k-1; vertex v is carried by logical qubit v+1.
struct ProblemGraph {
    int k = 0;
    std::vector<Edge> edges;
    GraphKind kind = GraphKind::CUSTOM;
    uint64_t seed = 0;

    void validate() const;
    bool weighted() const;
    double total_weight() const;
    std::vector<int> degrees() const;
    bool operator==(const ProblemGraph &) const = default;
};

class GraphError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

ProblemGraph generate_instance(GraphKind kind, int k, std::optional<double> density, uint64_t seed);
ProblemGraph petersen_graph();
ProblemGraph cycle_graph(int k);
ProblemGraph complete_graph(int k);

struct QaoaParams {
    int p = 0;
    std::vector<double> gammas;
    std::vector<double> betas;
    void validate() const;
};

// Linear-ramp schedule used when no parameter file is given.
QaoaParams ramp_params(int p, double gamma_max = 0.6, double beta_max = 0.6);

struct LogicalComponent {
    Role role = Role::PHASE_LAYER;
    std::vector<LogicalRotation> rotations;
};

struct LogicalCircuit {
    int k = 0;
    std::vector<LogicalComponent> components;  // after the |+>^k preparation
    bool z2_symmetric = true;
    size_t count(RotationKind kind) const;
};

LogicalCircuit build_qaoa(const ProblemGraph &graph, const QaoaParams &params);

// Bit v of a Bitstring is the value of vertex v.
using Bitstring = uint64_t;
using Distribution = std::map<Bitstring, double>;

double cut_value(const ProblemGraph &graph, Bitstring x);
double energy(const ProblemGraph &graph, Bitstring x);
double hamiltonian_value(const ProblemGraph &graph, Bitstring x);
double brute_force_optimum(const ProblemGraph &graph);
double approximation_ratio(const Distribution &dist, const ProblemGraph &graph,
                           std::optional<double> f_max = std::nullopt);
double success_probability(const Distribution &dist, const ProblemGraph &graph,
                           std::optional<double> f_max = std::nullopt);

std::string write_graph(const ProblemGraph &graph);
ProblemGraph read_graph(std::string_view text);
std::string write_params(const QaoaParams &params);
QaoaParams read_params(std::string_view text);

// Portable generator helpers shared by every seeded component.
uint64_t splitmix64(uint64_t x);
double uniform01(uint64_t bits);

}  // namespace iceberg

#endif  // ICEBERG_QAOA_HPP
