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

#ifndef ICEBERG_CIRCUIT_HPP
#define ICEBERG_CIRCUIT_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iceberg {

// RX is not part of the encoded gate set; it only appears in unencoded
// reference circuits built for comparison runs.
enum class GateKind {
    RZZ,
    RXX,
    RX,
    CNOT,
    H,
    X,
    Z,
    MEASURE_Z,
    MEASURE_X,
    RESET,
    BARRIER,
};

enum class Role {
    INIT,
    PHASE_LAYER,
    MIXER_LAYER,
    SYNDROME,
    FINAL_MEAS,
};

const char *gate_name(GateKind kind);
const char *role_name(Role role);
Role parse_role(std::string_view text);

bool is_two_qubit(GateKind kind);
bool is_measurement(GateKind kind);
bool has_angle(GateKind kind);

struct Gate {
    GateKind kind = GateKind::H;
    std::vector<int> qubits;
    double angle = 0.0;
    int clbit = -1;
    int component = 0;

    static Gate rzz(int a, int b, double theta, int comp = 0);
    static Gate rxx(int a, int b, double theta, int comp = 0);
    static Gate rx(int q, double theta, int comp = 0);
    static Gate cx(int control, int target, int comp = 0);
    static Gate h(int q, int comp = 0);
    static Gate x(int q, int comp = 0);
    static Gate z(int q, int comp = 0);
    static Gate mz(int q, int c, int comp = 0);
    static Gate mx(int q, int c, int comp = 0);
    static Gate reset(int q, int comp = 0);
    static Gate barrier(std::vector<int> qs, int comp = 0);

    bool operator==(const Gate &) const = default;
};

struct Component {
    int id = 0;
    Role role = Role::INIT;
    bool operator==(const Component &) const = default;
};

// A set of classical bits whose XOR must equal `expected` for a shot to be
// kept.
struct ParityCheck {
    std::vector<int> bits;
    int expected = 0;
    bool operator==(const ParityCheck &) const = default;
};

// Logical qubit `index` (1-based, matching the physical data qubit it lives
// on) is the XOR of `bits`.
struct LogicalReadout {
    int index = 0;
    std::vector<int> bits;
    bool operator==(const LogicalReadout &) const = default;
};

class CircuitError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
   public:
    ParseError(int line, const std::string &what);
    int line() const { return line_; }

   private:
    int line_;
};

struct PhysicalCircuit {
    int num_qubits = 0;
    int num_clbits = 0;
    std::vector<Gate> gates;
    std::vector<Component> components;
    std::vector<ParityCheck> checks;
    std::vector<LogicalReadout> logicals;

    // Throws CircuitError on arity, range, or component violations.
    void validate() const;
    // Position of a component in the declared order; throws if unknown.
    int rank_of(int component_id) const;
    int add_component(Role role);
    size_t count_two_qubit() const;

    bool operator==(const PhysicalCircuit &) const = default;
};

struct LayerSchedule {
    std::vector<std::vector<size_t>> layers;
    std::vector<int> layer_of;  // per gate; -1 for barriers
    int depth_all = 0;
    int depth_2q = 0;
};

LayerSchedule layered_schedule(const PhysicalCircuit &circuit);
int two_qubit_depth(const PhysicalCircuit &circuit);
long space_time_area(const PhysicalCircuit &circuit, int k);
long space_time_area(int depth_2q, int k);

std::string write_circuit(const PhysicalCircuit &circuit);
PhysicalCircuit read_circuit(std::string_view text);

// Single-line forms used by the circuit format and gadget files.
std::string format_check(const ParityCheck &check);
std::string format_logical(const LogicalReadout &readout);

}  // namespace iceberg

#endif  // ICEBERG_CIRCUIT_HPP
