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

#include "iceberg/circuit.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace iceberg;

namespace {

PhysicalCircuit make(int nq, std::vector<Gate> gates) {
    PhysicalCircuit c;
    c.num_qubits = nq;
    c.components.push_back({0, Role::PHASE_LAYER});
    c.gates = std::move(gates);
    return c;
}

}  // namespace

TEST(circuit, single_rzz_depth_one) {
    EXPECT_EQ(two_qubit_depth(make(2, {Gate::rzz(0, 1, 0.5)})), 1);
}

TEST(circuit, empty_depth_zero) {
    EXPECT_EQ(two_qubit_depth(make(3, {})), 0);
}

TEST(circuit, disjoint_gates_share_layer) {
    EXPECT_EQ(two_qubit_depth(make(4, {Gate::rzz(0, 1, 0.5), Gate::rzz(2, 3, 0.5)})), 1);
}

TEST(circuit, shared_qubit_serializes) {
    EXPECT_EQ(two_qubit_depth(make(3, {Gate::rzz(0, 1, 0.5), Gate::rzz(1, 2, 0.5)})), 2);
}

TEST(circuit, single_qubit_gates_are_free_for_2q_depth) {
    auto c = make(3, {Gate::h(0), Gate::cx(0, 1), Gate::h(1), Gate::h(1), Gate::cx(1, 2), Gate::h(2)});
    auto s = layered_schedule(c);
    EXPECT_EQ(s.depth_2q, 2);
    EXPECT_EQ(s.depth_all, 6);
    // 1Q gate on another qubit can share a layer with a 2Q gate.
    auto d = make(3, {Gate::cx(0, 1), Gate::h(2)});
    EXPECT_EQ(layered_schedule(d).depth_all, 2);
}

TEST(circuit, layers_share_no_qubit) {
    std::mt19937 rng(7);
    PhysicalCircuit c;
    c.num_qubits = 6;
    c.components = {{0, Role::PHASE_LAYER}, {1, Role::MIXER_LAYER}};
    for (int i = 0; i < 200; ++i) {
        int a = rng() % 6, b = rng() % 6;
        int comp = rng() % 2;
        if (a == b) c.gates.push_back(Gate::h(a, comp));
        else c.gates.push_back(Gate::rzz(a, b, 0.1, comp));
    }
    auto s = layered_schedule(c);
    size_t total = 0;
    for (const auto &layer : s.layers) {
        std::set<int> used;
        for (size_t gi : layer) {
            for (int q : c.gates[gi].qubits) EXPECT_TRUE(used.insert(q).second);
        }
        total += layer.size();
    }
    EXPECT_EQ(total, c.gates.size());
}

TEST(circuit, component_order_is_a_dependency) {
    // A gate of component 0 listed after a component-1 gate on the same qubit
    // still runs first.
    PhysicalCircuit c;
    c.num_qubits = 3;
    c.components = {{0, Role::PHASE_LAYER}, {1, Role::MIXER_LAYER}};
    c.gates = {Gate::rxx(0, 1, 0.1, 1), Gate::rzz(1, 2, 0.1, 0)};
    auto s = layered_schedule(c);
    EXPECT_LT(s.layer_of[1], s.layer_of[0]);
    EXPECT_EQ(s.depth_2q, 2);
}

TEST(circuit, barrier_fences_listed_qubits) {
    auto c = make(4, {Gate::rzz(0, 1, 0.1), Gate::barrier({1, 2}), Gate::rzz(2, 3, 0.1)});
    EXPECT_EQ(two_qubit_depth(c), 2);
    auto d = make(4, {Gate::rzz(0, 1, 0.1), Gate::barrier({0, 1}), Gate::rzz(2, 3, 0.1)});
    EXPECT_EQ(two_qubit_depth(d), 1);
    auto e = make(4, {Gate::rzz(0, 1, 0.1), Gate::barrier({}), Gate::rzz(2, 3, 0.1)});
    EXPECT_EQ(two_qubit_depth(e), 2);
}

TEST(circuit, concatenation_is_subadditive) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto rand_circ = [&] {
            PhysicalCircuit c = make(5, {});
            int n = rng() % 20;
            for (int i = 0; i < n; ++i) {
                int a = rng() % 5, b = rng() % 5;
                if (a != b) c.gates.push_back(Gate::cx(a, b));
            }
            return c;
        };
        auto c1 = rand_circ(), c2 = rand_circ();
        auto cat = c1;
        cat.gates.insert(cat.gates.end(), c2.gates.begin(), c2.gates.end());
        EXPECT_LE(two_qubit_depth(cat), two_qubit_depth(c1) + two_qubit_depth(c2));
    }
}

TEST(circuit, space_time_area_matches_table_values) {
    EXPECT_EQ(space_time_area(397, 22), 9528);
    EXPECT_EQ(space_time_area(375, 18), 7500);
    EXPECT_EQ(space_time_area(0, 4), 0);
    EXPECT_THROW(space_time_area(10, 3), CircuitError);
}

TEST(circuit, parse_examples) {
    auto c = read_circuit("rzz 0 1 0.5\n");
    ASSERT_EQ(c.gates.size(), 1u);
    EXPECT_EQ(c.gates[0], Gate::rzz(0, 1, 0.5));
    auto d = read_circuit("cx 3 0\n");
    EXPECT_EQ(d.gates[0], Gate::cx(3, 0));
    EXPECT_EQ(d.num_qubits, 4);
}

TEST(circuit, parse_errors_carry_line_numbers) {
    try {
        read_circuit("h 0\nrzz 0 0 0.5\n");
        FAIL() << "expected parse error";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 2);
    }
    EXPECT_THROW(read_circuit("foo 1 2\n"), ParseError);
    EXPECT_THROW(read_circuit("cx 1\n"), ParseError);
    EXPECT_THROW(read_circuit("qubits 2 clbits 0\ncx 1 2\n"), ParseError);
    EXPECT_THROW(read_circuit("mz 0\n"), ParseError);
}

TEST(circuit, round_trip_random_circuits) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-4, 4);
    for (int trial = 0; trial < 100; ++trial) {
        PhysicalCircuit c;
        c.num_qubits = 2 + rng() % 8;
        c.num_clbits = rng() % 5;
        int ncomp = 1 + rng() % 4;
        for (int i = 0; i < ncomp; ++i) c.add_component(static_cast<Role>(rng() % 5));
        int ng = rng() % 40;
        for (int i = 0; i < ng; ++i) {
            int comp = c.components[rng() % ncomp].id;
            int a = rng() % c.num_qubits;
            int b = (a + 1 + rng() % (c.num_qubits - 1)) % c.num_qubits;
            switch (rng() % 9) {
                case 0: c.gates.push_back(Gate::rzz(a, b, angle(rng), comp)); break;
                case 1: c.gates.push_back(Gate::rxx(a, b, angle(rng), comp)); break;
                case 2: c.gates.push_back(Gate::cx(a, b, comp)); break;
                case 3: c.gates.push_back(Gate::h(a, comp)); break;
                case 4: c.gates.push_back(Gate::reset(a, comp)); break;
                case 5: c.gates.push_back(Gate::barrier({a, b}, comp)); break;
                case 6: c.gates.push_back(Gate::rx(a, angle(rng), comp)); break;
                default:
                    if (c.num_clbits > 0) c.gates.push_back(Gate::mz(a, rng() % c.num_clbits, comp));
            }
        }
        if (c.num_clbits > 1) {
            c.checks.push_back({{0, 1}, 1});
            c.logicals.push_back({3, {1, 0}});
        }
        EXPECT_EQ(read_circuit(write_circuit(c)), c);
    }
}

TEST(circuit, validate_rejects_bad_arity) {
    PhysicalCircuit c = make(3, {Gate{GateKind::CNOT, {0}, 0, -1, 0}});
    EXPECT_THROW(c.validate(), CircuitError);
    PhysicalCircuit d = make(3, {Gate::rzz(0, 5, 0.1)});
    EXPECT_THROW(d.validate(), CircuitError);
    PhysicalCircuit e = make(3, {Gate::rzz(0, 1, 0.1, 9)});
    EXPECT_THROW(e.validate(), CircuitError);
}
