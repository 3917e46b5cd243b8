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

#include "iceberg/ft.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace iceberg;

namespace {

PhysicalCircuit one_gate(int nq, Gate g) {
    PhysicalCircuit c;
    c.num_qubits = nq;
    c.components.push_back({0, Role::INIT});
    c.gates.push_back(std::move(g));
    return c;
}

}  // namespace

TEST(ft, cnot_propagation_rules) {
    PauliString x = PauliString::from_string("XI");
    x.conjugate_by(Gate::cx(0, 1));
    EXPECT_EQ(x.str(), "XX");
    PauliString z = PauliString::from_string("IZ");
    z.conjugate_by(Gate::cx(0, 1));
    EXPECT_EQ(z.str(), "ZZ");
    PauliString y = PauliString::from_string("YI");
    y.conjugate_by(Gate::h(0));
    EXPECT_EQ(y.str(), "YI");
}

TEST(ft, clifford_propagation_is_a_homomorphism) {
    std::mt19937 rng(4);
    const char letters[] = "IXYZ";
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + rng() % 6;
        std::vector<Gate> gates;
        for (int i = 0; i < 30; ++i) {
            int a = rng() % n, b = rng() % n;
            if (a != b && rng() % 2) gates.push_back(Gate::cx(a, b));
            else gates.push_back(Gate::h(a));
        }
        std::string ps, qs;
        for (int q = 0; q < n; ++q) {
            ps += letters[rng() % 4];
            qs += letters[rng() % 4];
        }
        PauliString p = PauliString::from_string(ps), q = PauliString::from_string(qs), pq = p * q;
        for (const auto &g : gates) {
            p.conjugate_by(g);
            q.conjugate_by(g);
            pq.conjugate_by(g);
        }
        EXPECT_EQ(p * q, pq);
    }
}

TEST(ft, rotation_branching) {
    auto c = one_gate(2, Gate::rzz(0, 1, 0.3));
    c.gates.insert(c.gates.begin(), Gate::h(0));
    FtContext ctx;
    ctx.num_data = 2;
    auto reps = propagate({0, FaultSlot::AFTER_GATE, PauliString::from_string("XI")}, c, ctx);
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_EQ(reps[0].terminal.str(), "XI");
    EXPECT_EQ(reps[1].terminal.str(), "YZ");
    auto pass = propagate({0, FaultSlot::AFTER_GATE, PauliString::from_string("ZI")}, c, ctx);
    EXPECT_EQ(pass.size(), 1u);
}

TEST(ft, terminal_classification_examples) {
    IcebergLayout l(4);
    FtContext ctx = code_context(l);
    PauliString id(l.num_qubits());
    EXPECT_EQ(classify_terminal(id, false, false, ctx), Classification::STABILIZER_EQUIVALENT);
    PauliString xx(l.num_qubits());
    xx.set(l.top(), true, false);
    xx.set(3, true, false);
    EXPECT_EQ(classify_terminal(xx, false, false, ctx), Classification::LOGICAL_ERROR);
    PauliString xt = PauliString::single(l.num_qubits(), l.top(), 'X');
    EXPECT_EQ(classify_terminal(xt, false, false, ctx), Classification::DETECTED_BY_CHECK);
    EXPECT_EQ(classify_terminal(id, true, false, ctx), Classification::DETECTED_BY_CHECK);
}

TEST(ft, x_on_top_before_syndrome_flips_z_check) {
    Gadget g = syndrome_new(6);
    // Inject X_t after the ancilla resets, ahead of every CNOT.
    auto reps = propagate({2, FaultSlot::AFTER_GATE, PauliString::single(g.layout.num_qubits(), 0, 'X')},
                          g.fragment, context_for(g));
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_EQ(reps[0].classification, Classification::DETECTED_BY_CHECK);
    EXPECT_EQ(reps[0].flipped_checks, std::vector<int>{0});
}

TEST(ft, all_gadgets_fault_tolerant_default_order) {
    for (int k : {2, 4, 6, 10}) {
        for (GadgetKind kind : {GadgetKind::INIT_OLD, GadgetKind::INIT_NEW, GadgetKind::SYNDROME_OLD,
                                GadgetKind::SYNDROME_NEW, GadgetKind::FINAL_OLD, GadgetKind::FINAL_NEW}) {
            if (kind == GadgetKind::SYNDROME_NEW && (k + 2) % 4 != 0) continue;
            auto s = check_gadget_ft(make_gadget(kind, k));
            EXPECT_TRUE(s.fault_tolerant()) << gadget_kind_name(kind) << " k=" << k << " escapes "
                                            << s.escapes.size() << " first "
                                            << (s.escapes.empty() ? "" : s.escapes[0].location.pauli.str() +
                                                                             " @" + std::to_string(s.escapes[0].location.gate));
            EXPECT_GT(s.detected, 0u);
        }
    }
}

TEST(ft, gadgets_fault_tolerant_under_permutation) {
    std::mt19937 rng(17);
    for (GadgetKind kind : {GadgetKind::INIT_NEW, GadgetKind::SYNDROME_NEW, GadgetKind::FINAL_NEW,
                            GadgetKind::INIT_OLD, GadgetKind::SYNDROME_OLD, GadgetKind::FINAL_OLD}) {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<int> order(8);
            for (int i = 0; i < 8; ++i) order[i] = i;
            std::shuffle(order.begin(), order.end(), rng);
            EXPECT_TRUE(check_gadget_ft(make_gadget(kind, 6, order)).fault_tolerant());
        }
    }
}

TEST(ft, removing_a_check_breaks_fault_tolerance) {
    for (GadgetKind kind : {GadgetKind::INIT_NEW, GadgetKind::SYNDROME_NEW, GadgetKind::FINAL_NEW,
                            GadgetKind::INIT_OLD, GadgetKind::SYNDROME_OLD, GadgetKind::FINAL_OLD}) {
        Gadget g = make_gadget(kind, 6);
        bool some_escape = false;
        for (size_t drop = 0; drop < g.check_map().size(); ++drop) {
            Gadget m = g;
            m.fragment.checks.erase(m.fragment.checks.begin() + drop);
            some_escape |= !check_gadget_ft(m).fault_tolerant();
        }
        EXPECT_TRUE(some_escape) << gadget_kind_name(kind);
    }
}

TEST(ft, rotation_partition_three_of_fifteen) {
    for (int k : {2, 4, 6}) {
        IcebergLayout l(k);
        for (int i = 1; i <= k; ++i) {
            for (bool bottom : {false, true}) {
                auto part = classify_rotation_faults(l, i, bottom);
                auto und = part.undetectable;
                std::sort(und.begin(), und.end());
                EXPECT_EQ(und, (std::vector<std::string>{"XX", "YY", "ZZ"}));
                EXPECT_EQ(part.detected.size(), 12u);
            }
        }
    }
}

TEST(ft, enumerate_counts) {
    auto c = one_gate(2, Gate::cx(0, 1));
    EXPECT_EQ(enumerate_faults(c).size(), 15u);
    c.num_clbits = 1;
    c.gates.push_back(Gate::mz(0, 0));
    EXPECT_EQ(enumerate_faults(c).size(), 15u + 3u + 1u);
}
