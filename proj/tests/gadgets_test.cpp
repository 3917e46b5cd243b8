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

#include "iceberg/gadgets.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "iceberg/ft.hpp"

using namespace iceberg;

namespace {

const GadgetKind kAll[] = {GadgetKind::INIT_OLD, GadgetKind::INIT_NEW, GadgetKind::SYNDROME_OLD,
                           GadgetKind::SYNDROME_NEW, GadgetKind::FINAL_OLD, GadgetKind::FINAL_NEW};

bool buildable(GadgetKind kind, int k) { return kind != GadgetKind::SYNDROME_NEW || (k + 2) % 4 == 0; }

std::vector<int> random_order(int n, std::mt19937 &rng) {
    std::vector<int> o(n);
    for (int i = 0; i < n; ++i) o[i] = i;
    std::shuffle(o.begin(), o.end(), rng);
    return o;
}

PauliString data_all(const IcebergLayout &l, char p) {
    PauliString s(l.num_qubits());
    for (int q = 0; q < l.n(); ++q) s.set(q, p == 'X', p == 'Z');
    return s;
}

}  // namespace

TEST(gadgets, table_values) {
    EXPECT_EQ(two_qubit_depth(init_new(6).fragment), 6);
    EXPECT_EQ(init_new(6).fragment.count_two_qubit(), 9u);
    EXPECT_EQ(two_qubit_depth(init_new(22).fragment), 14);
    EXPECT_EQ(init_new(22).fragment.count_two_qubit(), 25u);
    EXPECT_EQ(two_qubit_depth(init_old(6).fragment), 9);
    EXPECT_EQ(two_qubit_depth(init_old(22).fragment), 25);
    EXPECT_EQ(two_qubit_depth(syndrome_new(22).fragment), 24);
    EXPECT_EQ(syndrome_new(22).fragment.count_two_qubit(), 48u);
    EXPECT_EQ(two_qubit_depth(syndrome_new(6).fragment), 8);
    EXPECT_EQ(syndrome_new(6).fragment.count_two_qubit(), 16u);
    EXPECT_EQ(two_qubit_depth(syndrome_old(22).fragment), 28);
    EXPECT_EQ(two_qubit_depth(syndrome_old(4).fragment), 10);
    EXPECT_EQ(syndrome_old(4).fragment.count_two_qubit(), 12u);
    EXPECT_EQ(two_qubit_depth(final_new(22).fragment), 25);
    EXPECT_EQ(two_qubit_depth(final_old(22).fragment), 26);
}

TEST(gadgets, formulas_hold_for_all_sizes_and_orders) {
    std::mt19937 rng(5);
    for (int k : {2, 4, 6, 10, 14, 22, 34}) {
        for (GadgetKind kind : kAll) {
            if (!buildable(kind, k)) continue;
            for (int trial = 0; trial < 4; ++trial) {
                auto order = trial == 0 ? std::vector<int>{} : random_order(k + 2, rng);
                Gadget g = make_gadget(kind, k, order);
                EXPECT_EQ(two_qubit_depth(g.fragment), expected_depth(kind, k)) << gadget_kind_name(kind) << " k=" << k;
                EXPECT_EQ(static_cast<int>(g.fragment.count_two_qubit()), expected_gates(kind, k))
                    << gadget_kind_name(kind) << " k=" << k;
            }
        }
    }
}

TEST(gadgets, argument_errors) {
    EXPECT_THROW(init_new(3), GadgetError);
    EXPECT_THROW(init_old(0), GadgetError);
    EXPECT_THROW(syndrome_new(4), GadgetError);
    EXPECT_THROW(init_new(4, {0, 1, 2}), GadgetError);
    EXPECT_THROW(init_new(4, {0, 1, 2, 3, 3, 5}), GadgetError);
}

TEST(gadgets, syndrome_touches_each_data_qubit_twice) {
    for (GadgetKind kind : {GadgetKind::SYNDROME_OLD, GadgetKind::SYNDROME_NEW}) {
        Gadget g = make_gadget(kind, 10);
        std::vector<int> touches(g.layout.num_qubits(), 0);
        for (const auto &gate : g.fragment.gates) {
            if (!is_two_qubit(gate.kind)) continue;
            for (int q : gate.qubits) ++touches[q];
        }
        for (int q = 0; q < g.layout.n(); ++q) EXPECT_EQ(touches[q], 2);
        EXPECT_EQ(touches[g.layout.ancilla(0)], g.layout.n());
        EXPECT_EQ(touches[g.layout.ancilla(1)], g.layout.n());
    }
}

// Heisenberg oracle: the syndrome bits read exactly S_z and S_x of the input.
TEST(gadgets, syndrome_measures_stabilizers) {
    std::mt19937 rng(9);
    for (int k : {2, 4, 6, 10, 22}) {
        for (GadgetKind kind : {GadgetKind::SYNDROME_OLD, GadgetKind::SYNDROME_NEW}) {
            if (!buildable(kind, k)) continue;
            for (int trial = 0; trial < 3; ++trial) {
                Gadget g = make_gadget(kind, k, trial == 0 ? std::vector<int>{} : random_order(k + 2, rng));
                ASSERT_EQ(g.check_map().size(), 2u);
                auto z = bits_observable(g.fragment, g.check_map()[0].bits);
                auto x = bits_observable(g.fragment, g.check_map()[1].bits);
                ASSERT_TRUE(z && x);
                EXPECT_EQ(*z, data_all(g.layout, 'Z'));
                EXPECT_EQ(*x, data_all(g.layout, 'X'));
            }
        }
    }
}

TEST(gadgets, final_maps_read_logical_z) {
    std::mt19937 rng(13);
    for (int k : {2, 4, 6, 10}) {
        for (GadgetKind kind : {GadgetKind::FINAL_OLD, GadgetKind::FINAL_NEW}) {
            for (int trial = 0; trial < 6; ++trial) {
                Gadget g = make_gadget(kind, k, trial == 0 ? std::vector<int>{} : random_order(k + 2, rng));
                IcebergLayout l = g.layout;
                PauliString sz = data_all(l, 'Z'), sx = data_all(l, 'X');
                for (const auto &chk : g.check_map()) {
                    auto obs = bits_observable(g.fragment, chk.bits);
                    ASSERT_TRUE(obs);
                    bool ok = obs->is_identity() || *obs == sz || *obs == sx;
                    EXPECT_TRUE(ok) << obs->str();
                }
                ASSERT_EQ(static_cast<int>(g.decode_map().size()), k);
                for (const auto &lr : g.decode_map()) {
                    auto obs = bits_observable(g.fragment, lr.bits);
                    ASSERT_TRUE(obs);
                    PauliString zz(l.num_qubits());
                    zz.set(lr.index, false, true);
                    zz.set(l.bottom(), false, true);
                    EXPECT_TRUE(*obs == zz || *obs == zz * sz) << obs->str();
                }
            }
        }
    }
}

TEST(gadgets, init_prepares_plus_state_stabilizers) {
    for (GadgetKind kind : {GadgetKind::INIT_OLD, GadgetKind::INIT_NEW}) {
        Gadget g = make_gadget(kind, 6, {0, 6, 5, 4, 3, 2, 1, 7});
        // The check compares two GHZ members in the Z basis, which is
        // deterministic on the freshly reset register.
        auto obs = bits_observable(g.fragment, g.check_map()[0].bits);
        ASSERT_TRUE(obs);
        EXPECT_TRUE(obs->is_identity()) << obs->str();
    }
}

TEST(gadgets, reordered_init_frees_first_slots_early) {
    Gadget g = init_new(6, {0, 6, 5, 4, 3, 2, 1, 7});
    auto s = layered_schedule(g.fragment);
    int last6 = -1, last1 = -1;
    for (size_t i = 0; i < g.fragment.gates.size(); ++i) {
        const auto &gate = g.fragment.gates[i];
        if (!is_two_qubit(gate.kind)) continue;
        for (int q : gate.qubits) {
            if (q == 6) last6 = std::max(last6, s.layer_of[i]);
            if (q == 1) last1 = std::max(last1, s.layer_of[i]);
        }
    }
    EXPECT_LT(last6, last1);
}

TEST(gadgets, permute_identity_and_relabelling) {
    std::mt19937 rng(21);
    for (GadgetKind kind : kAll) {
        if (!buildable(kind, 6)) continue;
        Gadget g = make_gadget(kind, 6, random_order(8, rng));
        std::vector<int> id(8);
        for (int i = 0; i < 8; ++i) id[i] = i;
        Gadget same = permute_gadget(g, id);
        EXPECT_EQ(same.fragment, g.fragment);
        auto pi = random_order(8, rng);
        Gadget p = permute_gadget(g, pi);
        EXPECT_EQ(p.kind, g.kind);
        EXPECT_EQ(p.fragment.count_two_qubit(), g.fragment.count_two_qubit());
        EXPECT_EQ(two_qubit_depth(p.fragment), two_qubit_depth(g.fragment));
        // Gate-by-gate the new fragment is the old one with data qubits renamed.
        auto sigma = relabel_map(g.layout, g.implicit_order, p.implicit_order);
        ASSERT_EQ(p.fragment.gates.size(), g.fragment.gates.size());
        for (size_t i = 0; i < g.fragment.gates.size(); ++i) {
            Gate renamed = g.fragment.gates[i];
            for (int &q : renamed.qubits) q = sigma[q];
            EXPECT_EQ(renamed, p.fragment.gates[i]);
        }
        EXPECT_EQ(p.check_map(), g.check_map());
    }
}

TEST(gadgets, shuffled_syndrome_order_is_valid) {
    Gadget s = syndrome_new(6, {6, 7, 2, 3, 4, 5, 0, 1});
    EXPECT_EQ(two_qubit_depth(s.fragment), 8);
    EXPECT_TRUE(check_gadget_ft(s).fault_tolerant());
}

TEST(gadgets, encode_rotation_examples) {
    IcebergLayout l(6);
    EXPECT_EQ(encode_rotation({RotationKind::X, 3, 0, 0.7}, l, false, false), Gate::rxx(0, 3, 0.7));
    EXPECT_EQ(encode_rotation({RotationKind::X, 3, 0, 0.7}, l, true, true), Gate::rxx(7, 3, 0.7));
    EXPECT_EQ(encode_rotation({RotationKind::ZZ, 1, 2, 0.3}, l, false, false), Gate::rzz(1, 2, 0.3));
    EXPECT_THROW(encode_rotation({RotationKind::X, 3, 0, 0.7}, l, true, false), GadgetError);
    EXPECT_THROW(encode_rotation({RotationKind::X, 7, 0, 0.7}, l, false, false), GadgetError);
}

TEST(gadgets, serialized_maps_use_named_lines) {
    std::string text = write_gadget(final_old(22));
    EXPECT_NE(text.find("logical 5 = c6 ^ c24"), std::string::npos);
    EXPECT_NE(text.find("check c25 = 0"), std::string::npos);
    auto back = read_circuit(text);
    EXPECT_EQ(back, final_old(22).fragment);
}
