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

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace iceberg {

IcebergLayout::IcebergLayout(int k) : k_(k) {
    if (k < 2 || k % 2 != 0) throw GadgetError(fmt::format("k must be even and >= 2, got {}", k));
}

std::vector<int> IcebergLayout::default_order() const {
    std::vector<int> order(n());
    std::iota(order.begin(), order.end(), 0);
    return order;
}

const char *gadget_kind_name(GadgetKind kind) {
    switch (kind) {
        case GadgetKind::INIT_OLD: return "init_old";
        case GadgetKind::INIT_NEW: return "init_new";
        case GadgetKind::SYNDROME_OLD: return "syndrome_old";
        case GadgetKind::SYNDROME_NEW: return "syndrome_new";
        case GadgetKind::FINAL_OLD: return "final_old";
        case GadgetKind::FINAL_NEW: return "final_new";
    }
    return "?";
}

GadgetKind parse_gadget_kind(std::string_view text) {
    for (GadgetKind k : {GadgetKind::INIT_OLD, GadgetKind::INIT_NEW, GadgetKind::SYNDROME_OLD,
                         GadgetKind::SYNDROME_NEW, GadgetKind::FINAL_OLD, GadgetKind::FINAL_NEW}) {
        if (text == gadget_kind_name(k)) return k;
    }
    throw GadgetError(fmt::format("unknown gadget kind '{}'", text));
}

int expected_depth(GadgetKind kind, int k) {
    switch (kind) {
        case GadgetKind::INIT_OLD: return k + 3;
        case GadgetKind::INIT_NEW: return k / 2 + 3;
        case GadgetKind::SYNDROME_OLD: return k + 6;
        case GadgetKind::SYNDROME_NEW: return k + 2;
        case GadgetKind::FINAL_OLD: return k + 4;
        case GadgetKind::FINAL_NEW: return k + 3;
    }
    return -1;
}

int expected_gates(GadgetKind kind, int k) {
    switch (kind) {
        case GadgetKind::INIT_OLD:
        case GadgetKind::INIT_NEW: return k + 3;
        case GadgetKind::SYNDROME_OLD:
        case GadgetKind::SYNDROME_NEW: return 2 * k + 4;
        case GadgetKind::FINAL_OLD: return k + 4;
        case GadgetKind::FINAL_NEW: return k + 3;
    }
    return -1;
}

namespace {

std::vector<int> checked_order(const IcebergLayout &layout, std::vector<int> order) {
    if (order.empty()) return layout.default_order();
    if (static_cast<int>(order.size()) != layout.n()) {
        throw GadgetError(fmt::format("implicit order has {} entries, expected {}", order.size(), layout.n()));
    }
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != layout.default_order()) throw GadgetError("implicit order is not a permutation of the data qubits");
    return order;
}

Gadget start(GadgetKind kind, int k, std::vector<int> order, Role role) {
    IcebergLayout layout(k);
    Gadget g{kind, layout, {}, checked_order(layout, std::move(order))};
    g.fragment.num_qubits = layout.num_qubits();
    g.fragment.components.push_back({0, role});
    return g;
}

int measure(PhysicalCircuit &c, GateKind kind, int q) {
    int bit = c.num_clbits++;
    c.gates.push_back(kind == GateKind::MEASURE_X ? Gate::mx(q, bit) : Gate::mz(q, bit));
    return bit;
}

}  // namespace

Gadget init_old(int k, std::vector<int> order) {
    Gadget g = start(GadgetKind::INIT_OLD, k, std::move(order), Role::INIT);
    const auto &o = g.implicit_order;
    auto &c = g.fragment;
    int n = g.layout.n();
    int a = g.layout.ancilla(0);
    for (int q : o) c.gates.push_back(Gate::reset(q));
    c.gates.push_back(Gate::reset(a));
    c.gates.push_back(Gate::h(o[0]));
    for (int j = 0; j + 1 < n; ++j) c.gates.push_back(Gate::cx(o[j], o[j + 1]));
    c.gates.push_back(Gate::cx(o[n - 1], a));
    c.gates.push_back(Gate::cx(o[0], a));
    int bit = measure(c, GateKind::MEASURE_Z, a);
    for (int q : o) c.gates.push_back(Gate::h(q));
    c.checks.push_back({{bit}, 0});
    return g;
}

// Two GHZ branches grow from o0 (even slots) and o1 (odd slots); the two
// branch ends are compared on the ancilla.
Gadget init_new(int k, std::vector<int> order) {
    Gadget g = start(GadgetKind::INIT_NEW, k, std::move(order), Role::INIT);
    const auto &o = g.implicit_order;
    auto &c = g.fragment;
    int n = g.layout.n();
    int a = g.layout.ancilla(0);
    for (int q : o) c.gates.push_back(Gate::reset(q));
    c.gates.push_back(Gate::reset(a));
    c.gates.push_back(Gate::h(o[0]));
    c.gates.push_back(Gate::cx(o[0], o[1]));
    for (int m = 1; m < n / 2; ++m) {
        c.gates.push_back(Gate::cx(o[2 * m - 2], o[2 * m]));
        c.gates.push_back(Gate::cx(o[2 * m - 1], o[2 * m + 1]));
    }
    c.gates.push_back(Gate::cx(o[n - 2], a));
    c.gates.push_back(Gate::cx(o[n - 1], a));
    int bit = measure(c, GateKind::MEASURE_Z, a);
    for (int q : o) c.gates.push_back(Gate::h(q));
    c.checks.push_back({{bit}, 0});
    return g;
}

SyndromeTemplate syndrome_template(GadgetKind kind, int n) {
    std::vector<SyndromeEvent> events;
    if (kind == GadgetKind::SYNDROME_NEW) {
        if (n % 4 != 0) throw GadgetError(fmt::format("new syndrome gadget needs n % 4 == 0, n = {}", n));
        // Layer l pairs an S_z touch on slot a[l] with an S_x touch on b[l]:
        // a pair block, quad blocks, and a closing pair block.
        std::vector<int> za{0, 1}, xb{1, 0};
        for (int s = 2; s + 2 < n; s += 4) {
            za.insert(za.end(), {s, s + 1, s + 2, s + 3});
            xb.insert(xb.end(), {s + 2, s + 3, s, s + 1});
        }
        za.insert(za.end(), {n - 2, n - 1});
        xb.insert(xb.end(), {n - 1, n - 2});
        SyndromeTemplate out;
        for (int l = 0; l < n; ++l) out.push_back({{true, za[l]}, {false, xb[l]}});
        return out;
    }
    if (kind != GadgetKind::SYNDROME_OLD) throw GadgetError("not a syndrome gadget kind");
    if (n < 4 || n % 2 != 0) throw GadgetError("syndrome gadget needs even n >= 4");
    events = {{false, 0}, {true, 0}, {true, 1}, {false, 1}};
    for (int j = 2; j <= n - 3; ++j) {
        events.push_back({true, j});
        events.push_back({false, j});
    }
    events.insert(events.end(), {{false, n - 2}, {true, n - 2}, {true, n - 1}, {false, n - 1}});
    // Pack ASAP: each event follows the previous event on its ancilla and on
    // its data slot.
    int last_a = -1, last_b = -1;
    std::vector<int> last_slot(n, -1);
    std::vector<int> layer(events.size());
    int depth = 0;
    for (size_t e = 0; e < events.size(); ++e) {
        int &anc = events[e].z_check ? last_a : last_b;
        int l = std::max(anc, last_slot[events[e].slot]) + 1;
        layer[e] = l;
        anc = l;
        last_slot[events[e].slot] = l;
        depth = std::max(depth, l + 1);
    }
    SyndromeTemplate out(depth);
    for (size_t e = 0; e < events.size(); ++e) out[layer[e]].push_back(events[e]);
    return out;
}

namespace {

Gadget build_syndrome(GadgetKind kind, int k, std::vector<int> order) {
    Gadget g = start(kind, k, std::move(order), Role::SYNDROME);
    const auto &o = g.implicit_order;
    auto &c = g.fragment;
    int za = g.layout.ancilla(0);
    int xb = g.layout.ancilla(1);
    auto tmpl = syndrome_template(kind, g.layout.n());
    c.gates.push_back(Gate::reset(za));
    c.gates.push_back(Gate::reset(xb));
    c.gates.push_back(Gate::h(xb));
    for (const auto &step : tmpl) {
        for (const auto &ev : step) {
            c.gates.push_back(ev.z_check ? Gate::cx(o[ev.slot], za) : Gate::cx(xb, o[ev.slot]));
        }
    }
    int bz = measure(c, GateKind::MEASURE_Z, za);
    int bx = measure(c, GateKind::MEASURE_X, xb);
    c.checks.push_back({{bz}, 0});
    c.checks.push_back({{bx}, 0});
    return g;
}

}  // namespace

Gadget syndrome_new(int k, std::vector<int> order) {
    return build_syndrome(GadgetKind::SYNDROME_NEW, k, std::move(order));
}

Gadget syndrome_old(int k, std::vector<int> order) {
    return build_syndrome(GadgetKind::SYNDROME_OLD, k, std::move(order));
}

// One ancilla flag, with o0 fanning out to every other data qubit; o0 is then
// read in the X basis (S_x) and the rest in the Z basis.
Gadget final_new(int k, std::vector<int> order) {
    Gadget g = start(GadgetKind::FINAL_NEW, k, std::move(order), Role::FINAL_MEAS);
    const auto &o = g.implicit_order;
    auto &c = g.fragment;
    int n = g.layout.n();
    int f = g.layout.ancilla(0);
    c.gates.push_back(Gate::reset(f));
    c.gates.push_back(Gate::cx(o[0], f));
    for (int j = 1; j < n; ++j) c.gates.push_back(Gate::cx(o[0], o[j]));
    c.gates.push_back(Gate::cx(o[0], f));
    std::vector<int> bit(n);
    bit[0] = measure(c, GateKind::MEASURE_X, o[0]);
    for (int j = 1; j < n; ++j) bit[j] = measure(c, GateKind::MEASURE_Z, o[j]);
    int flag = measure(c, GateKind::MEASURE_Z, f);
    c.checks.push_back({{bit[0]}, 0});
    c.checks.push_back({std::vector<int>(bit.begin() + 1, bit.end()), 0});
    c.checks.push_back({{flag}, 0});
    // Slot j >= 1 reads Z(o0) Z(oj); logical q is Z(q) Z(b).
    std::vector<int> slot_of(n);
    for (int j = 0; j < n; ++j) slot_of[o[j]] = j;
    int b = g.layout.bottom();
    for (int q = 1; q <= k; ++q) {
        LogicalReadout lr{q, {}};
        if (o[0] == b) {
            lr.bits = {bit[slot_of[q]]};
        } else if (o[0] == q) {
            lr.bits = {bit[slot_of[b]]};
        } else {
            lr.bits = {bit[slot_of[q]], bit[slot_of[b]]};
        }
        c.logicals.push_back(std::move(lr));
    }
    return g;
}

Gadget final_old(int k, std::vector<int> order) {
    Gadget g = start(GadgetKind::FINAL_OLD, k, std::move(order), Role::FINAL_MEAS);
    const auto &o = g.implicit_order;
    auto &c = g.fragment;
    int n = g.layout.n();
    int xb = g.layout.ancilla(0);
    int f = g.layout.ancilla(1);
    c.gates.push_back(Gate::reset(xb));
    c.gates.push_back(Gate::h(xb));
    c.gates.push_back(Gate::reset(f));
    c.gates.push_back(Gate::cx(xb, o[0]));
    c.gates.push_back(Gate::cx(xb, f));
    for (int j = 1; j + 1 < n; ++j) c.gates.push_back(Gate::cx(xb, o[j]));
    c.gates.push_back(Gate::cx(xb, f));
    c.gates.push_back(Gate::cx(xb, o[n - 1]));
    int bx = measure(c, GateKind::MEASURE_X, xb);
    std::vector<int> bit(n);
    for (int j = 0; j < n; ++j) bit[j] = measure(c, GateKind::MEASURE_Z, o[j]);
    int flag = measure(c, GateKind::MEASURE_Z, f);
    c.checks.push_back({{bx}, 0});
    c.checks.push_back({{flag}, 0});
    c.checks.push_back({bit, 0});
    std::vector<int> slot_of(n);
    for (int j = 0; j < n; ++j) slot_of[o[j]] = j;
    for (int q = 1; q <= k; ++q) {
        c.logicals.push_back({q, {bit[slot_of[q]], bit[slot_of[g.layout.bottom()]]}});
    }
    return g;
}

Gadget make_gadget(GadgetKind kind, int k, std::vector<int> order) {
    switch (kind) {
        case GadgetKind::INIT_OLD: return init_old(k, std::move(order));
        case GadgetKind::INIT_NEW: return init_new(k, std::move(order));
        case GadgetKind::SYNDROME_OLD: return syndrome_old(k, std::move(order));
        case GadgetKind::SYNDROME_NEW: return syndrome_new(k, std::move(order));
        case GadgetKind::FINAL_OLD: return final_old(k, std::move(order));
        case GadgetKind::FINAL_NEW: return final_new(k, std::move(order));
    }
    throw GadgetError("unknown gadget kind");
}

std::vector<int> relabel_map(const IcebergLayout &layout, const std::vector<int> &from,
                             const std::vector<int> &to) {
    std::vector<int> sigma(layout.num_qubits());
    std::iota(sigma.begin(), sigma.end(), 0);
    for (size_t i = 0; i < from.size(); ++i) sigma[from[i]] = to[i];
    return sigma;
}

Gadget permute_gadget(const Gadget &g, const std::vector<int> &pi) {
    int n = g.layout.n();
    if (static_cast<int>(pi.size()) != n) throw GadgetError("permutation size must equal n");
    std::vector<int> seen(n, 0);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
        if (pi[i] < 0 || pi[i] >= n || seen[pi[i]]++) throw GadgetError("not a permutation");
        order[i] = g.implicit_order[pi[i]];
    }
    // The slot structure is what carries fault tolerance, so rebuilding on the
    // new order is the relabelled fragment with its maps re-derived.
    return make_gadget(g.kind, g.layout.k(), order);
}

Gate encode_rotation(const LogicalRotation &rot, const IcebergLayout &layout, bool use_bottom,
                     bool z2_allowed, int component) {
    auto check_index = [&](int i) {
        if (i < 1 || i > layout.k()) throw GadgetError(fmt::format("logical index {} outside 1..{}", i, layout.k()));
    };
    check_index(rot.i);
    if (rot.kind == RotationKind::ZZ) {
        check_index(rot.j);
        if (rot.i == rot.j) throw GadgetError("ZZ rotation needs two distinct qubits");
        return Gate::rzz(rot.i, rot.j, rot.angle, component);
    }
    if (use_bottom && !z2_allowed) throw GadgetError("bottom-anchored X rotation needs the Z2 flag");
    return Gate::rxx(use_bottom ? layout.bottom() : layout.top(), rot.i, rot.angle, component);
}

std::string write_gadget(const Gadget &g) {
    std::string out = fmt::format("# gadget {} k={} order", gadget_kind_name(g.kind), g.layout.k());
    for (int q : g.implicit_order) out += fmt::format(" {}", q);
    out += '\n';
    return out + write_circuit(g.fragment);
}

}  // namespace iceberg
