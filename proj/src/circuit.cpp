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

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>

namespace iceberg {

namespace {

struct KindInfo {
    GateKind kind;
    const char *name;
    int arity;  // -1 for variadic
};

constexpr KindInfo kKinds[] = {
    {GateKind::RZZ, "rzz", 2},       {GateKind::RXX, "rxx", 2},
    {GateKind::RX, "rx", 1},         {GateKind::CNOT, "cx", 2},
    {GateKind::H, "h", 1},           {GateKind::X, "x", 1},
    {GateKind::Z, "z", 1},           {GateKind::MEASURE_Z, "mz", 1},
    {GateKind::MEASURE_X, "mx", 1},  {GateKind::RESET, "reset", 1},
    {GateKind::BARRIER, "barrier", -1},
};

const KindInfo &info(GateKind kind) {
    for (const auto &k : kKinds) {
        if (k.kind == kind) return k;
    }
    throw CircuitError("unknown gate kind");
}

}  // namespace

const char *gate_name(GateKind kind) { return info(kind).name; }

const char *role_name(Role role) {
    switch (role) {
        case Role::INIT: return "INIT";
        case Role::PHASE_LAYER: return "PHASE_LAYER";
        case Role::MIXER_LAYER: return "MIXER_LAYER";
        case Role::SYNDROME: return "SYNDROME";
        case Role::FINAL_MEAS: return "FINAL_MEAS";
    }
    return "?";
}

Role parse_role(std::string_view text) {
    for (Role r : {Role::INIT, Role::PHASE_LAYER, Role::MIXER_LAYER, Role::SYNDROME,
                   Role::FINAL_MEAS}) {
        if (text == role_name(r)) return r;
    }
    throw CircuitError(fmt::format("unknown component role '{}'", text));
}

bool is_two_qubit(GateKind kind) {
    return kind == GateKind::RZZ || kind == GateKind::RXX || kind == GateKind::CNOT;
}

bool is_measurement(GateKind kind) {
    return kind == GateKind::MEASURE_Z || kind == GateKind::MEASURE_X;
}

bool has_angle(GateKind kind) {
    return kind == GateKind::RZZ || kind == GateKind::RXX || kind == GateKind::RX;
}

Gate Gate::rzz(int a, int b, double theta, int comp) {
    return Gate{GateKind::RZZ, {a, b}, theta, -1, comp};
}
Gate Gate::rxx(int a, int b, double theta, int comp) {
    return Gate{GateKind::RXX, {a, b}, theta, -1, comp};
}
Gate Gate::rx(int q, double theta, int comp) { return Gate{GateKind::RX, {q}, theta, -1, comp}; }
Gate Gate::cx(int control, int target, int comp) {
    return Gate{GateKind::CNOT, {control, target}, 0.0, -1, comp};
}
Gate Gate::h(int q, int comp) { return Gate{GateKind::H, {q}, 0.0, -1, comp}; }
Gate Gate::x(int q, int comp) { return Gate{GateKind::X, {q}, 0.0, -1, comp}; }
Gate Gate::z(int q, int comp) { return Gate{GateKind::Z, {q}, 0.0, -1, comp}; }
Gate Gate::mz(int q, int c, int comp) { return Gate{GateKind::MEASURE_Z, {q}, 0.0, c, comp}; }
Gate Gate::mx(int q, int c, int comp) { return Gate{GateKind::MEASURE_X, {q}, 0.0, c, comp}; }
Gate Gate::reset(int q, int comp) { return Gate{GateKind::RESET, {q}, 0.0, -1, comp}; }
Gate Gate::barrier(std::vector<int> qs, int comp) {
    return Gate{GateKind::BARRIER, std::move(qs), 0.0, -1, comp};
}

ParseError::ParseError(int line, const std::string &what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

int PhysicalCircuit::rank_of(int component_id) const {
    for (size_t i = 0; i < components.size(); ++i) {
        if (components[i].id == component_id) return static_cast<int>(i);
    }
    throw CircuitError(fmt::format("gate references undeclared component {}", component_id));
}

int PhysicalCircuit::add_component(Role role) {
    int id = 0;
    for (const auto &c : components) id = std::max(id, c.id + 1);
    components.push_back({id, role});
    return id;
}

size_t PhysicalCircuit::count_two_qubit() const {
    return static_cast<size_t>(std::count_if(gates.begin(), gates.end(),
                                             [](const Gate &g) { return is_two_qubit(g.kind); }));
}

void PhysicalCircuit::validate() const {
    if (num_qubits < 0 || num_clbits < 0) throw CircuitError("negative register size");
    std::vector<int> seen_ids;
    for (const auto &c : components) {
        if (std::find(seen_ids.begin(), seen_ids.end(), c.id) != seen_ids.end()) {
            throw CircuitError(fmt::format("component {} declared twice", c.id));
        }
        seen_ids.push_back(c.id);
    }
    for (size_t i = 0; i < gates.size(); ++i) {
        const Gate &g = gates[i];
        const auto &ki = info(g.kind);
        if (ki.arity >= 0 && static_cast<int>(g.qubits.size()) != ki.arity) {
            throw CircuitError(fmt::format("gate {} ({}) has {} qubits, expected {}", i, ki.name,
                                           g.qubits.size(), ki.arity));
        }
        for (size_t a = 0; a < g.qubits.size(); ++a) {
            if (g.qubits[a] < 0 || g.qubits[a] >= num_qubits) {
                throw CircuitError(fmt::format("gate {} uses qubit {} outside register of {}", i,
                                               g.qubits[a], num_qubits));
            }
            for (size_t b = a + 1; b < g.qubits.size(); ++b) {
                if (g.qubits[a] == g.qubits[b]) {
                    throw CircuitError(fmt::format("gate {} repeats qubit {}", i, g.qubits[a]));
                }
            }
        }
        if (!std::isfinite(g.angle)) throw CircuitError(fmt::format("gate {} angle not finite", i));
        if (is_measurement(g.kind) && (g.clbit < 0 || g.clbit >= num_clbits)) {
            throw CircuitError(fmt::format("gate {} writes clbit {} outside {}", i, g.clbit, num_clbits));
        }
        rank_of(g.component);
    }
    auto check_bits = [&](const std::vector<int> &bits) {
        for (int b : bits) {
            if (b < 0 || b >= num_clbits) throw CircuitError(fmt::format("clbit {} out of range", b));
        }
    };
    for (const auto &c : checks) check_bits(c.bits);
    for (const auto &l : logicals) check_bits(l.bits);
}

// Positions are (slot, sub) pairs: two-qubit gates occupy slot T with the
// largest sub value, single-qubit gates stack in the sub-layers that precede
// the next two-qubit slot.
LayerSchedule layered_schedule(const PhysicalCircuit &circuit) {
    circuit.validate();
    constexpr int64_t kSub = int64_t{1} << 24;
    constexpr int64_t kNone = -1;
    auto slot = [&](int64_t key) { return key / kSub; };
    auto is_2q_key = [&](int64_t key) { return key % kSub == kSub - 1; };

    std::vector<size_t> order(circuit.gates.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::vector<int> rank(circuit.gates.size());
    for (size_t i = 0; i < circuit.gates.size(); ++i) rank[i] = circuit.rank_of(circuit.gates[i].component);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return rank[a] < rank[b]; });

    std::vector<int64_t> pos(circuit.num_qubits, kNone);
    std::vector<int64_t> key_of(circuit.gates.size(), kNone);
    for (size_t gi : order) {
        const Gate &g = circuit.gates[gi];
        if (g.kind == GateKind::BARRIER) {
            std::vector<int> qs = g.qubits;
            if (qs.empty()) {
                qs.resize(circuit.num_qubits);
                std::iota(qs.begin(), qs.end(), 0);
            }
            int64_t m = kNone;
            for (int q : qs) m = std::max(m, pos[q]);
            for (int q : qs) pos[q] = m;
            continue;
        }
        int64_t key;
        if (is_two_qubit(g.kind)) {
            int64_t t = 0;
            for (int q : g.qubits) {
                if (pos[q] == kNone) continue;
                t = std::max(t, is_2q_key(pos[q]) ? slot(pos[q]) + 1 : slot(pos[q]));
            }
            key = t * kSub + (kSub - 1);
        } else {
            int64_t p = pos[g.qubits[0]];
            if (p == kNone) {
                key = 0;
            } else if (is_2q_key(p)) {
                key = (slot(p) + 1) * kSub;
            } else {
                key = p + 1;
            }
        }
        for (int q : g.qubits) pos[q] = key;
        key_of[gi] = key;
    }

    std::map<int64_t, std::vector<size_t>> grouped;
    for (size_t gi : order) {
        if (key_of[gi] != kNone) grouped[key_of[gi]].push_back(gi);
    }
    LayerSchedule out;
    out.layer_of.assign(circuit.gates.size(), -1);
    for (auto &[key, idx] : grouped) {
        for (size_t gi : idx) out.layer_of[gi] = static_cast<int>(out.layers.size());
        if (is_2q_key(key)) ++out.depth_2q;
        out.layers.push_back(std::move(idx));
    }
    out.depth_all = static_cast<int>(out.layers.size());
    return out;
}

int two_qubit_depth(const PhysicalCircuit &circuit) { return layered_schedule(circuit).depth_2q; }

long space_time_area(int depth_2q, int k) {
    if (k < 2 || k % 2 != 0) throw CircuitError("space-time area needs even k >= 2");
    return static_cast<long>(k + 2) * depth_2q;
}

long space_time_area(const PhysicalCircuit &circuit, int k) {
    return space_time_area(two_qubit_depth(circuit), k);
}

std::string format_check(const ParityCheck &check) {
    std::string out = "check";
    for (int b : check.bits) out += fmt::format(" c{}", b);
    out += fmt::format(" = {}", check.expected);
    return out;
}

std::string format_logical(const LogicalReadout &readout) {
    std::string out = fmt::format("logical {} =", readout.index);
    for (size_t i = 0; i < readout.bits.size(); ++i) {
        out += fmt::format("{} c{}", i == 0 ? "" : " ^", readout.bits[i]);
    }
    return out;
}

std::string write_circuit(const PhysicalCircuit &circuit) {
    std::string out = fmt::format("qubits {} clbits {}\n", circuit.num_qubits, circuit.num_clbits);
    for (const auto &c : circuit.components) out += fmt::format("component {} {}\n", c.id, role_name(c.role));
    int current = circuit.components.empty() ? 0 : circuit.components.back().id;
    for (const auto &g : circuit.gates) {
        if (g.component != current) {
            out += fmt::format("component {} {}\n", g.component,
                               role_name(circuit.components[circuit.rank_of(g.component)].role));
            current = g.component;
        }
        out += gate_name(g.kind);
        for (int q : g.qubits) out += fmt::format(" {}", q);
        if (has_angle(g.kind)) out += fmt::format(" {}", g.angle);
        if (is_measurement(g.kind)) out += fmt::format(" {}", g.clbit);
        out += '\n';
    }
    for (const auto &c : circuit.checks) out += format_check(c) + '\n';
    for (const auto &l : circuit.logicals) out += format_logical(l) + '\n';
    return out;
}

namespace {

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> toks;
    std::istringstream in{std::string(line)};
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

int parse_int(const std::string &tok, int line) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line, fmt::format("expected integer, got '{}'", tok));
    }
    return v;
}

double parse_double(const std::string &tok, int line) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line, fmt::format("expected number, got '{}'", tok));
    }
    return v;
}

int parse_clbit(const std::string &tok, int line) {
    if (tok.size() < 2 || tok[0] != 'c') throw ParseError(line, fmt::format("expected cN, got '{}'", tok));
    return parse_int(tok.substr(1), line);
}

}  // namespace

PhysicalCircuit read_circuit(std::string_view text) {
    PhysicalCircuit c;
    bool sized = false;
    int current = -1;
    int line_no = 0;
    int max_qubit = -1;
    int max_clbit = -1;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const std::string &op = toks[0];
        if (op == "qubits") {
            if (toks.size() != 4 || toks[2] != "clbits") throw ParseError(line_no, "header is 'qubits N clbits M'");
            c.num_qubits = parse_int(toks[1], line_no);
            c.num_clbits = parse_int(toks[3], line_no);
            sized = true;
        } else if (op == "component") {
            if (toks.size() != 3) throw ParseError(line_no, "component needs ID ROLE");
            int id = parse_int(toks[1], line_no);
            Role role;
            try {
                role = parse_role(toks[2]);
            } catch (const CircuitError &e) {
                throw ParseError(line_no, e.what());
            }
            auto it = std::find_if(c.components.begin(), c.components.end(),
                                   [&](const Component &x) { return x.id == id; });
            if (it == c.components.end()) {
                c.components.push_back({id, role});
            } else if (it->role != role) {
                throw ParseError(line_no, fmt::format("component {} redeclared with another role", id));
            }
            current = id;
        } else if (op == "check") {
            ParityCheck chk;
            size_t i = 1;
            for (; i < toks.size() && toks[i] != "="; ++i) chk.bits.push_back(parse_clbit(toks[i], line_no));
            if (i + 2 != toks.size()) throw ParseError(line_no, "check needs '= value'");
            chk.expected = parse_int(toks[i + 1], line_no);
            for (int b : chk.bits) max_clbit = std::max(max_clbit, b);
            c.checks.push_back(std::move(chk));
        } else if (op == "logical") {
            if (toks.size() < 4 || toks[2] != "=") throw ParseError(line_no, "logical needs 'I = cA ^ cB'");
            LogicalReadout lr;
            lr.index = parse_int(toks[1], line_no);
            for (size_t i = 3; i < toks.size(); ++i) {
                if ((i - 3) % 2 == 1) {
                    if (toks[i] != "^") throw ParseError(line_no, "logical terms are joined by '^'");
                    continue;
                }
                lr.bits.push_back(parse_clbit(toks[i], line_no));
                max_clbit = std::max(max_clbit, lr.bits.back());
            }
            c.logicals.push_back(std::move(lr));
        } else {
            const KindInfo *ki = nullptr;
            for (const auto &k : kKinds) {
                if (op == k.name) ki = &k;
            }
            if (ki == nullptr) throw ParseError(line_no, fmt::format("unknown gate kind '{}'", op));
            Gate g;
            g.kind = ki->kind;
            size_t extra = (has_angle(ki->kind) ? 1 : 0) + (is_measurement(ki->kind) ? 1 : 0);
            size_t nq = toks.size() - 1 - extra;
            if (toks.size() < 1 + extra || (ki->arity >= 0 && nq != static_cast<size_t>(ki->arity))) {
                throw ParseError(line_no, fmt::format("'{}' expects {} qubits", op, ki->arity));
            }
            for (size_t i = 0; i < nq; ++i) {
                g.qubits.push_back(parse_int(toks[1 + i], line_no));
                if (g.qubits.back() < 0) throw ParseError(line_no, "negative qubit index");
                for (size_t j = 0; j < i; ++j) {
                    if (g.qubits[j] == g.qubits[i]) {
                        throw ParseError(line_no, fmt::format("duplicate qubit {}", g.qubits[i]));
                    }
                }
                max_qubit = std::max(max_qubit, g.qubits.back());
            }
            if (has_angle(ki->kind)) g.angle = parse_double(toks[1 + nq], line_no);
            if (is_measurement(ki->kind)) {
                g.clbit = parse_int(toks.back(), line_no);
                max_clbit = std::max(max_clbit, g.clbit);
            }
            if (current < 0) {
                if (c.components.empty()) c.components.push_back({0, Role::INIT});
                current = c.components.front().id;
            }
            g.component = current;
            c.gates.push_back(std::move(g));
        }
        if (end == text.size()) break;
    }
    if (!sized) {
        c.num_qubits = max_qubit + 1;
        c.num_clbits = max_clbit + 1;
    }
    try {
        c.validate();
    } catch (const CircuitError &e) {
        throw ParseError(line_no, e.what());
    }
    return c;
}

}  // namespace iceberg
