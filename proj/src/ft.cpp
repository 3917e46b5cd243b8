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

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace iceberg {

PauliString::PauliString(int num_qubits)
    : n_(num_qubits), xs_((num_qubits + 63) / 64, 0), zs_((num_qubits + 63) / 64, 0) {}

PauliString PauliString::from_string(std::string_view text) {
    PauliString p(static_cast<int>(text.size()));
    for (size_t q = 0; q < text.size(); ++q) {
        switch (text[q]) {
            case 'I': case '_': break;
            case 'X': p.set(q, true, false); break;
            case 'Y': p.set(q, true, true); break;
            case 'Z': p.set(q, false, true); break;
            default: throw std::invalid_argument(fmt::format("bad Pauli letter '{}'", text[q]));
        }
    }
    return p;
}

PauliString PauliString::single(int num_qubits, int q, char p) {
    PauliString out(num_qubits);
    out.set(q, p == 'X' || p == 'Y', p == 'Z' || p == 'Y');
    return out;
}

void PauliString::set(int q, bool x, bool z) {
    uint64_t bit = uint64_t{1} << (q & 63);
    if (x) xs_[q >> 6] |= bit; else xs_[q >> 6] &= ~bit;
    if (z) zs_[q >> 6] |= bit; else zs_[q >> 6] &= ~bit;
}

char PauliString::at(int q) const {
    static constexpr char kLetters[] = {'I', 'X', 'Z', 'Y'};
    return kLetters[(x(q) ? 1 : 0) + (z(q) ? 2 : 0)];
}

std::string PauliString::str() const {
    std::string s;
    for (int q = 0; q < n_; ++q) s += at(q);
    return s;
}

bool PauliString::is_identity() const {
    for (size_t w = 0; w < xs_.size(); ++w) {
        if (xs_[w] | zs_[w]) return false;
    }
    return true;
}

int PauliString::weight() const {
    int w = 0;
    for (size_t i = 0; i < xs_.size(); ++i) w += std::popcount(xs_[i] | zs_[i]);
    return w;
}

bool PauliString::commutes(const PauliString &other) const {
    int parity = 0;
    for (size_t w = 0; w < xs_.size(); ++w) {
        parity ^= std::popcount((xs_[w] & other.zs_[w]) ^ (zs_[w] & other.xs_[w])) & 1;
    }
    return parity == 0;
}

PauliString &PauliString::operator*=(const PauliString &other) {
    for (size_t w = 0; w < xs_.size(); ++w) {
        xs_[w] ^= other.xs_[w];
        zs_[w] ^= other.zs_[w];
    }
    return *this;
}

PauliString PauliString::operator*(const PauliString &other) const {
    PauliString out = *this;
    out *= other;
    return out;
}

void PauliString::conjugate_by(const Gate &gate) {
    switch (gate.kind) {
        case GateKind::CNOT: {
            int c = gate.qubits[0], t = gate.qubits[1];
            bool xc = x(c), zc = z(c), xt = x(t), zt = z(t);
            set(t, xt ^ xc, zt);
            set(c, xc, zc ^ zt);
            break;
        }
        case GateKind::H: {
            int q = gate.qubits[0];
            bool xq = x(q), zq = z(q);
            set(q, zq, xq);
            break;
        }
        case GateKind::X:
        case GateKind::Z:
        case GateKind::BARRIER:
            break;
        default:
            throw std::invalid_argument(fmt::format("{} is not a Clifford map on Paulis", gate_name(gate.kind)));
    }
}

const char *classification_name(Classification c) {
    switch (c) {
        case Classification::DETECTED_BY_CHECK: return "DETECTED_BY_CHECK";
        case Classification::STABILIZER_EQUIVALENT: return "STABILIZER_EQUIVALENT";
        case Classification::LOGICAL_ERROR: return "LOGICAL_ERROR";
        case Classification::NONPAULI_BRANCHED: return "NONPAULI_BRANCHED";
    }
    return "?";
}

namespace {

PauliString all_of(int width, int n, char p) {
    PauliString s(width);
    for (int q = 0; q < n; ++q) s.set(q, p == 'X', p == 'Z');
    return s;
}

PauliString restrict_to(const PauliString &p, int num_data) {
    PauliString out(num_data);
    for (int q = 0; q < num_data; ++q) out.set(q, p.x(q), p.z(q));
    return out;
}

// GF(2) membership test of `v` in span(gens) over 2*width bit vectors.
bool in_span(const std::vector<PauliString> &gens, const PauliString &v) {
    int n = v.size();
    std::vector<std::vector<uint8_t>> rows;
    auto vec = [&](const PauliString &p) {
        std::vector<uint8_t> r(2 * n);
        for (int q = 0; q < n; ++q) {
            r[q] = p.x(q);
            r[n + q] = p.z(q);
        }
        return r;
    };
    for (const auto &g : gens) rows.push_back(vec(restrict_to(g, n)));
    std::vector<uint8_t> target = vec(v);
    std::vector<int> pivots;
    size_t r = 0;
    for (int col = 0; col < 2 * n && r < rows.size(); ++col) {
        size_t piv = r;
        while (piv < rows.size() && !rows[piv][col]) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[r]);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i != r && rows[i][col]) {
                for (int c = 0; c < 2 * n; ++c) rows[i][c] ^= rows[r][c];
            }
        }
        pivots.push_back(col);
        ++r;
    }
    for (size_t i = 0; i < pivots.size(); ++i) {
        if (target[pivots[i]]) {
            for (int c = 0; c < 2 * n; ++c) target[c] ^= rows[i][c];
        }
    }
    return std::all_of(target.begin(), target.end(), [](uint8_t b) { return b == 0; });
}

}  // namespace

FtContext code_context(const IcebergLayout &layout) {
    FtContext ctx;
    ctx.num_data = layout.n();
    int w = layout.num_qubits();
    ctx.stabilizers = {all_of(w, layout.n(), 'X'), all_of(w, layout.n(), 'Z')};
    ctx.downstream_checks = ctx.stabilizers;
    return ctx;
}

FtContext context_for(const Gadget &gadget) {
    FtContext ctx = code_context(gadget.layout);
    int w = gadget.layout.num_qubits();
    switch (gadget.kind) {
        case GadgetKind::INIT_OLD:
        case GadgetKind::INIT_NEW:
            // The prepared |+>^k has every logical X as a stabilizer.
            for (int q = 1; q <= gadget.layout.k(); ++q) {
                PauliString xx(w);
                xx.set(gadget.layout.top(), true, false);
                xx.set(q, true, false);
                ctx.stabilizers.push_back(xx);
            }
            break;
        case GadgetKind::FINAL_OLD:
        case GadgetKind::FINAL_NEW:
            ctx.terminal_matters = false;
            break;
        default:
            break;
    }
    return ctx;
}

std::vector<FaultLocation> enumerate_faults(const PhysicalCircuit &circuit) {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    std::vector<FaultLocation> out;
    for (size_t g = 0; g < circuit.gates.size(); ++g) {
        const Gate &gate = circuit.gates[g];
        if (gate.kind == GateKind::BARRIER) continue;
        if (is_measurement(gate.kind)) {
            out.push_back({g, FaultSlot::MEASUREMENT_FLIP, PauliString(circuit.num_qubits)});
        }
        int arity = static_cast<int>(gate.qubits.size());
        int combos = 1 << (2 * arity);
        for (int m = 1; m < combos; ++m) {
            PauliString p(circuit.num_qubits);
            for (int a = 0; a < arity; ++a) {
                char letter = kLetters[(m >> (2 * a)) & 3];
                p.set(gate.qubits[a], letter == 'X' || letter == 'Y', letter == 'Z' || letter == 'Y');
            }
            out.push_back({g, FaultSlot::AFTER_GATE, p});
        }
    }
    return out;
}

Classification classify_terminal(const PauliString &terminal, bool any_check_flipped, bool any_logical_flipped,
                                  const FtContext &ctx) {
    if (any_check_flipped) return Classification::DETECTED_BY_CHECK;
    if (ctx.terminal_matters) {
        for (const auto &c : ctx.downstream_checks) {
            if (!restrict_to(terminal, ctx.num_data).commutes(restrict_to(c, ctx.num_data))) {
                return Classification::DETECTED_BY_CHECK;
            }
        }
    }
    if (any_logical_flipped) return Classification::LOGICAL_ERROR;
    if (!ctx.terminal_matters) return Classification::STABILIZER_EQUIVALENT;
    return in_span(ctx.stabilizers, restrict_to(terminal, ctx.num_data)) ? Classification::STABILIZER_EQUIVALENT
                                                                         : Classification::LOGICAL_ERROR;
}

namespace {

struct Frame {
    PauliString pauli;
    std::vector<uint8_t> flips;
};

// Returns the rotation generator when the gate is a Pauli rotation.
std::optional<PauliString> generator_of(const Gate &g, int width) {
    PauliString p(width);
    switch (g.kind) {
        case GateKind::RZZ:
            for (int q : g.qubits) p.set(q, false, true);
            return p;
        case GateKind::RXX:
        case GateKind::RX:
            for (int q : g.qubits) p.set(q, true, false);
            return p;
        default:
            return std::nullopt;
    }
}

}  // namespace

std::vector<FaultReport> propagate(const FaultLocation &fault, const PhysicalCircuit &circuit,
                                   const FtContext &ctx) {
    std::vector<Frame> frames{{fault.pauli, std::vector<uint8_t>(circuit.num_clbits, 0)}};
    if (fault.slot == FaultSlot::MEASUREMENT_FLIP) {
        frames[0].pauli = PauliString(circuit.num_qubits);
        frames[0].flips[circuit.gates[fault.gate].clbit] ^= 1;
    }
    bool overflow = false;
    for (size_t gi = fault.gate + 1; gi < circuit.gates.size() && !overflow; ++gi) {
        const Gate &g = circuit.gates[gi];
        if (auto gen = generator_of(g, circuit.num_qubits)) {
            size_t count = frames.size();
            for (size_t f = 0; f < count; ++f) {
                if (!frames[f].pauli.commutes(*gen)) {
                    Frame extra = frames[f];
                    extra.pauli *= *gen;
                    frames.push_back(std::move(extra));
                }
            }
            if (static_cast<int>(frames.size()) > ctx.max_branches) overflow = true;
            continue;
        }
        for (auto &fr : frames) {
            switch (g.kind) {
                case GateKind::MEASURE_Z: {
                    int q = g.qubits[0];
                    if (fr.pauli.x(q)) fr.flips[g.clbit] ^= 1;
                    fr.pauli.set(q, fr.pauli.x(q), false);
                    break;
                }
                case GateKind::MEASURE_X: {
                    int q = g.qubits[0];
                    if (fr.pauli.z(q)) fr.flips[g.clbit] ^= 1;
                    fr.pauli.set(q, false, fr.pauli.z(q));
                    break;
                }
                case GateKind::RESET:
                    fr.pauli.set(g.qubits[0], false, false);
                    break;
                default:
                    fr.pauli.conjugate_by(g);
            }
        }
    }
    std::vector<FaultReport> reports;
    for (size_t b = 0; b < frames.size(); ++b) {
        FaultReport rep;
        rep.location = fault;
        rep.branch = static_cast<int>(b);
        rep.terminal = frames[b].pauli;
        for (int c = 0; c < circuit.num_clbits; ++c) {
            if (frames[b].flips[c]) rep.flipped_bits.push_back(c);
        }
        auto parity = [&](const std::vector<int> &bits) {
            int p = 0;
            for (int bit : bits) p ^= frames[b].flips[bit];
            return p;
        };
        for (size_t c = 0; c < circuit.checks.size(); ++c) {
            if (parity(circuit.checks[c].bits)) rep.flipped_checks.push_back(static_cast<int>(c));
        }
        for (size_t l = 0; l < circuit.logicals.size(); ++l) {
            if (parity(circuit.logicals[l].bits)) rep.flipped_logicals.push_back(static_cast<int>(l));
        }
        rep.classification = overflow ? Classification::NONPAULI_BRANCHED
                                      : classify_terminal(rep.terminal, !rep.flipped_checks.empty(),
                                                          !rep.flipped_logicals.empty(), ctx);
        reports.push_back(std::move(rep));
    }
    return reports;
}

FtSummary check_circuit_ft(const PhysicalCircuit &circuit, const FtContext &ctx) {
    FtSummary s;
    for (const auto &loc : enumerate_faults(circuit)) {
        ++s.locations;
        for (auto &rep : propagate(loc, circuit, ctx)) {
            ++s.branches;
            switch (rep.classification) {
                case Classification::DETECTED_BY_CHECK: ++s.detected; break;
                case Classification::STABILIZER_EQUIVALENT: ++s.stabilizer; break;
                case Classification::LOGICAL_ERROR: ++s.logical; break;
                case Classification::NONPAULI_BRANCHED: ++s.nonpauli; break;
            }
            if (rep.classification == Classification::LOGICAL_ERROR ||
                rep.classification == Classification::NONPAULI_BRANCHED) {
                s.escapes.push_back(rep);
            }
            s.reports.push_back(std::move(rep));
        }
    }
    return s;
}

FtSummary check_gadget_ft(const Gadget &gadget) { return check_circuit_ft(gadget.fragment, context_for(gadget)); }

RotationFaultPartition classify_rotation_faults(const IcebergLayout &layout, int logical_index, bool use_bottom) {
    if (logical_index < 1 || logical_index > layout.k()) throw GadgetError("logical index out of range");
    int anchor = use_bottom ? layout.bottom() : layout.top();
    FtContext ctx = code_context(layout);
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    RotationFaultPartition out;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (a == 0 && b == 0) continue;
            PauliString p(layout.num_qubits());
            auto place = [&](int q, char letter) { p.set(q, letter == 'X' || letter == 'Y', letter == 'Z' || letter == 'Y'); };
            place(anchor, kLetters[a]);
            place(logical_index, kLetters[b]);
            std::string label{kLetters[a], kLetters[b]};
            if (classify_terminal(p, false, false, ctx) == Classification::DETECTED_BY_CHECK) {
                out.detected.push_back(label);
            } else {
                out.undetectable.push_back(label);
            }
        }
    }
    return out;
}

namespace {

// Walks backwards from the end, folding in the observable of each selected
// measurement as it is passed.
std::optional<PauliString> backpropagate(const PhysicalCircuit &circuit, size_t end,
                                         const std::vector<uint8_t> &selected) {
    PauliString obs(circuit.num_qubits);
    for (size_t gi = end; gi-- > 0;) {
        const Gate &g = circuit.gates[gi];
        if (auto gen = generator_of(g, circuit.num_qubits)) {
            if (!obs.commutes(*gen)) return std::nullopt;
            continue;
        }
        switch (g.kind) {
            case GateKind::RESET: {
                int q = g.qubits[0];
                if (obs.x(q)) return std::nullopt;
                obs.set(q, false, false);
                break;
            }
            case GateKind::MEASURE_Z:
            case GateKind::MEASURE_X: {
                int q = g.qubits[0];
                char basis = g.kind == GateKind::MEASURE_Z ? 'Z' : 'X';
                PauliString m = PauliString::single(circuit.num_qubits, q, basis);
                if (!obs.commutes(m)) return std::nullopt;
                if (g.clbit >= 0 && g.clbit < static_cast<int>(selected.size()) && selected[g.clbit]) obs *= m;
                break;
            }
            default:
                obs.conjugate_by(g);
        }
    }
    return obs;
}

}  // namespace

std::optional<PauliString> measured_observable(const PhysicalCircuit &circuit, size_t gate) {
    const Gate &m = circuit.gates.at(gate);
    if (!is_measurement(m.kind)) throw std::invalid_argument("gate is not a measurement");
    std::vector<uint8_t> selected(circuit.num_clbits, 0);
    selected[m.clbit] = 1;
    return backpropagate(circuit, gate + 1, selected);
}

std::optional<PauliString> bits_observable(const PhysicalCircuit &circuit, const std::vector<int> &bits) {
    std::vector<uint8_t> selected(circuit.num_clbits, 0);
    for (int b : bits) {
        if (b < 0 || b >= circuit.num_clbits) throw std::invalid_argument(fmt::format("no clbit c{}", b));
        selected[b] ^= 1;
    }
    return backpropagate(circuit, circuit.gates.size(), selected);
}

std::string write_ft_report_csv(const FtSummary &summary, const PhysicalCircuit &circuit) {
    std::string out = "gate,slot,gate_kind,pauli,branch,terminal,classification,flipped_checks\n";
    for (const auto &r : summary.reports) {
        std::string flipped;
        for (int c : r.flipped_checks) flipped += fmt::format("{}{}", flipped.empty() ? "" : " ", c);
        out += fmt::format("{},{},{},{},{},{},{},{}\n", r.location.gate,
                           r.location.slot == FaultSlot::AFTER_GATE ? "after_gate" : "measurement_flip",
                           gate_name(circuit.gates[r.location.gate].kind), r.location.pauli.str(), r.branch,
                           r.terminal.str(), classification_name(r.classification), flipped);
    }
    return out;
}

}  // namespace iceberg
