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


#include "iceberg/compiler.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <numeric>
#include <queue>
#include <tuple>

#include "iceberg/matching.hpp"

namespace iceberg {

const char *gadget_set_name(GadgetSet set) { return set == GadgetSet::NEW ? "new" : "old"; }

GadgetSet parse_gadget_set(std::string_view text) {
    if (text == "new" || text == "NEW") return GadgetSet::NEW;
    if (text == "old" || text == "OLD") return GadgetSet::OLD;
    throw CompileError(fmt::format("unknown gadget set '{}'", text));
}

const char *compile_mode_name(CompileMode mode) {
    switch (mode) {
        case CompileMode::BASELINE: return "baseline";
        case CompileMode::COSCHEDULE: return "coschedule";
        case CompileMode::RESYNTH: return "resynth";
        case CompileMode::RESYNTH_Z2: return "resynth+z2";
    }
    return "?";
}

CompileMode parse_compile_mode(std::string_view text) {
    for (CompileMode m : {CompileMode::BASELINE, CompileMode::COSCHEDULE, CompileMode::RESYNTH, CompileMode::RESYNTH_Z2}) {
        if (text == compile_mode_name(m)) return m;
    }
    if (text == "resynth_z2" || text == "z2") return CompileMode::RESYNTH_Z2;
    throw CompileError(fmt::format("unknown compile mode '{}' (baseline, coschedule, resynth, resynth+z2)", text));
}

void CompileConfig::validate() const {
    if (num_syndromes < 0) throw CompileError("number of syndromes must be >= 0");
    if (expansion_width < 1) throw CompileError("expansion width must be >= 1");
    if (queue_cap && *queue_cap == 0) throw CompileError("queue cap must be positive");
    if (use_z2 && !resynthesize) {
        // Allowed, but the anchor choice is part of the search either way.
    }
}

CompileConfig config_for(CompileMode mode, CompileConfig base) {
    base.use_z2 = mode == CompileMode::RESYNTH_Z2;
    base.resynthesize = mode == CompileMode::RESYNTH || mode == CompileMode::RESYNTH_Z2;
    return base;
}

void UncompiledGraph::add(int u, int v, int w) {
    if (u > v) std::swap(u, v);
    edges[{u, v}] += w;
}

std::vector<int> UncompiledGraph::vertex_weights(AncillaWeighting weighting) const {
    std::vector<int> w(n + 1, 0);
    for (auto [e, weight] : edges) {
        w[e.first] += weight;
        if (e.second != e.first) w[e.second] += weight;
    }
    int flex = 0;
    for (auto [q, c] : flexible) {
        w[q] += c;
        flex += c;
    }
    if (flex > 0 && n >= 2) {
        int t = w[0], b = w[n - 1];
        int shared = (t + b + flex + 1) / 2;
        w[0] = std::max(t, shared);
        w[n - 1] = std::max(b, shared);
    }
    if (weighting == AncillaWeighting::HALVED) w[n] = (w[n] + 1) / 2;
    return w;
}

int UncompiledGraph::heuristic(AncillaWeighting weighting) const {
    auto w = vertex_weights(weighting);
    return w.empty() ? 0 : *std::max_element(w.begin(), w.end());
}

std::vector<int> predetermine_init_order(const std::vector<int> &degrees, GadgetSet set) {
    int k = static_cast<int>(degrees.size());
    std::vector<int> v(k);
    std::iota(v.begin(), v.end(), 0);
    std::stable_sort(v.begin(), v.end(), [&](int a, int b) { return degrees[a] > degrees[b]; });
    std::vector<int> order{0};
    if (set == GadgetSet::NEW) order.push_back(k + 1);
    for (int x : v) order.push_back(x + 1);
    if (set == GadgetSet::OLD) order.push_back(k + 1);
    return order;
}

std::vector<int> predetermine_init_order(const ProblemGraph &graph, GadgetSet set) {
    return predetermine_init_order(graph.degrees(), set);
}

std::vector<int> syndrome_positions(const LogicalCircuit &logical, int num_syndromes) {
    std::vector<long> prefix{0};
    for (const auto &c : logical.components) prefix.push_back(prefix.back() + static_cast<long>(c.rotations.size()));
    double total = static_cast<double>(prefix.back());
    std::vector<int> out;
    int lo = 0;
    for (int i = 1; i <= num_syndromes; ++i) {
        double target = total * i / (num_syndromes + 1);
        int best = lo;
        for (int m = lo; m < static_cast<int>(prefix.size()); ++m) {
            if (std::abs(prefix[m] - target) < std::abs(prefix[best] - target)) best = m;
        }
        out.push_back(best);
        lo = best;
    }
    return out;
}

std::vector<int> qubit_free_slots(const PhysicalCircuit &circuit) {
    std::vector<size_t> order(circuit.gates.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::vector<int> rank(circuit.gates.size());
    for (size_t i = 0; i < circuit.gates.size(); ++i) rank[i] = circuit.rank_of(circuit.gates[i].component);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return rank[a] < rank[b]; });
    std::vector<int> free(circuit.num_qubits, 0);
    for (size_t i : order) {
        const Gate &g = circuit.gates[i];
        if (g.kind == GateKind::BARRIER) {
            std::vector<int> qs = g.qubits;
            if (qs.empty()) {
                qs.resize(circuit.num_qubits);
                std::iota(qs.begin(), qs.end(), 0);
            }
            int t = 0;
            for (int q : qs) t = std::max(t, free[q]);
            for (int q : qs) free[q] = t;
        } else if (is_two_qubit(g.kind)) {
            int t = std::max(free[g.qubits[0]], free[g.qubits[1]]);
            free[g.qubits[0]] = free[g.qubits[1]] = t + 1;
        }
    }
    return free;
}

namespace {

enum class StageKind { ROTATIONS, FIXED, SYNDROME };

struct Stage {
    StageKind kind = StageKind::ROTATIONS;
    Role role = Role::PHASE_LAYER;
    std::vector<LogicalRotation> rotations;
    bool flex = false;
    GadgetKind gadget = GadgetKind::INIT_NEW;
    std::vector<int> order;
    bool dynamic = false;
    // FIXED: two-qubit gates of the fragment and their fragment predecessors.
    std::vector<std::array<int, 2>> fixed_qubits;
    std::vector<std::vector<int>> fixed_pred;
    // SYNDROME: slot visited by each event of the A (Z-check) and B (X-check)
    // chains, and where each slot sits in both chains.
    std::array<std::vector<int>, 2> chain_slot;
    std::array<std::vector<int>, 2> slot_pos;
    std::vector<bool> slot_a_first;
    int unit_base = 0;
    int syn_index = -1;
};

struct Action {
    int stage;
    int unit;  // rotation index, fixed gate index, or chain (0 = A, 1 = B)
    int q0;
    int q1;
};

struct State {
    std::vector<uint8_t> rem;      // stage x qubit pending two-qubit gates
    std::vector<uint64_t> done;    // rotation and fixed units
    std::vector<uint8_t> flexrem;  // per stage
    std::vector<uint8_t> chain;    // per syndrome: A and B positions
    std::vector<int8_t> slot;      // per syndrome: slot -> qubit
    int lo = 0;
};

struct Node {
    int parent = -1;
    int g = 0;
    int h = 0;
    std::vector<Action> layer;
    State state;
};

class Problem {
   public:
    Problem(const LogicalCircuit &logical, const CompileConfig &cfg, bool search)
        : cfg_(cfg), layout_(logical.k), k_(logical.k), n_(logical.k + 2), nq_(logical.k + 4) {
        GadgetKind init_kind = cfg.gadget_set == GadgetSet::NEW ? GadgetKind::INIT_NEW : GadgetKind::INIT_OLD;
        syndrome_kind_ = cfg.gadget_set == GadgetSet::NEW && layout_.supports_new_syndrome() ? GadgetKind::SYNDROME_NEW
                                                                                            : GadgetKind::SYNDROME_OLD;
        final_kind_ = cfg.gadget_set == GadgetSet::NEW ? GadgetKind::FINAL_NEW : GadgetKind::FINAL_OLD;

        std::vector<int> init_order = layout_.default_order();
        if (search && cfg.resynthesize) {
            std::vector<int> degrees(k_, 0);
            for (const auto &c : logical.components) {
                if (c.role != Role::PHASE_LAYER) continue;
                for (const auto &r : c.rotations) {
                    ++degrees[r.i - 1];
                    ++degrees[r.j - 1];
                }
                break;
            }
            init_order = predetermine_init_order(degrees, cfg.gadget_set);
        }
        add_gadget_stage(init_kind, init_order, false);
        auto pos = syndrome_positions(logical, cfg.num_syndromes);
        size_t next = 0;
        for (size_t c = 0; c <= logical.components.size(); ++c) {
            while (next < pos.size() && pos[next] == static_cast<int>(c)) {
                add_gadget_stage(syndrome_kind_, layout_.default_order(), search && cfg.resynthesize);
                ++next;
            }
            if (c == logical.components.size()) break;
            Stage st;
            st.kind = StageKind::ROTATIONS;
            st.role = logical.components[c].role;
            st.rotations = logical.components[c].rotations;
            st.flex = search && cfg.use_z2 && st.role == Role::MIXER_LAYER;
            st.unit_base = num_units_;
            num_units_ += static_cast<int>(st.rotations.size());
            stages_.push_back(std::move(st));
        }
    }

    int num_stages() const { return static_cast<int>(stages_.size()); }
    const Stage &stage(int c) const { return stages_[c]; }
    int k() const { return k_; }
    int nq() const { return nq_; }
    const IcebergLayout &layout() const { return layout_; }
    GadgetKind final_kind() const { return final_kind_; }
    const CompileConfig &cfg() const { return cfg_; }

    State source() const {
        State s;
        int S = num_stages();
        s.rem.assign(static_cast<size_t>(S) * nq_, 0);
        s.done.assign((num_units_ + 63) / 64, 0);
        s.flexrem.assign(S, 0);
        s.chain.assign(2 * num_syn_, 0);
        s.slot.assign(static_cast<size_t>(num_syn_) * n_, -1);
        for (int c = 0; c < S; ++c) {
            const Stage &st = stages_[c];
            uint8_t *r = &s.rem[static_cast<size_t>(c) * nq_];
            switch (st.kind) {
                case StageKind::ROTATIONS:
                    for (const auto &rot : st.rotations) {
                        ++r[rot.i];
                        if (rot.kind == RotationKind::ZZ) {
                            ++r[rot.j];
                        } else if (st.flex) {
                            ++s.flexrem[c];
                        } else {
                            ++r[layout_.top()];
                        }
                    }
                    if (st.flex) r[layout_.top()] = r[layout_.bottom()] = s.flexrem[c];
                    break;
                case StageKind::FIXED:
                    for (auto q : st.fixed_qubits) {
                        ++r[q[0]];
                        ++r[q[1]];
                    }
                    break;
                case StageKind::SYNDROME:
                    for (int q = 0; q < n_; ++q) r[q] = 2;
                    r[layout_.ancilla(0)] = r[layout_.ancilla(1)] = static_cast<uint8_t>(n_);
                    if (!st.dynamic) {
                        for (int j = 0; j < n_; ++j) s.slot[st.syn_index * n_ + j] = static_cast<int8_t>(st.order[j]);
                    }
                    break;
            }
        }
        return s;
    }

    UncompiledGraph uncompiled(const State &s) const {
        UncompiledGraph g;
        g.n = n_;
        auto vertex = [&](int q) { return q >= n_ ? n_ : q; };
        for (int c = s.lo; c < num_stages(); ++c) {
            const Stage &st = stages_[c];
            switch (st.kind) {
                case StageKind::ROTATIONS:
                    for (size_t u = 0; u < st.rotations.size(); ++u) {
                        if (is_done(s, st.unit_base + static_cast<int>(u))) continue;
                        const auto &rot = st.rotations[u];
                        if (rot.kind == RotationKind::ZZ) g.add(rot.i, rot.j, 1);
                        else if (st.flex) ++g.flexible[rot.i];
                        else g.add(layout_.top(), rot.i, 1);
                    }
                    break;
                case StageKind::FIXED:
                    for (size_t u = 0; u < st.fixed_qubits.size(); ++u) {
                        if (is_done(s, st.unit_base + static_cast<int>(u))) continue;
                        g.add(vertex(st.fixed_qubits[u][0]), vertex(st.fixed_qubits[u][1]), 1);
                    }
                    break;
                case StageKind::SYNDROME: {
                    const uint8_t *r = &s.rem[static_cast<size_t>(c) * nq_];
                    for (int q = 0; q < n_; ++q) {
                        if (r[q]) g.add(q, n_, r[q]);
                    }
                    break;
                }
            }
        }
        return g;
    }

    // Vertex weights straight from the counters; matches uncompiled().
    int weights(const State &s, std::vector<int> &w) const {
        w.assign(nq_, 0);
        int flex = 0;
        int S = num_stages();
        for (int c = s.lo; c < S; ++c) {
            const uint8_t *r = &s.rem[static_cast<size_t>(c) * nq_];
            bool fx = stages_[c].flex;
            for (int q = 0; q < nq_; ++q) {
                if (fx && (q == layout_.top() || q == layout_.bottom())) continue;
                w[q] += r[q];
            }
            flex += s.flexrem[c];
        }
        int t = layout_.top(), b = layout_.bottom();
        if (flex > 0) {
            int shared = (w[t] + w[b] + flex + 1) / 2;
            w[t] = std::max(w[t], shared);
            w[b] = std::max(w[b], shared);
        }
        int a = w[layout_.ancilla(0)] + w[layout_.ancilla(1)];
        if (cfg_.ancilla_weighting == AncillaWeighting::HALVED) a = (a + 1) / 2;
        w[layout_.ancilla(0)] = w[layout_.ancilla(1)] = a;
        return *std::max_element(w.begin(), w.end());
    }

    int heuristic(const State &s) const {
        std::vector<int> w;
        return weights(s, w);
    }

    struct Candidate {
        int u, v;
        int64_t w;
        Action action;
    };

    std::vector<Candidate> executable(const State &s, const std::vector<int> &w) const {
        int S = num_stages();
        std::vector<int> front(nq_, S);
        for (int q = 0; q < nq_; ++q) {
            for (int c = s.lo; c < S; ++c) {
                if (s.rem[static_cast<size_t>(c) * nq_ + q]) {
                    front[q] = c;
                    break;
                }
            }
        }
        std::vector<int> active(front.begin(), front.end());
        std::sort(active.begin(), active.end());
        active.erase(std::unique(active.begin(), active.end()), active.end());

        std::vector<Candidate> out;
        auto push = [&](int a, int b, Action act) {
            out.push_back({a, b, static_cast<int64_t>(w[a] + w[b]), act});
        };
        int t = layout_.top(), b = layout_.bottom();
        for (int c : active) {
            if (c >= S) continue;
            const Stage &st = stages_[c];
            switch (st.kind) {
                case StageKind::ROTATIONS:
                    for (size_t u = 0; u < st.rotations.size(); ++u) {
                        if (is_done(s, st.unit_base + static_cast<int>(u))) continue;
                        const auto &rot = st.rotations[u];
                        int iu = static_cast<int>(u);
                        if (front[rot.i] != c) continue;
                        if (rot.kind == RotationKind::ZZ) {
                            if (front[rot.j] == c) push(rot.i, rot.j, {c, iu, rot.i, rot.j});
                        } else {
                            if (front[t] == c) push(t, rot.i, {c, iu, t, rot.i});
                            if (st.flex && front[b] == c) push(b, rot.i, {c, iu, b, rot.i});
                        }
                    }
                    break;
                case StageKind::FIXED:
                    for (size_t u = 0; u < st.fixed_qubits.size(); ++u) {
                        int unit = st.unit_base + static_cast<int>(u);
                        if (is_done(s, unit)) continue;
                        auto q = st.fixed_qubits[u];
                        if (front[q[0]] != c || front[q[1]] != c) continue;
                        bool ready = true;
                        for (int p : st.fixed_pred[u]) ready = ready && is_done(s, st.unit_base + p);
                        if (ready) push(q[0], q[1], {c, static_cast<int>(u), q[0], q[1]});
                    }
                    break;
                case StageKind::SYNDROME: {
                    const uint8_t *chain = &s.chain[2 * st.syn_index];
                    const int8_t *slot = &s.slot[static_cast<size_t>(st.syn_index) * n_];
                    for (int ch = 0; ch < 2; ++ch) {
                        int pos = chain[ch];
                        if (pos >= n_) continue;
                        int anc = layout_.ancilla(ch);
                        if (front[anc] != c) continue;
                        int sl = st.chain_slot[ch][pos];
                        bool first = (ch == 0) == st.slot_a_first[sl];
                        if (!first && chain[1 - ch] <= st.slot_pos[1 - ch][sl]) continue;
                        if (slot[sl] >= 0) {
                            int q = slot[sl];
                            if (front[q] == c) push(q, anc, {c, ch, q, anc});
                            continue;
                        }
                        if (!first) continue;
                        for (int q = 0; q < n_; ++q) {
                            if (front[q] != c) continue;
                            bool taken = false;
                            for (int j = 0; j < n_ && !taken; ++j) taken = slot[j] == q;
                            if (!taken) push(q, anc, {c, ch, q, anc});
                        }
                    }
                    break;
                }
            }
        }
        return out;
    }

    void apply(State &s, const Action &a) const {
        const Stage &st = stages_[a.stage];
        uint8_t *r = &s.rem[static_cast<size_t>(a.stage) * nq_];
        switch (st.kind) {
            case StageKind::ROTATIONS: {
                mark(s, st.unit_base + a.unit);
                const auto &rot = st.rotations[a.unit];
                --r[rot.i];
                if (rot.kind == RotationKind::ZZ) {
                    --r[rot.j];
                } else if (st.flex) {
                    --s.flexrem[a.stage];
                    r[layout_.top()] = r[layout_.bottom()] = s.flexrem[a.stage];
                } else {
                    --r[layout_.top()];
                }
                break;
            }
            case StageKind::FIXED:
                mark(s, st.unit_base + a.unit);
                --r[a.q0];
                --r[a.q1];
                break;
            case StageKind::SYNDROME: {
                uint8_t &pos = s.chain[2 * st.syn_index + a.unit];
                int sl = st.chain_slot[a.unit][pos];
                s.slot[static_cast<size_t>(st.syn_index) * n_ + sl] = static_cast<int8_t>(a.q0);
                ++pos;
                --r[a.q0];
                --r[a.q1];
                break;
            }
        }
        int S = num_stages();
        while (s.lo < S) {
            const uint8_t *rr = &s.rem[static_cast<size_t>(s.lo) * nq_];
            if (std::any_of(rr, rr + nq_, [](uint8_t x) { return x != 0; })) break;
            ++s.lo;
        }
    }

    std::vector<int> syndrome_order(const State &s, int c) const {
        const Stage &st = stages_[c];
        std::vector<int> order(n_);
        for (int j = 0; j < n_; ++j) order[j] = s.slot[static_cast<size_t>(st.syn_index) * n_ + j];
        return order;
    }

   private:
    void add_gadget_stage(GadgetKind kind, std::vector<int> order, bool dynamic) {
        Stage st;
        st.gadget = kind;
        st.order = std::move(order);
        st.role = kind == GadgetKind::INIT_NEW || kind == GadgetKind::INIT_OLD ? Role::INIT : Role::SYNDROME;
        if (st.role == Role::SYNDROME) {
            st.kind = StageKind::SYNDROME;
            st.dynamic = dynamic;
            st.syn_index = num_syn_++;
            auto tmpl = syndrome_template(kind, n_);
            for (int ch = 0; ch < 2; ++ch) st.slot_pos[ch].assign(n_, -1);
            std::vector<int> step_a(n_, -1), step_b(n_, -1);
            for (size_t l = 0; l < tmpl.size(); ++l) {
                for (const auto &ev : tmpl[l]) {
                    int ch = ev.z_check ? 0 : 1;
                    st.slot_pos[ch][ev.slot] = static_cast<int>(st.chain_slot[ch].size());
                    st.chain_slot[ch].push_back(ev.slot);
                    (ch == 0 ? step_a : step_b)[ev.slot] = static_cast<int>(l);
                }
            }
            st.slot_a_first.resize(n_);
            for (int sl = 0; sl < n_; ++sl) st.slot_a_first[sl] = step_a[sl] < step_b[sl];
        } else {
            st.kind = StageKind::FIXED;
            Gadget g = make_gadget(kind, k_, st.order);
            std::vector<int> last(nq_, -1);
            for (const auto &gate : g.fragment.gates) {
                if (!is_two_qubit(gate.kind)) continue;
                int u = static_cast<int>(st.fixed_qubits.size());
                std::vector<int> pred;
                for (int q : gate.qubits) {
                    if (last[q] >= 0) pred.push_back(last[q]);
                    last[q] = u;
                }
                st.fixed_qubits.push_back({gate.qubits[0], gate.qubits[1]});
                st.fixed_pred.push_back(std::move(pred));
            }
            st.unit_base = num_units_;
            num_units_ += static_cast<int>(st.fixed_qubits.size());
        }
        stages_.push_back(std::move(st));
    }

    static bool is_done(const State &s, int unit) { return (s.done[unit >> 6] >> (unit & 63)) & 1; }
    static void mark(State &s, int unit) { s.done[unit >> 6] |= uint64_t{1} << (unit & 63); }

    CompileConfig cfg_;
    IcebergLayout layout_;
    int k_, n_, nq_;
    GadgetKind syndrome_kind_ = GadgetKind::SYNDROME_NEW;
    GadgetKind final_kind_ = GadgetKind::FINAL_NEW;
    std::vector<Stage> stages_;
    int num_units_ = 0;
    int num_syn_ = 0;
};

// Resolved content of every stage before FINAL.
struct Plan {
    std::vector<std::vector<std::pair<int, bool>>> rotation_order;  // per stage: (rotation, bottom anchor)
    std::vector<std::vector<int>> gadget_order;                      // per stage
};

void append_gadget(CompileResult &res, const Gadget &g, Role role, bool fenced = false) {
    auto &c = res.circuit;
    int comp = c.add_component(role);
    int offset = c.num_clbits;
    if (fenced) c.gates.push_back(Gate::barrier({}, comp));
    for (Gate gate : g.fragment.gates) {
        gate.component = comp;
        if (gate.clbit >= 0) gate.clbit += offset;
        c.gates.push_back(std::move(gate));
    }
    if (fenced && role != Role::FINAL_MEAS) c.gates.push_back(Gate::barrier({}, comp));
    c.num_clbits += g.fragment.num_clbits;
    for (auto chk : g.fragment.checks) {
        for (int &bit : chk.bits) bit += offset;
        c.checks.push_back(std::move(chk));
    }
    for (auto lr : g.fragment.logicals) {
        for (int &bit : lr.bits) bit += offset;
        c.logicals.push_back(std::move(lr));
    }
    res.gadgets.push_back({g.kind, g.implicit_order, comp, offset});
}

CompileResult assemble(const Problem &pb, const Plan &plan, bool fenced = false) {
    CompileResult res;
    res.circuit.num_qubits = pb.nq();
    for (int c = 0; c < pb.num_stages(); ++c) {
        const Stage &st = pb.stage(c);
        if (st.kind == StageKind::ROTATIONS) {
            int comp = res.circuit.add_component(st.role);
            for (auto [u, bottom] : plan.rotation_order[c]) {
                res.circuit.gates.push_back(
                    encode_rotation(st.rotations[u], pb.layout(), bottom, pb.cfg().use_z2, comp));
            }
        } else {
            append_gadget(res, make_gadget(st.gadget, pb.k(), plan.gadget_order[c]), st.role, fenced);
        }
    }
    return res;
}

// Chooses the FINAL order from the per-qubit free slots of the circuit so far.
std::vector<int> final_order(GadgetKind kind, const IcebergLayout &layout, const std::vector<int> &free) {
    int n = layout.n();
    std::vector<int> data(n);
    std::iota(data.begin(), data.end(), 0);
    std::stable_sort(data.begin(), data.end(), [&](int a, int b) { return free[a] < free[b]; });
    if (kind == GadgetKind::FINAL_OLD) return data;
    int flag = layout.ancilla(0);
    int best_hub = data[0];
    int best_end = -1;
    for (int hub : data) {
        int t = std::max(free[hub], free[flag]);
        for (int q : data) {
            if (q != hub) t = std::max(t + 1, free[q]);
        }
        int end = t + 2;
        if (best_end < 0 || end < best_end) {
            best_end = end;
            best_hub = hub;
        }
    }
    std::vector<int> order{best_hub};
    for (int q : data) {
        if (q != best_hub) order.push_back(q);
    }
    return order;
}

void finish(CompileResult &res, const Problem &pb, bool choose_final, bool fenced = false) {
    res.depth_before_final = two_qubit_depth(res.circuit);
    std::vector<int> order = pb.layout().default_order();
    if (choose_final) {
        auto greedy = final_order(pb.final_kind(), pb.layout(), qubit_free_slots(res.circuit));
        CompileResult trial = res;
        append_gadget(trial, make_gadget(pb.final_kind(), pb.k(), greedy), Role::FINAL_MEAS, fenced);
        CompileResult plain = res;
        append_gadget(plain, make_gadget(pb.final_kind(), pb.k(), order), Role::FINAL_MEAS, fenced);
        if (two_qubit_depth(trial.circuit) <= two_qubit_depth(plain.circuit)) order = greedy;
    }
    append_gadget(res, make_gadget(pb.final_kind(), pb.k(), order), Role::FINAL_MEAS, fenced);
    res.circuit.validate();
    res.depth_2q = two_qubit_depth(res.circuit);
}

struct QueueKey {
    int f, h, neg_g;
    size_t id;
    bool operator>(const QueueKey &o) const {
        return std::tie(f, h, neg_g, id) > std::tie(o.f, o.h, o.neg_g, o.id);
    }
};

std::vector<std::vector<Action>> expand_layers(const Problem &pb, const State &s, int width) {
    std::vector<int> w;
    pb.weights(s, w);
    auto cands = pb.executable(s, w);
    std::vector<std::vector<Action>> out;
    std::vector<bool> removed(cands.size(), false);
    std::vector<std::vector<int>> seen;
    for (int child = 0; child < width; ++child) {
        std::vector<WeightedEdge> edges;
        std::vector<int> index;
        for (size_t i = 0; i < cands.size(); ++i) {
            if (removed[i]) continue;
            edges.push_back({cands[i].u, cands[i].v, cands[i].w});
            index.push_back(static_cast<int>(i));
        }
        if (edges.empty()) break;
        auto mate = max_weight_matching(pb.nq(), edges);
        std::vector<int> chosen;
        for (size_t e = 0; e < edges.size(); ++e) {
            if (mate[edges[e].u] == edges[e].v) {
                chosen.push_back(index[e]);
                mate[edges[e].u] = -1;
                mate[edges[e].v] = -1;
            }
        }
        if (chosen.empty()) break;
        std::sort(chosen.begin(), chosen.end());
        if (std::find(seen.begin(), seen.end(), chosen) == seen.end()) {
            seen.push_back(chosen);
            std::vector<Action> layer;
            for (int i : chosen) layer.push_back(cands[i].action);
            out.push_back(std::move(layer));
        }
        int top = chosen[0];
        for (int i : chosen) {
            if (cands[i].w > cands[top].w) top = i;
        }
        removed[top] = true;
    }
    return out;
}

Plan greedy_plan(const Problem &pb) {
    Plan plan;
    plan.rotation_order.resize(pb.num_stages());
    plan.gadget_order.resize(pb.num_stages());
    // Rotations inside a layer commute, so each one goes to the earliest slot
    // its qubits allow; gadgets are fenced and keep their default order.
    std::vector<int> free(pb.nq(), 0);
    for (int c = 0; c < pb.num_stages(); ++c) {
        const Stage &st = pb.stage(c);
        if (st.kind != StageKind::ROTATIONS) {
            plan.gadget_order[c] = pb.layout().default_order();
            Gadget g = make_gadget(st.gadget, pb.k(), plan.gadget_order[c]);
            int t = *std::max_element(free.begin(), free.end());
            std::fill(free.begin(), free.end(), t);
            for (const auto &gate : g.fragment.gates) {
                if (!is_two_qubit(gate.kind)) continue;
                int s = std::max(free[gate.qubits[0]], free[gate.qubits[1]]);
                free[gate.qubits[0]] = free[gate.qubits[1]] = s + 1;
            }
            t = *std::max_element(free.begin(), free.end());
            std::fill(free.begin(), free.end(), t);
            continue;
        }
        std::vector<std::array<int, 2>> qs;
        for (const auto &rot : st.rotations) {
            qs.push_back({rot.kind == RotationKind::ZZ ? rot.j : pb.layout().top(), rot.i});
        }
        std::vector<bool> placed(qs.size(), false);
        for (size_t step = 0; step < qs.size(); ++step) {
            size_t best = qs.size();
            int best_slot = 0;
            for (size_t u = 0; u < qs.size(); ++u) {
                if (placed[u]) continue;
                int s = std::max(free[qs[u][0]], free[qs[u][1]]);
                if (best == qs.size() || s < best_slot) {
                    best = u;
                    best_slot = s;
                }
            }
            placed[best] = true;
            free[qs[best][0]] = free[qs[best][1]] = best_slot + 1;
            plan.rotation_order[c].push_back({static_cast<int>(best), false});
        }
    }
    return plan;
}

}  // namespace

CompileResult compile_baseline(const LogicalCircuit &logical, const CompileConfig &cfg) {
    cfg.validate();
    auto start = std::chrono::steady_clock::now();
    Problem pb(logical, cfg, false);
    Plan plan = greedy_plan(pb);
    CompileResult res = assemble(pb, plan, true);
    finish(res, pb, false, true);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

CompileResult compile_cooptimized(const LogicalCircuit &logical, const CompileConfig &cfg) {
    cfg.validate();
    auto start = std::chrono::steady_clock::now();
    Problem pb(logical, cfg, true);
    size_t cap = cfg.queue_cap.value_or(kDefaultQueueCap);

    std::vector<Node> nodes;
    std::priority_queue<QueueKey, std::vector<QueueKey>, std::greater<>> open;
    Node root;
    root.state = pb.source();
    root.h = pb.heuristic(root.state);
    int source_h = root.h;
    nodes.push_back(std::move(root));
    open.push({source_h, source_h, 0, 0});

    size_t expansions = 0;
    bool exhausted = false;
    int goal = -1;
    auto add_child = [&](int parent, std::vector<Action> layer) {
        Node child;
        child.parent = parent;
        child.g = nodes[parent].g + 1;
        child.state = nodes[parent].state;
        for (const auto &a : layer) pb.apply(child.state, a);
        child.h = pb.heuristic(child.state);
        child.layer = std::move(layer);
        nodes.push_back(std::move(child));
        return static_cast<int>(nodes.size() - 1);
    };
    while (!open.empty()) {
        QueueKey top = open.top();
        int id = static_cast<int>(top.id);
        if (nodes[id].h == 0) {
            goal = id;
            break;
        }
        if (expansions >= cap) {
            exhausted = true;
            break;
        }
        open.pop();
        ++expansions;
        for (auto &layer : expand_layers(pb, nodes[id].state, cfg.expansion_width)) {
            int c = add_child(id, std::move(layer));
            open.push({nodes[c].g + nodes[c].h, nodes[c].h, -nodes[c].g, static_cast<size_t>(c)});
        }
        // Only frontier nodes keep their full state.
        nodes[id].state = State();
    }
    if (goal < 0) {
        if (open.empty()) throw CompileError("search ended without reaching the goal");
        goal = static_cast<int>(open.top().id);
        while (nodes[goal].h > 0) {
            auto layers = expand_layers(pb, nodes[goal].state, 1);
            if (layers.empty()) throw CompileError("greedy rollout stalled");
            goal = add_child(goal, std::move(layers[0]));
        }
    }

    std::vector<int> path;
    for (int v = goal; v >= 0; v = nodes[v].parent) path.push_back(v);
    std::reverse(path.begin(), path.end());
    Plan plan;
    plan.rotation_order.resize(pb.num_stages());
    plan.gadget_order.resize(pb.num_stages());
    for (int v : path) {
        for (const auto &a : nodes[v].layer) {
            if (pb.stage(a.stage).kind == StageKind::ROTATIONS) {
                plan.rotation_order[a.stage].push_back({a.unit, a.q0 == pb.layout().bottom()});
            }
        }
    }
    const State &final_state = nodes[goal].state;
    for (int c = 0; c < pb.num_stages(); ++c) {
        const Stage &st = pb.stage(c);
        if (st.kind == StageKind::FIXED) plan.gadget_order[c] = st.order;
        if (st.kind == StageKind::SYNDROME) plan.gadget_order[c] = pb.syndrome_order(final_state, c);
    }
    CompileResult res = assemble(pb, plan);
    finish(res, pb, cfg.resynthesize);
    // The unfenced list schedule is a valid plan in every mode; keep it when
    // the search result is deeper.
    CompileResult listed = assemble(pb, greedy_plan(pb));
    finish(listed, pb, cfg.resynthesize);
    if (listed.depth_2q < res.depth_2q) {
        res = std::move(listed);
        res.list_fallback = true;
    }
    res.search_cost = nodes[goal].g;
    res.source_heuristic = source_h;
    res.expansions = expansions;
    res.budget_exhausted = exhausted;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

CompileResult compile(const LogicalCircuit &logical, CompileMode mode, CompileConfig cfg) {
    cfg = config_for(mode, cfg);
    if (mode == CompileMode::BASELINE) return compile_baseline(logical, cfg);
    return compile_cooptimized(logical, cfg);
}

UncompiledGraph source_uncompiled_graph(const LogicalCircuit &logical, const CompileConfig &cfg) {
    Problem pb(logical, cfg, true);
    return pb.uncompiled(pb.source());
}

}  // namespace iceberg
