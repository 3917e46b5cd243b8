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

#include "iceberg/simulator.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <sstream>

namespace iceberg {

using cd = std::complex<double>;

namespace {

constexpr double kBranchCut = 1e-14;
constexpr size_t kMaxBranches = 4096;
constexpr size_t kCheckpointBytes = size_t{256} << 20;

void check_width(const PhysicalCircuit &c) {
    if (c.num_qubits > kMaxSimQubits) {
        throw SimulationError(fmt::format("{} qubits exceeds the simulator cap of {}", c.num_qubits, kMaxSimQubits));
    }
    if (c.num_clbits > 64) throw SimulationError("records are limited to 64 classical bits");
}

double energy_key(double e) { return std::round(e * 1e9) / 1e9 + 0.0; }

}  // namespace

bool NoiseModel::silent() const {
    return eff_p2() == 0 && eff_p1() == 0 && eff_idle() == 0 && eff_meas() == 0;
}

void NoiseModel::validate() const {
    if (!std::isfinite(scale) || scale < 0) throw SimulationError("noise scale must be finite and >= 0");
    for (double p : {p2, p1, p_idle, p_meas}) {
        if (!std::isfinite(p) || p < 0 || p > 1) throw SimulationError("noise rates must lie in [0, 1]");
        if (p * scale > 1) throw SimulationError("scaled noise rate exceeds 1");
    }
}

std::string write_noise(const NoiseModel &noise) {
    return fmt::format("p2: {}\np1: {}\np_idle: {}\np_meas: {}\nscale: {}\n", noise.p2, noise.p1, noise.p_idle,
                       noise.p_meas, noise.scale);
}

NoiseModel read_noise(std::string_view text) {
    NoiseModel out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto colon = line.find(':');
        std::istringstream fields(colon == std::string::npos ? line : line.replace(colon, 1, " "));
        std::string key;
        double value;
        if (!(fields >> key)) continue;
        if (!(fields >> value)) throw SimulationError(fmt::format("line {}: expected `key: value`", lineno));
        if (key == "p2") {
            out.p2 = value;
        } else if (key == "p1") {
            out.p1 = value;
        } else if (key == "p_idle") {
            out.p_idle = value;
        } else if (key == "p_meas") {
            out.p_meas = value;
        } else if (key == "scale" || key == "lambda") {
            out.scale = value;
        } else {
            throw SimulationError(fmt::format("line {}: unknown noise field '{}'", lineno, key));
        }
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// State vector kernels

StateVector::StateVector(int num_qubits) : n_(num_qubits) {
    if (num_qubits < 0 || num_qubits > kMaxSimQubits) {
        throw SimulationError(fmt::format("{} qubits exceeds the simulator cap of {}", num_qubits, kMaxSimQubits));
    }
    amp_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
    amp_(0) = 1.0;
}

namespace {

// Plain complex products; std::complex multiplication goes through a slow
// NaN-aware helper without -ffast-math.
inline cd cmul(cd a, cd b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
// (-i s) * a
inline cd mis(double s, cd a) { return {s * a.imag(), -s * a.real()}; }

// Calls f(i0) for every index with bit q clear, in order.
template <class F>
void for_pairs(Eigen::Index size, int q, F &&f) {
    const Eigen::Index m = Eigen::Index{1} << q;
    for (Eigen::Index base = 0; base < size; base += 2 * m) {
        for (Eigen::Index i = base; i < base + m; ++i) f(i, i | m);
    }
}

// Calls f(i) for every index with bits a and b clear.
template <class F>
void for_quads(Eigen::Index size, int a, int b, F &&f) {
    const Eigen::Index lo = Eigen::Index{1} << std::min(a, b), hi = Eigen::Index{1} << std::max(a, b);
    for (Eigen::Index outer = 0; outer < size; outer += 2 * hi) {
        for (Eigen::Index mid = outer; mid < outer + hi; mid += 2 * lo) {
            for (Eigen::Index i = mid; i < mid + lo; ++i) f(i);
        }
    }
}

}  // namespace

void StateVector::x(int q) {
    for_pairs(amp_.size(), q, [&](Eigen::Index i0, Eigen::Index i1) { std::swap(amp_(i0), amp_(i1)); });
}

void StateVector::z(int q) {
    for_pairs(amp_.size(), q, [&](Eigen::Index, Eigen::Index i1) { amp_(i1) = -amp_(i1); });
}

void StateVector::y(int q) {
    // Y|0> = i|1>, Y|1> = -i|0>
    for_pairs(amp_.size(), q, [&](Eigen::Index i0, Eigen::Index i1) {
        cd a0 = amp_(i0), a1 = amp_(i1);
        amp_(i0) = mis(1.0, a1);
        amp_(i1) = mis(-1.0, a0);
    });
}

void StateVector::h(int q) {
    const double r = M_SQRT1_2;
    for_pairs(amp_.size(), q, [&](Eigen::Index i0, Eigen::Index i1) {
        cd a0 = amp_(i0), a1 = amp_(i1);
        amp_(i0) = r * (a0 + a1);
        amp_(i1) = r * (a0 - a1);
    });
}

void StateVector::rx(int q, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    for_pairs(amp_.size(), q, [&](Eigen::Index i0, Eigen::Index i1) {
        cd a0 = amp_(i0), a1 = amp_(i1);
        amp_(i0) = c * a0 + mis(s, a1);
        amp_(i1) = mis(s, a0) + c * a1;
    });
}

void StateVector::cx(int c, int t) {
    const Eigen::Index mc = Eigen::Index{1} << c, mt = Eigen::Index{1} << t;
    for_quads(amp_.size(), c, t, [&](Eigen::Index i) { std::swap(amp_(i | mc), amp_(i | mc | mt)); });
}

void StateVector::rzz(int a, int b, double theta) {
    const cd even = std::exp(cd(0, -theta)), odd = std::exp(cd(0, theta));
    const Eigen::Index ma = Eigen::Index{1} << a, mb = Eigen::Index{1} << b;
    for_quads(amp_.size(), a, b, [&](Eigen::Index i) {
        amp_(i) = cmul(amp_(i), even);
        amp_(i | ma) = cmul(amp_(i | ma), odd);
        amp_(i | mb) = cmul(amp_(i | mb), odd);
        amp_(i | ma | mb) = cmul(amp_(i | ma | mb), even);
    });
}

void StateVector::rxx(int a, int b, double theta) {
    const Eigen::Index ma = Eigen::Index{1} << a, mb = Eigen::Index{1} << b;
    const double c = std::cos(theta), s = std::sin(theta);
    for_quads(amp_.size(), a, b, [&](Eigen::Index i) {
        cd a00 = amp_(i), a01 = amp_(i | ma), a10 = amp_(i | mb), a11 = amp_(i | ma | mb);
        amp_(i) = c * a00 + mis(s, a11);
        amp_(i | ma | mb) = mis(s, a00) + c * a11;
        amp_(i | ma) = c * a01 + mis(s, a10);
        amp_(i | mb) = mis(s, a01) + c * a10;
    });
}

void StateVector::apply(const Gate &g) {
    const auto &q = g.qubits;
    switch (g.kind) {
        case GateKind::RZZ: rzz(q[0], q[1], g.angle); break;
        case GateKind::RXX: rxx(q[0], q[1], g.angle); break;
        case GateKind::RX: rx(q[0], g.angle); break;
        case GateKind::CNOT: cx(q[0], q[1]); break;
        case GateKind::H: h(q[0]); break;
        case GateKind::X: x(q[0]); break;
        case GateKind::Z: z(q[0]); break;
        case GateKind::BARRIER: break;
        default: throw SimulationError(fmt::format("{} is not unitary", gate_name(g.kind)));
    }
}

void StateVector::apply_pauli(int q, char p) {
    switch (p) {
        case 'X': x(q); break;
        case 'Y': y(q); break;
        case 'Z': z(q); break;
        case 'I': break;
        default: throw SimulationError(fmt::format("bad Pauli letter '{}'", p));
    }
}

void StateVector::apply_pauli(const PauliString &pauli) {
    for (int q = 0; q < pauli.size() && q < n_; ++q) apply_pauli(q, pauli.at(q));
}

double StateVector::prob_one(int q) const {
    double p = 0;
    for_pairs(amp_.size(), q, [&](Eigen::Index, Eigen::Index i1) { p += std::norm(amp_(i1)); });
    return std::clamp(p, 0.0, 1.0);
}

bool StateVector::reset_if_unentangled(int q) {
    // Product state iff the two halves are parallel (Cauchy-Schwarz equality).
    double p0 = 0, p1 = 0;
    cd overlap = 0;
    for_pairs(amp_.size(), q, [&](Eigen::Index i0, Eigen::Index i1) {
        p0 += std::norm(amp_(i0));
        p1 += std::norm(amp_(i1));
        overlap += cmul(std::conj(amp_(i0)), amp_(i1));
    });
    if (std::abs(std::norm(overlap) - p0 * p1) > 1e-12) return false;
    const bool keep_zero = p0 >= p1;
    const double f = 1.0 / std::sqrt(keep_zero ? p0 : p1);
    for_pairs(amp_.size(), q, [&](Eigen::Index i0, Eigen::Index i1) {
        amp_(i0) = (keep_zero ? amp_(i0) : amp_(i1)) * f;
        amp_(i1) = 0;
    });
    return true;
}

void StateVector::collapse(int q, int bit, double prob) {
    if (prob <= 0) throw SimulationError("collapse onto a zero-probability outcome");
    const Eigen::Index m = Eigen::Index{1} << q;
    const double f = 1.0 / std::sqrt(prob);
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
        if (((i & m) != 0) == (bit != 0)) {
            amp_(i) *= f;
        } else {
            amp_(i) = 0;
        }
    }
}

Eigen::VectorXcd final_state(const PhysicalCircuit &circuit) {
    circuit.validate();
    check_width(circuit);
    StateVector sv(circuit.num_qubits);
    for (const auto &layer : layered_schedule(circuit).layers) {
        for (size_t gi : layer) sv.apply(circuit.gates[gi]);
    }
    return sv.amplitudes();
}

// ---------------------------------------------------------------------------
// Execution program

namespace {

// A step is either a gate or the idle window after a two-qubit layer.
struct Step {
    int gate = -1;
    std::vector<int> idle;
};

struct Program {
    int n = 0;
    std::vector<Step> steps;
    std::vector<uint8_t> terminal;             // per gate
    std::vector<std::pair<int, int>> readout;  // (qubit, clbit) of deferred measurements
};

Program make_program(const PhysicalCircuit &c) {
    c.validate();
    check_width(c);
    auto sched = layered_schedule(c);
    Program prog;
    prog.n = c.num_qubits;
    std::vector<int> first(c.num_qubits, -1), last(c.num_qubits, -1);
    for (size_t gi = 0; gi < c.gates.size(); ++gi) {
        int L = sched.layer_of[gi];
        if (L < 0) continue;
        for (int q : c.gates[gi].qubits) {
            if (first[q] < 0 || L < first[q]) first[q] = L;
            last[q] = std::max(last[q], L);
        }
    }
    prog.terminal.assign(c.gates.size(), 0);
    for (size_t gi = 0; gi < c.gates.size(); ++gi) {
        const Gate &g = c.gates[gi];
        if (is_measurement(g.kind) && last[g.qubits[0]] == sched.layer_of[gi]) {
            prog.terminal[gi] = 1;
            prog.readout.emplace_back(g.qubits[0], g.clbit);
        }
    }
    for (size_t L = 0; L < sched.layers.size(); ++L) {
        std::vector<uint8_t> busy(c.num_qubits, 0);
        bool two_qubit = false;
        for (size_t gi : sched.layers[L]) {
            prog.steps.push_back({static_cast<int>(gi), {}});
            for (int q : c.gates[gi].qubits) busy[q] = 1;
            two_qubit = two_qubit || is_two_qubit(c.gates[gi].kind);
        }
        if (!two_qubit) continue;
        Step idle;
        for (int q = 0; q < c.num_qubits; ++q) {
            if (!busy[q] && first[q] >= 0 && first[q] < static_cast<int>(L) && last[q] > static_cast<int>(L)) {
                idle.idle.push_back(q);
            }
        }
        if (!idle.idle.empty()) prog.steps.push_back(std::move(idle));
    }
    return prog;
}

// Runs one gate. `choose(p1)` returns the outcome of a random Z measurement
// given the probability of 1.
template <class Choose>
void exec_gate(StateVector &sv, const Gate &g, bool terminal, uint64_t &record, Choose &&choose) {
    switch (g.kind) {
        case GateKind::MEASURE_Z:
        case GateKind::MEASURE_X: {
            int q = g.qubits[0];
            if (g.kind == GateKind::MEASURE_X) sv.apply(Gate::h(q));
            if (terminal) return;
            double p1 = sv.prob_one(q);
            int bit = choose(p1);
            sv.collapse(q, bit, bit ? p1 : 1 - p1);
            if (g.kind == GateKind::MEASURE_X) sv.apply(Gate::h(q));
            if (bit) record |= uint64_t{1} << g.clbit;
            return;
        }
        case GateKind::RESET: {
            int q = g.qubits[0];
            if (sv.reset_if_unentangled(q)) return;
            double p1 = sv.prob_one(q);
            int bit = choose(p1);
            sv.collapse(q, bit, bit ? p1 : 1 - p1);
            if (bit) sv.apply(Gate::x(q));
            return;
        }
        default:
            sv.apply(g);
    }
}

uint64_t readout_bits(const Program &prog, Eigen::Index index) {
    uint64_t rec = 0;
    for (auto [q, c] : prog.readout) {
        if ((index >> q) & 1) rec |= uint64_t{1} << c;
    }
    return rec;
}

}  // namespace

OutcomeDistribution simulate_exact(const PhysicalCircuit &circuit, const std::vector<FaultLocation> &faults) {
    Program prog = make_program(circuit);
    std::vector<std::vector<const FaultLocation *>> at(circuit.gates.size());
    uint64_t flips = 0;
    for (const auto &f : faults) {
        if (f.gate >= circuit.gates.size()) throw SimulationError("fault gate index out of range");
        if (f.slot == FaultSlot::MEASUREMENT_FLIP) {
            const Gate &g = circuit.gates[f.gate];
            if (!is_measurement(g.kind)) throw SimulationError("measurement flip on a non-measurement gate");
            flips ^= uint64_t{1} << g.clbit;
        } else if (!is_measurement(circuit.gates[f.gate].kind)) {
            at[f.gate].push_back(&f);
        } else if (!prog.terminal[f.gate]) {
            at[f.gate].push_back(&f);
        }
    }

    struct Branch {
        StateVector sv;
        double weight;
        uint64_t record;
        size_t step;
    };
    std::vector<Branch> stack;
    stack.push_back({StateVector(circuit.num_qubits), 1.0, 0, 0});
    size_t spawned = 1;
    OutcomeDistribution out;
    while (!stack.empty()) {
        Branch br = std::move(stack.back());
        stack.pop_back();
        for (; br.step < prog.steps.size(); ++br.step) {
            const Step &st = prog.steps[br.step];
            if (st.gate < 0) continue;
            const Gate &g = circuit.gates[st.gate];
            auto choose = [&](double p1) {
                if (p1 > kBranchCut && 1 - p1 > kBranchCut) {
                    if (++spawned > kMaxBranches) {
                        throw SimulationError("too many random mid-circuit outcomes for exact simulation");
                    }
                    Branch other{br.sv, br.weight * p1, br.record, br.step};
                    other.sv.collapse(g.qubits[0], 1, p1);
                    if (g.kind == GateKind::RESET) {
                        other.sv.apply(Gate::x(g.qubits[0]));
                    } else {
                        if (g.kind == GateKind::MEASURE_X) other.sv.apply(Gate::h(g.qubits[0]));
                        other.record |= uint64_t{1} << g.clbit;
                    }
                    for (const auto *f : at[st.gate]) other.sv.apply_pauli(f->pauli);
                    ++other.step;
                    stack.push_back(std::move(other));
                    br.weight *= 1 - p1;
                    return 0;
                }
                return p1 > 0.5 ? 1 : 0;
            };
            exec_gate(br.sv, g, prog.terminal[st.gate], br.record, choose);
            for (const auto *f : at[st.gate]) br.sv.apply_pauli(f->pauli);
        }
        Eigen::VectorXd probs = br.sv.probabilities();
        for (Eigen::Index i = 0; i < probs.size(); ++i) {
            double p = probs(i) * br.weight;
            if (p < 1e-20) continue;
            out[(br.record | readout_bits(prog, i)) ^ flips] += p;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reference circuits and decoding

PhysicalCircuit unencoded_circuit(const LogicalCircuit &logical) {
    PhysicalCircuit c;
    c.num_qubits = logical.k;
    c.num_clbits = logical.k;
    int init = c.add_component(Role::INIT);
    for (int q = 0; q < logical.k; ++q) c.gates.push_back(Gate::h(q, init));
    for (const auto &comp : logical.components) {
        int id = c.add_component(comp.role);
        for (const auto &r : comp.rotations) {
            if (r.kind == RotationKind::ZZ) {
                c.gates.push_back(Gate::rzz(r.i - 1, r.j - 1, r.angle, id));
            } else {
                c.gates.push_back(Gate::rx(r.i - 1, r.angle, id));
            }
        }
    }
    int fin = c.add_component(Role::FINAL_MEAS);
    for (int q = 0; q < logical.k; ++q) {
        c.gates.push_back(Gate::mz(q, q, fin));
        c.logicals.push_back({q + 1, {q}});
    }
    return c;
}

Decoded decode_record(const PhysicalCircuit &circuit, uint64_t record) {
    Decoded d;
    auto parity = [&](const std::vector<int> &bits) {
        int p = 0;
        for (int b : bits) p ^= static_cast<int>((record >> b) & 1);
        return p;
    };
    d.check_parities.reserve(circuit.checks.size());
    for (const auto &chk : circuit.checks) {
        uint8_t bad = parity(chk.bits) != chk.expected;
        d.check_parities.push_back(bad);
        if (bad) d.accepted = false;
    }
    for (const auto &l : circuit.logicals) {
        if (parity(l.bits)) d.logical |= Bitstring{1} << (l.index - 1);
    }
    return d;
}

LogicalOutcome decode_distribution(const PhysicalCircuit &circuit, const OutcomeDistribution &records) {
    LogicalOutcome out;
    double total = 0;
    for (auto [rec, p] : records) {
        total += p;
        Decoded d = decode_record(circuit, rec);
        if (!d.accepted) continue;
        out.acceptance += p;
        out.logical[d.logical] += p;
    }
    if (out.acceptance > 0) {
        for (auto &[x, p] : out.logical) p /= out.acceptance;
    }
    if (total > 0) out.acceptance /= total;
    return out;
}

// ---------------------------------------------------------------------------
// Shot sampling

namespace {

struct Action {
    size_t step;
    int q[2] = {-1, -1};
    char p[2] = {'I', 'I'};
};

char random_pauli(std::mt19937_64 &rng) { return "XYZ"[rng() % 3]; }

class ShotSampler {
   public:
    ShotSampler(const PhysicalCircuit &c, const NoiseModel &noise) : c_(c), noise_(noise), prog_(make_program(c)) {
        reference();
    }

    ShotRecord shot(uint64_t seed) const {
        std::mt19937_64 rng(seed);
        auto u01 = [&] { return uniform01(rng()); };
        std::vector<Action> actions;
        uint64_t flips = 0;
        const double p1 = noise_.eff_p1(), p2 = noise_.eff_p2(), pi = noise_.eff_idle(), pm = noise_.eff_meas();
        for (size_t s = 0; s < prog_.steps.size(); ++s) {
            const Step &st = prog_.steps[s];
            if (st.gate < 0) {
                if (pi <= 0) continue;
                for (int q : st.idle) {
                    if (u01() < pi) actions.push_back({s, {q, -1}, {random_pauli(rng), 'I'}});
                }
                continue;
            }
            const Gate &g = c_.gates[st.gate];
            if (is_measurement(g.kind)) {
                if (pm > 0 && u01() < pm) flips ^= uint64_t{1} << g.clbit;
            } else if (is_two_qubit(g.kind)) {
                if (p2 > 0 && u01() < p2) {
                    int m = 1 + static_cast<int>(rng() % 15);
                    actions.push_back({s, {g.qubits[0], g.qubits[1]}, {"IXYZ"[m & 3], "IXYZ"[m >> 2]}});
                }
            } else if (g.kind != GateKind::BARRIER) {
                if (p1 > 0 && u01() < p1) actions.push_back({s, {g.qubits[0], -1}, {random_pauli(rng), 'I'}});
            }
        }

        uint64_t bits;
        if (actions.empty() && deterministic_) {
            bits = ref_record_ | readout_bits(prog_, sample_index(ref_cdf_, u01()));
        } else {
            size_t start = 0;
            const Checkpoint *cp = &checkpoints_.front();
            if (deterministic_ && !actions.empty()) {
                size_t slot = std::min(actions.front().step / stride_, checkpoints_.size() - 1);
                cp = &checkpoints_[slot];
            }
            start = cp->step;
            StateVector sv = cp->sv;
            uint64_t record = cp->record;
            size_t next = 0;
            auto choose = [&](double prob) { return u01() < prob ? 1 : 0; };
            for (size_t s = start; s < prog_.steps.size(); ++s) {
                const Step &st = prog_.steps[s];
                if (st.gate >= 0) exec_gate(sv, c_.gates[st.gate], prog_.terminal[st.gate], record, choose);
                while (next < actions.size() && actions[next].step < s) ++next;
                for (; next < actions.size() && actions[next].step == s; ++next) {
                    for (int a = 0; a < 2; ++a) {
                        if (actions[next].q[a] >= 0) sv.apply_pauli(actions[next].q[a], actions[next].p[a]);
                    }
                }
            }
            Eigen::VectorXd probs = sv.probabilities();
            std::partial_sum(probs.begin(), probs.end(), probs.begin());
            bits = record | readout_bits(prog_, sample_index(probs, u01()));
        }
        bits ^= flips;
        Decoded d = decode_record(c_, bits);
        return {bits, std::move(d.check_parities), d.accepted, d.accepted ? d.logical : 0};
    }

   private:
    struct Checkpoint {
        size_t step;
        StateVector sv;
        uint64_t record;
    };

    static Eigen::Index sample_index(const Eigen::VectorXd &cdf, double u) {
        double target = u * cdf(cdf.size() - 1);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
        auto idx = static_cast<Eigen::Index>(it - cdf.begin());
        return std::min(idx, cdf.size() - 1);
    }

    // Noiseless run that stores periodic snapshots. Faulty shots restart from
    // the last snapshot before their first fault when every mid-circuit
    // outcome of the reference is certain.
    void reference() {
        size_t bytes = sizeof(cd) << prog_.n;
        size_t max_cp = std::max<size_t>(1, kCheckpointBytes / bytes);
        stride_ = std::max<size_t>(1, (prog_.steps.size() + max_cp - 1) / max_cp);
        StateVector sv(prog_.n);
        uint64_t record = 0;
        deterministic_ = true;
        auto choose = [&](double p1) {
            if (p1 > 1e-12 && 1 - p1 > 1e-12) deterministic_ = false;
            return p1 > 0.5 ? 1 : 0;
        };
        for (size_t s = 0; s < prog_.steps.size(); ++s) {
            if (s % stride_ == 0) checkpoints_.push_back({s, sv, record});
            const Step &st = prog_.steps[s];
            if (st.gate >= 0) exec_gate(sv, c_.gates[st.gate], prog_.terminal[st.gate], record, choose);
        }
        if (checkpoints_.empty()) checkpoints_.push_back({0, sv, record});
        if (!deterministic_) checkpoints_.erase(checkpoints_.begin() + 1, checkpoints_.end());
        ref_record_ = record;
        ref_cdf_ = sv.probabilities();
        std::partial_sum(ref_cdf_.begin(), ref_cdf_.end(), ref_cdf_.begin());
    }

    const PhysicalCircuit &c_;
    NoiseModel noise_;
    Program prog_;
    size_t stride_ = 1;
    bool deterministic_ = true;
    std::vector<Checkpoint> checkpoints_;
    uint64_t ref_record_ = 0;
    Eigen::VectorXd ref_cdf_;
};

}  // namespace

std::vector<ShotRecord> sample_shots(const PhysicalCircuit &circuit, const NoiseModel &noise, size_t shots,
                                     uint64_t seed) {
    noise.validate();
    ShotSampler sampler(circuit, noise);
    std::vector<ShotRecord> out;
    out.reserve(shots);
    for (size_t s = 0; s < shots; ++s) {
        out.push_back(sampler.shot(splitmix64(seed ^ splitmix64(s + 0x5851f42d4c957f2dULL))));
    }
    return out;
}

double post_selection_rate(const std::vector<ShotRecord> &records) {
    if (records.empty()) return 0.0;
    size_t kept = std::count_if(records.begin(), records.end(), [](const ShotRecord &r) { return r.accepted; });
    return static_cast<double>(kept) / static_cast<double>(records.size());
}

Distribution accepted_distribution(const std::vector<ShotRecord> &records) {
    Distribution d;
    size_t kept = 0;
    for (const auto &r : records) {
        if (!r.accepted) continue;
        d[r.logical] += 1;
        ++kept;
    }
    for (auto &[x, p] : d) p /= static_cast<double>(kept);
    return d;
}

namespace {

SampledMetric mean_and_stderr(const std::vector<double> &v) {
    SampledMetric m;
    if (v.empty()) return m;
    double n = static_cast<double>(v.size());
    for (double x : v) m.mean += x;
    m.mean /= n;
    if (v.size() > 1) {
        double ss = 0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.stderr_ = std::sqrt(ss / (n - 1) / n);
    }
    return m;
}

}  // namespace

SampledMetric sampled_approximation_ratio(const std::vector<ShotRecord> &records, const ProblemGraph &graph,
                                          double f_max) {
    std::vector<double> v;
    for (const auto &r : records) {
        if (r.accepted) v.push_back(cut_value(graph, r.logical) / f_max);
    }
    return mean_and_stderr(v);
}

SampledMetric sampled_success_probability(const std::vector<ShotRecord> &records, const ProblemGraph &graph,
                                          double f_max) {
    std::vector<double> v;
    for (const auto &r : records) {
        if (r.accepted) v.push_back(std::abs(cut_value(graph, r.logical) - f_max) < 1e-9 ? 1.0 : 0.0);
    }
    return mean_and_stderr(v);
}

SampledMetric sampled_post_selection_rate(const std::vector<ShotRecord> &records) {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto &r : records) v.push_back(r.accepted ? 1.0 : 0.0);
    return mean_and_stderr(v);
}

// ---------------------------------------------------------------------------
// Energy distributions

EnergyDistribution energy_distribution(const Distribution &dist, const ProblemGraph &graph) {
    EnergyDistribution e;
    double total = 0;
    for (auto [x, p] : dist) total += p;
    for (auto [x, p] : dist) e[energy_key(energy(graph, x))] += p / total;
    return e;
}

EnergyDistribution energy_distribution(const std::vector<ShotRecord> &records, const ProblemGraph &graph) {
    return energy_distribution(accepted_distribution(records), graph);
}

Truncated postprocess_truncate(const EnergyDistribution &dist, Cutoff cutoff) {
    Truncated out;
    if (cutoff.kind == Cutoff::Kind::ENERGY) {
        out.cutoff_energy = cutoff.value;
    } else {
        if (!(cutoff.value >= 0 && cutoff.value <= 1)) throw SimulationError("quantile cutoff must lie in [0, 1]");
        double total = 0, acc = 0;
        for (auto [e, p] : dist) total += p;
        out.cutoff_energy = dist.empty() ? 0.0 : dist.rbegin()->first;
        for (auto [e, p] : dist) {
            acc += p;
            if (acc >= cutoff.value * total - 1e-12) {
                out.cutoff_energy = e;
                break;
            }
        }
    }
    double kept = 0;
    for (auto [e, p] : dist) {
        if (e <= out.cutoff_energy) {
            out.dist[e] = p;
            kept += p;
        }
    }
    if (kept <= 0) {
        out.dist = dist;
        out.all_removed = true;
        return out;
    }
    for (auto &[e, p] : out.dist) p /= kept;
    return out;
}

double tail_cutoff(const EnergyDistribution &reference, double eps) {
    if (reference.empty()) throw SimulationError("empty reference distribution");
    double above = 0;
    double cut = reference.rbegin()->first;
    for (auto it = reference.rbegin(); it != reference.rend(); ++it) {
        auto next = std::next(it);
        if (next == reference.rend()) break;
        above += it->second;
        if (above > eps + 1e-12) break;
        cut = next->first;
    }
    return cut;
}

namespace {

template <class Map>
double tv_impl(const Map &p, const Map &q) {
    double s = 0;
    auto a = p.begin(), b = q.begin();
    while (a != p.end() || b != q.end()) {
        if (b == q.end() || (a != p.end() && a->first < b->first)) {
            s += std::abs(a->second);
            ++a;
        } else if (a == p.end() || b->first < a->first) {
            s += std::abs(b->second);
            ++b;
        } else {
            s += std::abs(a->second - b->second);
            ++a;
            ++b;
        }
    }
    return 0.5 * s;
}

}  // namespace

double total_variation(const Distribution &p, const Distribution &q) { return tv_impl(p, q); }
double total_variation(const EnergyDistribution &p, const EnergyDistribution &q) { return tv_impl(p, q); }

double bootstrap_tv_stderr(const std::vector<ShotRecord> &records, const ProblemGraph &graph,
                           const EnergyDistribution &reference, int reps, uint64_t seed,
                           std::optional<Cutoff> truncate) {
    std::vector<double> energies;
    for (const auto &r : records) {
        if (r.accepted) energies.push_back(energy_key(energy(graph, r.logical)));
    }
    if (energies.empty() || reps < 2) return 0.0;
    std::mt19937_64 rng(seed);
    std::vector<double> tvs;
    double w = 1.0 / static_cast<double>(energies.size());
    for (int r = 0; r < reps; ++r) {
        EnergyDistribution d;
        for (size_t i = 0; i < energies.size(); ++i) d[energies[rng() % energies.size()]] += w;
        if (truncate) d = postprocess_truncate(d, *truncate).dist;
        tvs.push_back(total_variation(d, reference));
    }
    double mean = 0;
    for (double t : tvs) mean += t;
    mean /= reps;
    double ss = 0;
    for (double t : tvs) ss += (t - mean) * (t - mean);
    return std::sqrt(ss / (reps - 1));
}

std::string shots_csv(const std::vector<ShotRecord> &records, int k, const ProblemGraph *graph) {
    std::string out = "shot,accepted,logical,energy\n";
    for (size_t s = 0; s < records.size(); ++s) {
        const auto &r = records[s];
        std::string bits;
        if (r.accepted) {
            for (int v = 0; v < k; ++v) bits += ((r.logical >> v) & 1) ? '1' : '0';
        }
        std::string e = (r.accepted && graph) ? fmt::format("{}", energy(*graph, r.logical) + 0.0) : "";
        out += fmt::format("{},{},{},{}\n", s, r.accepted ? 1 : 0, bits, e);
    }
    return out;
}

}  // namespace iceberg
