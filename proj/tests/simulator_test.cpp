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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "iceberg/compiler.hpp"
#include "iceberg/ft.hpp"

using namespace iceberg;

namespace {

PhysicalCircuit bell() {
    PhysicalCircuit c;
    c.num_qubits = 2;
    int id = c.add_component(Role::INIT);
    c.gates = {Gate::h(0, id), Gate::cx(0, 1, id)};
    return c;
}

QaoaParams random_params(int p, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    QaoaParams params;
    params.p = p;
    for (int i = 0; i < p; ++i) {
        params.gammas.push_back(u(rng));
        params.betas.push_back(u(rng));
    }
    return params;
}

Distribution exact_unencoded(const LogicalCircuit &logical) {
    auto ref = unencoded_circuit(logical);
    auto out = decode_distribution(ref, simulate_exact(ref));
    EXPECT_NEAR(out.acceptance, 1.0, 1e-12);
    return out.logical;
}

}  // namespace

TEST(simulator, bell_amplitudes) {
    Eigen::VectorXcd psi = final_state(bell());
    ASSERT_EQ(psi.size(), 4);
    double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(psi(0) - r), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(psi(1)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(psi(2)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(psi(3) - r), 0.0, 1e-12);
}

TEST(simulator, rotation_conventions) {
    // exp(-i t ZZ) on |00> is a pure phase e^{-it}; exp(-i t X) on |0> gives
    // cos t |0> - i sin t |1>.
    PhysicalCircuit c;
    c.num_qubits = 2;
    int id = c.add_component(Role::PHASE_LAYER);
    c.gates = {Gate::rzz(0, 1, 0.3, id), Gate::rx(1, 0.4, id)};
    Eigen::VectorXcd psi = final_state(c);
    std::complex<double> ph = std::exp(std::complex<double>(0, -0.3));
    EXPECT_NEAR(std::abs(psi(0) - ph * std::cos(0.4)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(psi(2) - ph * std::complex<double>(0, -std::sin(0.4))), 0.0, 1e-12);

    PhysicalCircuit d;
    d.num_qubits = 2;
    id = d.add_component(Role::MIXER_LAYER);
    d.gates = {Gate::rxx(0, 1, 0.25, id)};
    psi = final_state(d);
    EXPECT_NEAR(std::abs(psi(0) - std::cos(0.25)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(psi(3) - std::complex<double>(0, -std::sin(0.25))), 0.0, 1e-12);
}

TEST(simulator, norm_is_preserved) {
    auto g = generate_instance(GraphKind::REGULAR_3, 6, std::nullopt, 3);
    auto res = compile(build_qaoa(g, random_params(2, 9)), CompileMode::RESYNTH_Z2);
    StateVector sv(res.circuit.num_qubits);
    for (const auto &gate : res.circuit.gates) {
        if (is_measurement(gate.kind) || gate.kind == GateKind::RESET || gate.kind == GateKind::BARRIER) continue;
        sv.apply(gate);
        ASSERT_NEAR(sv.norm(), 1.0, 1e-10);
    }
}

TEST(simulator, zero_angles_give_uniform_output) {
    QaoaParams params{1, {0.0}, {0.0}};
    auto logical = build_qaoa(cycle_graph(4), params);
    auto dist = exact_unencoded(logical);
    ASSERT_EQ(dist.size(), 16u);
    for (auto [x, p] : dist) EXPECT_NEAR(p, 1.0 / 16, 1e-12);

    auto res = compile(logical, CompileMode::BASELINE);
    auto enc = decode_distribution(res.circuit, simulate_exact(res.circuit));
    EXPECT_NEAR(enc.acceptance, 1.0, 1e-12);
    EXPECT_LE(total_variation(enc.logical, dist), 1e-9);
}

TEST(simulator, bell_measurement_record) {
    PhysicalCircuit c = bell();
    c.num_clbits = 2;
    c.gates.push_back(Gate::mz(0, 0, 0));
    c.gates.push_back(Gate::mz(1, 1, 0));
    auto out = simulate_exact(c);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_NEAR(out[0b00], 0.5, 1e-12);
    EXPECT_NEAR(out[0b11], 0.5, 1e-12);
}

TEST(simulator, mid_circuit_measurement_branches) {
    // Measure a |+> qubit, reset it, then copy the first result onto another
    // qubit through a classical-free CNOT from a fresh |+>.
    PhysicalCircuit c;
    c.num_qubits = 2;
    c.num_clbits = 3;
    int id = c.add_component(Role::SYNDROME);
    c.gates = {Gate::h(0, id),    Gate::mz(0, 0, id), Gate::reset(0, id), Gate::x(0, id),
               Gate::mz(0, 1, id), Gate::h(1, id),     Gate::mx(1, 2, id)};
    auto out = simulate_exact(c);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_NEAR(out[0b010], 0.5, 1e-12);
    EXPECT_NEAR(out[0b011], 0.5, 1e-12);
}

TEST(simulator, encoded_matches_unencoded_k4_p1) {
    auto g = generate_instance(GraphKind::REGULAR_3, 4, std::nullopt, 1);
    auto logical = build_qaoa(g, random_params(1, 5));
    auto ref = exact_unencoded(logical);
    for (auto mode : {CompileMode::BASELINE, CompileMode::RESYNTH, CompileMode::RESYNTH_Z2}) {
        auto res = compile(logical, mode);
        auto enc = decode_distribution(res.circuit, simulate_exact(res.circuit));
        EXPECT_NEAR(enc.acceptance, 1.0, 1e-9) << compile_mode_name(mode);
        EXPECT_LE(total_variation(enc.logical, ref), 1e-9) << compile_mode_name(mode);
    }
}

TEST(simulator, noiseless_sampling_accepts_every_shot) {
    auto g = generate_instance(GraphKind::REGULAR_3, 4, std::nullopt, 2);
    auto logical = build_qaoa(g, random_params(1, 7));
    auto res = compile(logical, CompileMode::RESYNTH_Z2);
    NoiseModel noise;
    noise.scale = 0.0;
    auto shots = sample_shots(res.circuit, noise, 4000, 11);
    EXPECT_EQ(post_selection_rate(shots), 1.0);
    auto ref = exact_unencoded(logical);
    // 16 outcomes and 4000 shots: the empirical TV is a few percent at most.
    EXPECT_LT(total_variation(accepted_distribution(shots), ref), 0.06);
}

TEST(simulator, sampling_is_deterministic) {
    auto g = generate_instance(GraphKind::REGULAR_3, 4, std::nullopt, 2);
    auto res = compile(build_qaoa(g, random_params(1, 7)), CompileMode::BASELINE);
    NoiseModel noise;
    noise.scale = 20.0;
    auto a = sample_shots(res.circuit, noise, 500, 42);
    auto b = sample_shots(res.circuit, noise, 500, 42);
    auto c = sample_shots(res.circuit, noise, 500, 43);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_LT(post_selection_rate(a), 1.0);
}

TEST(simulator, detected_faults_are_rejected) {
    auto g = generate_instance(GraphKind::REGULAR_3, 4, std::nullopt, 3);
    auto res = compile(build_qaoa(g, random_params(1, 3)), CompileMode::RESYNTH_Z2);
    const auto &c = res.circuit;

    // A lone X on ancilla A right after its first CNOT in a syndrome gadget.
    size_t target = c.gates.size();
    IcebergLayout layout(4);
    for (size_t i = 0; i < c.gates.size(); ++i) {
        const Gate &gate = c.gates[i];
        if (gate.kind == GateKind::CNOT && gate.qubits[1] == layout.ancilla(0) &&
            c.components[c.rank_of(gate.component)].role == Role::SYNDROME) {
            target = i;
            break;
        }
    }
    ASSERT_LT(target, c.gates.size());
    FaultLocation x_fault{target, FaultSlot::AFTER_GATE, PauliString::single(c.num_qubits, layout.ancilla(0), 'X')};
    EXPECT_NEAR(decode_distribution(c, simulate_exact(c, {x_fault})).acceptance, 0.0, 1e-12);

    FtContext ctx = code_context(layout);
    ctx.terminal_matters = false;
    auto faults = enumerate_faults(c);
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 60; ++trial) {
        const auto &loc = faults[rng() % faults.size()];
        auto reps = propagate(loc, c, ctx);
        bool all_detected = std::all_of(reps.begin(), reps.end(), [](const FaultReport &r) {
            return r.classification == Classification::DETECTED_BY_CHECK;
        });
        if (!all_detected) continue;
        ++checked;
        EXPECT_NEAR(decode_distribution(c, simulate_exact(c, {loc})).acceptance, 0.0, 1e-12)
            << "gate " << loc.gate << " pauli " << loc.pauli.str();
    }
    EXPECT_GE(checked, 30);
}

TEST(simulator, total_variation_examples) {
    Distribution p{{0, 0.5}, {1, 0.5}};
    EXPECT_NEAR(total_variation(p, p), 0.0, 1e-15);
    EXPECT_NEAR(total_variation(p, Distribution{{0, 1.0}}), 0.5, 1e-15);
    EXPECT_NEAR(total_variation(Distribution{{0, 1.0}}, Distribution{{3, 1.0}}), 1.0, 1e-15);
    EnergyDistribution e{{-4.0, 0.25}, {-2.0, 0.75}};
    EXPECT_NEAR(total_variation(e, EnergyDistribution{{-4.0, 0.75}, {-2.0, 0.25}}), 0.5, 1e-15);
}

TEST(simulator, truncation_examples) {
    EnergyDistribution two{{-4.0, 0.5}, {0.0, 0.5}};
    auto t = postprocess_truncate(two, Cutoff::energy(-1.0));
    EXPECT_FALSE(t.all_removed);
    ASSERT_EQ(t.dist.size(), 1u);
    EXPECT_NEAR(t.dist.at(-4.0), 1.0, 1e-15);

    auto same = postprocess_truncate(two, Cutoff::energy(0.0));
    EXPECT_EQ(same.dist, two);

    auto none = postprocess_truncate(two, Cutoff::energy(-5.0));
    EXPECT_TRUE(none.all_removed);
    EXPECT_EQ(none.dist, two);

    EnergyDistribution four{{-3.0, 0.1}, {-2.0, 0.2}, {-1.0, 0.3}, {0.0, 0.4}};
    auto q = postprocess_truncate(four, Cutoff::quantile(0.3));
    EXPECT_EQ(q.cutoff_energy, -2.0);
    EXPECT_NEAR(q.dist.at(-3.0), 1.0 / 3, 1e-12);
    EXPECT_NEAR(q.dist.at(-2.0), 2.0 / 3, 1e-12);

    EXPECT_EQ(tail_cutoff(four, 0.0), 0.0);
    EXPECT_EQ(tail_cutoff(four, 0.45), -1.0);
    EXPECT_EQ(tail_cutoff(four, 0.7), -2.0);
}

TEST(simulator, energy_distribution_of_uniform_c4) {
    Distribution u;
    for (Bitstring x = 0; x < 16; ++x) u[x] = 1.0 / 16;
    auto e = energy_distribution(u, cycle_graph(4));
    // Cuts of C4: 0 (2 strings), 2 (12 strings), 4 (2 strings).
    ASSERT_EQ(e.size(), 3u);
    EXPECT_NEAR(e.at(0.0), 2.0 / 16, 1e-15);
    EXPECT_NEAR(e.at(-2.0), 12.0 / 16, 1e-15);
    EXPECT_NEAR(e.at(-4.0), 2.0 / 16, 1e-15);
    auto point = energy_distribution(Distribution{{0b0101, 1.0}}, cycle_graph(4));
    EXPECT_EQ(point, (EnergyDistribution{{-4.0, 1.0}}));
}

TEST(simulator, noise_file_round_trip) {
    NoiseModel n;
    n.scale = 0.25;
    n.p_idle = 7e-4;
    EXPECT_EQ(read_noise(write_noise(n)), n);
    EXPECT_THROW(read_noise("p2: 2.0\n"), SimulationError);
    EXPECT_THROW(read_noise("bogus: 1\n"), SimulationError);
    NoiseModel bad;
    bad.scale = -1;
    EXPECT_THROW(bad.validate(), SimulationError);
}

TEST(simulator, width_cap) {
    PhysicalCircuit c;
    c.num_qubits = kMaxSimQubits + 1;
    c.add_component(Role::INIT);
    EXPECT_THROW(simulate_exact(c), SimulationError);
}
