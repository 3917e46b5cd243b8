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

#ifndef ICEBERG_SIMULATOR_HPP
#define ICEBERG_SIMULATOR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iceberg/circuit.hpp"
#include "iceberg/ft.hpp"
#include "iceberg/qaoa.hpp"

namespace iceberg {

inline constexpr int kMaxSimQubits = 16;

class SimulationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Synthetic stochastic Pauli noise. Rates are multiplied by `scale` before
// use; the defaults are order-of-magnitude choices, not a calibrated device.
struct NoiseModel {
    double p2 = 1.3e-3;
    double p1 = 3e-5;
    double p_idle = 5e-4;
    double p_meas = 1e-3;
    double scale = 1.0;

    static NoiseModel noiseless() { return NoiseModel{0, 0, 0, 0, 0}; }
    double eff_p2() const { return p2 * scale; }
    double eff_p1() const { return p1 * scale; }
    double eff_idle() const { return p_idle * scale; }
    double eff_meas() const { return p_meas * scale; }
    bool silent() const;
    void validate() const;
    bool operator==(const NoiseModel &) const = default;
};

std::string write_noise(const NoiseModel &noise);
NoiseModel read_noise(std::string_view text);

// Dense register; qubit q is bit q of the basis index.
class StateVector {
   public:
    explicit StateVector(int num_qubits);

    int num_qubits() const { return n_; }
    const Eigen::VectorXcd &amplitudes() const { return amp_; }
    Eigen::VectorXd probabilities() const { return amp_.cwiseAbs2(); }
    double norm() const { return amp_.squaredNorm(); }

    void apply(const Gate &gate);  // unitary kinds only
    void apply_pauli(int q, char p);
    void apply_pauli(const PauliString &pauli);
    double prob_one(int q) const;
    // Projects qubit q onto `bit` and renormalises.
    void collapse(int q, int bit, double prob);
    // Resets q to |0> without sampling when it is in a product state with
    // the rest of the register; returns false otherwise.
    bool reset_if_unentangled(int q);

   private:
    void x(int q);
    void z(int q);
    void y(int q);
    void h(int q);
    void rx(int q, double theta);
    void cx(int c, int t);
    void rzz(int a, int b, double theta);
    void rxx(int a, int b, double theta);

    int n_;
    Eigen::VectorXcd amp_;
};

// Final state of a circuit with no measurement or reset gates.
Eigen::VectorXcd final_state(const PhysicalCircuit &circuit);

// Exact distribution over classical records (bit i of the key is clbit i).
// Random mid-circuit outcomes are branched on; `faults` are applied
// deterministically.
using OutcomeDistribution = std::map<uint64_t, double>;
OutcomeDistribution simulate_exact(const PhysicalCircuit &circuit, const std::vector<FaultLocation> &faults = {});

// k-qubit reference with H on every qubit, RZZ/RX rotations, and Z readout of
// qubit v into clbit v.
PhysicalCircuit unencoded_circuit(const LogicalCircuit &logical);

struct Decoded {
    bool accepted = true;
    Bitstring logical = 0;
    std::vector<uint8_t> check_parities;  // 0 when the check is satisfied
};

Decoded decode_record(const PhysicalCircuit &circuit, uint64_t record);

struct LogicalOutcome {
    Distribution logical;  // renormalised over accepted records
    double acceptance = 0.0;
};
LogicalOutcome decode_distribution(const PhysicalCircuit &circuit, const OutcomeDistribution &records);

struct ShotRecord {
    uint64_t bits = 0;
    std::vector<uint8_t> check_parities;
    bool accepted = true;
    Bitstring logical = 0;
    bool operator==(const ShotRecord &) const = default;
};

std::vector<ShotRecord> sample_shots(const PhysicalCircuit &circuit, const NoiseModel &noise, size_t shots,
                                     uint64_t seed);

double post_selection_rate(const std::vector<ShotRecord> &records);
Distribution accepted_distribution(const std::vector<ShotRecord> &records);

struct SampledMetric {
    double mean = 0.0;
    double stderr_ = 0.0;
};
SampledMetric sampled_approximation_ratio(const std::vector<ShotRecord> &records, const ProblemGraph &graph,
                                          double f_max);
SampledMetric sampled_success_probability(const std::vector<ShotRecord> &records, const ProblemGraph &graph,
                                          double f_max);
SampledMetric sampled_post_selection_rate(const std::vector<ShotRecord> &records);

using EnergyDistribution = std::map<double, double>;
EnergyDistribution energy_distribution(const Distribution &dist, const ProblemGraph &graph);
EnergyDistribution energy_distribution(const std::vector<ShotRecord> &records, const ProblemGraph &graph);

struct Cutoff {
    enum class Kind { ENERGY, QUANTILE } kind = Kind::ENERGY;
    double value = 0.0;
    static Cutoff energy(double e) { return {Kind::ENERGY, e}; }
    static Cutoff quantile(double q) { return {Kind::QUANTILE, q}; }
};

struct Truncated {
    EnergyDistribution dist;
    double cutoff_energy = 0.0;
    bool all_removed = false;
};
Truncated postprocess_truncate(const EnergyDistribution &dist, Cutoff cutoff);

// Smallest energy e with reference mass strictly above e no larger than eps.
double tail_cutoff(const EnergyDistribution &reference, double eps);

double total_variation(const Distribution &p, const Distribution &q);
double total_variation(const EnergyDistribution &p, const EnergyDistribution &q);

// Standard error of TV(empirical, reference) by resampling the accepted shots.
double bootstrap_tv_stderr(const std::vector<ShotRecord> &records, const ProblemGraph &graph,
                           const EnergyDistribution &reference, int reps, uint64_t seed,
                           std::optional<Cutoff> truncate = std::nullopt);

std::string shots_csv(const std::vector<ShotRecord> &records, int k, const ProblemGraph *graph);

}  // namespace iceberg

#endif  // ICEBERG_SIMULATOR_HPP
