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

#ifndef ICEBERG_FT_HPP
#define ICEBERG_FT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iceberg/circuit.hpp"
#include "iceberg/gadgets.hpp"

namespace iceberg {

// Pauli operator without phase, stored as X and Z bit masks.
class PauliString {
   public:
    explicit PauliString(int num_qubits = 0);
    static PauliString from_string(std::string_view text);  // e.g. "XIZY"
    static PauliString single(int num_qubits, int q, char p);

    int size() const { return n_; }
    bool x(int q) const { return (xs_[q >> 6] >> (q & 63)) & 1; }
    bool z(int q) const { return (zs_[q >> 6] >> (q & 63)) & 1; }
    void set(int q, bool x, bool z);
    char at(int q) const;
    std::string str() const;
    bool is_identity() const;
    int weight() const;
    bool commutes(const PauliString &other) const;
    PauliString &operator*=(const PauliString &other);
    PauliString operator*(const PauliString &other) const;
    bool operator==(const PauliString &other) const = default;

    // Heisenberg-picture update for a Pauli moving forward through a
    // Clifford gate (CNOT, H, X, Z); other kinds are rejected.
    void conjugate_by(const Gate &gate);

   private:
    int n_;
    std::vector<uint64_t> xs_, zs_;
};

enum class Classification { DETECTED_BY_CHECK, STABILIZER_EQUIVALENT, LOGICAL_ERROR, NONPAULI_BRANCHED };
const char *classification_name(Classification c);

// Idle faults coincide with the output faults of the previous gate on the
// same qubit, so only AFTER_GATE and MEASUREMENT_FLIP slots are enumerated.
enum class FaultSlot { AFTER_GATE, MEASUREMENT_FLIP };

struct FaultLocation {
    size_t gate = 0;
    FaultSlot slot = FaultSlot::AFTER_GATE;
    PauliString pauli;
};

struct FaultReport {
    FaultLocation location;
    int branch = 0;
    PauliString terminal;
    Classification classification = Classification::STABILIZER_EQUIVALENT;
    std::vector<int> flipped_bits;
    std::vector<int> flipped_checks;
    std::vector<int> flipped_logicals;
};

// What counts as harmless after the fragment: terminal Paulis in the span of
// `stabilizers` (restricted to data qubits) are benign, terminal Paulis that
// anticommute with a `downstream_check` are caught later. When
// `terminal_matters` is false every data qubit has been read out.
struct FtContext {
    int num_data = 0;
    std::vector<PauliString> stabilizers;
    std::vector<PauliString> downstream_checks;
    bool terminal_matters = true;
    int max_branches = 256;
};

FtContext code_context(const IcebergLayout &layout);
FtContext context_for(const Gadget &gadget);

std::vector<FaultLocation> enumerate_faults(const PhysicalCircuit &circuit);
std::vector<FaultReport> propagate(const FaultLocation &fault, const PhysicalCircuit &circuit,
                                   const FtContext &ctx);
Classification classify_terminal(const PauliString &terminal, bool any_check_flipped,
                                  bool any_logical_flipped, const FtContext &ctx);

struct FtSummary {
    size_t locations = 0;
    size_t branches = 0;
    size_t detected = 0;
    size_t stabilizer = 0;
    size_t logical = 0;
    size_t nonpauli = 0;
    std::vector<FaultReport> escapes;  // LOGICAL_ERROR or NONPAULI_BRANCHED
    std::vector<FaultReport> reports;
    bool fault_tolerant() const { return logical == 0 && nonpauli == 0; }
};

FtSummary check_circuit_ft(const PhysicalCircuit &circuit, const FtContext &ctx);
FtSummary check_gadget_ft(const Gadget &gadget);

// Partition of the 15 two-qubit Paulis acting after an encoded X rotation on
// (anchor, i), labelled as two-letter strings over (anchor, i).
struct RotationFaultPartition {
    std::vector<std::string> undetectable;
    std::vector<std::string> detected;
};
RotationFaultPartition classify_rotation_faults(const IcebergLayout &layout, int logical_index,
                                                bool use_bottom);

// Heisenberg back-propagation of the observable read by the measurement at
// gate index `gate` to the start of the circuit; nullopt when it meets a
// reset with a non-Z component (the outcome is random).
std::optional<PauliString> measured_observable(const PhysicalCircuit &circuit, size_t gate);
// Product of the observables behind a set of classical bits.
std::optional<PauliString> bits_observable(const PhysicalCircuit &circuit, const std::vector<int> &bits);

std::string write_ft_report_csv(const FtSummary &summary, const PhysicalCircuit &circuit);

}  // namespace iceberg

#endif  // ICEBERG_FT_HPP
