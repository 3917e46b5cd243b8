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

#ifndef ICEBERG_GADGETS_HPP
#define ICEBERG_GADGETS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "iceberg/circuit.hpp"

namespace iceberg {

// Qubit roles of the [[k+2,k,2]] code: data t=0, 1..k, b=k+1, then two
// ancillas k+2 and k+3.
class IcebergLayout {
   public:
    explicit IcebergLayout(int k);

    int k() const { return k_; }
    int n() const { return k_ + 2; }
    int top() const { return 0; }
    int bottom() const { return k_ + 1; }
    int ancilla(int i) const { return k_ + 2 + i; }
    int num_qubits() const { return k_ + 4; }
    bool is_data(int q) const { return q >= 0 && q < n(); }
    std::vector<int> default_order() const;
    bool supports_new_syndrome() const { return n() % 4 == 0; }

    bool operator==(const IcebergLayout &) const = default;

   private:
    int k_;
};

enum class GadgetKind { INIT_OLD, INIT_NEW, SYNDROME_OLD, SYNDROME_NEW, FINAL_OLD, FINAL_NEW };

const char *gadget_kind_name(GadgetKind kind);
GadgetKind parse_gadget_kind(std::string_view text);

// A fault-tolerant fragment on layout.num_qubits() qubits. Classical bits are
// local (0..num_clbits-1); the check and decode maps live on the fragment.
struct Gadget {
    GadgetKind kind;
    IcebergLayout layout;
    PhysicalCircuit fragment;
    std::vector<int> implicit_order;

    const std::vector<ParityCheck> &check_map() const { return fragment.checks; }
    const std::vector<LogicalReadout> &decode_map() const { return fragment.logicals; }
};

class GadgetError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// `order` lists the n data qubits in slot order; an empty vector means the
// default order [t, 1, ..., k, b].
Gadget init_old(int k, std::vector<int> order = {});
Gadget init_new(int k, std::vector<int> order = {});
Gadget syndrome_old(int k, std::vector<int> order = {});
Gadget syndrome_new(int k, std::vector<int> order = {});
Gadget final_old(int k, std::vector<int> order = {});
Gadget final_new(int k, std::vector<int> order = {});
Gadget make_gadget(GadgetKind kind, int k, std::vector<int> order = {});

// pi permutes slots: the new order is old_order[pi[0]], old_order[pi[1]], ...
Gadget permute_gadget(const Gadget &g, const std::vector<int> &pi);

// Data qubit renaming induced by moving from one slot order to another.
std::vector<int> relabel_map(const IcebergLayout &layout, const std::vector<int> &from,
                             const std::vector<int> &to);

// Table formulas for the 2Q depth and 2Q gate count of each kind.
int expected_depth(GadgetKind kind, int k);
int expected_gates(GadgetKind kind, int k);

// Syndrome steps as (ancilla role, slot) events; both new and old templates
// are expressed this way so the compiler can drive them step by step.
struct SyndromeEvent {
    bool z_check;  // true: CNOT data->A (S_z); false: CNOT B->data (S_x)
    int slot;
};
using SyndromeTemplate = std::vector<std::vector<SyndromeEvent>>;
SyndromeTemplate syndrome_template(GadgetKind kind, int n);

// Logical single-rotation description used by the QAOA builder.
enum class RotationKind { ZZ, X };
struct LogicalRotation {
    RotationKind kind;
    int i;  // 1-based logical index
    int j;  // second index for ZZ, 0 otherwise
    double angle;
    bool operator==(const LogicalRotation &) const = default;
};

Gate encode_rotation(const LogicalRotation &rot, const IcebergLayout &layout, bool use_bottom,
                     bool z2_allowed, int component = 0);

std::string write_gadget(const Gadget &g);

}  // namespace iceberg

#endif  // ICEBERG_GADGETS_HPP
