// Copyright 2026 The qadv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QADV_PAULI_H
#define QADV_PAULI_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qadv {

/// Phase-free single-qubit Pauli. Bit 0 is the X component, bit 1 the Z
/// component, so group multiplication is XOR.
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

constexpr Pauli operator*(Pauli a, Pauli b) {
    return static_cast<Pauli>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}

constexpr bool has_x(Pauli p) { return (static_cast<uint8_t>(p) & 1) != 0; }
constexpr bool has_z(Pauli p) { return (static_cast<uint8_t>(p) & 2) != 0; }

/// True when the two single-qubit Paulis anticommute.
constexpr bool anticommutes(Pauli a, Pauli b) {
    return ((has_x(a) && has_z(b)) != (has_z(a) && has_x(b)));
}

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// The hidden error state: one Pauli per data qubit.
class PauliFrame {
   public:
    PauliFrame() = default;
    explicit PauliFrame(size_t num_qubits) : paulis_(num_qubits, Pauli::I) {}
    explicit PauliFrame(std::vector<Pauli> paulis) : paulis_(std::move(paulis)) {}

    /// Parses a string such as "_XZY" ('_' or 'I' for identity).
    static PauliFrame from_str(const std::string& text);

    size_t size() const { return paulis_.size(); }
    Pauli operator[](size_t qubit) const { return paulis_[qubit]; }
    Pauli at(size_t qubit) const;

    /// Multiplies p onto the qubit in place. Throws std::out_of_range.
    void apply(size_t qubit, Pauli p);

    /// In-place composition with another frame of the same length.
    PauliFrame& operator*=(const PauliFrame& other);

    size_t weight() const;
    bool is_identity() const { return weight() == 0; }
    const std::vector<Pauli>& paulis() const { return paulis_; }
    std::string str() const;

    bool operator==(const PauliFrame& other) const = default;

   private:
    std::vector<Pauli> paulis_;
};

PauliFrame operator*(PauliFrame lhs, const PauliFrame& rhs);

/// Value-returning form of PauliFrame::apply.
PauliFrame apply_pauli(PauliFrame frame, size_t qubit, Pauli p);

}  // namespace qadv

#endif  // QADV_PAULI_H
