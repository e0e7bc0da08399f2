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

#ifndef QADV_LATTICE_H
#define QADV_LATTICE_H

#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "qadv/pauli.h"

namespace qadv {

enum class StabilizerType : uint8_t { X, Z };

/// A plaquette check. (row, col) is the upper-left corner of the plaquette in
/// data-qubit coordinates; boundary plaquettes have row or col equal to -1 or
/// d-1 and touch only two data qubits.
struct Stabilizer {
    StabilizerType type;
    int row;
    int col;
    std::vector<size_t> support;
};

using Syndrome = std::vector<uint8_t>;

struct LogicalFlips {
    bool x_flipped;
    bool z_flipped;
    bool any() const { return x_flipped || z_flipped; }
    bool operator==(const LogicalFlips&) const = default;
};

/// Rotated surface code with d*d data qubits in row-major order.
///
/// X-type boundary plaquettes sit on the left and right edges, Z-type on the
/// top and bottom. The X logical is X on every qubit of row 0 and the Z
/// logical is Z on every qubit of column 0.
class Lattice {
   public:
    /// Throws std::invalid_argument for even distances or distances below 3.
    static Lattice build(int distance);

    int distance() const { return distance_; }
    size_t num_qubits() const { return static_cast<size_t>(distance_) * distance_; }
    size_t num_stabilizers() const { return stabilizers_.size(); }
    size_t qubit_index(int row, int col) const { return static_cast<size_t>(row) * distance_ + col; }
    int row_of(size_t qubit) const { return static_cast<int>(qubit) / distance_; }
    int col_of(size_t qubit) const { return static_cast<int>(qubit) % distance_; }

    const std::vector<Stabilizer>& stabilizers() const { return stabilizers_; }
    const Stabilizer& stabilizer(size_t s) const { return stabilizers_[s]; }
    /// Stabilizer indices containing the qubit, in ascending order.
    const std::vector<size_t>& stabilizers_of_qubit(size_t qubit) const { return qubit_stabilizers_[qubit]; }
    const std::vector<size_t>& logical_x_support() const { return logical_x_; }
    const std::vector<size_t>& logical_z_support() const { return logical_z_; }

    /// The stabilizer as a Pauli frame (X or Z on its support).
    PauliFrame stabilizer_frame(size_t s) const;
    PauliFrame logical_x_frame() const;
    PauliFrame logical_z_frame() const;

    nlohmann::json to_json() const;

   private:
    int distance_ = 0;
    std::vector<Stabilizer> stabilizers_;
    std::vector<std::vector<size_t>> qubit_stabilizers_;
    std::vector<size_t> logical_x_;
    std::vector<size_t> logical_z_;
};

/// Bit s is set iff the frame anticommutes with stabilizer s.
Syndrome measure_syndrome(const PauliFrame& frame, const Lattice& lattice);

/// XORs into `syndrome` the bits flipped by applying p on the qubit.
void toggle_syndrome(Syndrome& syndrome, const Lattice& lattice, size_t qubit, Pauli p);

size_t defect_count(const Syndrome& syndrome);

/// Anticommutation with the fixed logical representatives. Only meaningful as
/// a logical-class test when the frame has an empty syndrome.
LogicalFlips logical_flipped(const PauliFrame& frame, const Lattice& lattice);

}  // namespace qadv

#endif  // QADV_LATTICE_H
