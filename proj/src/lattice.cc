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

#include "qadv/lattice.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qadv {

namespace {

// Checkerboard colouring of plaquette corners: (row + col) even is X-type.
StabilizerType plaquette_type(int row, int col) {
    return ((row + col) % 2 + 2) % 2 == 0 ? StabilizerType::X : StabilizerType::Z;
}

}  // namespace

Lattice Lattice::build(int distance) {
    if (distance < 3 || distance % 2 == 0) {
        throw std::invalid_argument("surface code distance must be odd and >= 3, got " + std::to_string(distance));
    }
    Lattice lattice;
    lattice.distance_ = distance;
    const int d = distance;

    for (int r = -1; r < d; r++) {
        for (int c = -1; c < d; c++) {
            StabilizerType type = plaquette_type(r, c);
            bool top_or_bottom = r == -1 || r == d - 1;
            bool left_or_right = c == -1 || c == d - 1;
            if (top_or_bottom && left_or_right) {
                continue;  // corners never host a check
            }
            if (top_or_bottom && type != StabilizerType::Z) {
                continue;
            }
            if (left_or_right && type != StabilizerType::X) {
                continue;
            }
            Stabilizer stabilizer{type, r, c, {}};
            for (int dr = 0; dr <= 1; dr++) {
                for (int dc = 0; dc <= 1; dc++) {
                    int qr = r + dr;
                    int qc = c + dc;
                    if (qr >= 0 && qr < d && qc >= 0 && qc < d) {
                        stabilizer.support.push_back(lattice.qubit_index(qr, qc));
                    }
                }
            }
            lattice.stabilizers_.push_back(std::move(stabilizer));
        }
    }

    lattice.qubit_stabilizers_.assign(lattice.num_qubits(), {});
    for (size_t s = 0; s < lattice.stabilizers_.size(); s++) {
        for (size_t q : lattice.stabilizers_[s].support) {
            lattice.qubit_stabilizers_[q].push_back(s);
        }
    }
    for (int i = 0; i < d; i++) {
        lattice.logical_x_.push_back(lattice.qubit_index(0, i));
        lattice.logical_z_.push_back(lattice.qubit_index(i, 0));
    }
    return lattice;
}

PauliFrame Lattice::stabilizer_frame(size_t s) const {
    PauliFrame frame(num_qubits());
    const Stabilizer& stabilizer = stabilizers_.at(s);
    Pauli p = stabilizer.type == StabilizerType::X ? Pauli::X : Pauli::Z;
    for (size_t q : stabilizer.support) {
        frame.apply(q, p);
    }
    return frame;
}

PauliFrame Lattice::logical_x_frame() const {
    PauliFrame frame(num_qubits());
    for (size_t q : logical_x_) {
        frame.apply(q, Pauli::X);
    }
    return frame;
}

PauliFrame Lattice::logical_z_frame() const {
    PauliFrame frame(num_qubits());
    for (size_t q : logical_z_) {
        frame.apply(q, Pauli::Z);
    }
    return frame;
}

nlohmann::json Lattice::to_json() const {
    nlohmann::json out;
    out["distance"] = distance_;
    out["num_data_qubits"] = num_qubits();
    out["qubit_order"] = "row-major (row, col)";
    nlohmann::json stabs = nlohmann::json::array();
    for (size_t s = 0; s < stabilizers_.size(); s++) {
        const Stabilizer& stabilizer = stabilizers_[s];
        stabs.push_back({
            {"index", s},
            {"type", stabilizer.type == StabilizerType::X ? "X" : "Z"},
            {"corner", {stabilizer.row, stabilizer.col}},
            {"support", stabilizer.support},
        });
    }
    out["stabilizers"] = stabs;
    out["logical_x_support"] = logical_x_;
    out["logical_z_support"] = logical_z_;
    return out;
}

Syndrome measure_syndrome(const PauliFrame& frame, const Lattice& lattice) {
    if (frame.size() != lattice.num_qubits()) {
        throw std::invalid_argument("frame size does not match lattice");
    }
    Syndrome syndrome(lattice.num_stabilizers(), 0);
    for (size_t s = 0; s < lattice.num_stabilizers(); s++) {
        const Stabilizer& stabilizer = lattice.stabilizer(s);
        bool detects_x = stabilizer.type == StabilizerType::Z;
        uint8_t parity = 0;
        for (size_t q : stabilizer.support) {
            parity ^= detects_x ? has_x(frame[q]) : has_z(frame[q]);
        }
        syndrome[s] = parity;
    }
    return syndrome;
}

void toggle_syndrome(Syndrome& syndrome, const Lattice& lattice, size_t qubit, Pauli p) {
    for (size_t s : lattice.stabilizers_of_qubit(qubit)) {
        bool detects_x = lattice.stabilizer(s).type == StabilizerType::Z;
        if (detects_x ? has_x(p) : has_z(p)) {
            syndrome[s] ^= 1;
        }
    }
}

size_t defect_count(const Syndrome& syndrome) {
    return static_cast<size_t>(std::count(syndrome.begin(), syndrome.end(), uint8_t{1}));
}

LogicalFlips logical_flipped(const PauliFrame& frame, const Lattice& lattice) {
    // X_L = X on row 0: flipped by an odd number of Z components there.
    // Z_L = Z on column 0: flipped by an odd number of X components there.
    bool x_flip = false;
    for (size_t q : lattice.logical_x_support()) {
        x_flip ^= has_z(frame[q]);
    }
    bool z_flip = false;
    for (size_t q : lattice.logical_z_support()) {
        z_flip ^= has_x(frame[q]);
    }
    return {x_flip, z_flip};
}

}  // namespace qadv
