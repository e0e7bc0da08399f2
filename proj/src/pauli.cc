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

#include "qadv/pauli.h"

#include <stdexcept>

namespace qadv {

char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::I:
            return '_';
        case Pauli::X:
            return 'X';
        case Pauli::Y:
            return 'Y';
        case Pauli::Z:
            return 'Z';
    }
    return '?';
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case '_':
        case 'I':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Y':
            return Pauli::Y;
        case 'Z':
            return Pauli::Z;
        default:
            throw std::invalid_argument(std::string("not a Pauli character: '") + c + "'");
    }
}

PauliFrame PauliFrame::from_str(const std::string& text) {
    std::vector<Pauli> paulis;
    paulis.reserve(text.size());
    for (char c : text) {
        paulis.push_back(pauli_from_char(c));
    }
    return PauliFrame(std::move(paulis));
}

Pauli PauliFrame::at(size_t qubit) const {
    if (qubit >= paulis_.size()) {
        throw std::out_of_range(
            "qubit " + std::to_string(qubit) + " out of range for frame of size " + std::to_string(paulis_.size()));
    }
    return paulis_[qubit];
}

void PauliFrame::apply(size_t qubit, Pauli p) {
    if (qubit >= paulis_.size()) {
        throw std::out_of_range(
            "qubit " + std::to_string(qubit) + " out of range for frame of size " + std::to_string(paulis_.size()));
    }
    paulis_[qubit] = paulis_[qubit] * p;
}

PauliFrame& PauliFrame::operator*=(const PauliFrame& other) {
    if (other.size() != size()) {
        throw std::invalid_argument("cannot compose frames of different sizes");
    }
    for (size_t q = 0; q < paulis_.size(); q++) {
        paulis_[q] = paulis_[q] * other.paulis_[q];
    }
    return *this;
}

size_t PauliFrame::weight() const {
    size_t w = 0;
    for (Pauli p : paulis_) {
        w += p != Pauli::I;
    }
    return w;
}

std::string PauliFrame::str() const {
    std::string out;
    out.reserve(paulis_.size());
    for (Pauli p : paulis_) {
        out.push_back(pauli_char(p));
    }
    return out;
}

PauliFrame operator*(PauliFrame lhs, const PauliFrame& rhs) {
    lhs *= rhs;
    return lhs;
}

PauliFrame apply_pauli(PauliFrame frame, size_t qubit, Pauli p) {
    frame.apply(qubit, p);
    return frame;
}

}  // namespace qadv
