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

#ifndef QADV_NOISE_H
#define QADV_NOISE_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qadv/pauli.h"
#include "qadv/rng.h"

namespace qadv {

enum class NoiseKind { depolarizing, bit_flip, phase_flip };
enum class SpatialPattern { uniform, gaussian, cross, quadrant, concentric };

std::string to_string(NoiseKind kind);
std::string to_string(SpatialPattern pattern);
NoiseKind parse_noise_kind(const std::string& text);
SpatialPattern parse_spatial_pattern(const std::string& text);

/// Sinusoidal drift p + amplitude * sin(2 pi omega t + r_q).
struct TemporalNoise {
    double amplitude = 0.0;
    double omega = 1e-4;
    bool random_phases = true;
};

/// Closed description of a Pauli + measurement noise model.
///
/// The template fields are set by callers; `per_qubit_p` and `phase_offsets`
/// are materialized by instantiate() for a concrete code distance.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::depolarizing;
    double p_phys = 0.001;
    double p_meas = 0.0;
    SpatialPattern spatial = SpatialPattern::uniform;
    double sigma = 0.0;  // gaussian
    double beta = 0.0;   // cross, quadrant, concentric
    std::optional<TemporalNoise> temporal;

    int distance = 0;
    std::vector<double> per_qubit_p;
    std::vector<double> phase_offsets;

    bool instantiated() const { return distance > 0; }
    size_t num_qubits() const { return per_qubit_p.size(); }
    size_t num_stabilizers() const { return per_qubit_p.empty() ? 0 : per_qubit_p.size() - 1; }
};

void to_json(nlohmann::json& out, const NoiseSpec& spec);
void from_json(const nlohmann::json& in, NoiseSpec& spec);

struct NoiseEvent {
    size_t qubit;
    Pauli pauli;
    bool operator==(const NoiseEvent&) const = default;
};

/// Cells with raised error probability for the cross and quadrant patterns,
/// row-major over the d x d grid. Cross is the middle row and middle column;
/// quadrant is the top-left ceil(d/2) x ceil(d/2) block.
std::vector<uint8_t> region_mask(SpatialPattern pattern, int distance);

/// Chebyshev ring index of a qubit measured from the grid centre.
int concentric_ring(int distance, size_t qubit);

/// Resolves per-qubit probabilities (and phase offsets) for distance d.
NoiseSpec instantiate(NoiseSpec spec, int distance, Rng& rng);

/// Fresh draw of the gaussian per-qubit probabilities. Identity for every
/// other spatial pattern.
NoiseSpec resample_spatial(NoiseSpec spec, Rng& rng);

double error_prob(const NoiseSpec& spec, size_t qubit, uint64_t t);

std::vector<NoiseEvent> sample_cycle_errors(const NoiseSpec& spec, uint64_t t, Rng& rng);

/// One readout flip bit per stabilizer (d*d - 1 entries).
std::vector<uint8_t> sample_measurement_flips(const NoiseSpec& spec, Rng& rng);

}  // namespace qadv

#endif  // QADV_NOISE_H
