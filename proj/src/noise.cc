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

#include "qadv/noise.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qadv {

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::depolarizing:
            return "depolarizing";
        case NoiseKind::bit_flip:
            return "bit_flip";
        case NoiseKind::phase_flip:
            return "phase_flip";
    }
    return "?";
}

std::string to_string(SpatialPattern pattern) {
    switch (pattern) {
        case SpatialPattern::uniform:
            return "uniform";
        case SpatialPattern::gaussian:
            return "gaussian";
        case SpatialPattern::cross:
            return "cross";
        case SpatialPattern::quadrant:
            return "quadrant";
        case SpatialPattern::concentric:
            return "concentric";
    }
    return "?";
}

NoiseKind parse_noise_kind(const std::string& text) {
    if (text == "depolarizing") return NoiseKind::depolarizing;
    if (text == "bit_flip" || text == "bit-flip") return NoiseKind::bit_flip;
    if (text == "phase_flip" || text == "phase-flip") return NoiseKind::phase_flip;
    throw std::invalid_argument("unknown noise kind '" + text + "'");
}

SpatialPattern parse_spatial_pattern(const std::string& text) {
    if (text == "uniform") return SpatialPattern::uniform;
    if (text == "gaussian") return SpatialPattern::gaussian;
    if (text == "cross") return SpatialPattern::cross;
    if (text == "quadrant") return SpatialPattern::quadrant;
    if (text == "concentric") return SpatialPattern::concentric;
    throw std::invalid_argument("unknown spatial pattern '" + text + "'");
}

void to_json(nlohmann::json& out, const NoiseSpec& spec) {
    out = nlohmann::json{
        {"kind", to_string(spec.kind)},
        {"p_phys", spec.p_phys},
        {"p_meas", spec.p_meas},
        {"spatial", to_string(spec.spatial)},
        {"sigma", spec.sigma},
        {"beta", spec.beta},
    };
    if (spec.temporal) {
        out["temporal"] = {
            {"amplitude", spec.temporal->amplitude},
            {"omega", spec.temporal->omega},
            {"random_phases", spec.temporal->random_phases},
        };
    } else {
        out["temporal"] = nullptr;
    }
    if (spec.instantiated()) {
        out["distance"] = spec.distance;
        out["per_qubit_p"] = spec.per_qubit_p;
        out["phase_offsets"] = spec.phase_offsets;
    }
}

void from_json(const nlohmann::json& in, NoiseSpec& spec) {
    NoiseSpec parsed;
    parsed.kind = parse_noise_kind(in.value("kind", std::string("depolarizing")));
    parsed.p_phys = in.value("p_phys", parsed.p_phys);
    parsed.p_meas = in.value("p_meas", parsed.p_meas);
    parsed.spatial = parse_spatial_pattern(in.value("spatial", std::string("uniform")));
    parsed.sigma = in.value("sigma", 0.0);
    parsed.beta = in.value("beta", 0.0);
    if (in.contains("temporal") && !in.at("temporal").is_null()) {
        const auto& t = in.at("temporal");
        TemporalNoise temporal;
        temporal.amplitude = t.value("amplitude", 0.0);
        temporal.omega = t.value("omega", temporal.omega);
        temporal.random_phases = t.value("random_phases", temporal.random_phases);
        parsed.temporal = temporal;
    }
    if (in.contains("per_qubit_p")) {
        parsed.distance = in.at("distance").get<int>();
        parsed.per_qubit_p = in.at("per_qubit_p").get<std::vector<double>>();
        parsed.phase_offsets = in.value("phase_offsets", std::vector<double>(parsed.per_qubit_p.size(), 0.0));
    }
    spec = std::move(parsed);
}

std::vector<uint8_t> region_mask(SpatialPattern pattern, int distance) {
    size_t n = static_cast<size_t>(distance) * distance;
    std::vector<uint8_t> mask(n, 0);
    int mid = distance / 2;
    int half = (distance + 1) / 2;
    for (int r = 0; r < distance; r++) {
        for (int c = 0; c < distance; c++) {
            size_t q = static_cast<size_t>(r) * distance + c;
            if (pattern == SpatialPattern::cross) {
                mask[q] = r == mid || c == mid;
            } else if (pattern == SpatialPattern::quadrant) {
                mask[q] = r < half && c < half;
            }
        }
    }
    return mask;
}

int concentric_ring(int distance, size_t qubit) {
    int mid = distance / 2;
    int r = static_cast<int>(qubit) / distance;
    int c = static_cast<int>(qubit) % distance;
    return std::max(std::abs(r - mid), std::abs(c - mid));
}

namespace {

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

void draw_gaussian(NoiseSpec& spec, Rng& rng) {
    for (double& p : spec.per_qubit_p) {
        p = clamp01(normal(rng, spec.p_phys, spec.sigma));
    }
}

}  // namespace

NoiseSpec instantiate(NoiseSpec spec, int distance, Rng& rng) {
    if (distance < 1) {
        throw std::invalid_argument("distance must be positive");
    }
    if (spec.p_phys < 0 || spec.p_meas < 0 || spec.sigma < 0 || spec.beta < 0) {
        throw std::invalid_argument("noise parameters must be non-negative");
    }
    size_t n = static_cast<size_t>(distance) * distance;
    spec.distance = distance;
    spec.per_qubit_p.assign(n, clamp01(spec.p_phys));
    switch (spec.spatial) {
        case SpatialPattern::uniform:
            break;
        case SpatialPattern::gaussian:
            draw_gaussian(spec, rng);
            break;
        case SpatialPattern::cross:
        case SpatialPattern::quadrant: {
            auto mask = region_mask(spec.spatial, distance);
            for (size_t q = 0; q < n; q++) {
                spec.per_qubit_p[q] = clamp01(spec.p_phys + (mask[q] ? spec.beta : 0.0));
            }
            break;
        }
        case SpatialPattern::concentric: {
            int max_ring = distance / 2;
            for (size_t q = 0; q < n; q++) {
                double frac = max_ring == 0 ? 1.0 : 1.0 - static_cast<double>(concentric_ring(distance, q)) / max_ring;
                spec.per_qubit_p[q] = clamp01(spec.p_phys / 2 + (spec.p_phys / 2 + spec.beta) * frac);
            }
            break;
        }
    }
    spec.phase_offsets.assign(n, 0.0);
    if (spec.temporal && spec.temporal->random_phases) {
        for (double& r : spec.phase_offsets) {
            r = 2.0 * std::numbers::pi * uniform01(rng);
        }
    }
    return spec;
}

NoiseSpec resample_spatial(NoiseSpec spec, Rng& rng) {
    if (spec.spatial == SpatialPattern::gaussian && spec.instantiated()) {
        draw_gaussian(spec, rng);
    }
    return spec;
}

double error_prob(const NoiseSpec& spec, size_t qubit, uint64_t t) {
    double base = spec.per_qubit_p[qubit];
    if (!spec.temporal) {
        return base;
    }
    double phase = 2.0 * std::numbers::pi * spec.temporal->omega * static_cast<double>(t) + spec.phase_offsets[qubit];
    return clamp01(base + spec.temporal->amplitude * std::sin(phase));
}

std::vector<NoiseEvent> sample_cycle_errors(const NoiseSpec& spec, uint64_t t, Rng& rng) {
    if (!spec.instantiated()) {
        throw std::logic_error("noise spec must be instantiated before sampling");
    }
    std::vector<NoiseEvent> events;
    for (size_t q = 0; q < spec.per_qubit_p.size(); q++) {
        double p = error_prob(spec, q, t);
        if (!bernoulli(rng, p)) {
            continue;
        }
        Pauli pauli = Pauli::X;
        switch (spec.kind) {
            case NoiseKind::depolarizing: {
                static constexpr Pauli kChoices[3] = {Pauli::X, Pauli::Y, Pauli::Z};
                pauli = kChoices[uniform_index(rng, 3)];
                break;
            }
            case NoiseKind::bit_flip:
                pauli = Pauli::X;
                break;
            case NoiseKind::phase_flip:
                pauli = Pauli::Z;
                break;
        }
        events.push_back({q, pauli});
    }
    return events;
}

std::vector<uint8_t> sample_measurement_flips(const NoiseSpec& spec, Rng& rng) {
    std::vector<uint8_t> flips(spec.num_stabilizers(), 0);
    if (spec.p_meas <= 0.0) {
        return flips;
    }
    for (auto& bit : flips) {
        bit = bernoulli(rng, spec.p_meas);
    }
    return flips;
}

}  // namespace qadv
