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

#include "qadv/referee.h"

namespace qadv {

Referee::Referee(const Lattice& lattice) : Referee(lattice, build_matching_graphs(lattice)) {}

Referee::Referee(const Lattice& lattice, MatchingGraphs graphs) : lattice_(lattice), graphs_(std::move(graphs)) {}

std::vector<Correction> Referee::decode(const Syndrome& syndrome) const {
    std::vector<Correction> out = mwpm_decode(graphs_.graph_x, graphs_.graph_x.defects(syndrome));
    std::vector<Correction> z = mwpm_decode(graphs_.graph_z, graphs_.graph_z.defects(syndrome));
    out.insert(out.end(), z.begin(), z.end());
    return out;
}

RefereeVerdict Referee::check(const PauliFrame& hidden, const Syndrome& syndrome) const {
    RefereeVerdict verdict;
    PauliFrame trial = hidden;
    verdict.corrections_applied = decode(syndrome);
    for (const Correction& c : verdict.corrections_applied) {
        trial.apply(c.qubit, c.pauli);
    }
    Syndrome residual = measure_syndrome(trial, lattice_);
    if (defect_count(residual) > 0) {
        for (const Correction& c : decode(residual)) {
            trial.apply(c.qubit, c.pauli);
            verdict.corrections_applied.push_back(c);
        }
    }
    verdict.continue_episode = !logical_flipped(trial, lattice_).any();
    return verdict;
}

RefereeVerdict referee_check(const PauliFrame& hidden, const Syndrome& syndrome, const Referee& referee) {
    return referee.check(hidden, syndrome);
}

}  // namespace qadv
