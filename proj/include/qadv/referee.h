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

#ifndef QADV_REFEREE_H
#define QADV_REFEREE_H

#include <vector>

#include "qadv/lattice.h"
#include "qadv/matching.h"
#include "qadv/pauli.h"

namespace qadv {

struct RefereeVerdict {
    bool continue_episode = true;
    /// Corrections applied to the trial copy of the hidden frame.
    std::vector<Correction> corrections_applied;
};

/// MWPM episode-termination check. Decodes a syndrome with one matching graph
/// per error type, applies the correction to a copy of the hidden frame and
/// ends the episode when the logical observable is flipped.
class Referee {
   public:
    explicit Referee(const Lattice& lattice);
    Referee(const Lattice& lattice, MatchingGraphs graphs);

    const Lattice& lattice() const { return lattice_; }
    const MatchingGraphs& graphs() const { return graphs_; }

    /// MWPM correction for a full syndrome (X part then Z part).
    std::vector<Correction> decode(const Syndrome& syndrome) const;

    /// `syndrome` is the last measured slice. Readout errors can leave the
    /// trial copy with a residual syndrome; that residue is decoded once more
    /// from the true syndrome before the logical check.
    RefereeVerdict check(const PauliFrame& hidden, const Syndrome& syndrome) const;

   private:
    Lattice lattice_;
    MatchingGraphs graphs_;
};

RefereeVerdict referee_check(const PauliFrame& hidden, const Syndrome& syndrome, const Referee& referee);

}  // namespace qadv

#endif  // QADV_REFEREE_H
