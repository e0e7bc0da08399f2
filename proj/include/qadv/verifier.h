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

#ifndef QADV_VERIFIER_H
#define QADV_VERIFIER_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qadv/memory_env.h"
#include "qadv/qnetwork.h"

namespace qadv {

using u128 = unsigned __int128;

/// binom(d*d, n) * 2^n. Throws std::invalid_argument unless 0 <= n <= d*d.
u128 count_patterns(int distance, int n);
std::string to_string_u128(u128 value);

/// Frames with exactly n qubits set to X or Z, ordered lexicographically by
/// (ascending qubit combination, X/Z assignment with X before Z on the first
/// qubit of the combination varying slowest).
class PatternEnumerator {
   public:
    PatternEnumerator(int distance, int n);
    /// Writes the next pattern into `frame`; false once exhausted.
    bool next(PauliFrame& frame);
    /// Index of the current qubit combination (0-based, advances every 2^n patterns).
    uint64_t combination_index() const { return combo_index_; }

   private:
    size_t num_qubits_;
    size_t n_;
    std::vector<size_t> combo_;
    uint64_t assignment_ = 0;
    uint64_t combo_index_ = 0;
    bool started_ = false;
    bool exhausted_ = false;
    bool advance_combination();
};

struct EnumerationReport {
    int distance = 0;
    int n_errors = 0;
    u128 pattern_count = 0;
    uint64_t failures = 0;
    double failure_rate_percent = 0.0;
    uint64_t referee_required_count = 0;
    uint64_t remaining_syndromes_sum = 0;
    std::string decoder;
};

/// Injects every pattern into a noiseless environment, runs one greedy decode
/// phase with `net` (no decoder actions when null), then lets the referee
/// finalize. Referee-required means the decoder left a non-empty syndrome or
/// a logical flip behind.
EnumerationReport verify_decoder(int distance, int n, const QNetwork* net, int workers = 1);

void write_table_header(std::ostream& out);
void write_table_row(std::ostream& out, const EnumerationReport& report);

struct LogicalErrorEstimate {
    int distance;
    double p;
    uint64_t rounds;
    uint64_t failures;
    double per_round() const { return rounds == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(rounds); }
};

/// Runs the referee (or the greedy decoder, when `net` is set) until
/// `target_failures` logical failures or `max_rounds` decoding rounds.
LogicalErrorEstimate estimate_logical_error_rate(const EnvConfig& env, const QNetwork* net, uint64_t target_failures,
                                                 uint64_t max_rounds, uint64_t seed);

struct AnsatzSample {
    int distance;
    double p;
    double logical_error;
};

struct AnsatzFit {
    double alpha = 0.0;
    double p_th = 0.0;
    int exponent = 0;  // single-distance fits only
    double residual = 0.0;
};

int ansatz_exponent(int distance);

/// Fixed-exponent least squares of log P_L on log p for one distance. Only
/// the intercept log(alpha) - e*log(p_th) is identifiable from a single
/// distance, so p_th is taken from the hint and alpha solved for.
AnsatzFit fit_ansatz(const std::vector<std::pair<double, double>>& samples, int distance, double p_th_hint);

/// Joint least squares over several distances; recovers alpha and p_th.
AnsatzFit fit_ansatz_joint(const std::vector<AnsatzSample>& samples);

nlohmann::json to_json(const AnsatzFit& fit);

}  // namespace qadv

#endif  // QADV_VERIFIER_H
