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

#ifndef QADV_ATTACK_H
#define QADV_ATTACK_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qadv/dqn.h"
#include "qadv/memory_env.h"

namespace qadv {

/// Volume selection rule. MIN/MAX rank candidates by max_a Q; the _VAR
/// variants rank by the population variance of the Q-vector.
enum class Strategy { min, max, min_var, max_var };

std::string to_string(Strategy strategy);
Strategy parse_strategy(const std::string& text);

struct AttackConfig {
    size_t n_samples = 1;
    Strategy strategy = Strategy::min;
    std::optional<size_t> max_errors_per_round;
    uint64_t seed = 1;
    size_t repetitions = 1;
    /// Literal reading of the attack loop: one greedy action per round.
    bool single_action_round = false;
    /// Candidate draws allowed per round when filtering by error count.
    size_t max_draws_per_round = 10'000;
    /// Keep the committed batches and per-round statistics.
    bool record_chain = true;

    void validate() const;
};

struct AttackRound {
    double score;
    size_t chosen;
    size_t rejected;
};

struct AttackResult {
    std::vector<RoundSample> chain;
    std::vector<AttackRound> per_round;
    uint64_t lifetime_cycles = 0;
    uint64_t rounds = 0;
    Termination terminated_by = Termination::none;
    uint64_t candidates_drawn = 0;
    uint64_t candidates_rejected = 0;
    double seconds = 0.0;
};

/// Thrown when the error-count filter rejects too many candidate draws.
class ResamplingLimitError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

double score_volume(const Eigen::VectorXd& q, Strategy strategy);
/// MIN kinds pick the smallest score, MAX kinds the largest; ties go to the
/// lowest index. Throws std::invalid_argument on an empty list.
size_t select_volume(const std::vector<double>& scores, Strategy strategy);
size_t select_volume(CachedQ& q, const std::vector<SyndromeVolume>& candidates, Strategy strategy);

/// One attack episode on `env`. The env's cycle cap bounds runaway attacks.
AttackResult run_attack(MemoryEnv& env, CachedQ& q, const AttackConfig& config);

/// Commits a recorded chain against `env` with the same greedy decoder.
EpisodeStats replay_attack(MemoryEnv& env, CachedQ& q, const std::vector<RoundSample>& chain,
                           bool single_action_round = false);

/// config.repetitions independent attacks, seeded per repetition.
std::vector<AttackResult> run_attacks(const QNetwork& net, const EnvConfig& env, const AttackConfig& config,
                                      int workers = 1);

/// P(at least `threshold` of n qubits touched) when each qubit errs
/// independently with probability p in each of `depth` cycles.
double analytic_rejection_rate(double p, size_t depth, size_t num_qubits, size_t max_errors);

/// freq[step][qubit][k] for k = X, Y, Z: fraction of attacks whose committed
/// batch at that step left that net Pauli on the qubit.
struct ErrorHistogram {
    size_t steps = 0;
    int distance = 0;
    size_t repetitions = 0;
    std::vector<std::vector<std::array<double, 3>>> freq;
};

ErrorHistogram error_histogram(const std::vector<AttackResult>& results, size_t steps, int distance);

nlohmann::json to_json(const ErrorHistogram& histogram);
nlohmann::json to_json(const AttackResult& result);

}  // namespace qadv

#endif  // QADV_ATTACK_H
