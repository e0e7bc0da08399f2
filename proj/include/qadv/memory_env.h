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

#ifndef QADV_MEMORY_ENV_H
#define QADV_MEMORY_ENV_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qadv/lattice.h"
#include "qadv/noise.h"
#include "qadv/pauli.h"
#include "qadv/referee.h"
#include "qadv/rng.h"

namespace qadv {

/// Decoder action. Index layout: [0, n) X on qubit i, [n, 2n) Z on qubit
/// i - n, 2n is identity (request the next syndrome volume).
class Action {
   public:
    static Action identity(size_t num_qubits) { return Action(num_qubits, 2 * num_qubits); }
    static Action pauli(size_t num_qubits, size_t qubit, Pauli p);
    static Action from_index(size_t num_qubits, size_t index);

    static size_t space_size(size_t num_qubits) { return 2 * num_qubits + 1; }

    size_t index() const { return index_; }
    bool is_identity() const { return index_ == 2 * num_qubits_; }
    size_t qubit() const { return index_ % num_qubits_; }
    Pauli pauli() const { return index_ < num_qubits_ ? Pauli::X : Pauli::Z; }
    std::string str() const;

    bool operator==(const Action&) const = default;

   private:
    Action(size_t num_qubits, size_t index) : num_qubits_(num_qubits), index_(index) {}
    size_t num_qubits_;
    size_t index_;
};

/// Stack of `depth` syndrome slices, each of width d*d - 1.
struct SyndromeVolume {
    size_t depth = 0;
    size_t width = 0;
    std::vector<uint8_t> bits;

    SyndromeVolume() = default;
    SyndromeVolume(size_t depth_, size_t width_) : depth(depth_), width(width_), bits(depth_ * width_, 0) {}

    const uint8_t* slice(size_t k) const { return bits.data() + k * width; }
    Syndrome last_slice() const;
    size_t size() const { return bits.size(); }
    /// Bits packed into bytes; a compact hashable key.
    std::string packed() const;
    std::vector<double> as_input() const;
    bool operator==(const SyndromeVolume&) const = default;
};

/// Errors and readout flips for one decoding round (`depth` noise cycles).
struct RoundSample {
    std::vector<std::vector<NoiseEvent>> cycles;
    std::vector<std::vector<uint8_t>> flips;

    PauliFrame net_error(size_t num_qubits) const;
    /// Number of distinct qubits hit by at least one event.
    size_t distinct_qubits() const;
    bool operator==(const RoundSample&) const = default;
};

void to_json(nlohmann::json& out, const RoundSample& sample);
void from_json(const nlohmann::json& in, RoundSample& sample);

struct RewardConfig {
    /// Pauli action reward = correction_scale * (defects before - defects after).
    /// 0 by default: only survival and failure are rewarded.
    double correction_scale = 0.0;
    double survive = 1.0;
    double failure = -1.0;
};

struct EnvConfig {
    int distance = 3;
    int depth = 0;              // 0 means depth = distance
    int correction_budget = 0;  // 0 means 2 d^2 corrections per round
    uint64_t cycle_cap = 1'000'000;
    NoiseSpec noise;
    RewardConfig reward;
    double referee_sigma = 0.0;  // miscalibrated referee weights when > 0

    int resolved_depth() const { return depth > 0 ? depth : distance; }
    int resolved_budget() const { return correction_budget > 0 ? correction_budget : 2 * distance * distance; }
};

void to_json(nlohmann::json& out, const EnvConfig& config);
void from_json(const nlohmann::json& in, EnvConfig& config);

enum class Termination { none, referee_failure, cap };
std::string to_string(Termination termination);

struct EpisodeStats {
    uint64_t lifetime_cycles = 0;
    uint64_t volumes_consumed = 0;
    uint64_t actions_taken = 0;
    Termination terminated_by = Termination::none;
};

struct StepResult {
    SyndromeVolume observation;
    double reward;
    bool done;
    Action executed;
};

struct TraceEntry {
    size_t action;
    double reward;
    size_t defects;
    bool done;
};

/// Surface-code memory experiment as an RL environment. Owns the hidden Pauli
/// frame, the noise stream and the referee. Not thread-safe; use one instance
/// per worker.
class MemoryEnv {
   public:
    MemoryEnv(EnvConfig config, uint64_t seed, std::shared_ptr<const Referee> referee = nullptr);

    /// Clears the frame and plays the first noise round.
    const SyndromeVolume& reset();
    /// Clears the frame without any noise; the next call must be begin_round().
    void reset_clean();

    RoundSample sample_round();
    RoundSample sample_round(Rng& rng) const;
    /// Observation that committing `sample` would produce.
    SyndromeVolume preview(const RoundSample& sample) const;
    void begin_round(const RoundSample& sample);

    /// Applies a decoder correction without advancing time.
    double apply_correction(size_t qubit, Pauli p);
    /// Runs the referee on the current state; on success the episode
    /// continues (unless the cycle cap is reached) and a new round is due.
    double finish_round();

    StepResult step(const Action& action);

    /// Replaces the hidden frame, keeping round counters. Used by exhaustive
    /// verification to inject error patterns.
    void inject_frame(const PauliFrame& frame);
    void set_noise(NoiseSpec spec);
    void resample_noise();

    const EnvConfig& config() const { return config_; }
    const Lattice& lattice() const { return lattice_; }
    const Referee& referee() const { return *referee_; }
    std::shared_ptr<const Referee> shared_referee() const { return referee_; }
    const NoiseSpec& noise() const { return noise_; }
    size_t num_qubits() const { return lattice_.num_qubits(); }
    size_t num_actions() const { return Action::space_size(num_qubits()); }
    size_t depth() const { return depth_; }
    size_t observation_size() const { return depth_ * lattice_.num_stabilizers(); }
    const SyndromeVolume& observation() const { return observation_; }
    const PauliFrame& hidden_frame() const { return frame_; }
    const std::vector<std::vector<uint8_t>>& round_flips() const { return flips_; }
    Syndrome true_syndrome() const { return measure_syndrome(frame_, lattice_); }
    bool done() const { return done_; }
    bool budget_exhausted() const { return corrections_this_round_ >= budget_; }
    const EpisodeStats& stats() const { return stats_; }
    uint64_t global_cycle() const { return t_; }
    Rng& rng() { return rng_; }

    void enable_trace(bool on) { trace_on_ = on; }
    const std::vector<TraceEntry>& trace() const { return trace_; }
    void write_trace_jsonl(std::ostream& out) const;

   private:
    void refresh_observation();
    void record(size_t action, double reward);

    EnvConfig config_;
    Lattice lattice_;
    std::shared_ptr<const Referee> referee_;
    NoiseSpec noise_;
    Rng rng_;
    size_t depth_;
    size_t budget_;

    PauliFrame frame_;
    std::vector<std::vector<uint8_t>> flips_;
    SyndromeVolume observation_;
    uint64_t t_ = 0;
    size_t corrections_this_round_ = 0;
    bool done_ = false;
    bool awaiting_round_ = false;
    EpisodeStats stats_;

    bool trace_on_ = false;
    std::vector<TraceEntry> trace_;
};

using Policy = std::function<Action(const SyndromeVolume&)>;

/// Steps the policy until the referee fails or the cycle cap is reached.
EpisodeStats run_episode(MemoryEnv& env, const Policy& policy, std::optional<uint64_t> cycle_cap = std::nullopt);

/// Uniformly random action, the untrained reference policy.
Policy random_policy(size_t num_qubits, uint64_t seed);
/// Always requests the next round; the referee alone decides survival.
Policy identity_policy(size_t num_qubits);

/// Mean number of cycles until a single unprotected qubit first errs.
double baseline_unprotected_lifetime(double p_phys, uint64_t trials, Rng& rng);

}  // namespace qadv

#endif  // QADV_MEMORY_ENV_H
