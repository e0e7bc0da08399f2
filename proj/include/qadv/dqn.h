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

#ifndef QADV_DQN_H
#define QADV_DQN_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "qadv/memory_env.h"
#include "qadv/qnetwork.h"

namespace qadv {

struct Transition {
    std::vector<uint8_t> state;
    size_t action;
    double reward;
    std::vector<uint8_t> next_state;
    bool done;
};

/// Fixed-capacity ring; the oldest transition is overwritten first.
class ReplayBuffer {
   public:
    explicit ReplayBuffer(size_t capacity);

    void push(Transition t);
    size_t size() const { return data_.size(); }
    size_t capacity() const { return capacity_; }
    /// i = 0 is the oldest stored transition.
    const Transition& at(size_t i) const;
    /// Distinct indices into the buffer, drawn uniformly.
    std::vector<size_t> sample_indices(size_t batch, Rng& rng) const;
    const Transition& raw(size_t index) const { return data_[index]; }

   private:
    size_t capacity_;
    size_t head_ = 0;
    std::vector<Transition> data_;
};

struct TrainConfig {
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_end = 0.02;
    uint64_t epsilon_decay_steps = 100'000;
    OptimizerConfig optimizer;
    size_t batch_size = 32;
    uint64_t target_sync = 2500;
    uint64_t total_steps = 300'000;
    size_t buffer_capacity = 100'000;
    uint64_t learning_starts = 1000;
    uint64_t train_interval = 1;
    std::vector<int> hidden = {256, 256};
    double q_bound = 1e4;
    uint64_t eval_interval = 10'000;
    size_t eval_episodes = 50;
    uint64_t eval_cycle_cap = 20'000;
    /// Return the snapshot with the best periodic evaluation instead of the
    /// last one.
    bool keep_best = true;
    uint64_t seed = 1;

    double epsilon_at(uint64_t step) const;
    void validate() const;
};

void to_json(nlohmann::json& out, const TrainConfig& config);
void from_json(const nlohmann::json& in, TrainConfig& config);

struct CurvePoint {
    uint64_t step;
    double epsilon;
    double mean_eval_lifetime;
};

void write_learning_curve(std::ostream& out, const std::vector<CurvePoint>& curve);

/// Thrown when the mean |Q| over a training batch exceeds TrainConfig::q_bound.
class DivergenceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct Checkpoint {
    static constexpr int kFormatVersion = 1;
    int distance = 0;
    int depth = 0;
    uint64_t seed = 0;
    nlohmann::json train_config;
    nlohmann::json env_config;
    QNetwork net;
};

/// Throws std::invalid_argument if the network does not fit the environment.
void check_compatible(const Checkpoint& checkpoint, const EnvConfig& env);

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
/// Throws std::runtime_error on unreadable, corrupt or version-mismatched files.
Checkpoint load_checkpoint(const std::string& path);
nlohmann::json checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const nlohmann::json& in);

struct TrainResult {
    Checkpoint checkpoint;
    std::vector<CurvePoint> curve;
    uint64_t episodes = 0;
    uint64_t selected_step = 0;
};

std::vector<int> network_widths(const EnvConfig& env, const std::vector<int>& hidden);

using TrainProgress = std::function<void(const CurvePoint&)>;

/// Single-learner DQN with a target network and uniform experience replay.
TrainResult train(const EnvConfig& env, const TrainConfig& config, const TrainProgress& progress = nullptr,
                  int eval_workers = 1);

/// Memoized forward passes keyed on the packed observation. One per thread.
class CachedQ {
   public:
    explicit CachedQ(const QNetwork& net, size_t max_entries = 1 << 18);
    const Eigen::VectorXd& operator()(const SyndromeVolume& obs);
    const QNetwork& net() const { return net_; }
    size_t hits() const { return hits_; }
    size_t misses() const { return misses_; }

   private:
    const QNetwork& net_;
    size_t max_entries_;
    std::unordered_map<std::string, Eigen::VectorXd> cache_;
    size_t hits_ = 0;
    size_t misses_ = 0;
};

Action greedy_action(const QNetwork& net, const SyndromeVolume& obs);
Policy greedy_policy(CachedQ& q, size_t num_qubits);

/// Greedy decode phase: corrections until the policy asks for identity or the
/// round's budget runs out. Returns the number of corrections applied. The
/// round is left open for the caller to finish.
size_t decode_phase(MemoryEnv& env, CachedQ& q, bool single_action = false);

/// Greedy episodes with seeds derived from (seed, episode index); output is
/// independent of the worker count.
std::vector<EpisodeStats> evaluate_policy(const QNetwork& net, const EnvConfig& env, size_t episodes, uint64_t seed,
                                          int workers = 1);
std::vector<EpisodeStats> evaluate_random(const EnvConfig& env, size_t episodes, uint64_t seed, int workers = 1);

/// Deterministic per-index seed.
uint64_t derive_seed(uint64_t seed, uint64_t index);

}  // namespace qadv

#endif  // QADV_DQN_H
