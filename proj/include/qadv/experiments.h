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

#ifndef QADV_EXPERIMENTS_H
#define QADV_EXPERIMENTS_H

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qadv/attack.h"
#include "qadv/dqn.h"
#include "qadv/memory_env.h"
#include "qadv/noise.h"

namespace qadv {

struct Summary {
    size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool operator==(const Summary&) const = default;
};

double mean_of(const std::vector<double>& values);
double median_of(std::vector<double> values);
/// Mean, median and a percentile-bootstrap CI on the mean.
Summary summarize(const std::vector<double>& values, uint64_t seed, size_t resamples = 10'000, double level = 0.95);
bool cis_disjoint(const Summary& a, const Summary& b);

/// Build identifier baked in at configure time.
std::string artifact_version();

struct RunCell {
    nlohmann::json key;  // one value per RunRecord::key_columns entry
    std::vector<double> lifetimes;
    std::vector<double> seconds;
    Summary summary;
};

struct RunRecord {
    std::string id;
    std::string kind;
    std::string version;
    std::string created_at;
    nlohmann::json config;
    std::vector<std::string> key_columns;
    std::vector<RunCell> cells;
    nlohmann::json extra = nlohmann::json::object();

    /// Recomputes every cell summary from its lifetimes.
    void summarize_cells(uint64_t seed);
};

void to_json(nlohmann::json& out, const RunRecord& record);
void from_json(const nlohmann::json& in, RunRecord& record);

void write_summary_csv(std::ostream& out, const RunRecord& record);
void write_lifetimes_csv(std::ostream& out, const RunRecord& record);

/// Directory of run records: <id>.json, <id>_summary.csv, <id>_lifetimes.csv,
/// plus an appended index.jsonl. Existing ids are never overwritten.
class ResultStore {
   public:
    explicit ResultStore(std::filesystem::path dir);
    void write(const RunRecord& record) const;
    RunRecord read(const std::string& id) const;
    bool contains(const std::string& id) const;
    std::vector<std::string> ids() const;
    const std::filesystem::path& dir() const { return dir_; }

   private:
    std::filesystem::path dir_;
};

/// Timestamped id "<kind>-YYYYmmddTHHMMSS-<hex>".
std::string make_run_id(const std::string& kind, uint64_t seed);

/// Decodes one round: the greedy network when `q` is set, otherwise MWPM
/// corrections from the last measured slice.
void decode_round(MemoryEnv& env, CachedQ* q);

/// One episode with fresh rounds until the referee fails or the env cap hits.
EpisodeStats run_decoder_episode(MemoryEnv& env, CachedQ* q);

struct SweepConfig {
    std::vector<double> error_rates;
    size_t episodes_per_rate = 200;
    size_t resample_interval = 10;
    NoiseSpec noise;
    EnvConfig env;
    uint64_t seed = 1;
    bool include_reference = true;

    static std::vector<double> default_grid();
    void validate() const;
};

/// Treatment curve for sweep.noise plus (optionally) the homogeneous
/// depolarizing reference, both with identical seeds. Each block of
/// resample_interval episodes sees a fresh noise instantiation.
RunRecord robustness_sweep(const QNetwork* net, const SweepConfig& sweep, int workers = 1);

struct AttackSweepConfig {
    std::vector<Strategy> strategies = {Strategy::min};
    std::vector<size_t> n_values = {1, 8, 16, 32};
    std::vector<double> p_values = {0.001};
    size_t repetitions = 500;
    std::optional<size_t> max_errors_per_round;
    bool single_action_round = false;
    EnvConfig env;
    uint64_t seed = 1;
};

RunRecord attack_sweep(const QNetwork& net, const AttackSweepConfig& sweep, int workers = 1);

struct RefereeSweepConfig {
    std::vector<int> distances = {3, 5, 7};
    std::vector<double> sigmas = {0.0, 0.3, 0.6};
    std::vector<double> rates = {0.001, 0.002, 0.004, 0.006, 0.008, 0.01};
    uint64_t steps = 20'000;
    uint64_t seed = 1;
    NoiseSpec noise;
};

/// MWPM as the sole decoder for `steps` rounds per cell, resetting on failure.
RunRecord referee_sweep(const RefereeSweepConfig& sweep, int workers = 1);

}  // namespace qadv

#endif  // QADV_EXPERIMENTS_H
