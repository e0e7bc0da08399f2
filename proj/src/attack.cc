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

#include "qadv/attack.h"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qadv/parallel.h"

namespace qadv {

std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::min:
            return "min";
        case Strategy::max:
            return "max";
        case Strategy::min_var:
            return "min_var";
        case Strategy::max_var:
            return "max_var";
    }
    return "?";
}

Strategy parse_strategy(const std::string& text) {
    for (Strategy s : {Strategy::min, Strategy::max, Strategy::min_var, Strategy::max_var}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    throw std::invalid_argument("unknown strategy '" + text + "' (min, max, min_var, max_var)");
}

void AttackConfig::validate() const {
    if (n_samples == 0) {
        throw std::invalid_argument("need at least one candidate volume per round");
    }
    if (max_errors_per_round && *max_errors_per_round == 0) {
        throw std::invalid_argument("error cap must be at least 1");
    }
    if (repetitions == 0 || max_draws_per_round == 0) {
        throw std::invalid_argument("repetitions and draw limit must be positive");
    }
}

double score_volume(const Eigen::VectorXd& q, Strategy strategy) {
    if (strategy == Strategy::min || strategy == Strategy::max) {
        return q.maxCoeff();
    }
    double mean = q.mean();
    return (q.array() - mean).square().mean();
}

size_t select_volume(const std::vector<double>& scores, Strategy strategy) {
    if (scores.empty()) {
        throw std::invalid_argument("no candidate volumes");
    }
    bool minimize = strategy == Strategy::min || strategy == Strategy::min_var;
    size_t best = 0;
    for (size_t j = 1; j < scores.size(); j++) {
        if (minimize ? scores[j] < scores[best] : scores[j] > scores[best]) {
            best = j;
        }
    }
    return best;
}

size_t select_volume(CachedQ& q, const std::vector<SyndromeVolume>& candidates, Strategy strategy) {
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (const SyndromeVolume& v : candidates) {
        scores.push_back(score_volume(q(v), strategy));
    }
    return select_volume(scores, strategy);
}

AttackResult run_attack(MemoryEnv& env, CachedQ& q, const AttackConfig& config) {
    config.validate();
    auto start = std::chrono::steady_clock::now();
    AttackResult result;
    env.reset_clean();
    std::vector<RoundSample> candidates(config.n_samples);
    std::vector<double> scores(config.n_samples);
    while (true) {
        size_t rejected = 0;
        for (size_t j = 0; j < config.n_samples; j++) {
            size_t draws = 0;
            while (true) {
                candidates[j] = env.sample_round(env.rng());
                draws++;
                result.candidates_drawn++;
                if (!config.max_errors_per_round || candidates[j].distinct_qubits() <= *config.max_errors_per_round) {
                    break;
                }
                rejected++;
                result.candidates_rejected++;
                if (draws >= config.max_draws_per_round) {
                    throw ResamplingLimitError("error-count filter rejected " + std::to_string(draws) +
                                               " consecutive candidate draws");
                }
            }
            scores[j] = score_volume(q(env.preview(candidates[j])), config.strategy);
        }
        size_t chosen = select_volume(scores, config.strategy);
        if (config.record_chain) {
            result.chain.push_back(candidates[chosen]);
            result.per_round.push_back({scores[chosen], chosen, rejected});
        }
        env.begin_round(candidates[chosen]);
        result.rounds++;
        decode_phase(env, q, config.single_action_round);
        env.finish_round();
        if (env.done()) {
            break;
        }
    }
    result.lifetime_cycles = env.stats().lifetime_cycles;
    result.terminated_by = env.stats().terminated_by;
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

EpisodeStats replay_attack(MemoryEnv& env, CachedQ& q, const std::vector<RoundSample>& chain,
                           bool single_action_round) {
    env.reset_clean();
    for (const RoundSample& sample : chain) {
        env.begin_round(sample);
        decode_phase(env, q, single_action_round);
        env.finish_round();
        if (env.done()) {
            break;
        }
    }
    return env.stats();
}

std::vector<AttackResult> run_attacks(const QNetwork& net, const EnvConfig& env, const AttackConfig& config,
                                      int workers) {
    config.validate();
    MemoryEnv prototype(env, config.seed);
    auto referee = prototype.shared_referee();
    int w = std::max(1, std::min<int>(workers, static_cast<int>(config.repetitions)));
    std::vector<std::unique_ptr<CachedQ>> caches;
    for (int i = 0; i < w; i++) {
        caches.push_back(std::make_unique<CachedQ>(net));
    }
    std::vector<AttackResult> out(config.repetitions);
    parallel_for(config.repetitions, w, [&](int worker, size_t rep) {
        MemoryEnv episode(env, derive_seed(config.seed, rep), referee);
        out[rep] = run_attack(episode, *caches[worker], config);
    });
    return out;
}

double analytic_rejection_rate(double p, size_t depth, size_t num_qubits, size_t max_errors) {
    double q = 1.0 - std::pow(1.0 - p, static_cast<double>(depth));
    // P(X <= max_errors) for X ~ Binomial(num_qubits, q).
    double accepted = 0.0;
    double coeff = 1.0;
    for (size_t k = 0; k <= max_errors && k <= num_qubits; k++) {
        if (k > 0) {
            coeff = coeff * static_cast<double>(num_qubits - k + 1) / static_cast<double>(k);
        }
        accepted += coeff * std::pow(q, static_cast<double>(k)) * std::pow(1 - q, static_cast<double>(num_qubits - k));
    }
    return 1.0 - accepted;
}

ErrorHistogram error_histogram(const std::vector<AttackResult>& results, size_t steps, int distance) {
    if (results.empty()) {
        throw std::invalid_argument("histogram needs at least one attack result");
    }
    size_t n = static_cast<size_t>(distance) * distance;
    ErrorHistogram h;
    h.steps = steps;
    h.distance = distance;
    h.repetitions = results.size();
    h.freq.assign(steps, std::vector<std::array<double, 3>>(n, {0.0, 0.0, 0.0}));
    const double inc = 1.0 / static_cast<double>(results.size());
    for (const AttackResult& r : results) {
        for (size_t s = 0; s < steps && s < r.chain.size(); s++) {
            PauliFrame net = r.chain[s].net_error(n);
            for (size_t qubit = 0; qubit < n; qubit++) {
                switch (net[qubit]) {
                    case Pauli::X:
                        h.freq[s][qubit][0] += inc;
                        break;
                    case Pauli::Y:
                        h.freq[s][qubit][1] += inc;
                        break;
                    case Pauli::Z:
                        h.freq[s][qubit][2] += inc;
                        break;
                    case Pauli::I:
                        break;
                }
            }
        }
    }
    return h;
}

nlohmann::json to_json(const ErrorHistogram& h) {
    // steps x d x d x 3, rows then columns, X/Y/Z innermost.
    nlohmann::json steps = nlohmann::json::array();
    for (size_t s = 0; s < h.steps; s++) {
        nlohmann::json grid = nlohmann::json::array();
        for (int r = 0; r < h.distance; r++) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < h.distance; c++) {
                const auto& cell = h.freq[s][static_cast<size_t>(r * h.distance + c)];
                row.push_back({cell[0], cell[1], cell[2]});
            }
            grid.push_back(row);
        }
        steps.push_back(grid);
    }
    return {{"distance", h.distance}, {"steps", h.steps}, {"repetitions", h.repetitions}, {"paulis", "XYZ"},
            {"frequency", steps}};
}

nlohmann::json to_json(const AttackResult& r) {
    nlohmann::json rounds = nlohmann::json::array();
    for (const AttackRound& a : r.per_round) {
        rounds.push_back({{"score", a.score}, {"chosen", a.chosen}, {"rejected", a.rejected}});
    }
    return {
        {"lifetime_cycles", r.lifetime_cycles},
        {"rounds", r.rounds},
        {"terminated_by", to_string(r.terminated_by)},
        {"candidates_drawn", r.candidates_drawn},
        {"candidates_rejected", r.candidates_rejected},
        {"seconds", r.seconds},
        {"chain", r.chain},
        {"per_round", rounds},
    };
}

}  // namespace qadv
