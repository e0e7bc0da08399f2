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

#include "qadv/memory_env.h"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace qadv {

Action Action::pauli(size_t num_qubits, size_t qubit, Pauli p) {
    if (qubit >= num_qubits) {
        throw std::out_of_range("action qubit out of range");
    }
    if (p == Pauli::X) {
        return Action(num_qubits, qubit);
    }
    if (p == Pauli::Z) {
        return Action(num_qubits, num_qubits + qubit);
    }
    throw std::invalid_argument("decoder actions are X or Z only");
}

Action Action::from_index(size_t num_qubits, size_t index) {
    if (index > 2 * num_qubits) {
        throw std::out_of_range("action index out of range");
    }
    return Action(num_qubits, index);
}

std::string Action::str() const {
    if (is_identity()) {
        return "I";
    }
    return std::string(1, pauli_char(pauli())) + std::to_string(qubit());
}

Syndrome SyndromeVolume::last_slice() const {
    const uint8_t* s = slice(depth - 1);
    return Syndrome(s, s + width);
}

std::string SyndromeVolume::packed() const {
    std::string out((bits.size() + 7) / 8, '\0');
    for (size_t i = 0; i < bits.size(); i++) {
        if (bits[i]) {
            out[i / 8] = static_cast<char>(out[i / 8] | (1 << (i % 8)));
        }
    }
    return out;
}

std::vector<double> SyndromeVolume::as_input() const { return std::vector<double>(bits.begin(), bits.end()); }

PauliFrame RoundSample::net_error(size_t num_qubits) const {
    PauliFrame frame(num_qubits);
    for (const auto& cycle : cycles) {
        for (const NoiseEvent& e : cycle) {
            frame.apply(e.qubit, e.pauli);
        }
    }
    return frame;
}

size_t RoundSample::distinct_qubits() const {
    std::vector<size_t> hit;
    for (const auto& cycle : cycles) {
        for (const NoiseEvent& e : cycle) {
            hit.push_back(e.qubit);
        }
    }
    std::sort(hit.begin(), hit.end());
    return static_cast<size_t>(std::unique(hit.begin(), hit.end()) - hit.begin());
}

void to_json(nlohmann::json& out, const RoundSample& sample) {
    nlohmann::json cycles = nlohmann::json::array();
    for (const auto& cycle : sample.cycles) {
        nlohmann::json events = nlohmann::json::array();
        for (const NoiseEvent& e : cycle) {
            events.push_back({e.qubit, std::string(1, pauli_char(e.pauli))});
        }
        cycles.push_back(events);
    }
    out = {{"cycles", cycles}, {"flips", sample.flips}};
}

void from_json(const nlohmann::json& in, RoundSample& sample) {
    sample.cycles.clear();
    for (const auto& cycle : in.at("cycles")) {
        std::vector<NoiseEvent> events;
        for (const auto& e : cycle) {
            events.push_back({e.at(0).get<size_t>(), pauli_from_char(e.at(1).get<std::string>().at(0))});
        }
        sample.cycles.push_back(std::move(events));
    }
    sample.flips = in.at("flips").get<std::vector<std::vector<uint8_t>>>();
}

void to_json(nlohmann::json& out, const EnvConfig& config) {
    out = {
        {"distance", config.distance},
        {"depth", config.resolved_depth()},
        {"correction_budget", config.resolved_budget()},
        {"cycle_cap", config.cycle_cap},
        {"noise", config.noise},
        {"reward",
         {{"correction_scale", config.reward.correction_scale},
          {"survive", config.reward.survive},
          {"failure", config.reward.failure}}},
        {"referee_sigma", config.referee_sigma},
    };
}

void from_json(const nlohmann::json& in, EnvConfig& config) {
    EnvConfig parsed;
    parsed.distance = in.value("distance", parsed.distance);
    parsed.depth = in.value("depth", 0);
    parsed.correction_budget = in.value("correction_budget", 0);
    parsed.cycle_cap = in.value("cycle_cap", parsed.cycle_cap);
    if (in.contains("noise")) {
        parsed.noise = in.at("noise").get<NoiseSpec>();
    }
    if (in.contains("reward")) {
        const auto& r = in.at("reward");
        parsed.reward.correction_scale = r.value("correction_scale", parsed.reward.correction_scale);
        parsed.reward.survive = r.value("survive", parsed.reward.survive);
        parsed.reward.failure = r.value("failure", parsed.reward.failure);
    }
    parsed.referee_sigma = in.value("referee_sigma", 0.0);
    config = std::move(parsed);
}

std::string to_string(Termination termination) {
    switch (termination) {
        case Termination::none:
            return "none";
        case Termination::referee_failure:
            return "referee_failure";
        case Termination::cap:
            return "cap";
    }
    return "?";
}

MemoryEnv::MemoryEnv(EnvConfig config, uint64_t seed, std::shared_ptr<const Referee> referee)
    : config_(std::move(config)),
      lattice_(Lattice::build(config_.distance)),
      referee_(std::move(referee)),
      rng_(make_rng(seed, 0)),
      depth_(static_cast<size_t>(config_.resolved_depth())),
      budget_(static_cast<size_t>(config_.resolved_budget())),
      frame_(lattice_.num_qubits()),
      observation_(depth_, lattice_.num_stabilizers()) {
    Rng setup = make_rng(seed, 1);
    if (!referee_) {
        MatchingGraphs graphs = build_matching_graphs(lattice_);
        if (config_.referee_sigma > 0) {
            graphs = miscalibrate_weights(graphs, lattice_, config_.referee_sigma, setup);
        }
        referee_ = std::make_shared<const Referee>(lattice_, std::move(graphs));
    }
    if (config_.noise.instantiated() && config_.noise.distance == config_.distance) {
        noise_ = config_.noise;
    } else {
        noise_ = instantiate(config_.noise, config_.distance, setup);
    }
    flips_.assign(depth_, std::vector<uint8_t>(lattice_.num_stabilizers(), 0));
}

void MemoryEnv::reset_clean() {
    frame_ = PauliFrame(lattice_.num_qubits());
    for (auto& f : flips_) {
        std::fill(f.begin(), f.end(), 0);
    }
    std::fill(observation_.bits.begin(), observation_.bits.end(), 0);
    corrections_this_round_ = 0;
    done_ = false;
    awaiting_round_ = true;
    stats_ = EpisodeStats{};
    trace_.clear();
}

const SyndromeVolume& MemoryEnv::reset() {
    reset_clean();
    begin_round(sample_round());
    return observation_;
}

RoundSample MemoryEnv::sample_round() { return sample_round(rng_); }

RoundSample MemoryEnv::sample_round(Rng& rng) const {
    RoundSample sample;
    sample.cycles.reserve(depth_);
    sample.flips.reserve(depth_);
    for (size_t c = 0; c < depth_; c++) {
        sample.cycles.push_back(sample_cycle_errors(noise_, t_ + c, rng));
        sample.flips.push_back(sample_measurement_flips(noise_, rng));
    }
    return sample;
}

SyndromeVolume MemoryEnv::preview(const RoundSample& sample) const {
    PauliFrame frame = frame_ * sample.net_error(lattice_.num_qubits());
    Syndrome syndrome = measure_syndrome(frame, lattice_);
    SyndromeVolume volume(depth_, lattice_.num_stabilizers());
    for (size_t k = 0; k < depth_; k++) {
        for (size_t s = 0; s < volume.width; s++) {
            volume.bits[k * volume.width + s] = syndrome[s] ^ sample.flips[k][s];
        }
    }
    return volume;
}

void MemoryEnv::begin_round(const RoundSample& sample) {
    if (done_) {
        throw std::logic_error("episode is over; call reset()");
    }
    if (!awaiting_round_) {
        throw std::logic_error("begin_round called before the current round finished");
    }
    if (sample.cycles.size() != depth_ || sample.flips.size() != depth_) {
        throw std::invalid_argument("round sample depth does not match environment");
    }
    for (const auto& cycle : sample.cycles) {
        for (const NoiseEvent& e : cycle) {
            frame_.apply(e.qubit, e.pauli);
        }
    }
    t_ += depth_;
    flips_ = sample.flips;
    refresh_observation();
    stats_.volumes_consumed++;
    stats_.lifetime_cycles = stats_.volumes_consumed * depth_;
    corrections_this_round_ = 0;
    awaiting_round_ = false;
}

void MemoryEnv::refresh_observation() {
    Syndrome syndrome = measure_syndrome(frame_, lattice_);
    size_t width = observation_.width;
    for (size_t k = 0; k < depth_; k++) {
        for (size_t s = 0; s < width; s++) {
            observation_.bits[k * width + s] = syndrome[s] ^ flips_[k][s];
        }
    }
}

double MemoryEnv::apply_correction(size_t qubit, Pauli p) {
    if (done_ || awaiting_round_) {
        throw std::logic_error("no round in progress");
    }
    size_t before = defect_count(measure_syndrome(frame_, lattice_));
    frame_.apply(qubit, p);
    refresh_observation();
    size_t after = defect_count(measure_syndrome(frame_, lattice_));
    corrections_this_round_++;
    stats_.actions_taken++;
    double reward = config_.reward.correction_scale * (static_cast<double>(before) - static_cast<double>(after));
    record(Action::pauli(num_qubits(), qubit, p).index(), reward);
    return reward;
}

double MemoryEnv::finish_round() {
    if (done_ || awaiting_round_) {
        throw std::logic_error("no round in progress");
    }
    stats_.actions_taken++;
    RefereeVerdict verdict = referee_->check(frame_, observation_.last_slice());
    double reward;
    if (!verdict.continue_episode) {
        done_ = true;
        stats_.terminated_by = Termination::referee_failure;
        reward = config_.reward.failure;
    } else {
        reward = config_.reward.survive;
        if (stats_.lifetime_cycles >= config_.cycle_cap) {
            done_ = true;
            stats_.terminated_by = Termination::cap;
        }
    }
    awaiting_round_ = true;
    record(Action::identity(num_qubits()).index(), reward);
    return reward;
}

StepResult MemoryEnv::step(const Action& action) {
    if (done_) {
        throw std::logic_error("step called on a finished episode");
    }
    if (awaiting_round_) {
        throw std::logic_error("step called before reset()");
    }
    if (!action.is_identity() && !budget_exhausted()) {
        double reward = apply_correction(action.qubit(), action.pauli());
        return StepResult{observation_, reward, false, action};
    }
    double reward = finish_round();
    if (!done_) {
        begin_round(sample_round());
    }
    return StepResult{observation_, reward, done_, Action::identity(num_qubits())};
}

void MemoryEnv::inject_frame(const PauliFrame& frame) {
    if (frame.size() != lattice_.num_qubits()) {
        throw std::invalid_argument("frame size does not match lattice");
    }
    frame_ = frame;
    if (awaiting_round_) {
        // Treat the injected frame as a freshly measured round.
        for (auto& f : flips_) {
            std::fill(f.begin(), f.end(), 0);
        }
        awaiting_round_ = false;
        corrections_this_round_ = 0;
        stats_.volumes_consumed++;
        stats_.lifetime_cycles = stats_.volumes_consumed * depth_;
    }
    refresh_observation();
}

void MemoryEnv::set_noise(NoiseSpec spec) {
    if (!spec.instantiated()) {
        Rng setup = make_rng(rng_(), 1);
        spec = instantiate(std::move(spec), config_.distance, setup);
    }
    if (spec.distance != config_.distance) {
        throw std::invalid_argument("noise spec distance does not match environment");
    }
    noise_ = std::move(spec);
}

void MemoryEnv::resample_noise() { noise_ = resample_spatial(noise_, rng_); }

void MemoryEnv::record(size_t action, double reward) {
    if (trace_on_) {
        trace_.push_back({action, reward, defect_count(measure_syndrome(frame_, lattice_)), done_});
    }
}

void MemoryEnv::write_trace_jsonl(std::ostream& out) const {
    for (const TraceEntry& e : trace_) {
        nlohmann::json line = {
            {"action", Action::from_index(num_qubits(), e.action).str()},
            {"reward", e.reward},
            {"defects", e.defects},
            {"done", e.done},
        };
        out << line.dump() << '\n';
    }
}

EpisodeStats run_episode(MemoryEnv& env, const Policy& policy, std::optional<uint64_t> cycle_cap) {
    uint64_t cap = cycle_cap.value_or(env.config().cycle_cap);
    env.reset();
    while (!env.done()) {
        Action action = policy(env.observation());
        if (action.is_identity() || env.budget_exhausted()) {
            env.finish_round();
            if (env.done()) {
                break;
            }
            if (env.stats().lifetime_cycles >= cap) {
                EpisodeStats stats = env.stats();
                stats.terminated_by = Termination::cap;
                return stats;
            }
            env.begin_round(env.sample_round());
        } else {
            env.apply_correction(action.qubit(), action.pauli());
        }
    }
    return env.stats();
}

Policy random_policy(size_t num_qubits, uint64_t seed) {
    auto rng = std::make_shared<Rng>(make_rng(seed, 7));
    return [num_qubits, rng](const SyndromeVolume&) {
        return Action::from_index(num_qubits, uniform_index(*rng, Action::space_size(num_qubits)));
    };
}

Policy identity_policy(size_t num_qubits) {
    return [num_qubits](const SyndromeVolume&) { return Action::identity(num_qubits); };
}

double baseline_unprotected_lifetime(double p_phys, uint64_t trials, Rng& rng) {
    if (!(p_phys > 0.0) || p_phys > 1.0) {
        throw std::invalid_argument("baseline lifetime needs 0 < p_phys <= 1");
    }
    if (trials == 0) {
        throw std::invalid_argument("need at least one trial");
    }
    double total = 0.0;
    for (uint64_t i = 0; i < trials; i++) {
        uint64_t cycles = 1;
        while (!bernoulli(rng, p_phys)) {
            cycles++;
        }
        total += static_cast<double>(cycles);
    }
    return total / static_cast<double>(trials);
}

}  // namespace qadv
