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

#include "qadv/dqn.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "qadv/parallel.h"

namespace qadv {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw std::invalid_argument("replay buffer capacity must be positive");
    }
    data_.reserve(std::min<size_t>(capacity, 1 << 20));
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
        return;
    }
    data_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(size_t i) const {
    if (i >= data_.size()) {
        throw std::out_of_range("replay index out of range");
    }
    return data_[(head_ + i) % data_.size()];
}

std::vector<size_t> ReplayBuffer::sample_indices(size_t batch, Rng& rng) const {
    if (batch > data_.size()) {
        throw std::invalid_argument("batch larger than replay contents");
    }
    std::vector<size_t> out;
    out.reserve(batch);
    std::unordered_set<size_t> seen;
    while (out.size() < batch) {
        size_t i = uniform_index(rng, data_.size());
        if (seen.insert(i).second) {
            out.push_back(i);
        }
    }
    return out;
}

double TrainConfig::epsilon_at(uint64_t step) const {
    if (step >= epsilon_decay_steps) {
        return epsilon_end;
    }
    double frac = static_cast<double>(step) / static_cast<double>(epsilon_decay_steps);
    return epsilon_start + frac * (epsilon_end - epsilon_start);
}

void TrainConfig::validate() const {
    if (!(gamma > 0 && gamma < 1)) {
        throw std::invalid_argument("gamma must lie in (0, 1)");
    }
    if (!(epsilon_end >= 0 && epsilon_end <= epsilon_start && epsilon_start <= 1)) {
        throw std::invalid_argument("need 0 <= epsilon_end <= epsilon_start <= 1");
    }
    if (epsilon_decay_steps == 0 || batch_size == 0 || target_sync == 0 || total_steps == 0 || buffer_capacity == 0 ||
        train_interval == 0 || !(optimizer.learning_rate > 0) || !(q_bound > 0)) {
        throw std::invalid_argument("training sizes and rates must be positive");
    }
    for (int h : hidden) {
        if (h <= 0) {
            throw std::invalid_argument("hidden widths must be positive");
        }
    }
}

void to_json(nlohmann::json& out, const TrainConfig& c) {
    out = {
        {"gamma", c.gamma},
        {"epsilon_start", c.epsilon_start},
        {"epsilon_end", c.epsilon_end},
        {"epsilon_decay_steps", c.epsilon_decay_steps},
        {"optimizer", c.optimizer.kind == OptimizerKind::adam ? "adam" : "momentum"},
        {"learning_rate", c.optimizer.learning_rate},
        {"beta1", c.optimizer.beta1},
        {"beta2", c.optimizer.beta2},
        {"adam_epsilon", c.optimizer.epsilon},
        {"batch_size", c.batch_size},
        {"target_sync", c.target_sync},
        {"total_steps", c.total_steps},
        {"buffer_capacity", c.buffer_capacity},
        {"learning_starts", c.learning_starts},
        {"train_interval", c.train_interval},
        {"hidden", c.hidden},
        {"q_bound", c.q_bound},
        {"eval_interval", c.eval_interval},
        {"eval_episodes", c.eval_episodes},
        {"eval_cycle_cap", c.eval_cycle_cap},
        {"keep_best", c.keep_best},
        {"seed", c.seed},
    };
}

void from_json(const nlohmann::json& in, TrainConfig& c) {
    TrainConfig d;
    d.gamma = in.value("gamma", d.gamma);
    d.epsilon_start = in.value("epsilon_start", d.epsilon_start);
    d.epsilon_end = in.value("epsilon_end", d.epsilon_end);
    d.epsilon_decay_steps = in.value("epsilon_decay_steps", d.epsilon_decay_steps);
    std::string opt = in.value("optimizer", std::string("adam"));
    if (opt == "adam") {
        d.optimizer.kind = OptimizerKind::adam;
    } else if (opt == "momentum") {
        d.optimizer.kind = OptimizerKind::momentum;
    } else {
        throw std::invalid_argument("unknown optimizer '" + opt + "'");
    }
    d.optimizer.learning_rate = in.value("learning_rate", d.optimizer.learning_rate);
    d.optimizer.beta1 = in.value("beta1", d.optimizer.beta1);
    d.optimizer.beta2 = in.value("beta2", d.optimizer.beta2);
    d.optimizer.epsilon = in.value("adam_epsilon", d.optimizer.epsilon);
    d.batch_size = in.value("batch_size", d.batch_size);
    d.target_sync = in.value("target_sync", d.target_sync);
    d.total_steps = in.value("total_steps", d.total_steps);
    d.buffer_capacity = in.value("buffer_capacity", d.buffer_capacity);
    d.learning_starts = in.value("learning_starts", d.learning_starts);
    d.train_interval = in.value("train_interval", d.train_interval);
    d.hidden = in.value("hidden", d.hidden);
    d.q_bound = in.value("q_bound", d.q_bound);
    d.eval_interval = in.value("eval_interval", d.eval_interval);
    d.eval_episodes = in.value("eval_episodes", d.eval_episodes);
    d.eval_cycle_cap = in.value("eval_cycle_cap", d.eval_cycle_cap);
    d.keep_best = in.value("keep_best", d.keep_best);
    d.seed = in.value("seed", d.seed);
    c = std::move(d);
}

void write_learning_curve(std::ostream& out, const std::vector<CurvePoint>& curve) {
    out << "step,epsilon,mean_eval_lifetime\n";
    for (const CurvePoint& p : curve) {
        out << p.step << ',' << p.epsilon << ',' << p.mean_eval_lifetime << '\n';
    }
}

std::vector<int> network_widths(const EnvConfig& env, const std::vector<int>& hidden) {
    int d = env.distance;
    std::vector<int> widths{env.resolved_depth() * (d * d - 1)};
    widths.insert(widths.end(), hidden.begin(), hidden.end());
    widths.push_back(2 * d * d + 1);
    return widths;
}

void check_compatible(const Checkpoint& checkpoint, const EnvConfig& env) {
    if (checkpoint.distance != env.distance || checkpoint.depth != env.resolved_depth()) {
        throw std::invalid_argument("checkpoint is for d=" + std::to_string(checkpoint.distance) + ", depth " +
                                    std::to_string(checkpoint.depth) + "; environment has d=" +
                                    std::to_string(env.distance) + ", depth " + std::to_string(env.resolved_depth()));
    }
    const auto& w = checkpoint.net.widths();
    int d = env.distance;
    if (w.empty() || w.front() != env.resolved_depth() * (d * d - 1) || w.back() != 2 * d * d + 1) {
        throw std::invalid_argument("checkpoint layer widths do not fit the lattice");
    }
}

nlohmann::json checkpoint_to_json(const Checkpoint& c) {
    nlohmann::json layers = nlohmann::json::array();
    for (const DenseLayer& layer : c.net.layers()) {
        layers.push_back({
            {"rows", layer.weight.rows()},
            {"cols", layer.weight.cols()},
            {"weight", std::vector<double>(layer.weight.data(), layer.weight.data() + layer.weight.size())},
            {"bias", std::vector<double>(layer.bias.data(), layer.bias.data() + layer.bias.size())},
        });
    }
    return {
        {"format", "qadv-dqn"},
        {"version", Checkpoint::kFormatVersion},
        {"distance", c.distance},
        {"depth", c.depth},
        {"widths", c.net.widths()},
        {"seed", c.seed},
        {"train_config", c.train_config},
        {"env_config", c.env_config},
        {"layers", layers},
    };
}

Checkpoint checkpoint_from_json(const nlohmann::json& in) {
    try {
        if (in.at("format").get<std::string>() != "qadv-dqn") {
            throw std::runtime_error("not a qadv checkpoint");
        }
        int version = in.at("version").get<int>();
        if (version != Checkpoint::kFormatVersion) {
            throw std::runtime_error("checkpoint format version " + std::to_string(version) + " is not supported");
        }
        Checkpoint c;
        c.distance = in.at("distance").get<int>();
        c.depth = in.at("depth").get<int>();
        c.seed = in.at("seed").get<uint64_t>();
        c.train_config = in.value("train_config", nlohmann::json::object());
        c.env_config = in.value("env_config", nlohmann::json::object());
        c.net = QNetwork(in.at("widths").get<std::vector<int>>());
        const auto& layers = in.at("layers");
        auto& target = c.net.mutable_layers();
        if (layers.size() != target.size()) {
            throw std::runtime_error("layer count does not match widths");
        }
        for (size_t l = 0; l < target.size(); l++) {
            auto w = layers[l].at("weight").get<std::vector<double>>();
            auto b = layers[l].at("bias").get<std::vector<double>>();
            if (w.size() != static_cast<size_t>(target[l].weight.size()) ||
                b.size() != static_cast<size_t>(target[l].bias.size())) {
                throw std::runtime_error("layer " + std::to_string(l) + " has the wrong number of parameters");
            }
            std::copy(w.begin(), w.end(), target[l].weight.data());
            std::copy(b.begin(), b.end(), target[l].bias.data());
        }
        if (c.net.input_size() != c.depth * (c.distance * c.distance - 1) ||
            c.net.output_size() != 2 * c.distance * c.distance + 1) {
            throw std::runtime_error("checkpoint widths disagree with its distance/depth header");
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("corrupt checkpoint: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("corrupt checkpoint: ") + e.what());
    }
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write checkpoint " + path);
    }
    out << checkpoint_to_json(checkpoint).dump() << '\n';
    if (!out) {
        throw std::runtime_error("failed writing checkpoint " + path);
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read checkpoint " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("corrupt checkpoint " + path + ": " + e.what());
    }
    return checkpoint_from_json(j);
}

uint64_t derive_seed(uint64_t seed, uint64_t index) {
    return splitmix64(splitmix64(seed + 0x243F6A8885A308D3ULL) ^ splitmix64(index));
}

namespace {

void fill_column(Eigen::MatrixXd& m, Eigen::Index col, const std::vector<uint8_t>& bits) {
    for (size_t i = 0; i < bits.size(); i++) {
        m(static_cast<Eigen::Index>(i), col) = bits[i];
    }
}

double mean_lifetime(const std::vector<EpisodeStats>& stats) {
    double total = 0;
    for (const EpisodeStats& s : stats) {
        total += static_cast<double>(s.lifetime_cycles);
    }
    return stats.empty() ? 0.0 : total / static_cast<double>(stats.size());
}

}  // namespace

TrainResult train(const EnvConfig& env_config, const TrainConfig& config, const TrainProgress& progress,
                  int eval_workers) {
    config.validate();
    MemoryEnv env(env_config, derive_seed(config.seed, 0));
    const size_t num_actions = env.num_actions();
    const size_t n = env.num_qubits();

    Rng init_rng = make_rng(config.seed, 2);
    Rng act_rng = make_rng(config.seed, 3);
    Rng replay_rng = make_rng(config.seed, 4);

    QNetwork net = QNetwork::random(network_widths(env_config, config.hidden), init_rng);
    QNetwork target = net;
    Optimizer optimizer(net, config.optimizer);
    ReplayBuffer buffer(config.buffer_capacity);

    TrainResult result;
    const size_t batch = config.batch_size;
    Eigen::MatrixXd states(net.input_size(), static_cast<Eigen::Index>(batch));
    Eigen::MatrixXd next_states(net.input_size(), static_cast<Eigen::Index>(batch));
    std::vector<size_t> actions(batch);
    std::vector<double> targets(batch);
    NetworkGradients grads;

    QNetwork best = net;
    double best_lifetime = -1.0;
    result.selected_step = 0;

    SyndromeVolume obs = env.reset();
    std::vector<double> input;
    for (uint64_t step = 1; step <= config.total_steps; step++) {
        double eps = config.epsilon_at(step - 1);
        size_t choice;
        if (uniform01(act_rng) < eps) {
            choice = uniform_index(act_rng, num_actions);
        } else {
            input.assign(obs.bits.begin(), obs.bits.end());
            choice = argmax_action(net.q_values(input));
        }
        std::vector<uint8_t> state = obs.bits;
        StepResult r = env.step(Action::from_index(n, choice));
        // Hitting the cycle cap truncates the episode but is not a terminal state.
        bool terminal = r.done && env.stats().terminated_by == Termination::referee_failure;
        buffer.push({std::move(state), r.executed.index(), r.reward, r.observation.bits, terminal});
        if (r.done) {
            result.episodes++;
            obs = env.reset();
        } else {
            obs = r.observation;
        }

        if (step >= config.learning_starts && buffer.size() >= batch && step % config.train_interval == 0) {
            std::vector<size_t> idx = buffer.sample_indices(batch, replay_rng);
            for (size_t i = 0; i < batch; i++) {
                const Transition& t = buffer.raw(idx[i]);
                fill_column(states, static_cast<Eigen::Index>(i), t.state);
                fill_column(next_states, static_cast<Eigen::Index>(i), t.next_state);
                actions[i] = t.action;
            }
            Eigen::MatrixXd next_q = target.forward(next_states);
            double abs_q = 0;
            for (size_t i = 0; i < batch; i++) {
                const Transition& t = buffer.raw(idx[i]);
                double best = next_q.col(static_cast<Eigen::Index>(i)).maxCoeff();
                abs_q += std::abs(best);
                targets[i] = td_target(t.reward, t.done, config.gamma, best);
            }
            abs_q /= static_cast<double>(batch);
            if (!(abs_q <= config.q_bound)) {
                throw DivergenceError("mean |Q| " + std::to_string(abs_q) + " exceeded bound at step " +
                                      std::to_string(step));
            }
            net.td_loss(states, actions, targets, &grads);
            optimizer.step(net, grads);
        }
        if (step % config.target_sync == 0) {
            if (!net.all_finite()) {
                throw DivergenceError("non-finite parameters at step " + std::to_string(step));
            }
            target = net;
        }
        if (config.eval_interval > 0 && (step % config.eval_interval == 0 || step == config.total_steps)) {
            EnvConfig eval_env = env_config;
            eval_env.cycle_cap = config.eval_cycle_cap;
            auto stats = evaluate_policy(net, eval_env, config.eval_episodes, derive_seed(config.seed, 1), eval_workers);
            CurvePoint point{step, eps, mean_lifetime(stats)};
            result.curve.push_back(point);
            if (point.mean_eval_lifetime >= best_lifetime) {
                best_lifetime = point.mean_eval_lifetime;
                best = net;
                result.selected_step = step;
            }
            if (progress) {
                progress(point);
            }
        }
    }

    result.checkpoint.distance = env_config.distance;
    result.checkpoint.depth = env_config.resolved_depth();
    result.checkpoint.seed = config.seed;
    result.checkpoint.train_config = config;
    result.checkpoint.env_config = env_config;
    if (config.keep_best && best_lifetime >= 0) {
        result.checkpoint.net = std::move(best);
    } else {
        result.checkpoint.net = std::move(net);
        result.selected_step = config.total_steps;
    }
    return result;
}

CachedQ::CachedQ(const QNetwork& net, size_t max_entries) : net_(net), max_entries_(max_entries) {}

const Eigen::VectorXd& CachedQ::operator()(const SyndromeVolume& obs) {
    std::string key = obs.packed();
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        hits_++;
        return it->second;
    }
    misses_++;
    if (cache_.size() >= max_entries_) {
        cache_.clear();
    }
    std::vector<double> input = obs.as_input();
    return cache_.emplace(std::move(key), net_.q_values(input)).first->second;
}

Action greedy_action(const QNetwork& net, const SyndromeVolume& obs) {
    std::vector<double> input = obs.as_input();
    Eigen::VectorXd q = net.q_values(input);
    size_t n = static_cast<size_t>(q.size() - 1) / 2;
    return Action::from_index(n, argmax_action(q));
}

Policy greedy_policy(CachedQ& q, size_t num_qubits) {
    return [&q, num_qubits](const SyndromeVolume& obs) { return Action::from_index(num_qubits, argmax_action(q(obs))); };
}

size_t decode_phase(MemoryEnv& env, CachedQ& q, bool single_action) {
    size_t applied = 0;
    const size_t n = env.num_qubits();
    while (!env.budget_exhausted()) {
        Action a = Action::from_index(n, argmax_action(q(env.observation())));
        if (a.is_identity()) {
            break;
        }
        env.apply_correction(a.qubit(), a.pauli());
        applied++;
        if (single_action) {
            break;
        }
    }
    return applied;
}

namespace {

std::vector<EpisodeStats> evaluate_with(const EnvConfig& env_config, size_t episodes, uint64_t seed, int workers,
                                        const std::function<Policy(int)>& make_policy) {
    MemoryEnv prototype(env_config, seed);
    auto referee = prototype.shared_referee();
    std::vector<EpisodeStats> out(episodes);
    std::vector<Policy> policies;
    int w = std::max(1, std::min<int>(workers, static_cast<int>(std::max<size_t>(episodes, 1))));
    for (int i = 0; i < w; i++) {
        policies.push_back(make_policy(i));
    }
    parallel_for(episodes, w, [&](int worker, size_t e) {
        MemoryEnv env(env_config, derive_seed(seed, e), referee);
        out[e] = run_episode(env, policies[worker]);
    });
    return out;
}

}  // namespace

std::vector<EpisodeStats> evaluate_policy(const QNetwork& net, const EnvConfig& env, size_t episodes, uint64_t seed,
                                          int workers) {
    std::vector<std::unique_ptr<CachedQ>> caches;
    int w = std::max(1, workers);
    for (int i = 0; i < w; i++) {
        caches.push_back(std::make_unique<CachedQ>(net));
    }
    size_t n = static_cast<size_t>(env.distance) * env.distance;
    return evaluate_with(env, episodes, seed, workers, [&](int i) { return greedy_policy(*caches[i], n); });
}

std::vector<EpisodeStats> evaluate_random(const EnvConfig& env, size_t episodes, uint64_t seed, int workers) {
    size_t n = static_cast<size_t>(env.distance) * env.distance;
    MemoryEnv prototype(env, seed);
    auto referee = prototype.shared_referee();
    std::vector<EpisodeStats> out(episodes);
    parallel_for(episodes, workers, [&](int, size_t e) {
        MemoryEnv ep(env, derive_seed(seed, e), referee);
        out[e] = run_episode(ep, random_policy(n, derive_seed(seed ^ 0x9E37ULL, e)));
    });
    return out;
}

}  // namespace qadv
