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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "qadv/qnetwork.h"

namespace qadv {
namespace {

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

TEST(qnetwork, zero_network_outputs_zero) {
    QNetwork net({8, 16, 5});
    std::vector<double> x(8, 1.0);
    EXPECT_EQ(net.q_values(x), Eigen::VectorXd::Zero(5));
    EXPECT_THROW(net.q_values(std::vector<double>(7, 0.0)), std::invalid_argument);
    EXPECT_THROW(QNetwork({8}), std::invalid_argument);
}

TEST(qnetwork, forward_matches_batch_and_manual) {
    Rng rng = make_rng(1, 0);
    QNetwork net = QNetwork::random({4, 3, 2}, rng);
    std::vector<double> x = {1, 0, 1, 1};
    Eigen::VectorXd q = net.q_values(x);
    // Manual evaluation.
    const auto& l0 = net.layers()[0];
    const auto& l1 = net.layers()[1];
    for (int o = 0; o < 2; o++) {
        double out = l1.bias[o];
        for (int h = 0; h < 3; h++) {
            double z = l0.bias[h];
            for (int i = 0; i < 4; i++) {
                z += l0.weight(h, i) * x[i];
            }
            out += l1.weight(o, h) * std::max(z, 0.0);
        }
        EXPECT_NEAR(q[o], out, 1e-12);
    }
    Eigen::MatrixXd batch(4, 2);
    batch.col(0) = Eigen::Map<Eigen::VectorXd>(x.data(), 4);
    batch.col(1).setZero();
    EXPECT_NEAR((net.forward(batch).col(0) - q).norm(), 0.0, 1e-12);
    EXPECT_EQ(net.q_values(x), q);
}

// Central finite differences of the TD loss versus the analytic gradient.
double gradient_relative_error(Rng& rng) {
    int in = 3 + static_cast<int>(uniform_index(rng, 6));
    int h1 = 2 + static_cast<int>(uniform_index(rng, 8));
    int h2 = 2 + static_cast<int>(uniform_index(rng, 8));
    int out = 2 + static_cast<int>(uniform_index(rng, 5));
    QNetwork net = QNetwork::random({in, h1, h2, out}, rng);
    auto params = net.parameters();
    for (double& p : params) {
        p += normal(rng, 0.0, 0.1);  // non-zero biases
    }
    net.set_parameters(params);
    size_t batch = 1 + uniform_index(rng, 6);
    Eigen::MatrixXd x(in, static_cast<Eigen::Index>(batch));
    for (Eigen::Index c = 0; c < x.cols(); c++) {
        for (Eigen::Index r = 0; r < x.rows(); r++) {
            x(r, c) = bernoulli(rng, 0.5) ? 1.0 : 0.0;
        }
    }
    std::vector<size_t> actions(batch);
    std::vector<double> targets(batch);
    for (size_t i = 0; i < batch; i++) {
        actions[i] = uniform_index(rng, out);
        targets[i] = normal(rng, 0.0, 2.0);
    }
    NetworkGradients grads;
    net.td_loss(x, actions, targets, &grads);
    std::vector<double> analytic = flatten(grads);
    const double h = 1e-5;
    double diff2 = 0, norm_a = 0, norm_n = 0;
    for (size_t k = 0; k < params.size(); k++) {
        auto plus = params, minus = params;
        plus[k] += h;
        minus[k] -= h;
        QNetwork a = net, b = net;
        a.set_parameters(plus);
        b.set_parameters(minus);
        double numeric = (a.td_loss(x, actions, targets, nullptr) - b.td_loss(x, actions, targets, nullptr)) / (2 * h);
        diff2 += (numeric - analytic[k]) * (numeric - analytic[k]);
        norm_a += analytic[k] * analytic[k];
        norm_n += numeric * numeric;
    }
    double scale = std::max(std::sqrt(norm_a), std::sqrt(norm_n));
    return scale == 0 ? 0.0 : std::sqrt(diff2) / scale;
}

TEST(qnetwork, gradient_matches_finite_differences) {
    Rng rng = make_rng(2, 0);
    for (int trial = 0; trial < 50; trial++) {
        EXPECT_LE(gradient_relative_error(rng), 1e-4) << trial;
    }
}

TEST(qnetwork, parameters_round_trip) {
    Rng rng = make_rng(3, 0);
    QNetwork net = QNetwork::random({6, 5, 4}, rng);
    QNetwork copy({6, 5, 4});
    copy.set_parameters(net.parameters());
    EXPECT_EQ(copy, net);
    EXPECT_EQ(net.num_parameters(), 6u * 5 + 5 + 5 * 4 + 4);
    EXPECT_THROW(copy.set_parameters(std::vector<double>(3)), std::invalid_argument);
}

TEST(optimizer, reduces_loss) {
    Rng rng = make_rng(4, 0);
    for (OptimizerKind kind : {OptimizerKind::adam, OptimizerKind::momentum}) {
        QNetwork net = QNetwork::random({4, 16, 3}, rng);
        Eigen::MatrixXd x = Eigen::MatrixXd::Identity(4, 4);
        std::vector<size_t> a = {0, 1, 2, 0};
        std::vector<double> y = {1.0, -1.0, 0.5, 2.0};
        OptimizerConfig cfg;
        cfg.kind = kind;
        cfg.learning_rate = kind == OptimizerKind::adam ? 1e-2 : 1e-2;
        Optimizer opt(net, cfg);
        double first = net.td_loss(x, a, y, nullptr);
        NetworkGradients g;
        for (int i = 0; i < 500; i++) {
            net.td_loss(x, a, y, &g);
            opt.step(net, g);
        }
        EXPECT_LT(net.td_loss(x, a, y, nullptr), 1e-3 * std::max(first, 1.0));
    }
}

TEST(td_target, arithmetic) {
    EXPECT_NEAR(td_target(1.0, false, 0.99, 2.0), 2.98, 1e-12);
    EXPECT_EQ(td_target(-1.0, true, 0.99, 123.0), -1.0);
    EXPECT_EQ(td_target(0.0, false, 0.0, 5.0), 0.0);
}

TEST(argmax_action, ties_and_nan) {
    Eigen::VectorXd q(3);
    q << 0.1, 0.9, 0.3;
    EXPECT_EQ(argmax_action(q), 1u);
    q << 2, 2, 2;
    EXPECT_EQ(argmax_action(q), 0u);
    q << 0.1, std::numeric_limits<double>::quiet_NaN(), 0.3;
    EXPECT_THROW(argmax_action(q), std::domain_error);
    Rng rng = make_rng(5, 0);
    for (int i = 0; i < 100; i++) {
        Eigen::VectorXd v(7);
        for (int k = 0; k < 7; k++) {
            v[k] = normal(rng, 0, 1);
        }
        Eigen::VectorXd shifted = v.array() + normal(rng, 0, 10);
        EXPECT_EQ(argmax_action(v), argmax_action(shifted));
    }
}

TEST(replay_buffer, ring_semantics) {
    ReplayBuffer buf(3);
    for (size_t i = 0; i < 5; i++) {
        buf.push({{0}, i, 0.0, {0}, false});
        EXPECT_LE(buf.size(), 3u);
    }
    EXPECT_EQ(buf.at(0).action, 2u);
    EXPECT_EQ(buf.at(2).action, 4u);
    Rng rng = make_rng(6, 0);
    auto idx = buf.sample_indices(3, rng);
    EXPECT_EQ(std::set<size_t>(idx.begin(), idx.end()).size(), 3u);
    EXPECT_THROW(buf.sample_indices(4, rng), std::invalid_argument);
    EXPECT_THROW(ReplayBuffer(0), std::invalid_argument);
}

TEST(train_config, schedule_and_validation) {
    TrainConfig c;
    EXPECT_DOUBLE_EQ(c.epsilon_at(0), 1.0);
    EXPECT_DOUBLE_EQ(c.epsilon_at(50'000), 0.51);
    EXPECT_DOUBLE_EQ(c.epsilon_at(1'000'000), 0.02);
    c.gamma = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    TrainConfig d;
    d.epsilon_end = 0.5;
    d.epsilon_start = 0.2;
    EXPECT_THROW(d.validate(), std::invalid_argument);
    nlohmann::json j = TrainConfig{};
    TrainConfig back = j.get<TrainConfig>();
    EXPECT_EQ(nlohmann::json(back), j);
}

TrainConfig tiny_config(uint64_t seed) {
    TrainConfig c;
    c.total_steps = 3000;
    c.learning_starts = 200;
    c.epsilon_decay_steps = 2000;
    c.target_sync = 500;
    c.hidden = {32};
    c.eval_interval = 1000;
    c.eval_episodes = 3;
    c.eval_cycle_cap = 300;
    c.seed = seed;
    return c;
}

EnvConfig env_d3(double p) {
    EnvConfig e;
    e.distance = 3;
    e.noise.p_phys = p;
    return e;
}

TEST(train, deterministic_checkpoints) {
    TrainResult a = train(env_d3(0.01), tiny_config(7));
    TrainResult b = train(env_d3(0.01), tiny_config(7));
    EXPECT_EQ(a.checkpoint.net, b.checkpoint.net);
    EXPECT_EQ(checkpoint_to_json(a.checkpoint).dump(), checkpoint_to_json(b.checkpoint).dump());
    ASSERT_EQ(a.curve.size(), 3u);
    EXPECT_EQ(a.curve.back().step, 3000u);
    TrainResult c = train(env_d3(0.01), tiny_config(8));
    EXPECT_FALSE(c.checkpoint.net == a.checkpoint.net);
}

TEST(train, keeps_best_evaluated_snapshot) {
    TrainConfig c = tiny_config(12);
    TrainResult best = train(env_d3(0.01), c);
    double top = 0.0;
    uint64_t top_step = 0;
    for (const CurvePoint& p : best.curve) {
        if (p.mean_eval_lifetime >= top) {
            top = p.mean_eval_lifetime;
            top_step = p.step;
        }
    }
    EXPECT_EQ(best.selected_step, top_step);
    EnvConfig e = env_d3(0.01);
    e.cycle_cap = c.eval_cycle_cap;
    double mean = 0.0;
    for (const EpisodeStats& s : evaluate_policy(best.checkpoint.net, e, c.eval_episodes, derive_seed(c.seed, 1))) {
        mean += static_cast<double>(s.lifetime_cycles) / static_cast<double>(c.eval_episodes);
    }
    EXPECT_DOUBLE_EQ(mean, top);

    c.keep_best = false;
    TrainResult last = train(env_d3(0.01), c);
    EXPECT_EQ(last.selected_step, c.total_steps);
    if (top_step != c.total_steps) {
        EXPECT_FALSE(last.checkpoint.net == best.checkpoint.net);
    }
}

TEST(train, divergence_guard) {
    TrainConfig c = tiny_config(9);
    c.q_bound = 1e-9;
    EXPECT_THROW(train(env_d3(0.01), c), DivergenceError);
}

TEST(train, noiseless_environment_survives_to_cap) {
    TrainConfig c = tiny_config(10);
    TrainResult r = train(env_d3(0.0), c);
    EnvConfig e = env_d3(0.0);
    e.cycle_cap = 3000;
    for (const EpisodeStats& s : evaluate_policy(r.checkpoint.net, e, 3, 1)) {
        EXPECT_EQ(s.terminated_by, Termination::cap);
        EXPECT_EQ(s.lifetime_cycles, 3000u);
    }
}

TEST(checkpoint, round_trip_and_validation) {
    Rng rng = make_rng(11, 0);
    Checkpoint c;
    c.distance = 3;
    c.depth = 3;
    c.seed = 5;
    c.net = QNetwork::random({24, 10, 19}, rng);
    std::string path = temp_path("qadv_ckpt.json");
    save_checkpoint(c, path);
    Checkpoint back = load_checkpoint(path);
    EXPECT_EQ(back.net, c.net);
    for (int i = 0; i < 100; i++) {
        std::vector<double> x(24);
        for (double& v : x) {
            v = bernoulli(rng, 0.3);
        }
        EXPECT_EQ(back.net.q_values(x), c.net.q_values(x));
    }
    EXPECT_NO_THROW(check_compatible(back, env_d3(0.001)));
    EnvConfig d5;
    d5.distance = 5;
    EXPECT_THROW(check_compatible(back, d5), std::invalid_argument);

    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::ofstream(temp_path("qadv_trunc.json")) << text.substr(0, text.size() / 2);
    EXPECT_THROW(load_checkpoint(temp_path("qadv_trunc.json")), std::runtime_error);

    nlohmann::json j = checkpoint_to_json(c);
    j["version"] = 99;
    EXPECT_THROW(checkpoint_from_json(j), std::runtime_error);
    j = checkpoint_to_json(c);
    j["distance"] = 5;
    EXPECT_THROW(checkpoint_from_json(j), std::runtime_error);
    EXPECT_THROW(load_checkpoint(temp_path("does_not_exist.json")), std::runtime_error);
}

TEST(cached_q, matches_network) {
    Rng rng = make_rng(12, 0);
    QNetwork net = QNetwork::random({24, 8, 19}, rng);
    CachedQ cache(net, 4);
    for (int i = 0; i < 50; i++) {
        SyndromeVolume v(3, 8);
        for (auto& b : v.bits) {
            b = bernoulli(rng, 0.1);
        }
        EXPECT_EQ(cache(v), net.q_values(v.as_input()));
        EXPECT_EQ(cache(v), net.q_values(v.as_input()));
        EXPECT_EQ(greedy_action(net, v).index(), argmax_action(net.q_values(v.as_input())));
    }
    EXPECT_GE(cache.hits(), 50u);
}

TEST(evaluate, independent_of_workers) {
    Rng rng = make_rng(13, 0);
    QNetwork net = QNetwork::random({24, 8, 19}, rng);
    EnvConfig e = env_d3(0.02);
    e.cycle_cap = 500;
    auto one = evaluate_policy(net, e, 12, 3, 1);
    auto three = evaluate_policy(net, e, 12, 3, 3);
    for (size_t i = 0; i < one.size(); i++) {
        EXPECT_EQ(one[i].lifetime_cycles, three[i].lifetime_cycles);
    }
    auto r1 = evaluate_random(e, 12, 3, 1);
    auto r2 = evaluate_random(e, 12, 3, 2);
    for (size_t i = 0; i < r1.size(); i++) {
        EXPECT_EQ(r1[i].lifetime_cycles, r2[i].lifetime_cycles);
    }
}

TEST(decode_phase, respects_budget_and_single_action) {
    // A network whose Q-vector always favours X on qubit 0.
    QNetwork net({24, 19});
    net.mutable_layers()[0].bias[0] = 1.0;
    CachedQ q(net);
    MemoryEnv env(env_d3(0.0), 1);
    env.reset();
    EXPECT_EQ(decode_phase(env, q), 18u);
    EXPECT_TRUE(env.budget_exhausted());
    env.finish_round();
    env.begin_round(env.sample_round());
    EXPECT_EQ(decode_phase(env, q, true), 1u);
}

}  // namespace
}  // namespace qadv
