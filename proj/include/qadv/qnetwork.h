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

#ifndef QADV_QNETWORK_H
#define QADV_QNETWORK_H

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qadv/rng.h"

namespace qadv {

struct DenseLayer {
    Eigen::MatrixXd weight;  // out x in
    Eigen::VectorXd bias;
    bool operator==(const DenseLayer& other) const { return weight == other.weight && bias == other.bias; }
};

struct NetworkGradients {
    std::vector<DenseLayer> layers;
};

/// Multilayer perceptron with ReLU hidden layers and a linear output layer.
/// `widths` lists every layer width, input first and output last.
class QNetwork {
   public:
    QNetwork() = default;
    /// All parameters zero.
    explicit QNetwork(std::vector<int> widths);
    /// He-normal weights, zero biases.
    static QNetwork random(std::vector<int> widths, Rng& rng);

    const std::vector<int>& widths() const { return widths_; }
    int input_size() const { return widths_.front(); }
    int output_size() const { return widths_.back(); }
    const std::vector<DenseLayer>& layers() const { return layers_; }
    std::vector<DenseLayer>& mutable_layers() { return layers_; }

    /// Throws std::invalid_argument when the input width is wrong.
    Eigen::VectorXd q_values(std::span<const double> input) const;
    /// Columns are samples.
    Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs) const;

    /// Mean over the batch of 0.5 * (Q(s_i, a_i) - y_i)^2 and its gradient.
    double td_loss(const Eigen::MatrixXd& inputs,
                   std::span<const size_t> actions,
                   std::span<const double> targets,
                   NetworkGradients* gradients) const;

    size_t num_parameters() const;
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> params);
    bool all_finite() const;

    bool operator==(const QNetwork& other) const = default;

   private:
    void check_widths() const;

    std::vector<int> widths_;
    std::vector<DenseLayer> layers_;
};

std::vector<double> flatten(const NetworkGradients& gradients);

enum class OptimizerKind { adam, momentum };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double learning_rate = 1e-4;
    double beta1 = 0.9;  // also the momentum coefficient
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Optimizer {
   public:
    Optimizer(const QNetwork& net, OptimizerConfig config);
    void step(QNetwork& net, const NetworkGradients& gradients);
    uint64_t steps() const { return t_; }

   private:
    OptimizerConfig config_;
    std::vector<DenseLayer> m_;
    std::vector<DenseLayer> v_;
    uint64_t t_ = 0;
};

/// r + gamma * max_next_q * (1 - done).
double td_target(double reward, bool done, double gamma, double max_next_q);

/// Argmax with ties to the lowest index. Throws std::domain_error on NaN.
size_t argmax_action(const Eigen::VectorXd& q);

}  // namespace qadv

#endif  // QADV_QNETWORK_H
