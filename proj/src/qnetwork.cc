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

#include "qadv/qnetwork.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qadv {

QNetwork::QNetwork(std::vector<int> widths) : widths_(std::move(widths)) {
    check_widths();
    for (size_t l = 0; l + 1 < widths_.size(); l++) {
        layers_.push_back({Eigen::MatrixXd::Zero(widths_[l + 1], widths_[l]), Eigen::VectorXd::Zero(widths_[l + 1])});
    }
}

QNetwork QNetwork::random(std::vector<int> widths, Rng& rng) {
    QNetwork net(std::move(widths));
    for (DenseLayer& layer : net.layers_) {
        double sd = std::sqrt(2.0 / static_cast<double>(layer.weight.cols()));
        for (Eigen::Index c = 0; c < layer.weight.cols(); c++) {
            for (Eigen::Index r = 0; r < layer.weight.rows(); r++) {
                layer.weight(r, c) = normal(rng, 0.0, sd);
            }
        }
    }
    return net;
}

void QNetwork::check_widths() const {
    if (widths_.size() < 2) {
        throw std::invalid_argument("network needs at least an input and an output width");
    }
    for (int w : widths_) {
        if (w <= 0) {
            throw std::invalid_argument("layer widths must be positive");
        }
    }
}

Eigen::VectorXd QNetwork::q_values(std::span<const double> input) const {
    if (static_cast<int>(input.size()) != input_size()) {
        throw std::invalid_argument("observation has " + std::to_string(input.size()) + " entries, network expects " +
                                    std::to_string(input_size()));
    }
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(input.data(), input.size());
    for (size_t l = 0; l < layers_.size(); l++) {
        x = layers_[l].weight * x + layers_[l].bias;
        if (l + 1 < layers_.size()) {
            x = x.cwiseMax(0.0);
        }
    }
    return x;
}

Eigen::MatrixXd QNetwork::forward(const Eigen::MatrixXd& inputs) const {
    if (inputs.rows() != input_size()) {
        throw std::invalid_argument("input batch has the wrong width");
    }
    Eigen::MatrixXd x = inputs;
    for (size_t l = 0; l < layers_.size(); l++) {
        Eigen::MatrixXd z = layers_[l].weight * x;
        z.colwise() += layers_[l].bias;
        x = l + 1 < layers_.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
    }
    return x;
}

double QNetwork::td_loss(const Eigen::MatrixXd& inputs,
                         std::span<const size_t> actions,
                         std::span<const double> targets,
                         NetworkGradients* gradients) const {
    const Eigen::Index batch = inputs.cols();
    if (inputs.rows() != input_size() || actions.size() != static_cast<size_t>(batch) ||
        targets.size() != static_cast<size_t>(batch)) {
        throw std::invalid_argument("td_loss batch shapes disagree");
    }
    std::vector<Eigen::MatrixXd> activations;
    activations.reserve(layers_.size() + 1);
    activations.push_back(inputs);
    for (size_t l = 0; l < layers_.size(); l++) {
        Eigen::MatrixXd z = layers_[l].weight * activations.back();
        z.colwise() += layers_[l].bias;
        if (l + 1 < layers_.size()) {
            z = z.cwiseMax(0.0);
        }
        activations.push_back(std::move(z));
    }
    const Eigen::MatrixXd& q = activations.back();
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), batch);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < batch; i++) {
        if (actions[i] >= static_cast<size_t>(q.rows())) {
            throw std::out_of_range("action index outside the output layer");
        }
        double err = q(static_cast<Eigen::Index>(actions[i]), i) - targets[i];
        loss += 0.5 * err * err;
        delta(static_cast<Eigen::Index>(actions[i]), i) = err / static_cast<double>(batch);
    }
    loss /= static_cast<double>(batch);
    if (gradients == nullptr) {
        return loss;
    }
    gradients->layers.resize(layers_.size());
    for (size_t l = layers_.size(); l-- > 0;) {
        gradients->layers[l].weight = delta * activations[l].transpose();
        gradients->layers[l].bias = delta.rowwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = layers_[l].weight.transpose() * delta;
            // ReLU derivative: the stored activation is positive exactly where the unit was active.
            delta = back.cwiseProduct((activations[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return loss;
}

size_t QNetwork::num_parameters() const {
    size_t n = 0;
    for (const DenseLayer& layer : layers_) {
        n += static_cast<size_t>(layer.weight.size() + layer.bias.size());
    }
    return n;
}

namespace {

void append(std::vector<double>& out, const DenseLayer& layer) {
    out.insert(out.end(), layer.weight.data(), layer.weight.data() + layer.weight.size());
    out.insert(out.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
}

}  // namespace

std::vector<double> QNetwork::parameters() const {
    std::vector<double> out;
    out.reserve(num_parameters());
    for (const DenseLayer& layer : layers_) {
        append(out, layer);
    }
    return out;
}

void QNetwork::set_parameters(std::span<const double> params) {
    if (params.size() != num_parameters()) {
        throw std::invalid_argument("parameter count mismatch");
    }
    size_t k = 0;
    for (DenseLayer& layer : layers_) {
        std::copy_n(params.data() + k, layer.weight.size(), layer.weight.data());
        k += static_cast<size_t>(layer.weight.size());
        std::copy_n(params.data() + k, layer.bias.size(), layer.bias.data());
        k += static_cast<size_t>(layer.bias.size());
    }
}

bool QNetwork::all_finite() const {
    for (const DenseLayer& layer : layers_) {
        if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
            return false;
        }
    }
    return true;
}

std::vector<double> flatten(const NetworkGradients& gradients) {
    std::vector<double> out;
    for (const DenseLayer& layer : gradients.layers) {
        append(out, layer);
    }
    return out;
}

Optimizer::Optimizer(const QNetwork& net, OptimizerConfig config) : config_(config) {
    if (!(config_.learning_rate > 0)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    for (const DenseLayer& layer : net.layers()) {
        DenseLayer zero{Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()),
                        Eigen::VectorXd::Zero(layer.bias.size())};
        m_.push_back(zero);
        v_.push_back(zero);
    }
}

void Optimizer::step(QNetwork& net, const NetworkGradients& gradients) {
    auto& layers = net.mutable_layers();
    if (gradients.layers.size() != layers.size() || m_.size() != layers.size()) {
        throw std::invalid_argument("gradient shape does not match network");
    }
    t_++;
    const double lr = config_.learning_rate;
    if (config_.kind == OptimizerKind::momentum) {
        for (size_t l = 0; l < layers.size(); l++) {
            m_[l].weight = config_.beta1 * m_[l].weight + gradients.layers[l].weight;
            m_[l].bias = config_.beta1 * m_[l].bias + gradients.layers[l].bias;
            layers[l].weight -= lr * m_[l].weight;
            layers[l].bias -= lr * m_[l].bias;
        }
        return;
    }
    const double b1 = config_.beta1, b2 = config_.beta2, eps = config_.epsilon;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
        param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    };
    for (size_t l = 0; l < layers.size(); l++) {
        update(layers[l].weight, m_[l].weight, v_[l].weight, gradients.layers[l].weight);
        update(layers[l].bias, m_[l].bias, v_[l].bias, gradients.layers[l].bias);
    }
}

double td_target(double reward, bool done, double gamma, double max_next_q) {
    return done ? reward : reward + gamma * max_next_q;
}

size_t argmax_action(const Eigen::VectorXd& q) {
    if (q.size() == 0) {
        throw std::invalid_argument("empty Q-vector");
    }
    size_t best = 0;
    for (Eigen::Index i = 0; i < q.size(); i++) {
        if (std::isnan(q[i])) {
            throw std::domain_error("Q-vector contains NaN");
        }
        if (q[i] > q[static_cast<Eigen::Index>(best)]) {
            best = static_cast<size_t>(i);
        }
    }
    return best;
}

}  // namespace qadv
