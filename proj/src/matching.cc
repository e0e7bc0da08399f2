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

#include "qadv/matching.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace qadv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool detects(StabilizerType type, Pauli error_type) {
    // Z-type checks see X errors and vice versa.
    return (type == StabilizerType::Z) == (error_type == Pauli::X);
}

}  // namespace

MatchingGraph::MatchingGraph(const Lattice& lattice, Pauli error_type, std::span<const double> qubit_weights)
    : error_type_(error_type), qubit_weights_(qubit_weights.begin(), qubit_weights.end()) {
    if (error_type != Pauli::X && error_type != Pauli::Z) {
        throw std::invalid_argument("matching graphs exist only for X and Z errors");
    }
    if (qubit_weights.size() != lattice.num_qubits()) {
        throw std::invalid_argument("need one edge weight per data qubit");
    }
    for (double w : qubit_weights) {
        if (!(w >= 0.0)) {
            throw std::invalid_argument("matching edge weights must be non-negative");
        }
    }
    node_of_stabilizer_.assign(lattice.num_stabilizers(), -1);
    for (size_t s = 0; s < lattice.num_stabilizers(); s++) {
        if (detects(lattice.stabilizer(s).type, error_type)) {
            node_of_stabilizer_[s] = static_cast<int>(stabilizer_ids_.size());
            stabilizer_ids_.push_back(s);
        }
    }
    size_t next_node = stabilizer_ids_.size();
    std::vector<size_t> boundary_nodes;
    for (size_t q = 0; q < lattice.num_qubits(); q++) {
        std::vector<size_t> touching;
        for (size_t s : lattice.stabilizers_of_qubit(q)) {
            if (node_of_stabilizer_[s] >= 0) {
                touching.push_back(static_cast<size_t>(node_of_stabilizer_[s]));
            }
        }
        if (touching.size() == 2) {
            edges_.push_back({touching[0], touching[1], qubit_weights[q], q});
        } else if (touching.size() == 1) {
            boundary_nodes.push_back(next_node);
            edges_.push_back({touching[0], next_node, qubit_weights[q], q});
            next_node++;
        } else {
            throw std::logic_error("data qubit " + std::to_string(q) + " is not covered by 1 or 2 checks");
        }
    }
    for (size_t i = 0; i < boundary_nodes.size(); i++) {
        for (size_t j = i + 1; j < boundary_nodes.size(); j++) {
            edges_.push_back({boundary_nodes[i], boundary_nodes[j], 0.0, std::nullopt});
        }
    }
    num_nodes_ = next_node;
    adjacency_.assign(num_nodes_, {});
    for (size_t e = 0; e < edges_.size(); e++) {
        adjacency_[edges_[e].u].emplace_back(edges_[e].v, e);
        adjacency_[edges_[e].v].emplace_back(edges_[e].u, e);
    }
    compute_paths();
}

void MatchingGraph::compute_paths() {
    size_t k = num_detectors();
    pair_distance_.assign(k * k, 0.0);
    pair_path_.assign(k * k, {});
    boundary_distance_.assign(k, kInf);
    boundary_path_.assign(k, {});

    using Item = std::pair<double, size_t>;
    for (size_t source = 0; source < k; source++) {
        std::vector<double> dist(num_nodes_, kInf);
        std::vector<int> via_edge(num_nodes_, -1);
        std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
        dist[source] = 0.0;
        frontier.emplace(0.0, source);
        while (!frontier.empty()) {
            auto [du, u] = frontier.top();
            frontier.pop();
            if (du > dist[u]) {
                continue;
            }
            for (auto [v, e] : adjacency_[u]) {
                double dv = du + edges_[e].weight;
                if (dv < dist[v]) {
                    dist[v] = dv;
                    via_edge[v] = static_cast<int>(e);
                    frontier.emplace(dv, v);
                }
            }
        }
        auto trace = [&](size_t target) {
            std::vector<uint8_t> parity(qubit_weights_.size(), 0);
            size_t node = target;
            while (node != source) {
                const MatchingEdge& edge = edges_[static_cast<size_t>(via_edge[node])];
                if (edge.qubit) {
                    parity[*edge.qubit] ^= 1;
                }
                node = edge.u == node ? edge.v : edge.u;
            }
            std::vector<size_t> qubits;
            for (size_t q = 0; q < parity.size(); q++) {
                if (parity[q]) {
                    qubits.push_back(q);
                }
            }
            return qubits;
        };
        for (size_t target = 0; target < k; target++) {
            pair_distance_[source * k + target] = dist[target];
            if (target != source) {
                pair_path_[source * k + target] = trace(target);
            }
        }
        size_t best = num_nodes_;
        for (size_t b = k; b < num_nodes_; b++) {
            if (dist[b] < boundary_distance_[source]) {
                boundary_distance_[source] = dist[b];
                best = b;
            }
        }
        if (best < num_nodes_) {
            boundary_path_[source] = trace(best);
        }
    }
}

std::vector<size_t> MatchingGraph::defects(const Syndrome& syndrome) const {
    std::vector<size_t> out;
    for (size_t node = 0; node < stabilizer_ids_.size(); node++) {
        if (syndrome[stabilizer_ids_[node]]) {
            out.push_back(node);
        }
    }
    return out;
}

MatchingGraphs build_matching_graphs(
    const Lattice& lattice, std::optional<std::pair<std::vector<double>, std::vector<double>>> weights) {
    std::vector<double> wx(lattice.num_qubits(), 1.0);
    std::vector<double> wz(lattice.num_qubits(), 1.0);
    if (weights) {
        wx = weights->first;
        wz = weights->second;
    }
    return MatchingGraphs{MatchingGraph(lattice, Pauli::X, wx), MatchingGraph(lattice, Pauli::Z, wz)};
}

MatchingGraphs miscalibrate_weights(const MatchingGraphs& graphs, const Lattice& lattice, double sigma, Rng& rng) {
    if (sigma < 0) {
        throw std::invalid_argument("sigma must be non-negative");
    }
    auto draw = [&](const MatchingGraph& graph) {
        std::vector<double> w(graph.qubit_weights().size());
        for (double& x : w) {
            x = sigma == 0.0 ? 1.0 : std::max(kMiscalibrationFloor, normal(rng, 1.0, sigma));
        }
        return w;
    };
    std::vector<double> wx = draw(graphs.graph_x);
    std::vector<double> wz = draw(graphs.graph_z);
    return build_matching_graphs(lattice, std::make_pair(std::move(wx), std::move(wz)));
}

namespace {

DefectMatching match_exhaustive(size_t k, std::span<const double> pair_cost, std::span<const double> boundary_cost) {
    if (k > 24) {
        throw std::invalid_argument("exhaustive matching limited to 24 defects");
    }
    size_t full = (size_t{1} << k) - 1;
    std::vector<double> best(full + 1, kInf);
    std::vector<int> choice(full + 1, -2);
    best[0] = 0.0;
    // best[mask] = cheapest way to resolve the defects in mask; the lowest set
    // bit is always resolved first so every pairing is visited exactly once.
    for (size_t mask = 1; mask <= full; mask++) {
        size_t i = static_cast<size_t>(std::countr_zero(mask));
        size_t rest = mask & ~(size_t{1} << i);
        double to_boundary = best[rest] + boundary_cost[i];
        best[mask] = to_boundary;
        choice[mask] = -1;
        for (size_t j = i + 1; j < k; j++) {
            if (!(rest >> j & 1)) {
                continue;
            }
            double c = best[rest & ~(size_t{1} << j)] + pair_cost[i * k + j];
            if (c < best[mask]) {
                best[mask] = c;
                choice[mask] = static_cast<int>(j);
            }
        }
    }
    DefectMatching out;
    out.partner.assign(k, -1);
    out.weight = best[full];
    size_t mask = full;
    while (mask) {
        size_t i = static_cast<size_t>(std::countr_zero(mask));
        int j = choice[mask];
        mask &= ~(size_t{1} << i);
        if (j >= 0) {
            out.partner[i] = j;
            out.partner[static_cast<size_t>(j)] = static_cast<int>(i);
            mask &= ~(size_t{1} << j);
        }
    }
    return out;
}

DefectMatching match_blossom(size_t k, std::span<const double> pair_cost, std::span<const double> boundary_cost) {
    // Vertices [0, k) are defects, [k, 2k) their boundary copies.
    constexpr double kScale = 1048576.0;
    auto to_int = [&](double c) { return static_cast<int64_t>(std::llround(c * kScale)); };
    std::vector<std::pair<std::pair<int, int>, int64_t>> costs;
    int64_t max_cost = 0;
    for (size_t i = 0; i < k; i++) {
        for (size_t j = i + 1; j < k; j++) {
            int64_t c = to_int(pair_cost[i * k + j]);
            costs.push_back({{static_cast<int>(i), static_cast<int>(j)}, c});
            costs.push_back({{static_cast<int>(k + i), static_cast<int>(k + j)}, 0});
            max_cost = std::max(max_cost, c);
        }
        int64_t c = to_int(boundary_cost[i]);
        costs.push_back({{static_cast<int>(i), static_cast<int>(k + i)}, c});
        max_cost = std::max(max_cost, c);
    }
    std::vector<WeightedEdge> edges;
    edges.reserve(costs.size());
    for (auto& [uv, c] : costs) {
        edges.push_back({uv.first, uv.second, max_cost + 1 - c});
    }
    std::vector<int> mate = max_weight_matching(2 * k, edges, true);
    DefectMatching out;
    out.partner.assign(k, -1);
    for (size_t i = 0; i < k; i++) {
        int m = mate[i];
        if (m < 0) {
            throw std::logic_error("blossom matching left a defect unmatched");
        }
        if (static_cast<size_t>(m) < k) {
            out.partner[i] = m;
            if (static_cast<size_t>(m) > i) {
                out.weight += pair_cost[i * k + static_cast<size_t>(m)];
            }
        } else {
            out.weight += boundary_cost[i];
        }
    }
    return out;
}

}  // namespace

DefectMatching match_defects(
    size_t k, std::span<const double> pair_cost, std::span<const double> boundary_cost, MatchingAlgorithm algorithm) {
    if (pair_cost.size() != k * k || boundary_cost.size() != k) {
        throw std::invalid_argument("cost table sizes do not match defect count");
    }
    if (k == 0) {
        return {};
    }
    if (algorithm == MatchingAlgorithm::automatic) {
        algorithm = k <= kExhaustiveDefectLimit ? MatchingAlgorithm::exhaustive : MatchingAlgorithm::blossom;
    }
    return algorithm == MatchingAlgorithm::exhaustive ? match_exhaustive(k, pair_cost, boundary_cost)
                                                      : match_blossom(k, pair_cost, boundary_cost);
}

namespace {

DefectMatching match_on_graph(const MatchingGraph& graph, std::span<const size_t> defects, MatchingAlgorithm algorithm) {
    size_t k = defects.size();
    std::vector<double> pair(k * k, 0.0);
    std::vector<double> boundary(k, 0.0);
    for (size_t i = 0; i < k; i++) {
        boundary[i] = graph.boundary_distance(defects[i]);
        for (size_t j = 0; j < k; j++) {
            pair[i * k + j] = graph.distance(defects[i], defects[j]);
        }
    }
    return match_defects(k, pair, boundary, algorithm);
}

}  // namespace

std::vector<Correction> mwpm_decode(
    const MatchingGraph& graph, std::span<const size_t> defect_nodes, MatchingAlgorithm algorithm) {
    DefectMatching matching = match_on_graph(graph, defect_nodes, algorithm);
    std::vector<uint8_t> parity(graph.qubit_weights().size(), 0);
    for (size_t i = 0; i < defect_nodes.size(); i++) {
        int j = matching.partner[i];
        if (j < 0) {
            for (size_t q : graph.boundary_path_qubits(defect_nodes[i])) {
                parity[q] ^= 1;
            }
        } else if (static_cast<size_t>(j) > i) {
            for (size_t q : graph.path_qubits(defect_nodes[i], defect_nodes[static_cast<size_t>(j)])) {
                parity[q] ^= 1;
            }
        }
    }
    std::vector<Correction> corrections;
    for (size_t q = 0; q < parity.size(); q++) {
        if (parity[q]) {
            corrections.push_back({q, graph.error_type()});
        }
    }
    return corrections;
}

double mwpm_weight(const MatchingGraph& graph, std::span<const size_t> defect_nodes, MatchingAlgorithm algorithm) {
    return match_on_graph(graph, defect_nodes, algorithm).weight;
}

}  // namespace qadv
