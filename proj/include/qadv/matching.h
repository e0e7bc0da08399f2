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

#ifndef QADV_MATCHING_H
#define QADV_MATCHING_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qadv/lattice.h"
#include "qadv/pauli.h"
#include "qadv/rng.h"

namespace qadv {

struct Correction {
    size_t qubit;
    Pauli pauli;
    bool operator==(const Correction&) const = default;
};

struct MatchingEdge {
    size_t u;
    size_t v;
    double weight;
    std::optional<size_t> qubit;  // empty for boundary-boundary edges
};

/// Matching graph for one Pauli error type. Nodes [0, num_detectors) are the
/// stabilizers that detect this error type; the remaining nodes are boundary
/// nodes, one per data qubit covered by a single such stabilizer. Boundary
/// nodes form a clique of weight-0 edges.
class MatchingGraph {
   public:
    /// `qubit_weights[q]` is the weight of the edge that corrects qubit q.
    MatchingGraph(const Lattice& lattice, Pauli error_type, std::span<const double> qubit_weights);

    Pauli error_type() const { return error_type_; }
    size_t num_detectors() const { return stabilizer_ids_.size(); }
    size_t num_boundary_nodes() const { return num_nodes_ - stabilizer_ids_.size(); }
    size_t num_nodes() const { return num_nodes_; }
    const std::vector<MatchingEdge>& edges() const { return edges_; }
    const std::vector<double>& qubit_weights() const { return qubit_weights_; }

    /// Global stabilizer index of a detector node.
    size_t stabilizer_of(size_t node) const { return stabilizer_ids_[node]; }
    /// Detector node of a global stabilizer index, or -1 if the stabilizer
    /// belongs to the other graph.
    int node_of_stabilizer(size_t stabilizer) const { return node_of_stabilizer_[stabilizer]; }

    /// Detector nodes flipped in a full syndrome.
    std::vector<size_t> defects(const Syndrome& syndrome) const;

    /// Shortest-path metric between detectors, and from a detector to the
    /// nearest boundary node.
    double distance(size_t a, size_t b) const { return pair_distance_[a * num_detectors() + b]; }
    double boundary_distance(size_t a) const { return boundary_distance_[a]; }
    const std::vector<size_t>& path_qubits(size_t a, size_t b) const { return pair_path_[a * num_detectors() + b]; }
    const std::vector<size_t>& boundary_path_qubits(size_t a) const { return boundary_path_[a]; }

   private:
    void compute_paths();

    Pauli error_type_;
    size_t num_nodes_ = 0;
    std::vector<size_t> stabilizer_ids_;
    std::vector<int> node_of_stabilizer_;
    std::vector<MatchingEdge> edges_;
    std::vector<double> qubit_weights_;
    std::vector<std::vector<std::pair<size_t, size_t>>> adjacency_;  // (neighbour, edge index)
    std::vector<double> pair_distance_;
    std::vector<std::vector<size_t>> pair_path_;
    std::vector<double> boundary_distance_;
    std::vector<std::vector<size_t>> boundary_path_;
};

/// graph_x corrects X errors (nodes are Z-type stabilizers); graph_z corrects
/// Z errors. Y errors show up in both.
struct MatchingGraphs {
    MatchingGraph graph_x;
    MatchingGraph graph_z;
};

/// Per-qubit edge weights for both graphs (length d*d each). Unit weights
/// when omitted. Throws std::invalid_argument on negative weights.
MatchingGraphs build_matching_graphs(
    const Lattice& lattice,
    std::optional<std::pair<std::vector<double>, std::vector<double>>> weights = std::nullopt);

/// Replaces every qubit edge weight with an independent N(1, sigma^2) draw,
/// floored at 1e-6. Boundary-boundary edges stay at 0.
MatchingGraphs miscalibrate_weights(const MatchingGraphs& graphs, const Lattice& lattice, double sigma, Rng& rng);

inline constexpr double kMiscalibrationFloor = 1e-6;

enum class MatchingAlgorithm { automatic, exhaustive, blossom };

/// Defects up to this count are matched by exact subset dynamic programming;
/// larger sets go through the blossom solver.
inline constexpr size_t kExhaustiveDefectLimit = 12;

/// A min-weight pairing of defects where each defect is either paired with
/// another (partner index) or sent to the boundary (partner -1).
struct DefectMatching {
    std::vector<int> partner;
    double weight = 0.0;
};

/// Min-weight perfect matching over k defects plus k boundary copies, given
/// the k x k pair costs (row-major) and the per-defect boundary costs.
DefectMatching match_defects(
    size_t k,
    std::span<const double> pair_cost,
    std::span<const double> boundary_cost,
    MatchingAlgorithm algorithm = MatchingAlgorithm::automatic);

struct WeightedEdge {
    int u;
    int v;
    int64_t weight;
};

/// Maximum-weight matching on a general graph (Edmonds' blossom algorithm
/// with Galil's O(n^3) dual updates). Returns mate[v] or -1. Integer weights
/// keep all dual arithmetic exact.
std::vector<int> max_weight_matching(size_t num_vertices, const std::vector<WeightedEdge>& edges, bool max_cardinality);

/// Correction that clears every defect in `defect_nodes` along a
/// minimum-weight matching.
std::vector<Correction> mwpm_decode(
    const MatchingGraph& graph,
    std::span<const size_t> defect_nodes,
    MatchingAlgorithm algorithm = MatchingAlgorithm::automatic);

/// Total weight of the matching chosen for the defects.
double mwpm_weight(
    const MatchingGraph& graph,
    std::span<const size_t> defect_nodes,
    MatchingAlgorithm algorithm = MatchingAlgorithm::automatic);

}  // namespace qadv

#endif  // QADV_MATCHING_H
