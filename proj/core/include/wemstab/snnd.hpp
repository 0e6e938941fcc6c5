#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wemstab/knn.hpp"

namespace wemstab {

// Shared-nearest-neighbor density clustering parameters. Thresholds are
// inclusive (>=) by default; strict_thresholds switches both to >. Weights
// never exceed knn_size, so delta_sim above knn_size yields an empty graph.
struct SnndParams {
    int knn_size = 20;
    int delta_sim = 6;
    int delta_degree = 10;
    bool strict_thresholds = false;
};

// Undirected SNN graph: nodes are the table vocabulary (sorted), an edge
// (u,v) carries weight |KNN(u) ∩ KNN(v)| and exists iff the weight passes
// delta_sim. Adjacency lists are ordered by neighbor index.
struct SnnGraph {
    struct Edge {
        std::uint32_t to;
        std::int32_t weight;
    };
    std::vector<std::string> nodes;
    std::vector<std::vector<Edge>> adjacency;

    std::size_t degree(std::size_t node) const { return adjacency[node].size(); }
    std::size_t edge_count() const;
};

enum class NodeRole : std::uint8_t { core, non_core, noise };

// Cluster assignment: every word carries either a cluster id or kNoise.
// Cluster ids are dense, ordered by each cluster's lexicographically
// smallest core word.
struct Clustering {
    static constexpr std::int32_t kNoise = -1;
    std::vector<std::string> words; // sorted
    std::vector<std::int32_t> label;
    std::vector<NodeRole> role;

    std::size_t cluster_count() const;
};

// |KNN(u) ∩ KNN(v)| as a set-intersection count.
int snn_similarity(const std::string& u, const std::string& v, const NeighborTable& table);

// Requires params.knn_size == table.k. threads <= 0 uses hardware
// concurrency; the graph does not depend on it.
SnnGraph build_snn_graph(const NeighborTable& table, const SnndParams& params,
                         int threads = 0);

// Core = degree passes delta_degree; clusters are connected components of
// the core-induced subgraph; non-core nodes join the cluster of their
// strongest-linked core neighbor (ties to the lower cluster id); non-core
// nodes without a core neighbor are noise.
Clustering snnd_cluster(const SnnGraph& graph, const SnndParams& params);

// Fraction of C1's co-clustered pairs that stay co-clustered in every other
// clustering. All clusterings must cover the same words. Returns nullopt
// (undefined, distinct from 0) when C1 has no co-clustered pair; a single
// clustering with a non-empty baseline yields 1.0.
std::optional<double> clustering_agreement(const std::vector<const Clustering*>& clusterings);

} // namespace wemstab
