#include "wemstab/snnd.hpp"

#include <algorithm>
#include <numeric>

#include "wemstab/errors.hpp"
#include "wemstab/parallel.hpp"

namespace wemstab {

std::size_t SnnGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& adj : adjacency) twice += adj.size();
    return twice / 2;
}

std::size_t Clustering::cluster_count() const {
    std::int32_t max_id = -1;
    for (auto l : label) max_id = std::max(max_id, l);
    return static_cast<std::size_t>(max_id + 1);
}

namespace {

// Sorted copies of the neighbor lists make pair intersections a linear merge.
std::vector<std::uint32_t> sorted_lists(const NeighborTable& table) {
    const auto uk = static_cast<std::size_t>(table.k());
    std::vector<std::uint32_t> lists(table.size() * uk);
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto nbrs = table.neighbors_of(i);
        std::copy(nbrs.begin(), nbrs.end(), lists.begin() + i * uk);
        std::sort(lists.begin() + i * uk, lists.begin() + (i + 1) * uk);
    }
    return lists;
}

int merge_intersection(const std::uint32_t* a, const std::uint32_t* b, std::size_t k) {
    std::size_t ia = 0, ib = 0;
    int shared = 0;
    while (ia < k && ib < k) {
        if (a[ia] == b[ib]) {
            ++shared;
            ++ia;
            ++ib;
        } else if (a[ia] < b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
    }
    return shared;
}

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

int snn_similarity(const std::string& u, const std::string& v, const NeighborTable& table) {
    auto ru = table.row_of(u);
    auto rv = table.row_of(v);
    if (!ru) throw ValidationError("snn similarity: word '" + u + "' missing from table");
    if (!rv) throw ValidationError("snn similarity: word '" + v + "' missing from table");
    auto a = table.neighbors_of(*ru);
    std::vector<std::uint32_t> sa(a.begin(), a.end());
    std::sort(sa.begin(), sa.end());
    auto b = table.neighbors_of(*rv);
    std::vector<std::uint32_t> sb(b.begin(), b.end());
    std::sort(sb.begin(), sb.end());
    return merge_intersection(sa.data(), sb.data(), sa.size());
}

SnnGraph build_snn_graph(const NeighborTable& table, const SnndParams& params, int threads) {
    if (params.knn_size < 1) throw ValidationError("snn graph: knn_size must be >= 1");
    if (params.delta_sim < 0) throw ValidationError("snn graph: delta_sim must be >= 0");
    if (params.knn_size != table.k()) {
        throw ValidationError("snn graph: knn_size " + std::to_string(params.knn_size) +
                              " does not match table k " + std::to_string(table.k()));
    }

    const std::size_t n = table.size();
    const auto uk = static_cast<std::size_t>(table.k());
    const auto lists = sorted_lists(table);

    // Upper-triangle edges per source node; workers own disjoint rows.
    std::vector<std::vector<SnnGraph::Edge>> upper(n);
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t u = begin; u < end; ++u) {
            const std::uint32_t* lu = lists.data() + u * uk;
            for (std::size_t v = u + 1; v < n; ++v) {
                int w = merge_intersection(lu, lists.data() + v * uk, uk);
                bool keep = params.strict_thresholds ? w > params.delta_sim
                                                     : w >= params.delta_sim;
                if (keep) {
                    upper[u].push_back({static_cast<std::uint32_t>(v), w});
                }
            }
        }
    });

    SnnGraph graph;
    graph.nodes = table.vocab();
    graph.adjacency.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (const auto& e : upper[u]) {
            graph.adjacency[u].push_back(e);
            graph.adjacency[e.to].push_back({static_cast<std::uint32_t>(u), e.weight});
        }
    }
    // Ascending-u insertion leaves adjacency[u] unsorted only across the
    // upper/lower boundary; restore index order.
    for (auto& adj : graph.adjacency) {
        std::sort(adj.begin(), adj.end(),
                  [](const SnnGraph::Edge& a, const SnnGraph::Edge& b) { return a.to < b.to; });
    }
    return graph;
}

Clustering snnd_cluster(const SnnGraph& graph, const SnndParams& params) {
    if (params.delta_degree < 0) throw ValidationError("snnd: delta_degree must be >= 0");
    const std::size_t n = graph.nodes.size();
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto deg = static_cast<std::int64_t>(graph.degree(i));
        core[i] = params.strict_thresholds ? deg > params.delta_degree
                                           : deg >= params.delta_degree;
    }

    // Components of the core-induced subgraph.
    UnionFind uf(n);
    for (std::size_t u = 0; u < n; ++u) {
        if (!core[u]) continue;
        for (const auto& e : graph.adjacency[u]) {
            if (e.to > u && core[e.to]) uf.unite(static_cast<std::uint32_t>(u), e.to);
        }
    }

    // Number components by their smallest core member; nodes are sorted, so
    // the smallest index is the lexicographically smallest word.
    std::vector<std::int32_t> component_id(n, Clustering::kNoise);
    std::int32_t next_id = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i]) continue;
        std::uint32_t root = uf.find(static_cast<std::uint32_t>(i));
        if (component_id[root] == Clustering::kNoise) component_id[root] = next_id++;
    }

    Clustering result;
    result.words = graph.nodes;
    result.label.assign(n, Clustering::kNoise);
    result.role.assign(n, NodeRole::noise);
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) {
            result.label[i] = component_id[uf.find(static_cast<std::uint32_t>(i))];
            result.role[i] = NodeRole::core;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) continue;
        std::int32_t best_label = Clustering::kNoise;
        std::int32_t best_weight = -1;
        for (const auto& e : graph.adjacency[i]) {
            if (!core[e.to]) continue;
            std::int32_t cluster = result.label[e.to];
            if (e.weight > best_weight ||
                (e.weight == best_weight && cluster < best_label)) {
                best_weight = e.weight;
                best_label = cluster;
            }
        }
        if (best_label != Clustering::kNoise) {
            result.label[i] = best_label;
            result.role[i] = NodeRole::non_core;
        }
    }
    return result;
}

std::optional<double> clustering_agreement(const std::vector<const Clustering*>& clusterings) {
    if (clusterings.empty()) throw ValidationError("agreement needs at least 1 clustering");
    const Clustering& base = *clusterings[0];
    for (std::size_t c = 1; c < clusterings.size(); ++c) {
        if (clusterings[c]->words != base.words) {
            throw ValidationError("agreement: clusterings cover different vocabularies");
        }
    }

    // Baseline co-clustered pairs, grouped by cluster id.
    std::vector<std::vector<std::uint32_t>> groups(base.cluster_count());
    for (std::size_t i = 0; i < base.words.size(); ++i) {
        if (base.label[i] != Clustering::kNoise) {
            groups[base.label[i]].push_back(static_cast<std::uint32_t>(i));
        }
    }
    std::uint64_t baseline = 0;
    for (const auto& g : groups) {
        baseline += static_cast<std::uint64_t>(g.size()) * (g.size() - 1) / 2;
    }
    if (baseline == 0) return std::nullopt; // undefined, distinct from 0

    std::uint64_t preserved = 0;
    for (const auto& g : groups) {
        for (std::size_t a = 0; a < g.size(); ++a) {
            for (std::size_t b = a + 1; b < g.size(); ++b) {
                bool everywhere = true;
                for (std::size_t c = 1; c < clusterings.size(); ++c) {
                    const Clustering& other = *clusterings[c];
                    if (other.label[g[a]] == Clustering::kNoise ||
                        other.label[g[a]] != other.label[g[b]]) {
                        everywhere = false;
                        break;
                    }
                }
                preserved += everywhere;
            }
        }
    }
    return static_cast<double>(preserved) / static_cast<double>(baseline);
}

} // namespace wemstab
