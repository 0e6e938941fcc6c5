#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "wemstab/embedding.hpp"

namespace wemstab {

// Per-word ranked top-k cosine neighbor lists over one space, restricted to
// a vocabulary subset. The restricted vocabulary is stored sorted, so index
// order equals lexicographic word order. Each list holds exactly k distinct
// indices, never the query row, ordered by (similarity descending, word
// ascending). Search is exact and bit-identical for any worker count.
class NeighborTable {
public:
    NeighborTable(std::string space_id, int k, std::vector<std::string> sorted_vocab,
                  std::vector<std::uint32_t> flat_neighbors);

    const std::string& space_id() const { return space_id_; }
    int k() const { return k_; }
    const std::vector<std::string>& vocab() const { return vocab_; }
    std::size_t size() const { return vocab_.size(); }

    std::span<const std::uint32_t> neighbors_of(std::size_t row) const {
        return {flat_.data() + row * static_cast<std::size_t>(k_),
                static_cast<std::size_t>(k_)};
    }
    std::optional<std::size_t> row_of(const std::string& word) const;

    bool same_vocab(const NeighborTable& other) const { return vocab_ == other.vocab_; }

private:
    std::string space_id_;
    int k_;
    std::vector<std::string> vocab_;
    std::vector<std::uint32_t> flat_; // size() * k, ranked per row
    std::unordered_map<std::string, std::size_t> index_;
};

// Returns a copy of the space with every row scaled to unit L2 norm.
// Dot products of the result reproduce cosine rankings of the input.
EmbeddingSpace normalize(const EmbeddingSpace& space);

// dot(u,v) / (|u||v|), clamped to [-1,1]. Dimension mismatch and zero norms
// are errors.
double cosine(std::span<const double> u, std::span<const double> v);

// Exact top-k cosine neighbors for every word of restricted_vocab within
// restricted_vocab \ {word}. restricted_vocab must be a duplicate-free
// subset of the space vocabulary and 1 <= k <= |restricted_vocab| - 1.
// Ties are broken by lexicographic word order; the query word is excluded.
// threads <= 0 uses hardware concurrency; the result does not depend on it.
NeighborTable top_k_all(const EmbeddingSpace& space,
                        const std::vector<std::string>& restricted_vocab, int k,
                        int threads = 0);

// Cache file: "k <k> vocab <n> digest <hex>" header, then per word a
// "word<TAB>n1,n2,...,nk" row. The digest pins the source space content;
// a stale or mismatched cache reads as nullopt, never as an error.
void save_table_cache(const NeighborTable& table, const EmbeddingSpace& space,
                      const std::string& path);
std::optional<NeighborTable> try_load_table_cache(const std::string& path,
                                                  const EmbeddingSpace& space,
                                                  const std::vector<std::string>& restricted_vocab,
                                                  int k);

// top_k_all with a read-through cache: loads when valid, otherwise computes
// and rewrites the cache file.
NeighborTable top_k_all_cached(const EmbeddingSpace& space,
                               const std::vector<std::string>& restricted_vocab, int k,
                               const std::string& cache_path, int threads = 0);

} // namespace wemstab
