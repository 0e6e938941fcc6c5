#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wemstab {

// Trainer provenance carried by an embedding space. The swept training
// parameters (dimensions, epochs, window) live here.
struct SpaceMetadata {
    std::string method_name;
    std::optional<long long> seed;
    std::size_t dimensions = 0;
    std::optional<int> epochs;
    std::optional<int> window;
    std::string source_label;
};

// One trained set of word vectors: a vocabulary plus a dense |V| x d matrix.
// Immutable after construction; the constructor enforces:
//   - dimensions > 0 and |vocabulary| >= 2
//   - no duplicate words
//   - every entry finite, no row with zero L2 norm
// Instances are safe to share across threads read-only.
class EmbeddingSpace {
public:
    EmbeddingSpace(SpaceMetadata metadata, std::vector<std::string> vocabulary,
                   std::vector<double> row_major_vectors);

    const SpaceMetadata& metadata() const { return meta_; }
    const std::vector<std::string>& vocabulary() const { return vocab_; }
    std::size_t size() const { return vocab_.size(); }
    std::size_t dim() const { return meta_.dimensions; }

    std::span<const double> vector_of(std::size_t row) const {
        return {data_.data() + row * meta_.dimensions, meta_.dimensions};
    }
    std::optional<std::size_t> row_of(const std::string& word) const;
    bool contains(const std::string& word) const { return index_.count(word) != 0; }

    // FNV-1a over the vocabulary and the raw vector bytes; used to tie
    // neighbor-table cache files to the exact space content.
    std::uint64_t content_digest() const;

private:
    SpaceMetadata meta_;
    std::vector<std::string> vocab_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class SpaceFormat { word2vec_text, glove_text };

// Parses "word2vec-text" / "glove-text"; throws ValidationError otherwise.
SpaceFormat parse_space_format(std::string_view name);

// word2vec-text: header "<count> <dim>", then one "word v1 .. vd" row per
// word. glove-text: the same rows with no header, d inferred from the first
// row. Rejects malformed headers, inconsistent row widths, duplicate words,
// non-finite values, zero-norm vectors and empty files.
EmbeddingSpace load_space(const std::string& path, SpaceFormat format);

// Writes word2vec-text with shortest round-trip number formatting, so
// load_space(save_space(s)) reproduces the vectors exactly.
void save_space(const EmbeddingSpace& space, const std::string& path);

// Sorted (lexicographic) list of words present in every space.
// Requires >= 2 spaces; an empty intersection is an error.
std::vector<std::string> intersect_vocab(const std::vector<const EmbeddingSpace*>& spaces);

struct AverageResult {
    EmbeddingSpace space;
    std::vector<std::string> dropped_words; // shared words whose mean vector was zero
};

// Element-wise mean over the shared vocabulary (meta-embedding). All inputs
// must have equal dimension. Words whose averaged vector has exactly zero
// norm are dropped and reported.
AverageResult average_spaces(const std::vector<const EmbeddingSpace*>& spaces);

} // namespace wemstab
