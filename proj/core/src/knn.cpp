#include "wemstab/knn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wemstab/errors.hpp"
#include "wemstab/parallel.hpp"

namespace wemstab {

NeighborTable::NeighborTable(std::string space_id, int k, std::vector<std::string> sorted_vocab,
                             std::vector<std::uint32_t> flat_neighbors)
    : space_id_(std::move(space_id)), k_(k), vocab_(std::move(sorted_vocab)),
      flat_(std::move(flat_neighbors)) {
    if (k_ < 1) throw ValidationError("neighbor table: k must be >= 1");
    if (vocab_.size() < 2) throw ValidationError("neighbor table: vocabulary too small");
    if (static_cast<std::size_t>(k_) > vocab_.size() - 1) {
        throw ValidationError("neighbor table: k exceeds |vocab| - 1");
    }
    if (flat_.size() != vocab_.size() * static_cast<std::size_t>(k_)) {
        throw ValidationError("neighbor table: neighbor matrix shape mismatch");
    }
    if (!std::is_sorted(vocab_.begin(), vocab_.end())) {
        throw ValidationError("neighbor table: vocabulary must be sorted");
    }
    index_.reserve(vocab_.size());
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
        if (!index_.emplace(vocab_[i], i).second) {
            throw ValidationError("neighbor table: duplicate word '" + vocab_[i] + "'");
        }
    }
}

std::optional<std::size_t> NeighborTable::row_of(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

EmbeddingSpace normalize(const EmbeddingSpace& space) {
    std::vector<double> data;
    data.reserve(space.size() * space.dim());
    for (std::size_t i = 0; i < space.size(); ++i) {
        auto row = space.vector_of(i);
        double norm_sq = 0.0;
        for (double v : row) norm_sq += v * v;
        double inv = 1.0 / std::sqrt(norm_sq);
        for (double v : row) data.push_back(v * inv);
    }
    return EmbeddingSpace(space.metadata(), space.vocabulary(), std::move(data));
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw ValidationError("cosine: dimension mismatch (" + std::to_string(u.size()) +
                              " vs " + std::to_string(v.size()) + ")");
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw ValidationError("cosine: zero-norm vector");
    return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

NeighborTable top_k_all(const EmbeddingSpace& space,
                        const std::vector<std::string>& restricted_vocab, int k, int threads) {
    std::vector<std::string> vocab = restricted_vocab;
    std::sort(vocab.begin(), vocab.end());
    if (std::adjacent_find(vocab.begin(), vocab.end()) != vocab.end()) {
        throw ValidationError("top_k_all: duplicate word in restricted vocabulary");
    }
    const std::size_t n = vocab.size();
    if (k < 1 || static_cast<std::size_t>(k) > n - 1 || n < 2) {
        throw ValidationError("top_k_all: k out of range (k=" + std::to_string(k) +
                              ", |vocab|=" + std::to_string(n) + ")");
    }

    // Unit-normalized submatrix in restricted (sorted) order.
    const std::size_t d = space.dim();
    std::vector<double> rows(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = space.row_of(vocab[i]);
        if (!r) throw ValidationError("top_k_all: word absent from space: '" + vocab[i] + "'");
        auto src = space.vector_of(*r);
        double norm_sq = 0.0;
        for (double v : src) norm_sq += v * v;
        double inv = 1.0 / std::sqrt(norm_sq);
        for (std::size_t j = 0; j < d; ++j) rows[i * d + j] = src[j] * inv;
    }

    const auto uk = static_cast<std::size_t>(k);
    std::vector<std::uint32_t> flat(n * uk);
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> sims(n);
        std::vector<std::uint32_t> order(n - 1);
        for (std::size_t q = begin; q < end; ++q) {
            const double* qrow = rows.data() + q * d;
            for (std::size_t j = 0; j < n; ++j) {
                const double* r = rows.data() + j * d;
                double dot = 0.0;
                for (std::size_t t = 0; t < d; ++t) dot += qrow[t] * r[t];
                sims[j] = dot;
            }
            std::size_t m = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != q) order[m++] = static_cast<std::uint32_t>(j);
            }
            // Similarity descending, then word (== index) ascending.
            auto better = [&](std::uint32_t a, std::uint32_t b) {
                if (sims[a] != sims[b]) return sims[a] > sims[b];
                return a < b;
            };
            std::partial_sort(order.begin(), order.begin() + k, order.end(), better);
            std::copy(order.begin(), order.begin() + k, flat.begin() + q * uk);
        }
    });

    return NeighborTable(space.metadata().source_label, k, std::move(vocab), std::move(flat));
}

namespace {

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

} // namespace

void save_table_cache(const NeighborTable& table, const EmbeddingSpace& space,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "k " << table.k() << " vocab " << table.size() << " digest "
        << digest_hex(space.content_digest()) << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.vocab()[i] << '\t';
        auto nbrs = table.neighbors_of(i);
        for (std::size_t j = 0; j < nbrs.size(); ++j) {
            if (j) out << ',';
            out << table.vocab()[nbrs[j]];
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failure on: " + path);
}

std::optional<NeighborTable> try_load_table_cache(const std::string& path,
                                                  const EmbeddingSpace& space,
                                                  const std::vector<std::string>& restricted_vocab,
                                                  int k) {
    std::ifstream in(path);
    if (!in) return std::nullopt;

    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    std::istringstream header(line);
    std::string kw_k, kw_vocab, kw_digest, digest;
    long long file_k = 0, file_n = 0;
    if (!(header >> kw_k >> file_k >> kw_vocab >> file_n >> kw_digest >> digest) ||
        kw_k != "k" || kw_vocab != "vocab" || kw_digest != "digest") {
        return std::nullopt;
    }
    if (file_k != k || digest != digest_hex(space.content_digest())) return std::nullopt;

    std::vector<std::string> vocab = restricted_vocab;
    std::sort(vocab.begin(), vocab.end());
    if (static_cast<std::size_t>(file_n) != vocab.size()) return std::nullopt;

    std::unordered_map<std::string, std::uint32_t> index;
    index.reserve(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        index.emplace(vocab[i], static_cast<std::uint32_t>(i));
    }

    const auto uk = static_cast<std::size_t>(k);
    std::vector<std::uint32_t> flat(vocab.size() * uk);
    std::vector<bool> seen(vocab.size(), false);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (row >= vocab.size()) return std::nullopt;
        auto tab = line.find('\t');
        if (tab == std::string::npos) return std::nullopt;
        if (line.compare(0, tab, vocab[row]) != 0) return std::nullopt;
        std::size_t pos = tab + 1;
        for (std::size_t j = 0; j < uk; ++j) {
            std::size_t comma = line.find(',', pos);
            std::size_t end = (comma == std::string::npos) ? line.size() : comma;
            auto it = index.find(line.substr(pos, end - pos));
            if (it == index.end() || it->second == row) return std::nullopt;
            if (seen[it->second]) return std::nullopt; // duplicate within the list
            seen[it->second] = true;
            flat[row * uk + j] = it->second;
            if (j + 1 < uk) {
                if (comma == std::string::npos) return std::nullopt;
                pos = comma + 1;
            } else if (comma != std::string::npos) {
                return std::nullopt; // more than k neighbors
            }
        }
        for (std::size_t j = 0; j < uk; ++j) seen[flat[row * uk + j]] = false;
        ++row;
    }
    if (row != vocab.size()) return std::nullopt;
    return NeighborTable(space.metadata().source_label, k, std::move(vocab), std::move(flat));
}

NeighborTable top_k_all_cached(const EmbeddingSpace& space,
                               const std::vector<std::string>& restricted_vocab, int k,
                               const std::string& cache_path, int threads) {
    if (auto cached = try_load_table_cache(cache_path, space, restricted_vocab, k)) {
        return std::move(*cached);
    }
    NeighborTable table = top_k_all(space, restricted_vocab, k, threads);
    save_table_cache(table, space, cache_path);
    return table;
}

} // namespace wemstab
