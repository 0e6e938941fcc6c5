#include "wemstab/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wemstab/errors.hpp"
#include "wemstab/report.hpp"

namespace wemstab {

namespace {

std::uint64_t fnv1a_update(std::uint64_t h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Parses "word v1 .. vd" into word + values. Returns the number of values.
std::size_t parse_row(const std::string& line, std::string& word,
                      std::vector<double>& out, const std::string& path,
                      std::size_t lineno) {
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    const char* wstart = p;
    while (p < end && *p != ' ' && *p != '\t') ++p;
    word.assign(wstart, p);
    if (word.empty()) {
        throw ValidationError(path + ":" + std::to_string(lineno) + ": missing word");
    }
    std::size_t n = 0;
    while (true) {
        while (p < end && (*p == ' ' || *p == '\t')) ++p;
        if (p >= end) break;
        double v = 0.0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc{}) {
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": cannot parse vector component");
        }
        if (!std::isfinite(v)) {
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": non-finite value for word '" + word + "'");
        }
        out.push_back(v);
        ++n;
        p = next;
    }
    return n;
}

} // namespace

EmbeddingSpace::EmbeddingSpace(SpaceMetadata metadata, std::vector<std::string> vocabulary,
                               std::vector<double> row_major_vectors)
    : meta_(std::move(metadata)), vocab_(std::move(vocabulary)),
      data_(std::move(row_major_vectors)) {
    const std::string where = meta_.source_label.empty() ? "embedding space" : meta_.source_label;
    if (meta_.dimensions == 0) {
        throw ValidationError(where + ": dimension must be positive");
    }
    if (vocab_.size() < 2) {
        throw ValidationError(where + ": vocabulary must hold at least 2 words");
    }
    if (data_.size() != vocab_.size() * meta_.dimensions) {
        throw ValidationError(where + ": matrix shape does not match vocabulary and dimension");
    }
    index_.reserve(vocab_.size());
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
        if (!index_.emplace(vocab_[i], i).second) {
            throw ValidationError(where + ": duplicate word '" + vocab_[i] + "'");
        }
    }
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
        double norm_sq = 0.0;
        for (double v : vector_of(i)) {
            if (!std::isfinite(v)) {
                throw ValidationError(where + ": non-finite value for word '" + vocab_[i] + "'");
            }
            norm_sq += v * v;
        }
        if (norm_sq == 0.0) {
            throw ValidationError(where + ": zero-norm vector for word '" + vocab_[i] + "'");
        }
    }
}

std::optional<std::size_t> EmbeddingSpace::row_of(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t EmbeddingSpace::content_digest() const {
    std::uint64_t h = 1469598103934665603ull;
    std::uint64_t dims = meta_.dimensions;
    std::uint64_t n = vocab_.size();
    h = fnv1a_update(h, &dims, sizeof dims);
    h = fnv1a_update(h, &n, sizeof n);
    for (const auto& w : vocab_) {
        h = fnv1a_update(h, w.data(), w.size());
        h = fnv1a_update(h, "\n", 1);
    }
    h = fnv1a_update(h, data_.data(), data_.size() * sizeof(double));
    return h;
}

SpaceFormat parse_space_format(std::string_view name) {
    if (name == "word2vec-text") return SpaceFormat::word2vec_text;
    if (name == "glove-text") return SpaceFormat::glove_text;
    throw ValidationError("unknown embedding format '" + std::string(name) +
                          "' (expected word2vec-text or glove-text)");
}

EmbeddingSpace load_space(const std::string& path, SpaceFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open embedding file: " + path);

    std::string line;
    std::size_t lineno = 0;
    std::size_t declared_count = 0;
    std::size_t dim = 0;

    if (format == SpaceFormat::word2vec_text) {
        if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
        strip_cr(line);
        ++lineno;
        std::istringstream header(line);
        long long count_v = -1, dim_v = -1;
        std::string extra;
        if (!(header >> count_v >> dim_v) || (header >> extra) || count_v < 0 || dim_v <= 0) {
            throw ValidationError(path + ": malformed word2vec-text header '" + line + "'");
        }
        declared_count = static_cast<std::size_t>(count_v);
        dim = static_cast<std::size_t>(dim_v);
    }

    std::vector<std::string> vocab;
    std::vector<double> data;
    std::string word;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        std::size_t width = parse_row(line, word, data, path, lineno);
        if (dim == 0) {
            dim = width; // glove-text: inferred from the first row
        } else if (width != dim) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": row width " +
                                  std::to_string(width) + " != expected " + std::to_string(dim));
        }
        vocab.push_back(word);
    }
    if (in.bad()) throw IoError("read failure on: " + path);
    if (vocab.empty()) throw ValidationError(path + ": empty file");
    if (format == SpaceFormat::word2vec_text && vocab.size() != declared_count) {
        throw ValidationError(path + ": header declares " + std::to_string(declared_count) +
                              " words but file holds " + std::to_string(vocab.size()));
    }

    SpaceMetadata meta;
    meta.dimensions = dim;
    meta.source_label = path;
    return EmbeddingSpace(std::move(meta), std::move(vocab), std::move(data));
}

void save_space(const EmbeddingSpace& space, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << space.size() << ' ' << space.dim() << '\n';
    std::string row;
    for (std::size_t i = 0; i < space.size(); ++i) {
        row = space.vocabulary()[i];
        for (double v : space.vector_of(i)) {
            row += ' ';
            row += format_double(v);
        }
        row += '\n';
        out << row;
    }
    out.flush();
    if (!out) throw IoError("write failure on: " + path);
}

std::vector<std::string> intersect_vocab(const std::vector<const EmbeddingSpace*>& spaces) {
    if (spaces.size() < 2) {
        throw ValidationError("vocabulary intersection needs at least 2 spaces");
    }
    std::vector<std::string> shared;
    for (const auto& w : spaces[0]->vocabulary()) {
        bool everywhere = true;
        for (std::size_t s = 1; s < spaces.size(); ++s) {
            if (!spaces[s]->contains(w)) {
                everywhere = false;
                break;
            }
        }
        if (everywhere) shared.push_back(w);
    }
    if (shared.empty()) throw ValidationError("empty vocabulary intersection");
    std::sort(shared.begin(), shared.end());
    return shared;
}

AverageResult average_spaces(const std::vector<const EmbeddingSpace*>& input_spaces) {
    if (input_spaces.size() < 2) throw ValidationError("averaging needs at least 2 spaces");
    // Accumulate in content order, not argument order, so permuting the
    // arguments reproduces the result bit for bit.
    std::vector<std::pair<std::uint64_t, const EmbeddingSpace*>> keyed;
    keyed.reserve(input_spaces.size());
    for (const auto* s : input_spaces) keyed.emplace_back(s->content_digest(), s);
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<const EmbeddingSpace*> spaces;
    spaces.reserve(keyed.size());
    for (const auto& [digest, s] : keyed) spaces.push_back(s);
    const std::size_t dim = spaces[0]->dim();
    for (const auto* s : spaces) {
        if (s->dim() != dim) {
            throw ValidationError("dimension mismatch while averaging: " +
                                  std::to_string(s->dim()) + " != " + std::to_string(dim) +
                                  " (" + s->metadata().source_label + ")");
        }
    }
    std::vector<std::string> shared = intersect_vocab(spaces);

    std::vector<std::string> kept;
    std::vector<std::string> dropped;
    std::vector<double> data;
    kept.reserve(shared.size());
    data.reserve(shared.size() * dim);
    std::vector<double> mean(dim);
    for (const auto& w : shared) {
        std::fill(mean.begin(), mean.end(), 0.0);
        for (const auto* s : spaces) {
            auto row = s->vector_of(*s->row_of(w));
            for (std::size_t j = 0; j < dim; ++j) mean[j] += row[j];
        }
        double norm_sq = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            mean[j] /= static_cast<double>(spaces.size());
            norm_sq += mean[j] * mean[j];
        }
        if (norm_sq == 0.0) {
            dropped.push_back(w);
            continue;
        }
        kept.push_back(w);
        data.insert(data.end(), mean.begin(), mean.end());
    }
    if (kept.size() < 2) {
        throw ValidationError("averaging left fewer than 2 usable words (" +
                              std::to_string(dropped.size()) + " dropped as zero-norm)");
    }

    SpaceMetadata meta;
    meta.method_name = "average";
    meta.dimensions = dim;
    meta.source_label = "meta-embedding(spaces=" + std::to_string(spaces.size()) +
                        ", dropped=" + std::to_string(dropped.size()) + ")";
    return AverageResult{EmbeddingSpace(std::move(meta), std::move(kept), std::move(data)),
                         std::move(dropped)};
}

} // namespace wemstab
