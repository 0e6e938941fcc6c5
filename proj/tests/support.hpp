#pragma once

// Shared helpers for tests: synthetic spaces, orthogonal transforms and
// scratch directories. Nothing here may call into the k-NN search path it
// is used to check; oracle logic lives in oracles.hpp.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "wemstab/embedding.hpp"

namespace testsupport {

// Zero-padded synthetic words sort in generation order.
inline std::vector<std::string> make_words(std::size_t n) {
    std::vector<std::string> words(n);
    char buf[24];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "w%06zu", i);
        words[i] = buf;
    }
    return words;
}

inline wemstab::EmbeddingSpace make_space(std::vector<std::string> words,
                                          std::vector<double> data, std::size_t dim,
                                          std::string label = "test") {
    wemstab::SpaceMetadata meta;
    meta.dimensions = dim;
    meta.source_label = std::move(label);
    return wemstab::EmbeddingSpace(std::move(meta), std::move(words), std::move(data));
}

inline wemstab::EmbeddingSpace random_space(std::uint64_t seed, std::size_t n, std::size_t dim,
                                            std::string label = "random", bool gaussian = false) {
    std::mt19937_64 rng(seed);
    std::vector<double> data(n * dim);
    if (gaussian) {
        std::normal_distribution<double> dist(0.0, 1.0);
        for (auto& v : data) v = dist(rng);
    } else {
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (auto& v : data) v = dist(rng);
    }
    return make_space(make_words(n), std::move(data), dim, std::move(label));
}

// Random orthogonal d x d matrix (row-major) via Gram-Schmidt on Gaussian
// columns, with one re-orthogonalization pass.
inline std::vector<double> random_orthogonal(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> q(d * d);
    for (std::size_t row = 0; row < d; ++row) {
        std::vector<double> v(d);
        for (auto& x : v) x = dist(rng);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t prev = 0; prev < row; ++prev) {
                double dot = 0.0;
                for (std::size_t j = 0; j < d; ++j) dot += v[j] * q[prev * d + j];
                for (std::size_t j = 0; j < d; ++j) v[j] -= dot * q[prev * d + j];
            }
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        for (std::size_t j = 0; j < d; ++j) q[row * d + j] = v[j] / norm;
    }
    return q;
}

// Applies y = Q x to every vector of the space.
inline wemstab::EmbeddingSpace transform(const wemstab::EmbeddingSpace& space,
                                         const std::vector<double>& q) {
    const std::size_t d = space.dim();
    std::vector<double> data(space.size() * d);
    for (std::size_t i = 0; i < space.size(); ++i) {
        auto row = space.vector_of(i);
        for (std::size_t r = 0; r < d; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < d; ++c) acc += q[r * d + c] * row[c];
            data[i * d + r] = acc;
        }
    }
    return testsupport::make_space(space.vocabulary(), std::move(data), d, "rotated");
}

// Second space correlated with the first: base + noise_scale * gaussian.
inline wemstab::EmbeddingSpace perturbed_space(const wemstab::EmbeddingSpace& base,
                                               double noise_scale, std::uint64_t seed,
                                               std::string label = "perturbed") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> data(base.size() * base.dim());
    for (std::size_t i = 0; i < base.size(); ++i) {
        auto row = base.vector_of(i);
        for (std::size_t j = 0; j < base.dim(); ++j) {
            data[i * base.dim() + j] = row[j] + noise_scale * dist(rng);
        }
    }
    return make_space(base.vocabulary(), std::move(data), base.dim(), std::move(label));
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / ("wemstab_" + tag + "_" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace testsupport
