#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "wemstab/knn.hpp"

namespace wemstab {

// Per-word neighbor-overlap stabilities over a shared restricted vocabulary,
// plus their mean. For a single pair every value is a multiple of 1/k; for
// multi-space averages values lie anywhere in [0,1]. vocab is sorted and
// per_word is aligned to it.
struct StabilityReport {
    std::vector<std::string> space_pair_ids;
    int k = 0; // 0 = unknown (report reconstructed from CSV)
    std::vector<std::string> vocab;
    std::vector<double> per_word;
    std::vector<std::pair<std::string, double>> per_pair_aggregates;
    double aggregate = 0.0;

    std::size_t shared_vocab_size() const { return vocab.size(); }
};

// |KNN_1(w) ∩ KNN_2(w)| / k, lists treated as sets. Both tables must share
// k and restricted vocabulary and contain w.
double word_stability(const std::string& word, const NeighborTable& t1,
                      const NeighborTable& t2);

// Per-word stability for every shared word plus the vocabulary mean.
StabilityReport pair_stability(const NeighborTable& t1, const NeighborTable& t2);

// Mean of word_stability over all unordered pairs of tables, per word;
// aggregate is the vocabulary mean of those per-word means. Requires >= 2
// tables with homogeneous k and vocabulary.
StabilityReport multi_space_stability(const std::vector<const NeighborTable*>& tables);

// ---- frequency buckets -----------------------------------------------------

struct BucketStats {
    std::size_t count = 0;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0, variance = 0;
};

// Vocabulary quintiles ranked by corpus frequency (VL lowest ... VH highest)
// with boxplot-ready stability statistics per bucket. Bucket sizes differ by
// at most one; remainders go to the higher-frequency buckets. Quartiles use
// linear interpolation; variance is the population variance.
struct FrequencyBucketReport {
    static constexpr std::array<const char*, 5> labels{"VL", "L", "M", "H", "VH"};
    std::vector<std::string> vocab;     // same order as the source report
    std::vector<std::uint8_t> assignment; // bucket index per vocab entry
    std::array<BucketStats, 5> per_bucket;
};

FrequencyBucketReport frequency_buckets(
    const std::unordered_map<std::string, std::uint64_t>& freqs,
    const StabilityReport& report);

// ---- best method per word --------------------------------------------------

// Fraction of the vocabulary on which each method attains the highest
// per-word stability; exact ties split fractionally. per_word_best records
// the winner (lexicographically smallest method label on ties).
struct BestMethodShare {
    std::vector<std::string> methods; // sorted labels
    std::vector<double> share;        // aligned to methods, sums to 1
    std::vector<std::string> vocab;   // sorted
    std::vector<std::uint32_t> per_word_best; // index into methods
};

// Reports must share one vocabulary; k homogeneity is enforced for reports
// that carry a known k (reports parsed back from CSV carry k = 0).
BestMethodShare best_method_share(
    const std::vector<std::pair<std::string, const StabilityReport*>>& reports);

} // namespace wemstab
