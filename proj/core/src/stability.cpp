#include "wemstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wemstab/errors.hpp"

namespace wemstab {

namespace {

void require_comparable(const NeighborTable& t1, const NeighborTable& t2) {
    if (t1.k() != t2.k()) {
        throw ValidationError("stability: k mismatch (" + std::to_string(t1.k()) + " vs " +
                              std::to_string(t2.k()) + ")");
    }
    if (!t1.same_vocab(t2)) {
        throw ValidationError("stability: tables were built over different vocabularies");
    }
}

// Intersection size of two neighbor lists from tables over the same vocab.
// `mark` is caller-provided scratch of size |vocab|, all false on entry and
// restored on exit.
double overlap_fraction(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                        std::vector<std::uint8_t>& mark) {
    for (auto idx : a) mark[idx] = 1;
    std::size_t shared = 0;
    for (auto idx : b) shared += mark[idx];
    for (auto idx : a) mark[idx] = 0;
    return static_cast<double>(shared) / static_cast<double>(a.size());
}

std::string pair_id(const NeighborTable& t1, const NeighborTable& t2) {
    return t1.space_id() + "|" + t2.space_id();
}

double mean_fixed_order(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

} // namespace

double word_stability(const std::string& word, const NeighborTable& t1,
                      const NeighborTable& t2) {
    require_comparable(t1, t2);
    auto r1 = t1.row_of(word);
    if (!r1) throw ValidationError("stability: word '" + word + "' missing from table");
    std::vector<std::uint8_t> mark(t1.size(), 0);
    return overlap_fraction(t1.neighbors_of(*r1), t2.neighbors_of(*r1), mark);
}

StabilityReport pair_stability(const NeighborTable& t1, const NeighborTable& t2) {
    require_comparable(t1, t2);
    const std::size_t n = t1.size();
    StabilityReport report;
    report.space_pair_ids = {pair_id(t1, t2)};
    report.k = t1.k();
    report.vocab = t1.vocab();
    report.per_word.resize(n);
    std::vector<std::uint8_t> mark(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        report.per_word[i] = overlap_fraction(t1.neighbors_of(i), t2.neighbors_of(i), mark);
    }
    report.aggregate = mean_fixed_order(report.per_word);
    report.per_pair_aggregates = {{report.space_pair_ids[0], report.aggregate}};
    return report;
}

StabilityReport multi_space_stability(const std::vector<const NeighborTable*>& tables) {
    if (tables.size() < 2) {
        throw ValidationError("multi-space stability needs at least 2 tables");
    }
    for (std::size_t i = 1; i < tables.size(); ++i) {
        require_comparable(*tables[0], *tables[i]);
    }
    const std::size_t n = tables[0]->size();
    const std::size_t pairs = tables.size() * (tables.size() - 1) / 2;

    StabilityReport report;
    report.k = tables[0]->k();
    report.vocab = tables[0]->vocab();
    report.per_word.assign(n, 0.0);

    std::vector<std::uint8_t> mark(n, 0);
    std::vector<double> pair_values(n);
    for (std::size_t a = 0; a < tables.size(); ++a) {
        for (std::size_t b = a + 1; b < tables.size(); ++b) {
            for (std::size_t i = 0; i < n; ++i) {
                pair_values[i] = overlap_fraction(tables[a]->neighbors_of(i),
                                                  tables[b]->neighbors_of(i), mark);
                report.per_word[i] += pair_values[i];
            }
            report.space_pair_ids.push_back(pair_id(*tables[a], *tables[b]));
            report.per_pair_aggregates.emplace_back(report.space_pair_ids.back(),
                                                    mean_fixed_order(pair_values));
        }
    }
    for (double& v : report.per_word) v /= static_cast<double>(pairs);
    report.aggregate = mean_fixed_order(report.per_word);
    return report;
}

namespace {

// Linear-interpolation quantile of an ascending-sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t m = sorted.size();
    if (m == 1) return sorted[0];
    double h = p * static_cast<double>(m - 1);
    auto lo = static_cast<std::size_t>(h);
    if (lo >= m - 1) return sorted[m - 1];
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BucketStats stats_of(std::vector<double> values) {
    BucketStats s;
    s.count = values.size();
    if (values.empty()) {
        s.min = s.q1 = s.median = s.q3 = s.max = s.mean = s.variance =
            std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    s.q1 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.5);
    s.q3 = quantile_sorted(values, 0.75);
    s.mean = mean_fixed_order(values);
    double acc = 0.0;
    for (double v : values) acc += (v - s.mean) * (v - s.mean);
    s.variance = acc / static_cast<double>(values.size());
    return s;
}

} // namespace

FrequencyBucketReport frequency_buckets(
    const std::unordered_map<std::string, std::uint64_t>& freqs,
    const StabilityReport& report) {
    const std::size_t n = report.vocab.size();
    std::vector<std::uint64_t> freq_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = freqs.find(report.vocab[i]);
        if (it == freqs.end()) {
            throw ValidationError("frequency missing for word '" + report.vocab[i] + "'");
        }
        freq_of[i] = it->second;
    }

    // Rank by (frequency ascending, word ascending); vocab is already sorted
    // lexicographically, so a stable sort on frequency gives the tie rule.
    std::vector<std::uint32_t> rank(n);
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return freq_of[a] < freq_of[b]; });

    FrequencyBucketReport out;
    out.vocab = report.vocab;
    out.assignment.resize(n);
    const std::size_t q = n / 5, r = n % 5;
    std::size_t cursor = 0;
    for (std::size_t bucket = 0; bucket < 5; ++bucket) {
        std::size_t size = q + (bucket >= 5 - r ? 1 : 0); // remainder to higher buckets
        std::vector<double> values;
        values.reserve(size);
        for (std::size_t j = 0; j < size; ++j, ++cursor) {
            out.assignment[rank[cursor]] = static_cast<std::uint8_t>(bucket);
            values.push_back(report.per_word[rank[cursor]]);
        }
        out.per_bucket[bucket] = stats_of(std::move(values));
    }
    return out;
}

BestMethodShare best_method_share(
    const std::vector<std::pair<std::string, const StabilityReport*>>& reports) {
    if (reports.size() < 2) throw ValidationError("best-method needs at least 2 reports");

    std::vector<std::pair<std::string, const StabilityReport*>> sorted = reports;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].first == sorted[i - 1].first) {
            throw ValidationError("best-method: duplicate method label '" + sorted[i].first + "'");
        }
        if (sorted[i].second->vocab != sorted[0].second->vocab) {
            throw ValidationError("best-method: reports cover different vocabularies");
        }
        if (sorted[i].second->k != 0 && sorted[0].second->k != 0 &&
            sorted[i].second->k != sorted[0].second->k) {
            throw ValidationError("best-method: reports use different k");
        }
    }

    const std::size_t n = sorted[0].second->vocab.size();
    const std::size_t m = sorted.size();
    BestMethodShare out;
    out.vocab = sorted[0].second->vocab;
    out.per_word_best.resize(n);
    out.share.assign(m, 0.0);
    for (const auto& [label, _] : sorted) out.methods.push_back(label);

    std::vector<std::uint32_t> tied;
    for (std::size_t i = 0; i < n; ++i) {
        double best = sorted[0].second->per_word[i];
        tied.assign(1, 0);
        for (std::uint32_t mth = 1; mth < m; ++mth) {
            double v = sorted[mth].second->per_word[i];
            if (v > best) {
                best = v;
                tied.assign(1, mth);
            } else if (v == best) {
                tied.push_back(mth);
            }
        }
        double credit = 1.0 / static_cast<double>(tied.size());
        for (auto mth : tied) out.share[mth] += credit;
        out.per_word_best[i] = tied.front(); // smallest label wins the name
    }
    for (double& s : out.share) s /= static_cast<double>(n);
    return out;
}

} // namespace wemstab
