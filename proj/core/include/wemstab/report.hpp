#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "wemstab/snnd.hpp"
#include "wemstab/stability.hpp"
#include "wemstab/weat.hpp"

namespace wemstab {

// Shortest round-trip decimal form of v; identical across runs and worker
// counts, so every emitted file is byte-reproducible.
std::string format_double(double v);

// ---- stability -------------------------------------------------------------

// "word,stability" header, rows sorted lexicographically, trailing
// "AGGREGATE,<v>" row.
void write_stability_csv(const StabilityReport& report, const std::string& path);

// Reads the CSV back; the reconstructed report carries k = 0 ("unknown").
StabilityReport read_stability_csv(const std::string& path);

// "bucket,count,min,q1,median,q3,max,mean,variance", buckets VL..VH.
void write_bucket_csv(const FrequencyBucketReport& report, const std::string& path);

// "method,share" sorted by method label.
void write_share_csv(const BestMethodShare& share, const std::string& path);

// "word,method": the winning method per word.
void write_per_word_best_csv(const BestMethodShare& share, const std::string& path);

// ---- sweeps ----------------------------------------------------------------

struct SweepRow {
    long long axis_value = 0;
    double stability = 0.0;
    std::vector<std::pair<std::string, double>> per_pair; // (pair id, aggregate)
};

// "axis_value,stability", ascending axis values.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

// "axis_value,pair,stability": the per-pair values behind each sweep row.
void write_sweep_pairs_csv(const std::vector<SweepRow>& rows, const std::string& path);

// ---- clustering ------------------------------------------------------------

// "word,cluster_id,role"; noise rows carry id -1 and role "noise".
void write_clustering_csv(const Clustering& clustering, const std::string& path);
Clustering read_clustering_csv(const std::string& path);

// ---- weat ------------------------------------------------------------------

// "query,space,d,coverage"; an undefined effect size prints as "undefined".
void write_weat_csv(const std::string& query_name,
                    const std::vector<std::pair<std::string, WeatResult>>& per_space,
                    const std::string& path);

// ---- frequency files -------------------------------------------------------

// "word<TAB>count" lines.
std::unordered_map<std::string, std::uint64_t> read_frequency_file(const std::string& path);

} // namespace wemstab
