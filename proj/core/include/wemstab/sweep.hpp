#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wemstab/embedding.hpp"
#include "wemstab/report.hpp"

namespace wemstab {

enum class SweepAxis { k, dimension, epoch, successive_epoch, window, cross_dimension };

SweepAxis parse_sweep_axis(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

// A stability sweep over one training parameter. Groups map an axis value
// to the space files trained at that value. Standard axes (k, dimension,
// epoch, window) need >= 2 spaces per value and compare within the value;
// successive-epoch pairs each value's spaces with the (value-1) group by
// position; cross-dimension pairs every group against the single space of
// the designated baseline value.
struct SweepSpec {
    SweepAxis axis = SweepAxis::k;
    SpaceFormat format = SpaceFormat::word2vec_text;
    int k = 10;
    std::optional<long long> baseline; // cross-dimension only
    std::string output_path;           // optional; CLI --out overrides
    std::map<long long, std::vector<std::string>> groups;
};

// Key/value configuration, '#' comments and blank lines ignored:
//   axis = dimension
//   format = word2vec-text
//   k = 10
//   baseline = 100            (cross-dimension only)
//   out = sweep.csv           (optional)
//   group 50 = a.vec b.vec    (one line per axis value; paths without spaces)
SweepSpec parse_sweep_config(const std::string& path);

// One stability row per axis value, ascending. For axis = k each group's
// key is the k used; other axes use spec.k.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 0);

} // namespace wemstab
