#include "wemstab/sweep.hpp"

#include <charconv>
#include <fstream>
#include <unordered_map>

#include "wemstab/errors.hpp"
#include "wemstab/knn.hpp"
#include "wemstab/stability.hpp"

namespace wemstab {

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "k") return SweepAxis::k;
    if (name == "dimension") return SweepAxis::dimension;
    if (name == "epoch") return SweepAxis::epoch;
    if (name == "successive-epoch") return SweepAxis::successive_epoch;
    if (name == "window") return SweepAxis::window;
    if (name == "cross-dimension") return SweepAxis::cross_dimension;
    throw ValidationError("unknown sweep axis '" + name + "'");
}

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::k: return "k";
        case SweepAxis::dimension: return "dimension";
        case SweepAxis::epoch: return "epoch";
        case SweepAxis::successive_epoch: return "successive-epoch";
        case SweepAxis::window: return "window";
        case SweepAxis::cross_dimension: return "cross-dimension";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

long long parse_ll(const std::string& s, const std::string& where) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw ValidationError(where + ": cannot parse integer '" + s + "'");
    }
    return v;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) parts.push_back(s.substr(start, i - start));
    }
    return parts;
}

} // namespace

SweepSpec parse_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sweep config: " + path);

    SweepSpec spec;
    bool saw_axis = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);

        auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ValidationError(where + ": empty value for '" + key + "'");

        if (key == "axis") {
            spec.axis = parse_sweep_axis(value);
            saw_axis = true;
        } else if (key == "format") {
            spec.format = parse_space_format(value);
        } else if (key == "k") {
            auto k = parse_ll(value, where);
            if (k < 1) throw ValidationError(where + ": k must be >= 1");
            spec.k = static_cast<int>(k);
        } else if (key == "baseline") {
            spec.baseline = parse_ll(value, where);
        } else if (key == "out") {
            spec.output_path = value;
        } else if (key.rfind("group", 0) == 0) {
            std::string axis_value = trim(key.substr(5));
            if (axis_value.empty()) throw ValidationError(where + ": group needs an axis value");
            long long v = parse_ll(axis_value, where);
            if (!spec.groups.emplace(v, split_ws(value)).second) {
                throw ValidationError(where + ": duplicate group " + axis_value);
            }
        } else {
            throw ValidationError(where + ": unknown key '" + key + "'");
        }
    }
    if (in.bad()) throw IoError("read failure on: " + path);
    if (!saw_axis) throw ValidationError(path + ": missing 'axis'");
    if (spec.groups.empty()) throw ValidationError(path + ": no groups defined");
    if (spec.axis == SweepAxis::cross_dimension && !spec.baseline) {
        throw ValidationError(path + ": cross-dimension sweep needs 'baseline'");
    }
    return spec;
}

namespace {

// Loads each distinct path once per sweep.
class SpacePool {
public:
    explicit SpacePool(SpaceFormat format) : format_(format) {}

    const EmbeddingSpace& get(const std::string& path) {
        auto it = spaces_.find(path);
        if (it == spaces_.end()) {
            it = spaces_.emplace(path, load_space(path, format_)).first;
        }
        return it->second;
    }

private:
    SpaceFormat format_;
    std::unordered_map<std::string, EmbeddingSpace> spaces_;
};

double within_group_stability(SpacePool& pool, const std::vector<std::string>& paths, int k,
                              int threads, std::vector<std::pair<std::string, double>>& pairs) {
    std::vector<const EmbeddingSpace*> spaces;
    for (const auto& p : paths) spaces.push_back(&pool.get(p));
    auto shared = intersect_vocab(spaces);
    std::vector<NeighborTable> tables;
    tables.reserve(spaces.size());
    for (const auto* s : spaces) tables.push_back(top_k_all(*s, shared, k, threads));
    std::vector<const NeighborTable*> refs;
    for (const auto& t : tables) refs.push_back(&t);
    StabilityReport report = multi_space_stability(refs);
    pairs = report.per_pair_aggregates;
    return report.aggregate;
}

double cross_pair_stability(SpacePool& pool, const std::string& left,
                            const std::string& right, int k, int threads,
                            std::vector<std::pair<std::string, double>>& pairs) {
    const EmbeddingSpace& a = pool.get(left);
    const EmbeddingSpace& b = pool.get(right);
    auto shared = intersect_vocab({&a, &b});
    NeighborTable ta = top_k_all(a, shared, k, threads);
    NeighborTable tb = top_k_all(b, shared, k, threads);
    StabilityReport report = pair_stability(ta, tb);
    pairs.push_back(report.per_pair_aggregates[0]);
    return report.aggregate;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads) {
    SpacePool pool(spec.format);
    std::vector<SweepRow> rows;

    switch (spec.axis) {
        case SweepAxis::k:
        case SweepAxis::dimension:
        case SweepAxis::epoch:
        case SweepAxis::window: {
            for (const auto& [value, paths] : spec.groups) {
                if (paths.size() < 2) {
                    throw ValidationError("sweep group " + std::to_string(value) +
                                          " needs at least 2 spaces");
                }
                int k = spec.k;
                if (spec.axis == SweepAxis::k) {
                    if (value < 1) throw ValidationError("sweep k value must be >= 1");
                    k = static_cast<int>(value);
                }
                SweepRow row;
                row.axis_value = value;
                row.stability = within_group_stability(pool, paths, k, threads, row.per_pair);
                rows.push_back(std::move(row));
            }
            break;
        }
        case SweepAxis::successive_epoch: {
            for (const auto& [value, paths] : spec.groups) {
                auto prev = spec.groups.find(value - 1);
                if (prev == spec.groups.end()) continue;
                if (paths.size() != prev->second.size()) {
                    throw ValidationError("unpairable successive-epoch values " +
                                          std::to_string(value - 1) + " and " +
                                          std::to_string(value) +
                                          " (group sizes differ)");
                }
                SweepRow row;
                row.axis_value = value;
                double sum = 0.0;
                for (std::size_t i = 0; i < paths.size(); ++i) {
                    sum += cross_pair_stability(pool, prev->second[i], paths[i], spec.k,
                                                threads, row.per_pair);
                }
                row.stability = sum / static_cast<double>(paths.size());
                rows.push_back(std::move(row));
            }
            if (rows.empty()) {
                throw ValidationError("unpairable successive-epoch values: no group has a "
                                      "predecessor (value-1) group");
            }
            break;
        }
        case SweepAxis::cross_dimension: {
            auto base = spec.groups.find(*spec.baseline);
            if (base == spec.groups.end()) {
                throw ValidationError("missing baseline group " +
                                      std::to_string(*spec.baseline));
            }
            if (base->second.size() != 1) {
                throw ValidationError("cross-dimension baseline group must hold exactly one "
                                      "space");
            }
            const std::string& baseline_path = base->second[0];
            for (const auto& [value, paths] : spec.groups) {
                if (value == *spec.baseline) continue;
                if (paths.empty()) {
                    throw ValidationError("sweep group " + std::to_string(value) + " is empty");
                }
                SweepRow row;
                row.axis_value = value;
                double sum = 0.0;
                for (const auto& p : paths) {
                    sum += cross_pair_stability(pool, baseline_path, p, spec.k, threads,
                                                row.per_pair);
                }
                row.stability = sum / static_cast<double>(paths.size());
                rows.push_back(std::move(row));
            }
            if (rows.empty()) {
                throw ValidationError("cross-dimension sweep has no non-baseline groups");
            }
            break;
        }
    }
    return rows; // groups map iterates ascending, so rows are sorted
}

} // namespace wemstab
