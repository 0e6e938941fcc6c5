#include "wemstab/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "wemstab/errors.hpp"

namespace wemstab {

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write failure on: " + path);
}

// Words are usually plain tokens; commas and quotes in them are rare but
// legal in embedding files, so fields are quoted when needed (RFC 4180).
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

// Splits one CSV line, honoring quoted fields.
std::vector<std::string> split_csv(const std::string& line, const std::string& where) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"' && fields.back().empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) throw ValidationError(where + ": unterminated quote");
    return fields;
}

double parse_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw ValidationError(where + ": cannot parse number '" + s + "'");
    }
    return v;
}

long long parse_int(const std::string& s, const std::string& where) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw ValidationError(where + ": cannot parse integer '" + s + "'");
    }
    return v;
}

} // namespace

void write_stability_csv(const StabilityReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "word,stability\n";
    for (std::size_t i = 0; i < report.vocab.size(); ++i) {
        out << csv_field(report.vocab[i]) << ',' << format_double(report.per_word[i]) << '\n';
    }
    if (!report.vocab.empty()) {
        out << "AGGREGATE," << format_double(report.aggregate) << '\n';
    }
    finish_out(out, path);
}

StabilityReport read_stability_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path + ": empty report");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "word,stability") {
        throw ValidationError(path + ": not a stability report (bad header)");
    }

    StabilityReport report;
    bool saw_aggregate = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (saw_aggregate) throw ValidationError(path + ": rows after AGGREGATE");
        auto fields = split_csv(line, path);
        if (fields.size() != 2) throw ValidationError(path + ": expected 2 columns");
        if (fields[0] == "AGGREGATE") {
            report.aggregate = parse_double(fields[1], path);
            saw_aggregate = true;
            continue;
        }
        if (!report.vocab.empty() && fields[0] <= report.vocab.back()) {
            throw ValidationError(path + ": words out of order or duplicated");
        }
        report.vocab.push_back(fields[0]);
        report.per_word.push_back(parse_double(fields[1], path));
    }
    if (in.bad()) throw IoError("read failure on: " + path);
    if (!report.vocab.empty() && !saw_aggregate) {
        throw ValidationError(path + ": missing AGGREGATE row");
    }
    return report; // k stays 0: unknown
}

void write_bucket_csv(const FrequencyBucketReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "bucket,count,min,q1,median,q3,max,mean,variance\n";
    for (std::size_t b = 0; b < report.per_bucket.size(); ++b) {
        const auto& s = report.per_bucket[b];
        out << FrequencyBucketReport::labels[b] << ',' << s.count << ','
            << format_double(s.min) << ',' << format_double(s.q1) << ','
            << format_double(s.median) << ',' << format_double(s.q3) << ','
            << format_double(s.max) << ',' << format_double(s.mean) << ','
            << format_double(s.variance) << '\n';
    }
    finish_out(out, path);
}

void write_share_csv(const BestMethodShare& share, const std::string& path) {
    auto out = open_out(path);
    out << "method,share\n";
    for (std::size_t m = 0; m < share.methods.size(); ++m) {
        out << csv_field(share.methods[m]) << ',' << format_double(share.share[m]) << '\n';
    }
    finish_out(out, path);
}

void write_per_word_best_csv(const BestMethodShare& share, const std::string& path) {
    auto out = open_out(path);
    out << "word,method\n";
    for (std::size_t i = 0; i < share.vocab.size(); ++i) {
        out << csv_field(share.vocab[i]) << ','
            << csv_field(share.methods[share.per_word_best[i]]) << '\n';
    }
    finish_out(out, path);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << "axis_value,stability\n";
    for (const auto& row : rows) {
        out << row.axis_value << ',' << format_double(row.stability) << '\n';
    }
    finish_out(out, path);
}

void write_sweep_pairs_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << "axis_value,pair,stability\n";
    for (const auto& row : rows) {
        for (const auto& [pair, value] : row.per_pair) {
            out << row.axis_value << ',' << csv_field(pair) << ',' << format_double(value)
                << '\n';
        }
    }
    finish_out(out, path);
}

namespace {

const char* role_name(NodeRole role) {
    switch (role) {
        case NodeRole::core: return "core";
        case NodeRole::non_core: return "non-core";
        case NodeRole::noise: return "noise";
    }
    return "noise";
}

NodeRole parse_role(const std::string& s, const std::string& where) {
    if (s == "core") return NodeRole::core;
    if (s == "non-core") return NodeRole::non_core;
    if (s == "noise") return NodeRole::noise;
    throw ValidationError(where + ": unknown role '" + s + "'");
}

} // namespace

void write_clustering_csv(const Clustering& clustering, const std::string& path) {
    auto out = open_out(path);
    out << "word,cluster_id,role\n";
    for (std::size_t i = 0; i < clustering.words.size(); ++i) {
        out << csv_field(clustering.words[i]) << ',' << clustering.label[i] << ','
            << role_name(clustering.role[i]) << '\n';
    }
    finish_out(out, path);
}

Clustering read_clustering_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open clustering: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path + ": empty clustering");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "word,cluster_id,role") {
        throw ValidationError(path + ": not a clustering file (bad header)");
    }
    Clustering c;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv(line, path);
        if (fields.size() != 3) throw ValidationError(path + ": expected 3 columns");
        if (!c.words.empty() && fields[0] <= c.words.back()) {
            throw ValidationError(path + ": words out of order or duplicated");
        }
        auto label = static_cast<std::int32_t>(parse_int(fields[1], path));
        NodeRole role = parse_role(fields[2], path);
        if ((label == Clustering::kNoise) != (role == NodeRole::noise)) {
            throw ValidationError(path + ": role/label mismatch for '" + fields[0] + "'");
        }
        c.words.push_back(fields[0]);
        c.label.push_back(label);
        c.role.push_back(role);
    }
    if (in.bad()) throw IoError("read failure on: " + path);
    if (c.words.empty()) throw ValidationError(path + ": empty clustering");
    return c;
}

void write_weat_csv(const std::string& query_name,
                    const std::vector<std::pair<std::string, WeatResult>>& per_space,
                    const std::string& path) {
    auto out = open_out(path);
    out << "query,space,d,coverage\n";
    for (const auto& [space, result] : per_space) {
        out << csv_field(query_name) << ',' << csv_field(space) << ','
            << (result.effect_size ? format_double(*result.effect_size) : "undefined") << ','
            << format_double(result.coverage) << '\n';
    }
    finish_out(out, path);
}

std::unordered_map<std::string, std::uint64_t> read_frequency_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open frequency file: " + path);
    std::unordered_map<std::string, std::uint64_t> freqs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": expected 'word<TAB>count'");
        }
        std::string word = line.substr(0, tab);
        auto count = parse_int(line.substr(tab + 1), path + ":" + std::to_string(lineno));
        if (count < 0) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": negative count");
        }
        if (!freqs.emplace(word, static_cast<std::uint64_t>(count)).second) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": duplicate word '" +
                                  word + "'");
        }
    }
    if (in.bad()) throw IoError("read failure on: " + path);
    return freqs;
}

} // namespace wemstab
