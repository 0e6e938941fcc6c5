#include "wemstab/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wemstab/errors.hpp"

namespace wemstab {

namespace {

bool ascii_alpha_lower(std::string& token) {
    for (char& c : token) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c < 'a' || c > 'z') return false;
    }
    return !token.empty();
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword list: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string token;
        for (char c : line) {
            if (c == ' ' || c == '\t') continue;
            token += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
        }
        if (!token.empty()) words.insert(token);
    }
    if (in.bad()) throw IoError("read failure on: " + path);
    return words;
}

// Applies the per-line stages shared by both passes: lowercase, whitespace
// split, alphabetic-only filter, stopword filter.
void filter_line(const std::string& line, const std::unordered_set<std::string>& stopwords,
                 std::vector<std::string>& out, std::uint64_t& dropped_stopwords) {
    out.clear();
    std::size_t i = 0;
    const std::size_t n = line.size();
    std::string token;
    while (i < n) {
        while (i < n && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < n && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i == start) break;
        token.assign(line, start, i - start);
        if (!ascii_alpha_lower(token)) continue;
        if (stopwords.count(token)) {
            ++dropped_stopwords;
            continue;
        }
        out.push_back(token);
    }
}

} // namespace

CorpusStats corpus_preprocess(const std::string& input_path, const std::string& stopword_path,
                              std::uint64_t min_count, const std::string& output_path) {
    if (min_count < 1) throw ValidationError("min_count must be >= 1");
    const auto stopwords = load_stopwords(stopword_path);

    // Pass 1: frequencies of tokens surviving the per-line stages.
    std::unordered_map<std::string, std::uint64_t> freq;
    std::uint64_t dropped_stopwords = 0;
    {
        std::ifstream in(input_path);
        if (!in) throw IoError("cannot open corpus: " + input_path);
        std::string line;
        std::vector<std::string> tokens;
        while (std::getline(in, line)) {
            filter_line(line, stopwords, tokens, dropped_stopwords);
            for (auto& t : tokens) ++freq[t];
        }
        if (in.bad()) throw IoError("read failure on: " + input_path);
    }

    CorpusStats stats;
    stats.dropped_stopwords = dropped_stopwords;
    for (const auto& [word, count] : freq) {
        if (count < min_count) {
            ++stats.dropped_rare_words;
        } else {
            ++stats.vocab_size;
            stats.token_count += count;
        }
    }
    if (stats.token_count == 0) {
        throw ValidationError("preprocessing left an empty corpus: " + input_path);
    }

    // Pass 2: re-filter and emit surviving tokens, skipping emptied lines.
    {
        std::ifstream in(input_path);
        if (!in) throw IoError("cannot open corpus: " + input_path);
        std::ofstream out(output_path);
        if (!out) throw IoError("cannot open for writing: " + output_path);
        std::string line;
        std::vector<std::string> tokens;
        std::uint64_t ignored = 0;
        while (std::getline(in, line)) {
            filter_line(line, stopwords, tokens, ignored);
            std::string joined;
            for (const auto& t : tokens) {
                if (freq[t] < min_count) continue;
                if (!joined.empty()) joined += ' ';
                joined += t;
            }
            if (!joined.empty()) out << joined << '\n';
        }
        if (in.bad()) throw IoError("read failure on: " + input_path);
        out.flush();
        if (!out) throw IoError("write failure on: " + output_path);
    }
    return stats;
}

void write_frequency_file(const std::string& corpus_path, const std::string& freq_path) {
    std::ifstream in(corpus_path);
    if (!in) throw IoError("cannot open corpus: " + corpus_path);
    std::map<std::string, std::uint64_t> freq;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t i = 0;
        const std::size_t n = line.size();
        while (i < n) {
            while (i < n && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            std::size_t start = i;
            while (i < n && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
            if (i > start) ++freq[line.substr(start, i - start)];
        }
    }
    if (in.bad()) throw IoError("read failure on: " + corpus_path);
    std::ofstream out(freq_path);
    if (!out) throw IoError("cannot open for writing: " + freq_path);
    for (const auto& [word, count] : freq) out << word << '\t' << count << '\n';
    out.flush();
    if (!out) throw IoError("write failure on: " + freq_path);
}

} // namespace wemstab
