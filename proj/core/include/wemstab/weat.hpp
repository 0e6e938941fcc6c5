#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wemstab/embedding.hpp"

namespace wemstab {

// A word-association bias query: two target word sets (X, Y) and two
// attribute word sets (A, B). All words are case-folded; X∩Y and A∩B must
// be empty.
struct WeatQuery {
    std::string name;
    std::vector<std::string> targets_x;
    std::vector<std::string> targets_y;
    std::vector<std::string> attributes_a;
    std::vector<std::string> attributes_b;
};

// Parses the wordlist format: sections headed "X:", "Y:", "A:", "B:", one
// word per line, case-insensitive. The query name defaults to the file stem.
WeatQuery parse_weat_wordlist(const std::string& path);

struct WeatResult {
    // Undefined (nullopt) when the pooled standard deviation is zero.
    std::optional<double> effect_size;
    std::vector<std::pair<std::string, double>> per_word_association; // targets present
    double coverage = 0.0; // present unique query words / total unique query words
    std::vector<std::string> dropped_words;
};

// s(w,A,B) = mean cos(w,a) over present a in A minus mean cos(w,b) over
// present b in B. Errors when w or all of A or all of B are absent.
double association(const std::string& word, const std::vector<std::string>& a_words,
                   const std::vector<std::string>& b_words, const EmbeddingSpace& space);

// Effect size d = (mean_X s - mean_Y s) / popstd_{X∪Y} s, computed over the
// query words present in the space. Absent words are dropped and reported
// via coverage/dropped_words; each of X, Y, A, B must keep at least one
// word. d close to zero indicates absence of bias.
WeatResult effect_size(const WeatQuery& query, const EmbeddingSpace& space);

struct WeatStability {
    std::vector<std::pair<std::string, WeatResult>> per_space; // (space label, result)
    double max_d = 0.0;
    double min_d = 0.0;
    double spread = 0.0; // max_d - min_d, the instability indicator
};

// Runs effect_size on every space (>= 2). An undefined effect size in any
// space is surfaced as an error naming that space.
WeatStability weat_stability(const WeatQuery& query,
                             const std::vector<const EmbeddingSpace*>& spaces);

} // namespace wemstab
