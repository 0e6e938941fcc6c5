#include "wemstab/weat.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "wemstab/errors.hpp"
#include "wemstab/knn.hpp"

namespace wemstab {

namespace {

std::string fold_case(std::string word) {
    for (char& c : word) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return word;
}

void check_disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b,
                    const std::string& what, const std::string& where) {
    std::unordered_set<std::string> seen(a.begin(), a.end());
    for (const auto& w : b) {
        if (seen.count(w)) {
            throw ValidationError(where + ": " + what + " sets overlap on '" + w + "'");
        }
    }
}

void check_list(const std::vector<std::string>& words, const std::string& section,
                const std::string& where) {
    if (words.empty()) throw ValidationError(where + ": section " + section + " is empty");
    std::unordered_set<std::string> seen;
    for (const auto& w : words) {
        if (!seen.insert(w).second) {
            throw ValidationError(where + ": duplicate word '" + w + "' in section " + section);
        }
    }
}

// Mean cosine of `word` against the present members of `others`.
// Returns false when none of `others` is in the space.
bool mean_cosine(std::span<const double> wvec, const std::vector<std::string>& others,
                 const EmbeddingSpace& space, double& out) {
    double sum = 0.0;
    std::size_t present = 0;
    for (const auto& o : others) {
        auto row = space.row_of(o);
        if (!row) continue;
        sum += cosine(wvec, space.vector_of(*row));
        ++present;
    }
    if (present == 0) return false;
    out = sum / static_cast<double>(present);
    return true;
}

// Present words in sorted order: the statistic is accumulated over these
// lists, and the canonical order makes it exactly invariant to how the
// query file ordered its words.
std::vector<std::string> present_subset(const std::vector<std::string>& words,
                                        const EmbeddingSpace& space) {
    std::vector<std::string> kept;
    for (const auto& w : words) {
        if (space.contains(w)) kept.push_back(w);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace

WeatQuery parse_weat_wordlist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open wordlist: " + path);

    WeatQuery query;
    query.name = std::filesystem::path(path).stem().string();

    std::vector<std::string>* section = nullptr;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // Trim surrounding blanks.
        std::size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t");
        std::string token = line.substr(b, e - b + 1);
        if (token == "X:") {
            section = &query.targets_x;
        } else if (token == "Y:") {
            section = &query.targets_y;
        } else if (token == "A:") {
            section = &query.attributes_a;
        } else if (token == "B:") {
            section = &query.attributes_b;
        } else {
            if (!section) {
                throw ValidationError(path + ": word '" + token + "' before any section header");
            }
            section->push_back(fold_case(token));
        }
    }
    if (in.bad()) throw IoError("read failure on: " + path);

    check_list(query.targets_x, "X", path);
    check_list(query.targets_y, "Y", path);
    check_list(query.attributes_a, "A", path);
    check_list(query.attributes_b, "B", path);
    check_disjoint(query.targets_x, query.targets_y, "target", path);
    check_disjoint(query.attributes_a, query.attributes_b, "attribute", path);
    return query;
}

double association(const std::string& word, const std::vector<std::string>& a_words,
                   const std::vector<std::string>& b_words, const EmbeddingSpace& space) {
    auto row = space.row_of(word);
    if (!row) throw ValidationError("association: word '" + word + "' absent from space");
    double mean_a = 0.0, mean_b = 0.0;
    if (!mean_cosine(space.vector_of(*row), a_words, space, mean_a)) {
        throw ValidationError("association: attribute set A entirely absent from space");
    }
    if (!mean_cosine(space.vector_of(*row), b_words, space, mean_b)) {
        throw ValidationError("association: attribute set B entirely absent from space");
    }
    return mean_a - mean_b;
}

WeatResult effect_size(const WeatQuery& query, const EmbeddingSpace& space) {
    const auto x = present_subset(query.targets_x, space);
    const auto y = present_subset(query.targets_y, space);
    const auto a = present_subset(query.attributes_a, space);
    const auto b = present_subset(query.attributes_b, space);
    const std::string where = "weat '" + query.name + "' on " + space.metadata().source_label;
    if (x.empty()) throw ValidationError(where + ": no target X word present");
    if (y.empty()) throw ValidationError(where + ": no target Y word present");
    if (a.empty()) throw ValidationError(where + ": no attribute A word present");
    if (b.empty()) throw ValidationError(where + ": no attribute B word present");

    WeatResult result;
    std::unordered_set<std::string> unique, present;
    for (const auto* list : {&query.targets_x, &query.targets_y, &query.attributes_a,
                             &query.attributes_b}) {
        for (const auto& w : *list) {
            if (unique.insert(w).second) {
                if (space.contains(w)) {
                    present.insert(w);
                } else {
                    result.dropped_words.push_back(w);
                }
            }
        }
    }
    result.coverage = static_cast<double>(present.size()) / static_cast<double>(unique.size());

    std::vector<double> s_x, s_y;
    s_x.reserve(x.size());
    s_y.reserve(y.size());
    for (const auto& w : x) {
        s_x.push_back(association(w, a, b, space));
        result.per_word_association.emplace_back(w, s_x.back());
    }
    for (const auto& w : y) {
        s_y.push_back(association(w, a, b, space));
        result.per_word_association.emplace_back(w, s_y.back());
    }

    // X/Y sums are combined pairwise so that swapping X and Y negates the
    // statistic exactly.
    auto sum_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x_ : v) s += x_;
        return s;
    };
    const auto nx = static_cast<double>(s_x.size());
    const auto ny = static_cast<double>(s_y.size());
    const double mean_x = sum_of(s_x) / nx;
    const double mean_y = sum_of(s_y) / ny;
    const double pooled_mean = (sum_of(s_x) + sum_of(s_y)) / (nx + ny);
    auto sqdev_sum = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x_ : v) s += (x_ - pooled_mean) * (x_ - pooled_mean);
        return s;
    };
    const double pop_var = (sqdev_sum(s_x) + sqdev_sum(s_y)) / (nx + ny);
    if (pop_var > 0.0) {
        result.effect_size = (mean_x - mean_y) / std::sqrt(pop_var);
    }
    return result;
}

WeatStability weat_stability(const WeatQuery& query,
                             const std::vector<const EmbeddingSpace*>& spaces) {
    if (spaces.size() < 2) throw ValidationError("weat stability needs at least 2 spaces");
    WeatStability out;
    for (const auto* space : spaces) {
        WeatResult r = effect_size(query, *space);
        if (!r.effect_size) {
            throw ValidationError("weat '" + query.name + "': undefined effect size (zero "
                                  "pooled std) on space " + space->metadata().source_label);
        }
        out.per_space.emplace_back(space->metadata().source_label, std::move(r));
    }
    out.max_d = out.per_space[0].second.effect_size.value();
    out.min_d = out.max_d;
    for (const auto& [label, r] : out.per_space) {
        out.max_d = std::max(out.max_d, r.effect_size.value());
        out.min_d = std::min(out.min_d, r.effect_size.value());
    }
    out.spread = out.max_d - out.min_d;
    return out;
}

} // namespace wemstab
