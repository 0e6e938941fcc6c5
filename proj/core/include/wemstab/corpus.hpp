#pragma once

#include <cstdint>
#include <string>

namespace wemstab {

// Statistics of a preprocessed corpus. vocab_size and token_count describe
// the emitted corpus; dropped_rare_words counts distinct word types removed
// by the min-count rule; dropped_stopwords counts token occurrences removed
// by the stopword rule.
struct CorpusStats {
    std::uint64_t vocab_size = 0;
    std::uint64_t token_count = 0;
    std::uint64_t dropped_rare_words = 0;
    std::uint64_t dropped_stopwords = 0;
};

// Normalizes a raw corpus for external embedding trainers, one sentence per
// line. Per line: lowercase, split on whitespace, drop any token containing
// a non-alphabetic character (the whole token, not cleaned in place), drop
// stopwords, then drop every token whose corpus-wide frequency is below
// min_count. Lines left empty are not emitted. Running the pipeline on its
// own output with the same parameters is a no-op.
//
// stopword_path: one word per line. min_count must be >= 1.
// Throws ValidationError if the output corpus would be empty.
CorpusStats corpus_preprocess(const std::string& input_path,
                              const std::string& stopword_path,
                              std::uint64_t min_count,
                              const std::string& output_path);

// Writes "word<TAB>count" lines (sorted by word) for the surviving tokens of
// a preprocessed corpus; the stability buckets consume this file.
void write_frequency_file(const std::string& corpus_path, const std::string& freq_path);

} // namespace wemstab
