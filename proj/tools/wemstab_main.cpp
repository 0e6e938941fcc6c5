// wemstab: measure word-embedding stability across trained spaces and its
// downstream effects (SNN-density clustering agreement, WEAT bias spread).
// One task per invocation; all outputs are byte-reproducible for a fixed
// set of inputs and flags, regardless of --threads.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "wemstab/corpus.hpp"
#include "wemstab/embedding.hpp"
#include "wemstab/errors.hpp"
#include "wemstab/knn.hpp"
#include "wemstab/report.hpp"
#include "wemstab/snnd.hpp"
#include "wemstab/stability.hpp"
#include "wemstab/sweep.hpp"
#include "wemstab/weat.hpp"

namespace {

using namespace wemstab;

struct CommonOpts {
    std::string format = "word2vec-text";
    int threads = 0;
};

std::vector<std::string> read_word_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open word list: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) words.push_back(line);
    }
    return words;
}

// Restrict to the shared vocabulary, optionally narrowed by --vocab.
std::vector<std::string> shared_vocab(const std::vector<const EmbeddingSpace*>& spaces,
                                      const std::string& vocab_file) {
    std::vector<std::string> shared = intersect_vocab(spaces);
    if (vocab_file.empty()) return shared;
    std::unordered_set<std::string> wanted;
    for (auto& w : read_word_file(vocab_file)) wanted.insert(w);
    std::erase_if(shared, [&](const std::string& w) { return !wanted.count(w); });
    if (shared.size() < 2) {
        throw ValidationError("--vocab leaves fewer than 2 shared words");
    }
    return shared;
}

std::string cache_file_for(const std::string& cache_dir, const std::string& space_path, int k) {
    std::filesystem::path p(space_path);
    return (std::filesystem::path(cache_dir) /
            (p.filename().string() + ".k" + std::to_string(k) + ".nt"))
        .string();
}

NeighborTable build_table(const EmbeddingSpace& space, const std::vector<std::string>& vocab,
                          int k, int threads, const std::string& cache_dir) {
    if (cache_dir.empty()) return top_k_all(space, vocab, k, threads);
    std::filesystem::create_directories(cache_dir);
    return top_k_all_cached(space, vocab, k,
                            cache_file_for(cache_dir, space.metadata().source_label, k),
                            threads);
}

int run_preprocess(const std::string& input, const std::string& stopwords,
                   std::uint64_t min_count, const std::string& out,
                   const std::string& freq_out) {
    CorpusStats stats = corpus_preprocess(input, stopwords, min_count, out);
    if (!freq_out.empty()) write_frequency_file(out, freq_out);
    std::cout << "vocab_size=" << stats.vocab_size << " token_count=" << stats.token_count
              << " dropped_rare_words=" << stats.dropped_rare_words
              << " dropped_stopwords=" << stats.dropped_stopwords << '\n';
    return 0;
}

int run_stability(const CommonOpts& common, const std::vector<std::string>& paths, int k,
                  const std::string& vocab_file, const std::string& cache_dir,
                  const std::string& out) {
    SpaceFormat format = parse_space_format(common.format);
    std::vector<EmbeddingSpace> spaces;
    spaces.reserve(paths.size());
    for (const auto& p : paths) spaces.push_back(load_space(p, format));
    std::vector<const EmbeddingSpace*> refs;
    for (const auto& s : spaces) refs.push_back(&s);

    auto vocab = shared_vocab(refs, vocab_file);
    std::vector<NeighborTable> tables;
    tables.reserve(spaces.size());
    for (const auto& s : spaces) {
        tables.push_back(build_table(s, vocab, k, common.threads, cache_dir));
    }
    std::vector<const NeighborTable*> table_refs;
    for (const auto& t : tables) table_refs.push_back(&t);

    StabilityReport report = tables.size() == 2 ? pair_stability(tables[0], tables[1])
                                                : multi_space_stability(table_refs);
    write_stability_csv(report, out);
    for (const auto& [pair, value] : report.per_pair_aggregates) {
        std::cout << pair << ' ' << format_double(value) << '\n';
    }
    std::cout << "aggregate " << format_double(report.aggregate) << " over "
              << report.shared_vocab_size() << " words\n";
    return 0;
}

int run_sweep_cmd(const std::string& config, const std::string& out_override,
                  const std::string& pairs_out, int threads) {
    SweepSpec spec = parse_sweep_config(config);
    std::vector<SweepRow> rows = run_sweep(spec, threads);
    std::string out = out_override.empty() ? spec.output_path : out_override;
    if (out.empty()) {
        throw ValidationError("no output path: pass --out or set 'out' in the config");
    }
    write_sweep_csv(rows, out);
    if (!pairs_out.empty()) write_sweep_pairs_csv(rows, pairs_out);
    for (const auto& row : rows) {
        std::cout << sweep_axis_name(spec.axis) << '=' << row.axis_value << " stability="
                  << format_double(row.stability) << '\n';
    }
    return 0;
}

int run_buckets(const std::string& report_path, const std::string& freq_path,
                const std::string& out) {
    StabilityReport report = read_stability_csv(report_path);
    auto freqs = read_frequency_file(freq_path);
    FrequencyBucketReport buckets = frequency_buckets(freqs, report);
    write_bucket_csv(buckets, out);
    for (std::size_t b = 0; b < buckets.per_bucket.size(); ++b) {
        const auto& s = buckets.per_bucket[b];
        std::cout << FrequencyBucketReport::labels[b] << " count=" << s.count
                  << " median=" << format_double(s.median)
                  << " mean=" << format_double(s.mean)
                  << " variance=" << format_double(s.variance) << '\n';
    }
    return 0;
}

int run_best_method(const std::vector<std::string>& labeled_reports, const std::string& out,
                    const std::string& per_word_out) {
    std::vector<std::pair<std::string, StabilityReport>> loaded;
    for (const auto& arg : labeled_reports) {
        auto eq = arg.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= arg.size()) {
            throw ValidationError("expected LABEL=REPORT.csv, got '" + arg + "'");
        }
        loaded.emplace_back(arg.substr(0, eq), read_stability_csv(arg.substr(eq + 1)));
    }
    std::vector<std::pair<std::string, const StabilityReport*>> refs;
    for (const auto& [label, report] : loaded) refs.emplace_back(label, &report);
    BestMethodShare share = best_method_share(refs);
    write_share_csv(share, out);
    if (!per_word_out.empty()) write_per_word_best_csv(share, per_word_out);
    for (std::size_t m = 0; m < share.methods.size(); ++m) {
        std::cout << share.methods[m] << ' ' << format_double(share.share[m]) << '\n';
    }
    return 0;
}

int run_cluster(const CommonOpts& common, const std::string& path, const SnndParams& params,
                const std::string& vocab_file, const std::string& cache_dir,
                const std::string& out) {
    SpaceFormat format = parse_space_format(common.format);
    EmbeddingSpace space = load_space(path, format);
    std::vector<std::string> vocab;
    if (vocab_file.empty()) {
        vocab = space.vocabulary();
    } else {
        std::unordered_set<std::string> wanted;
        for (auto& w : read_word_file(vocab_file)) wanted.insert(w);
        for (const auto& w : space.vocabulary()) {
            if (wanted.count(w)) vocab.push_back(w);
        }
        if (vocab.size() < 2) throw ValidationError("--vocab leaves fewer than 2 words");
    }
    NeighborTable table = build_table(space, vocab, params.knn_size, common.threads, cache_dir);
    SnnGraph graph = build_snn_graph(table, params, common.threads);
    Clustering clustering = snnd_cluster(graph, params);
    write_clustering_csv(clustering, out);

    std::size_t noise = 0;
    for (auto role : clustering.role) noise += role == NodeRole::noise;
    std::cout << "clusters=" << clustering.cluster_count() << " words="
              << clustering.words.size() << " noise=" << noise << '\n';
    return 0;
}

int run_agreement(const std::vector<std::string>& paths) {
    std::vector<Clustering> clusterings;
    clusterings.reserve(paths.size());
    for (const auto& p : paths) clusterings.push_back(read_clustering_csv(p));
    std::vector<const Clustering*> refs;
    for (const auto& c : clusterings) refs.push_back(&c);
    auto agreement = clustering_agreement(refs);
    if (!agreement) {
        std::cout << "agreement undefined (baseline clustering has no co-clustered pair)\n";
    } else {
        std::cout << "agreement " << format_double(*agreement) << " ("
                  << format_double(*agreement * 100.0) << "%)\n";
    }
    return 0;
}

int run_weat(const CommonOpts& common, const std::string& wordlist,
             const std::vector<std::string>& paths, const std::string& out) {
    SpaceFormat format = parse_space_format(common.format);
    WeatQuery query = parse_weat_wordlist(wordlist);
    std::vector<EmbeddingSpace> spaces;
    spaces.reserve(paths.size());
    for (const auto& p : paths) spaces.push_back(load_space(p, format));

    std::vector<std::pair<std::string, WeatResult>> per_space;
    for (const auto& s : spaces) {
        per_space.emplace_back(s.metadata().source_label, effect_size(query, s));
    }
    if (!out.empty()) write_weat_csv(query.name, per_space, out);
    for (const auto& [label, r] : per_space) {
        std::cout << label << " d="
                  << (r.effect_size ? format_double(*r.effect_size) : "undefined")
                  << " coverage=" << format_double(r.coverage) << '\n';
    }
    if (spaces.size() >= 2) {
        std::vector<const EmbeddingSpace*> refs;
        for (const auto& s : spaces) refs.push_back(&s);
        WeatStability st = weat_stability(query, refs);
        std::cout << "max " << format_double(st.max_d) << " min " << format_double(st.min_d)
                  << " spread " << format_double(st.spread) << '\n';
    }
    return 0;
}

int run_average(const CommonOpts& common, const std::vector<std::string>& paths,
                const std::string& out) {
    SpaceFormat format = parse_space_format(common.format);
    std::vector<EmbeddingSpace> spaces;
    spaces.reserve(paths.size());
    for (const auto& p : paths) spaces.push_back(load_space(p, format));
    std::vector<const EmbeddingSpace*> refs;
    for (const auto& s : spaces) refs.push_back(&s);
    AverageResult result = average_spaces(refs);
    save_space(result.space, out);
    std::cout << "words=" << result.space.size() << " dropped=" << result.dropped_words.size()
              << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"word-embedding stability toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    std::vector<std::string> inputs;
    std::string out, vocab_file, cache_dir, freq_path, report_path, wordlist, config;
    std::string pairs_out, per_word_out;
    int k = 10;
    std::uint64_t min_count = 5;
    std::string stopwords;
    SnndParams snnd;

    auto add_common = [&](CLI::App* cmd, bool with_format = true) {
        if (with_format) {
            cmd->add_option("--format", common.format, "embedding file format")
                ->check(CLI::IsMember({"word2vec-text", "glove-text"}))
                ->capture_default_str();
        }
        cmd->add_option("--threads", common.threads,
                        "worker threads (0 = hardware concurrency)");
    };

    auto* preprocess = app.add_subcommand(
        "preprocess", "normalize a raw corpus for embedding trainers");
    preprocess->add_option("input", inputs, "raw corpus file")->required()->expected(1);
    preprocess->add_option("--stopwords", stopwords, "stopword list, one word per line")
        ->required();
    preprocess->add_option("--min-count", min_count, "minimum corpus frequency")
        ->capture_default_str();
    preprocess->add_option("--out", out, "preprocessed corpus path")->required();
    preprocess->add_option("--freq-out", freq_path, "also write word<TAB>count frequencies");

    auto* stability = app.add_subcommand(
        "stability", "k-NN overlap stability across embedding spaces");
    stability->add_option("spaces", inputs, "two or more embedding files")
        ->required()
        ->expected(2, -1);
    stability->add_option("--k", k, "nearest neighbors per word")->capture_default_str();
    stability->add_option("--vocab", vocab_file, "restrict to the words in this file");
    stability->add_option("--cache-dir", cache_dir, "neighbor-table cache directory");
    stability->add_option("--out", out, "per-word stability CSV")->required();
    add_common(stability);

    auto* sweep = app.add_subcommand("sweep", "stability sweep over a training parameter");
    sweep->add_option("--config", config, "sweep configuration file")->required();
    sweep->add_option("--out", out, "sweep CSV (overrides 'out' in the config)");
    sweep->add_option("--pairs-out", pairs_out, "also write per-pair stabilities");
    add_common(sweep, /*with_format=*/false);

    auto* buckets = app.add_subcommand(
        "buckets", "frequency-quintile stability statistics (VL..VH)");
    buckets->add_option("--report", report_path, "stability CSV from 'stability'")->required();
    buckets->add_option("--freqs", freq_path, "word<TAB>count frequency file")->required();
    buckets->add_option("--out", out, "bucket statistics CSV")->required();

    auto* best = app.add_subcommand(
        "best-method", "per-word winning method shares across stability reports");
    best->add_option("reports", inputs, "LABEL=REPORT.csv (two or more)")
        ->required()
        ->expected(2, -1);
    best->add_option("--out", out, "method share CSV")->required();
    best->add_option("--per-word-out", per_word_out, "per-word winner CSV");

    auto* cluster = app.add_subcommand("cluster", "shared-nearest-neighbor density clustering");
    cluster->add_option("space", inputs, "embedding file")->required()->expected(1);
    cluster->add_option("--knn-size", snnd.knn_size, "KNN list length")->capture_default_str();
    cluster->add_option("--delta-sim", snnd.delta_sim, "edge threshold on shared neighbors")
        ->capture_default_str();
    cluster->add_option("--delta-degree", snnd.delta_degree, "core threshold on degree")
        ->capture_default_str();
    cluster->add_flag("--strict-thresholds", snnd.strict_thresholds,
                      "use > instead of >= for both thresholds");
    cluster->add_option("--vocab", vocab_file, "restrict to the words in this file");
    cluster->add_option("--cache-dir", cache_dir, "neighbor-table cache directory");
    cluster->add_option("--out", out, "clustering CSV")->required();
    add_common(cluster);

    auto* agreement = app.add_subcommand(
        "agreement", "co-clustered pair preservation across clustering CSVs");
    agreement->add_option("clusterings", inputs, "clustering CSVs; first is the baseline")
        ->required()
        ->expected(1, -1);

    auto* weat = app.add_subcommand(
        "weat", "word-association bias effect size and its spread across spaces");
    weat->add_option("spaces", inputs, "one or more embedding files")
        ->required()
        ->expected(1, -1);
    weat->add_option("--wordlist", wordlist, "query file with X:/Y:/A:/B: sections")
        ->required();
    weat->add_option("--out", out, "result CSV (query,space,d,coverage)");
    add_common(weat);

    auto* average = app.add_subcommand(
        "average", "element-wise mean meta-embedding over shared vocabulary");
    average->add_option("spaces", inputs, "two or more embedding files")
        ->required()
        ->expected(2, -1);
    average->add_option("--out", out, "output embedding file (word2vec-text)")->required();
    add_common(average);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (preprocess->parsed()) {
            return run_preprocess(inputs[0], stopwords, min_count, out, freq_path);
        }
        if (stability->parsed()) {
            return run_stability(common, inputs, k, vocab_file, cache_dir, out);
        }
        if (sweep->parsed()) {
            return run_sweep_cmd(config, out, pairs_out, common.threads);
        }
        if (buckets->parsed()) {
            return run_buckets(report_path, freq_path, out);
        }
        if (best->parsed()) {
            return run_best_method(inputs, out, per_word_out);
        }
        if (cluster->parsed()) {
            return run_cluster(common, inputs[0], snnd, vocab_file, cache_dir, out);
        }
        if (agreement->parsed()) {
            return run_agreement(inputs);
        }
        if (weat->parsed()) {
            return run_weat(common, wordlist, inputs, out);
        }
        if (average->parsed()) {
            return run_average(common, inputs, out);
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
