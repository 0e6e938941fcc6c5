// End-to-end checks of the wemstab binary: subcommand plumbing and the
// exit-code contract (0 ok, 1 validation, 2 I/O). argv[1] is the CLI path.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "wemstab/embedding.hpp"
#include "wemstab/report.hpp"

#include "support.hpp"

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAILED: " << what << '\n';
    }
}

int run(const std::string& cmd) {
    int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_test <path-to-wemstab>\n";
        return 2;
    }
    const std::string cli = argv[1];
    testsupport::TempDir dir("cli");

    auto s1 = testsupport::random_space(61, 50, 8, "s1");
    auto s2 = testsupport::random_space(62, 50, 8, "s2");
    wemstab::save_space(s1, dir.file("s1.vec"));
    wemstab::save_space(s2, dir.file("s2.vec"));

    check(run(cli + " stability --k 5 --out " + dir.file("rep.csv") + " " +
              dir.file("s1.vec") + " " + dir.file("s2.vec")) == 0,
          "stability succeeds");
    check(wemstab::read_stability_csv(dir.file("rep.csv")).vocab.size() == 50,
          "stability report covers the shared vocabulary");

    check(run(cli + " stability --k 200 --out " + dir.file("x.csv") + " " +
              dir.file("s1.vec") + " " + dir.file("s2.vec")) == 1,
          "k out of range exits 1");
    check(run(cli + " stability --k 5 --out " + dir.file("x.csv") + " " +
              dir.file("missing.vec") + " " + dir.file("s2.vec")) == 2,
          "missing input exits 2");
    check(run(cli + " stability --k 5 --out /nonexistent-dir/x.csv " + dir.file("s1.vec") +
              " " + dir.file("s2.vec")) == 2,
          "unwritable output exits 2");
    check(run(cli + " bogus-subcommand") == 1, "unknown subcommand exits 1");
    check(run(cli + " stability") == 1, "missing required options exits 1");
    check(run(cli + " --help") == 0, "--help exits 0");

    testsupport::write_file(dir.file("corpus.txt"), "Dogs bark.\ndogs run dogs sleep\nrun run\n");
    testsupport::write_file(dir.file("stop.txt"), "the\n");
    check(run(cli + " preprocess --stopwords " + dir.file("stop.txt") + " --min-count 2 --out " +
              dir.file("clean.txt") + " --freq-out " + dir.file("freq.tsv") + " " +
              dir.file("corpus.txt")) == 0,
          "preprocess succeeds");
    // "bark." falls to the alpha filter, "sleep" (count 1) to min-count.
    check(testsupport::read_file(dir.file("clean.txt")) == "dogs\ndogs run dogs\nrun run\n",
          "preprocess emits the filtered corpus");

    check(run(cli + " cluster --knn-size 5 --delta-sim 1 --delta-degree 2 --out " +
              dir.file("clusters.csv") + " " + dir.file("s1.vec")) == 0,
          "cluster succeeds");
    check(run(cli + " agreement " + dir.file("clusters.csv") + " " + dir.file("clusters.csv")) ==
              0,
          "agreement succeeds");

    testsupport::write_file(dir.file("query.txt"),
                            "X:\nw000000\nw000001\nY:\nw000002\nw000003\nA:\nw000004\nB:\nw000005\n");
    check(run(cli + " weat --wordlist " + dir.file("query.txt") + " --out " +
              dir.file("weat.csv") + " " + dir.file("s1.vec") + " " + dir.file("s2.vec")) == 0,
          "weat succeeds");

    check(run(cli + " average --out " + dir.file("avg.vec") + " " + dir.file("s1.vec") + " " +
              dir.file("s2.vec")) == 0,
          "average succeeds");
    check(run(cli + " stability --k 5 --out " + dir.file("rep2.csv") + " " +
              dir.file("avg.vec") + " " + dir.file("s1.vec")) == 0,
          "averaged space loads back");

    testsupport::write_file(dir.file("sweep.cfg"), std::string("axis = k\n") + "group 2 = " +
                                                       dir.file("s1.vec") + " " +
                                                       dir.file("s2.vec") + "\n" + "group 5 = " +
                                                       dir.file("s1.vec") + " " +
                                                       dir.file("s2.vec") + "\n");
    check(run(cli + " sweep --config " + dir.file("sweep.cfg") + " --out " +
              dir.file("sweep.csv")) == 0,
          "sweep succeeds");

    check(run(cli + " buckets --report " + dir.file("rep.csv") + " --freqs " +
              dir.file("freq.tsv") + " --out " + dir.file("buckets.csv")) == 1,
          "buckets with missing frequencies exits 1");

    // Frequencies for the synthetic vocabulary make buckets succeed.
    {
        std::string freq;
        for (std::size_t i = 0; i < 50; ++i) {
            freq += testsupport::make_words(50)[i] + "\t" + std::to_string(i + 1) + "\n";
        }
        testsupport::write_file(dir.file("freq_syn.tsv"), freq);
    }
    check(run(cli + " buckets --report " + dir.file("rep.csv") + " --freqs " +
              dir.file("freq_syn.tsv") + " --out " + dir.file("buckets.csv")) == 0,
          "buckets succeeds with full frequencies");

    check(run(cli + " best-method --out " + dir.file("share.csv") + " m1=" + dir.file("rep.csv") +
              " m2=" + dir.file("rep.csv")) == 0,
          "best-method succeeds");

    if (failures == 0) {
        std::cout << "cli tests passed\n";
        return 0;
    }
    std::cerr << failures << " cli test(s) failed\n";
    return 1;
}
