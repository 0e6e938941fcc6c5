#include <doctest.h>

#include <cmath>
#include <random>

#include "wemstab/errors.hpp"
#include "wemstab/knn.hpp"

#include "oracles.hpp"
#include "support.hpp"

using namespace wemstab;
using testsupport::TempDir;

namespace {

bool tables_equal(const NeighborTable& a, const NeighborTable& b) {
    if (a.k() != b.k() || a.vocab() != b.vocab()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto na = a.neighbors_of(i);
        auto nb = b.neighbors_of(i);
        if (!std::equal(na.begin(), na.end(), nb.begin())) return false;
    }
    return true;
}

} // namespace

TEST_CASE("normalize produces unit rows and keeps rankings") {
    SUBCASE("3-4-5 triangle") {
        auto s = testsupport::make_space({"p", "q"}, {3, 4, 1, 0}, 2);
        EmbeddingSpace unit = normalize(s);
        auto p = unit.vector_of(0);
        CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-12));
    }
    SUBCASE("idempotent on unit vectors") {
        auto s = testsupport::make_space({"p", "q"}, {1, 0, 0, 1}, 2);
        EmbeddingSpace unit = normalize(normalize(s));
        CHECK(unit.vector_of(0)[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(unit.vector_of(1)[1] == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("random matrix rows settle on norm 1") {
        EmbeddingSpace unit = normalize(testsupport::random_space(3, 100, 20));
        for (std::size_t i = 0; i < unit.size(); ++i) {
            double norm_sq = 0.0;
            for (double v : unit.vector_of(i)) norm_sq += v * v;
            CHECK(std::abs(std::sqrt(norm_sq) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("cosine basics") {
    std::vector<double> ex{1, 0}, ey{0, 1}, e2x{2, 0}, slight{0.9, 0.1};
    CHECK(cosine(ex, ey) == 0.0);
    CHECK(cosine(ex, e2x) == 1.0);
    CHECK(std::abs(cosine(ex, slight) - 0.99388) < 1e-4);
    CHECK(cosine(ex, slight) == doctest::Approx(0.9 / std::sqrt(0.82)).epsilon(1e-14));

    std::vector<double> zero{0, 0}, three{1, 2, 3};
    CHECK_THROWS_AS(cosine(ex, three), ValidationError);
    CHECK_THROWS_AS(cosine(ex, zero), ValidationError);
}

TEST_CASE("top_k_all on the four 2-D points") {
    auto s = testsupport::make_space({"a", "b", "c", "d"},
                                     {1, 0, 0.9, 0.1, 0, 1, -1, 0}, 2);
    NeighborTable t = top_k_all(s, s.vocabulary(), 1);
    auto nbr = [&](const char* w) { return t.vocab()[t.neighbors_of(*t.row_of(w))[0]]; };
    CHECK(nbr("a") == "b");
    CHECK(nbr("b") == "a");
    CHECK(nbr("c") == "b");
    CHECK(nbr("d") == "c");
}

TEST_CASE("top_k_all with k = |V|-1 lists the full remaining vocabulary") {
    auto s = testsupport::random_space(17, 12, 4);
    NeighborTable t = top_k_all(s, s.vocabulary(), 11);
    for (std::size_t i = 0; i < t.size(); ++i) {
        auto nbrs = t.neighbors_of(i);
        std::vector<bool> seen(t.size(), false);
        for (auto n : nbrs) {
            CHECK(n != i);
            CHECK(!seen[n]);
            seen[n] = true;
        }
    }
}

TEST_CASE("top_k_all matches the brute-force oracle") {
    SUBCASE("one 500x20 instance at k=10") {
        auto s = testsupport::random_space(100, 500, 20);
        auto vocab = s.vocabulary();
        NeighborTable t = top_k_all(s, vocab, 10);
        auto expected = oracles::brute_force_topk(s, vocab, 10);
        for (std::size_t i = 0; i < vocab.size(); ++i) {
            auto got = t.neighbors_of(i);
            CHECK(std::equal(got.begin(), got.end(), expected[i].begin()));
        }
    }
    SUBCASE("random shapes and k") {
        std::mt19937_64 rng(4242);
        for (int round = 0; round < 10; ++round) {
            std::uniform_int_distribution<std::size_t> pick_n(20, 200), pick_d(3, 30);
            std::size_t n = pick_n(rng), d = pick_d(rng);
            std::uniform_int_distribution<int> pick_k(1, static_cast<int>(std::min<std::size_t>(20, n - 1)));
            int k = pick_k(rng);
            auto s = testsupport::random_space(rng(), n, d);
            auto vocab = s.vocabulary();
            NeighborTable t = top_k_all(s, vocab, k);
            auto expected = oracles::brute_force_topk(s, vocab, k);
            for (std::size_t i = 0; i < n; ++i) {
                auto got = t.neighbors_of(i);
                REQUIRE(std::equal(got.begin(), got.end(), expected[i].begin()));
            }
        }
    }
}

TEST_CASE("top_k_all is scale invariant per vector") {
    auto s = testsupport::random_space(55, 100, 10);
    NeighborTable base = top_k_all(s, s.vocabulary(), 5);

    std::vector<double> data;
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto row = s.vector_of(i);
        double scale = (i == 37) ? 2.5 : 1.0;
        for (double v : row) data.push_back(v * scale);
    }
    auto scaled = testsupport::make_space(s.vocabulary(), std::move(data), s.dim());
    CHECK(tables_equal(base, top_k_all(scaled, scaled.vocabulary(), 5)));
}

TEST_CASE("top_k_all is rotation invariant on tie-free data") {
    auto s = testsupport::random_space(56, 200, 16);
    REQUIRE(oracles::min_boundary_gap(s, s.vocabulary(), 5) > 1e-9);
    auto q = testsupport::random_orthogonal(16, 57);
    auto rotated = testsupport::transform(s, q);
    CHECK(tables_equal(top_k_all(s, s.vocabulary(), 5),
                       top_k_all(rotated, rotated.vocabulary(), 5)));
}

TEST_CASE("top_k_all does not depend on worker count") {
    auto s = testsupport::random_space(58, 150, 8);
    NeighborTable a = top_k_all(s, s.vocabulary(), 7, 1);
    NeighborTable b = top_k_all(s, s.vocabulary(), 7, 7);
    NeighborTable c = top_k_all(s, s.vocabulary(), 7, 64);
    CHECK(tables_equal(a, b));
    CHECK(tables_equal(a, c));
}

TEST_CASE("top_k_all validates its inputs") {
    auto s = testsupport::random_space(59, 10, 4);
    CHECK_THROWS_AS(top_k_all(s, s.vocabulary(), 0), ValidationError);
    CHECK_THROWS_AS(top_k_all(s, s.vocabulary(), 10), ValidationError);

    auto vocab = s.vocabulary();
    vocab.push_back("zzz_absent");
    CHECK_THROWS_AS(top_k_all(s, vocab, 2), ValidationError);

    vocab = s.vocabulary();
    vocab.push_back(vocab.front());
    CHECK_THROWS_AS(top_k_all(s, vocab, 2), ValidationError);
}

TEST_CASE("ties break lexicographically") {
    // b and c sit at the same angle from a; both are exact ties for a's list.
    auto s = testsupport::make_space({"a", "b", "c", "d"},
                                     {1, 0, 0, 1, 0, 1, -1, 0}, 2);
    NeighborTable t = top_k_all(s, s.vocabulary(), 1);
    CHECK(t.vocab()[t.neighbors_of(*t.row_of("a"))[0]] == "b");
}

TEST_CASE("neighbor table cache round trips and invalidates") {
    TempDir dir("cache");
    auto s = testsupport::random_space(60, 40, 6, "space_a");
    auto vocab = s.vocabulary();
    NeighborTable t = top_k_all(s, vocab, 4);
    auto path = dir.file("a.nt");
    save_table_cache(t, s, path);

    SUBCASE("valid cache loads identically") {
        auto loaded = try_load_table_cache(path, s, vocab, 4);
        REQUIRE(loaded.has_value());
        CHECK(tables_equal(t, *loaded));
    }
    SUBCASE("k mismatch is stale") {
        CHECK(!try_load_table_cache(path, s, vocab, 5).has_value());
    }
    SUBCASE("content change is stale") {
        std::vector<double> data;
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (double v : s.vector_of(i)) data.push_back(i == 0 ? v * 2.0 : v);
        }
        auto changed = testsupport::make_space(s.vocabulary(), std::move(data), s.dim());
        CHECK(!try_load_table_cache(path, changed, vocab, 4).has_value());
    }
    SUBCASE("vocabulary change is stale") {
        std::vector<std::string> smaller(vocab.begin(), vocab.end() - 1);
        CHECK(!try_load_table_cache(path, s, smaller, 4).has_value());
    }
    SUBCASE("corrupt cache is stale, not fatal") {
        testsupport::write_file(path, "k 4 vocab 40 digest zzzz\ngarbage\n");
        CHECK(!try_load_table_cache(path, s, vocab, 4).has_value());
    }
    SUBCASE("read-through wrapper computes then reuses") {
        auto fresh = dir.file("fresh.nt");
        NeighborTable first = top_k_all_cached(s, vocab, 4, fresh);
        CHECK(tables_equal(t, first));
        NeighborTable second = top_k_all_cached(s, vocab, 4, fresh);
        CHECK(tables_equal(t, second));
    }
}
