#include <doctest.h>

#include "wemstab/errors.hpp"
#include "wemstab/sweep.hpp"

#include "support.hpp"

using namespace wemstab;
using testsupport::TempDir;

namespace {

std::string save_random(const TempDir& dir, const std::string& name, std::uint64_t seed,
                        std::size_t n, std::size_t d) {
    auto space = testsupport::random_space(seed, n, d, name);
    auto path = dir.file(name);
    save_space(space, path);
    return path;
}

std::string save_perturbed(const TempDir& dir, const std::string& name,
                           const EmbeddingSpace& base, double noise, std::uint64_t seed) {
    auto space = testsupport::perturbed_space(base, noise, seed, name);
    auto path = dir.file(name);
    save_space(space, path);
    return path;
}

} // namespace

TEST_CASE("sweep config parsing") {
    TempDir dir("sweep_cfg");
    auto path = dir.file("cfg");

    SUBCASE("full example") {
        testsupport::write_file(path,
                                "# dimension sweep\n"
                                "axis = dimension\n"
                                "format = glove-text\n"
                                "k = 5\n"
                                "out = table.csv\n"
                                "group 50 = a.vec b.vec\n"
                                "group 100 = c.vec d.vec e.vec\n");
        SweepSpec spec = parse_sweep_config(path);
        CHECK(spec.axis == SweepAxis::dimension);
        CHECK(spec.format == SpaceFormat::glove_text);
        CHECK(spec.k == 5);
        CHECK(spec.output_path == "table.csv");
        REQUIRE(spec.groups.size() == 2);
        CHECK(spec.groups.at(50) == std::vector<std::string>{"a.vec", "b.vec"});
        CHECK(spec.groups.at(100).size() == 3);
    }
    SUBCASE("missing axis") {
        testsupport::write_file(path, "group 1 = a.vec b.vec\n");
        CHECK_THROWS_AS(parse_sweep_config(path), ValidationError);
    }
    SUBCASE("unknown key") {
        testsupport::write_file(path, "axis = k\nbogus = 1\ngroup 1 = a b\n");
        CHECK_THROWS_AS(parse_sweep_config(path), ValidationError);
    }
    SUBCASE("duplicate group") {
        testsupport::write_file(path, "axis = k\ngroup 1 = a b\ngroup 1 = c d\n");
        CHECK_THROWS_AS(parse_sweep_config(path), ValidationError);
    }
    SUBCASE("cross-dimension requires a baseline") {
        testsupport::write_file(path, "axis = cross-dimension\ngroup 50 = a\n");
        CHECK_THROWS_AS(parse_sweep_config(path), ValidationError);
    }
    SUBCASE("unknown axis") {
        testsupport::write_file(path, "axis = sideways\ngroup 1 = a b\n");
        CHECK_THROWS_AS(parse_sweep_config(path), ValidationError);
    }
}

TEST_CASE("k-axis sweep hits 1.0 at exhaustive k") {
    TempDir dir("sweep_k");
    const std::size_t n = 40;
    auto s1 = save_random(dir, "s1.vec", 1001, n, 6);
    auto s2 = save_random(dir, "s2.vec", 1002, n, 6);
    SweepSpec spec;
    spec.axis = SweepAxis::k;
    spec.groups[1] = {s1, s2};
    spec.groups[static_cast<long long>(n - 1)] = {s1, s2};
    auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].axis_value == 1);
    CHECK(rows[1].axis_value == static_cast<long long>(n - 1));
    CHECK(rows[1].stability == 1.0);
    CHECK(rows[0].stability < 1.0);
}

TEST_CASE("duplicated identical spaces give 1.0 on every row") {
    TempDir dir("sweep_dup");
    auto s1 = save_random(dir, "s1.vec", 2001, 30, 5);
    SweepSpec spec;
    spec.axis = SweepAxis::dimension;
    spec.k = 4;
    spec.groups[50] = {s1, s1};
    spec.groups[100] = {s1, s1};
    auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) CHECK(row.stability == 1.0);
}

TEST_CASE("groups need two spaces on standard axes") {
    TempDir dir("sweep_small");
    auto s1 = save_random(dir, "s1.vec", 2002, 20, 4);
    SweepSpec spec;
    spec.axis = SweepAxis::window;
    spec.k = 3;
    spec.groups[2] = {s1};
    CHECK_THROWS_AS(run_sweep(spec), ValidationError);
}

TEST_CASE("successive-epoch pairs adjacent groups by position") {
    TempDir dir("sweep_epoch");
    auto base = testsupport::random_space(3001, 30, 5, "base");
    auto e1 = save_perturbed(dir, "e1.vec", base, 0.30, 31);
    auto e2 = save_perturbed(dir, "e2.vec", base, 0.20, 32);
    auto e3 = save_perturbed(dir, "e3.vec", base, 0.10, 33);
    SweepSpec spec;
    spec.axis = SweepAxis::successive_epoch;
    spec.k = 4;
    spec.groups[1] = {e1};
    spec.groups[2] = {e2};
    spec.groups[3] = {e3};
    auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 2); // transitions into 2 and 3 only
    CHECK(rows[0].axis_value == 2);
    CHECK(rows[1].axis_value == 3);
    CHECK(rows[0].per_pair.size() == 1);
}

TEST_CASE("successive-epoch error cases") {
    TempDir dir("sweep_epoch_bad");
    auto s1 = save_random(dir, "s1.vec", 3002, 20, 4);
    auto s2 = save_random(dir, "s2.vec", 3003, 20, 4);

    SUBCASE("mismatched group sizes are unpairable") {
        SweepSpec spec;
        spec.axis = SweepAxis::successive_epoch;
        spec.k = 3;
        spec.groups[1] = {s1, s2};
        spec.groups[2] = {s1};
        CHECK_THROWS_AS(run_sweep(spec), ValidationError);
    }
    SUBCASE("no adjacent values is unpairable") {
        SweepSpec spec;
        spec.axis = SweepAxis::successive_epoch;
        spec.k = 3;
        spec.groups[1] = {s1};
        spec.groups[5] = {s2};
        CHECK_THROWS_AS(run_sweep(spec), ValidationError);
    }
}

TEST_CASE("cross-dimension pairs every group against the baseline space") {
    TempDir dir("sweep_xdim");
    auto b = save_random(dir, "b100.vec", 4001, 30, 10);
    auto d50 = save_random(dir, "d50.vec", 4002, 30, 5);
    auto d200a = save_random(dir, "d200a.vec", 4003, 30, 20);
    auto d200b = save_random(dir, "d200b.vec", 4004, 30, 20);
    SweepSpec spec;
    spec.axis = SweepAxis::cross_dimension;
    spec.k = 4;
    spec.baseline = 100;
    spec.groups[100] = {b};
    spec.groups[50] = {d50};
    spec.groups[200] = {d200a, d200b};
    auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 2); // no row for the baseline itself
    CHECK(rows[0].axis_value == 50);
    CHECK(rows[1].axis_value == 200);
    CHECK(rows[1].per_pair.size() == 2);

    SUBCASE("missing baseline group") {
        spec.baseline = 300;
        CHECK_THROWS_AS(run_sweep(spec), ValidationError);
    }
    SUBCASE("baseline group must hold exactly one space") {
        spec.groups[100] = {b, d50};
        CHECK_THROWS_AS(run_sweep(spec), ValidationError);
    }
}

TEST_CASE("correlated spaces produce a non-trivial k curve") {
    TempDir dir("sweep_curve");
    auto base = testsupport::random_space(5001, 400, 16, "base");
    auto a = save_perturbed(dir, "a.vec", base, 0.35, 51);
    auto b = save_perturbed(dir, "b.vec", base, 0.35, 52);
    SweepSpec spec;
    spec.axis = SweepAxis::k;
    for (long long k : {1, 2, 5, 10, 20}) spec.groups[k] = {a, b};
    auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 5);
    for (const auto& row : rows) {
        CHECK(row.stability > 0.0);
        CHECK(row.stability < 1.0);
    }
}

TEST_CASE("sweep rows serialize in order") {
    TempDir dir("sweep_emit");
    std::vector<SweepRow> rows;
    rows.push_back({1, 0.25, {{"a|b", 0.25}}});
    rows.push_back({10, 0.5, {{"a|b", 0.5}}});
    auto path = dir.file("t.csv");
    write_sweep_csv(rows, path);
    CHECK(testsupport::read_file(path) == "axis_value,stability\n1,0.25\n10,0.5\n");
    auto pairs_path = dir.file("p.csv");
    write_sweep_pairs_csv(rows, pairs_path);
    CHECK(testsupport::read_file(pairs_path) ==
          "axis_value,pair,stability\n1,a|b,0.25\n10,a|b,0.5\n");
}
