#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "swards/environment.hpp"
#include "swards/io.hpp"
#include "oracles.hpp"

using namespace swards;
using Catch::Approx;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::filesystem::remove(path); }
    void fill(const std::string& text) {
        std::ofstream out(path);
        out << text;
    }
};

} // namespace

TEST_CASE("points CSV round trip with labels") {
    Rng rng(301);
    auto pts = oracles::random_points(rng, 25, 2, 3.0);
    auto labels = oracles::random_labels(rng, 25, 4);

    TempFile f("swards_pts.csv");
    write_points_csv(f.path, pts, &labels);
    auto back = read_points_csv(f.path);
    REQUIRE(back.points.size() == pts.size());
    REQUIRE(back.labels.has_value());
    CHECK(*back.labels == labels);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(back.points[i] == pts[i]); // 17 significant digits survive
}

TEST_CASE("points CSV round trip without labels, higher dimension") {
    Rng rng(302);
    auto pts = oracles::random_points(rng, 10, 5, 2.0);
    TempFile f("swards_pts5.csv");
    write_points_csv(f.path, pts);
    auto back = read_points_csv(f.path);
    CHECK_FALSE(back.labels.has_value());
    REQUIRE(back.points.size() == 10);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(back.points[i] == pts[i]);
}

TEST_CASE("headerless points are accepted") {
    TempFile f("swards_plain.csv");
    f.fill("1.5,2.5\n-1,0\n3,4\n");
    auto back = read_points_csv(f.path);
    CHECK_FALSE(back.labels.has_value());
    REQUIRE(back.points.size() == 3);
    CHECK(back.points[0] == Point{1.5, 2.5});
    CHECK(back.points[2] == Point{3.0, 4.0});
}

TEST_CASE("points CSV error reporting") {
    TempFile ragged("swards_ragged.csv");
    ragged.fill("x,y\n1,2\n3\n");
    try {
        read_points_csv(ragged.path);
        FAIL("expected input_error");
    } catch (const input_error& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }

    TempFile bad("swards_bad.csv");
    bad.fill("x,y\n1,2\n1,oops\n");
    try {
        read_points_csv(bad.path);
        FAIL("expected input_error");
    } catch (const input_error& e) {
        CHECK(std::string(e.what()).find("oops") != std::string::npos);
    }

    TempFile empty("swards_empty.csv");
    empty.fill("");
    CHECK_THROWS_AS(read_points_csv(empty.path), input_error);

    TempFile headeronly("swards_header_only.csv");
    headeronly.fill("x,y\n");
    CHECK_THROWS_AS(read_points_csv(headeronly.path), input_error);

    TempFile labelonly("swards_labelonly.csv");
    labelonly.fill("label\n1\n2\n");
    CHECK_THROWS_AS(read_points_csv(labelonly.path), input_error);

    CHECK_THROWS_AS(read_points_csv("/nonexistent/nope.csv"), input_error);
}

TEST_CASE("labels CSV round trip and variants") {
    std::vector<int> labels{0, 2, 1, 1, 0, 3};
    TempFile f("swards_labels.csv");
    write_labels_csv(f.path, labels);
    CHECK(read_labels_csv(f.path) == labels);

    TempFile bare("swards_bare_labels.csv");
    bare.fill("1\n0\n2\n");
    CHECK(read_labels_csv(bare.path) == std::vector<int>{1, 0, 2});

    TempFile wide("swards_wide_labels.csv");
    wide.fill("a,b,c\n");
    CHECK_THROWS_AS(read_labels_csv(wide.path), input_error);

    TempFile garbage("swards_garbage_labels.csv");
    garbage.fill("index,label\n0,1\n1,zap\n");
    CHECK_THROWS_AS(read_labels_csv(garbage.path), input_error);

    TempFile none("swards_no_labels.csv");
    none.fill("index,label\n");
    CHECK_THROWS_AS(read_labels_csv(none.path), input_error);
}

TEST_CASE("run report JSON round trip") {
    RunReport r;
    r.config = {{"mode", "swards"}, {"n_init_clusters", 10}};
    r.energy = -3.25;
    r.n_clusters = 3;
    r.cluster_sizes = {50, 30, 20};
    r.dimension_N = 2.49;
    r.restarts_used = 10;
    r.sweeps_per_restart = {4, 6, 3, 5, 5, 4, 7, 3, 4, 6};
    r.wall_time_ms = 12.5;
    r.seed = 0xdeadbeef;

    TempFile f("swards_report.json");
    save_report(f.path, r);
    auto back = load_report(f.path);
    CHECK(back == r);

    r.dimension_N.reset();
    save_report(f.path, r);
    back = load_report(f.path);
    CHECK(back == r);
    CHECK_FALSE(back.dimension_N.has_value());

    TempFile junk("swards_junk.json");
    junk.fill("{ not json");
    CHECK_THROWS_AS(load_report(junk.path), input_error);
}

TEST_CASE("environment JSON round trip") {
    Environment env;
    env.barriers = {{{-1, 0}, {1, 0}}, {{0.25, -3}, {0.25, 3}}};
    env.border_x = 0.5;
    env.slow_factor = 5.0;
    env.bbox = {-4, -4, 4, 4};

    TempFile f("swards_env.json");
    save_environment(f.path, env);
    auto back = load_environment(f.path);
    CHECK(back.barriers.size() == 2);
    CHECK(back.barriers[0].a == env.barriers[0].a);
    CHECK(back.barriers[1].b == env.barriers[1].b);
    REQUIRE(back.border_x.has_value());
    CHECK(*back.border_x == 0.5);
    CHECK(back.slow_factor == 5.0);
    CHECK(back.bbox.xmin == -4.0);
    CHECK(back.bbox.ymax == 4.0);

    env.border_x.reset();
    save_environment(f.path, env);
    CHECK_FALSE(load_environment(f.path).border_x.has_value());
}

TEST_CASE("environment validation on load") {
    TempFile nobox("swards_env_nobox.json");
    nobox.fill(R"({"barriers": []})");
    CHECK_THROWS_AS(load_environment(nobox.path), input_error);

    TempFile badbar("swards_env_badbar.json");
    badbar.fill(R"({"barriers": [[0, 0, 0]], "bbox": [-1, -1, 1, 1]})");
    CHECK_THROWS_AS(load_environment(badbar.path), input_error);

    TempFile degenerate("swards_env_degen.json");
    degenerate.fill(R"({"barriers": [[0, 0, 0, 0]], "bbox": [-1, -1, 1, 1]})");
    CHECK_THROWS_AS(load_environment(degenerate.path), input_error);

    TempFile slow("swards_env_slow.json");
    slow.fill(R"({"slow_factor": 0.5, "bbox": [-1, -1, 1, 1]})");
    CHECK_THROWS_AS(load_environment(slow.path), input_error);

    TempFile notjson("swards_env_txt.json");
    notjson.fill("hello");
    CHECK_THROWS_AS(load_environment(notjson.path), input_error);
}
