#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "horolab/errors.hpp"
#include "horolab/scenario.hpp"

using namespace horolab;

namespace {

RunOptions tmp_opts(const char* sub) {
    RunOptions o;
    o.out_dir = std::filesystem::temp_directory_path() / "horolab_test" / sub;
    return o;
}

}  // namespace

TEST_CASE("catalog lists the worked examples") {
    const auto ids = replicate_ids();
    for (const char* id :
         {"shift-l1", "shift-l2", "shift-c0", "shift-linfty", "l2-counterexample", "hN-family",
          "tmu-family", "polynomial-family", "dsum-p1", "dsum-pinf-projection",
          "busemann-l1-plane", "ck-constant", "opial-en", "asymptotic-center", "ne_n-example"}) {
        CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
    }
    CHECK_THROWS_AS(replicate("no-such-id", RunOptions{}), SchemaError);
}

TEST_CASE("reports are byte-identical across runs with the same seed") {
    const RunOptions opts;
    const ScenarioReport a = replicate("dsum-p1", opts);
    const ScenarioReport b = replicate("dsum-p1", opts);
    CHECK(a.doc.dump() == b.doc.dump());

    RunOptions reseeded;
    reseeded.seed = 777;
    const ScenarioReport c = replicate("dsum-p1", reseeded);
    CHECK(a.doc.dump() != c.doc.dump());  // seed participates in the sampling
    CHECK(c.pass);
}

TEST_CASE("generic subinvariance scenario with assertions") {
    const json doc = {
        {"task", "subinvariance"},
        {"seed", 5},
        {"space", {{"kind", "lp"}, {"p", 1.0}}},
        {"maps", {{"members", {{{"label", "T"}, {"map", {{"op", "prepend_shift"}, {"value", 1.0}}}}}}}},
        {"functionals", {{{"variant", "shift_l1"}}}},
        {"probes", {{"preset", "default"}, {"random", 20}, {"integer", true}}},
        {"assertions",
         {{{"path", "/subinvariance/max_defect"}, {"op", "eq"}, {"value", -1.0}},
          {{"path", "/subinvariance/verdict"}, {"op", "eq"}, {"value", "StrictDecrease"}}}}};
    const ScenarioReport r = run_scenario(doc, "sub-test", RunOptions{});
    CHECK(r.pass);
    CHECK(r.doc["results"]["subinvariance"]["gap"] == 1.0);

    // a wrong expectation turns the report red but does not throw
    json bad = doc;
    bad["assertions"] = {{{"path", "/subinvariance/max_defect"}, {"op", "eq"}, {"value", 0.0}}};
    CHECK(!run_scenario(bad, "sub-bad", RunOptions{}).pass);
}

TEST_CASE("scenario schema errors") {
    CHECK_THROWS_AS(run_scenario(json::array(), "x", RunOptions{}), SchemaError);
    CHECK_THROWS_AS(run_scenario(json{{"seed", 1}}, "x", RunOptions{}), SchemaError);
    CHECK_THROWS_AS(run_scenario(json{{"task", "evaluate"}}, "x", RunOptions{}), SchemaError);
    CHECK_THROWS_AS(
        run_scenario(json{{"task", "subinvariance"},
                          {"seed", 1},
                          {"space", {{"kind", "lp"}, {"p", 1.0}}}},
                     "x", RunOptions{}),
        SchemaError);
    CHECK_THROWS_AS(
        run_scenario(json{{"task", "orbit-limit"},
                          {"seed", 1},
                          {"space", {{"kind", "nope"}}}},
                     "x", RunOptions{}),
        SchemaError);
}

TEST_CASE("probe points from json must contain the origin") {
    const json doc = {{"task", "evaluate"},
                      {"seed", 2},
                      {"space", {{"kind", "lp"}, {"p", 1.0}}},
                      {"functionals", {{{"variant", "shift_l1"}}}},
                      {"probes", {{"points", {{{"coeffs", {1.0}}, {"tail", nullptr}}}}}}};
    CHECK_THROWS_AS(run_scenario(doc, "x", RunOptions{}), std::invalid_argument);
}

TEST_CASE("evaluate task tabulates functionals over probes") {
    const json doc = {
        {"task", "evaluate"},
        {"seed", 3},
        {"space", {{"kind", "lp"}, {"p", 1.0}}},
        {"functionals", {{{"variant", "shift_l1"}}, {{"variant", "hn"}, {"N", 2}}}},
        {"probes",
         {{"points",
           {{{"coeffs", json::array()}, {"tail", nullptr}},
            {{"coeffs", {1.0}}, {"tail", nullptr}}}}}}};
    const ScenarioReport r = run_scenario(doc, "eval", RunOptions{});
    CHECK(r.doc["results"]["table"][0][0] == 0.0);
    CHECK(r.doc["results"]["table"][0][1] == -1.0);
    CHECK(r.doc["results"]["table"][1][1] == -1.0);
}

TEST_CASE("run_files writes reports and propagates exit codes") {
    const RunOptions opts = tmp_opts("files");
    std::filesystem::create_directories(opts.out_dir);

    const auto good = opts.out_dir / "good.json";
    {
        std::ofstream os(good);
        os << R"({"task":"translation","seed":9,"space":{"kind":"lp","p":1},"n":64,)"
           << R"("maps":{"members":[{"label":"T","map":{"op":"prepend_shift","value":1}}]},)"
           << R"("assertions":[{"path":"/translation/estimate","op":"eq","value":1.0}]})";
    }
    CHECK(run_files({good}, opts) == 0);
    CHECK(std::filesystem::exists(opts.out_dir / "good-report.json"));
    CHECK(std::filesystem::exists(opts.out_dir / "good_translation.csv"));

    const auto bad = opts.out_dir / "bad.json";
    {
        std::ofstream os(bad);
        os << "{ this is not json";
    }
    CHECK(run_files({bad}, opts) == 2);

    const auto failing = opts.out_dir / "failing.json";
    {
        std::ofstream os(failing);
        os << R"({"task":"translation","seed":9,"space":{"kind":"lp","p":1},"n":64,)"
           << R"("maps":{"members":[{"label":"T","map":{"op":"prepend_shift","value":1}}]},)"
           << R"("assertions":[{"path":"/translation/estimate","op":"eq","value":0.5}]})";
    }
    CHECK(run_files({failing}, opts) == 1);
}

TEST_CASE("replicate driver runs ids in parallel") {
    RunOptions opts = tmp_opts("parallel");
    opts.parallel = true;
    CHECK(run_replicates({"busemann-l1-plane", "opial-en", "dsum-p1"}, opts) == 0);
    CHECK(std::filesystem::exists(opts.out_dir / "busemann-l1-plane-report.json"));
    CHECK(std::filesystem::exists(opts.out_dir / "busemann-l1-plane_grid.csv"));
}
