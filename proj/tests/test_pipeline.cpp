#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "newsminer/pipeline.hpp"

using namespace newsminer;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

}  // namespace

TEST_CASE("empty config file yields all defaults") {
    auto path = write_temp("nm_empty.cfg", "");
    auto result = validate_config(path);
    CHECK(result.errors.empty());
    CHECK(result.config.segmentation.max_gap_ms == 5000);
    CHECK(result.config.segmentation.speaker_marker == ">>");
    CHECK(result.config.match_window_ms == 600000);
    CHECK(result.config.match_min_evidence == 2);
    CHECK(result.config.match_precision_target == 0.9);
    CHECK(result.config.analytics_min_support == 5);
    CHECK(result.config.analytics_min_mentions == 20);
    CHECK(result.config.seed == 42);
}

TEST_CASE("out-of-range value names the bound") {
    auto path = write_temp("nm_range.cfg", "match.window_ms = -1\n");
    auto result = validate_config(path);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].find("match.window_ms") != std::string::npos);
    CHECK(result.errors[0].find("range") != std::string::npos);
}

TEST_CASE("errors aggregate instead of failing fast") {
    auto path = write_temp("nm_multi.cfg",
                           "bogus_key = 1\n"
                           "match.precision_target = 1.5\n"
                           "seed = 7\n");
    auto result = validate_config(path);
    CHECK(result.errors.size() == 2);
    CHECK(result.config.seed == 7);
}

TEST_CASE("valid keys are applied") {
    auto path = write_temp("nm_ok.cfg",
                           "segment.max_gap_ms = 3000\n"
                           "match.min_evidence = 3\n"
                           "cluster.ranks = 2,2,2\n"
                           "out_dir = somewhere\n");
    auto result = validate_config(path);
    CHECK(result.errors.empty());
    CHECK(result.config.segmentation.max_gap_ms == 3000);
    CHECK(result.config.match_min_evidence == 3);
    CHECK(result.config.tucker_rank_p == 2);
    CHECK(result.config.out_dir == "somewhere");
}

TEST_CASE("analyze without match artifacts is a stage-order error") {
    PipelineConfig cfg;
    cfg.out_dir = (fs::temp_directory_path() / "nm_stage_order").string();
    fs::remove_all(cfg.out_dir);
    CHECK_THROWS_AS(run_pipeline(cfg, {Stage::analyze}), StageOrderError);
}

TEST_CASE("stage names round trip") {
    for (Stage s : kStageOrder) {
        auto parsed = parse_stage(stage_name(s));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == s);
    }
    CHECK(!parse_stage("bogus").has_value());
}
