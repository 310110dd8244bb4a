#include "doctest.h"

#include <random>

#include "newsminer/caption.hpp"

using namespace newsminer;

TEST_CASE("parses the caption example block") {
    std::string raw =
        "[1339302660.000]    WHAT MORE CAN YOU ASK FOR? \n"
        "[1339302662.169]    >> THIS IS WHAT NBA\n"
        "[1339302663.203]    BASKETBALL IS ABOUT.\n";
    auto result = parse_caption_stream(raw, "cnn");
    REQUIRE(result.lines.size() == 3);
    CHECK(result.rejects.empty());
    CHECK(result.lines[0].ts_ms == 1339302660000);
    CHECK(result.lines[0].text == "WHAT MORE CAN YOU ASK FOR?");
    CHECK(result.lines[1].ts_ms == 1339302662169);
    CHECK(result.lines[1].text == ">> THIS IS WHAT NBA");
    CHECK(result.lines[2].ts_ms == 1339302663203);
}

TEST_CASE("empty input gives empty list") {
    auto result = parse_caption_stream("", "ch");
    CHECK(result.lines.empty());
    CHECK(result.rejects.empty());
}

TEST_CASE("malformed timestamps are rejected with line numbers") {
    auto result = parse_caption_stream("[10.500] A\n[notatime] B\n[11.000] C\n", "ch");
    REQUIRE(result.lines.size() == 2);
    CHECK(result.lines[0].ts_ms == 10500);
    CHECK(result.lines[1].ts_ms == 11000);
    REQUIRE(result.rejects.size() == 1);
    CHECK(result.rejects[0].line_number == 2);
}

TEST_CASE("out-of-order timestamps are flagged, never reordered") {
    auto result = parse_caption_stream("[20.000] A\n[10.000] B\n", "ch");
    REQUIRE(result.lines.size() == 2);
    CHECK(result.lines[0].ts_ms == 20000);
    CHECK(result.lines[1].ts_ms == 10000);
    REQUIRE(result.out_of_order.size() == 1);
    CHECK(result.out_of_order[0] == 2);
}

TEST_CASE("count conservation and serialize round trip on random streams") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::string raw;
        std::size_t non_blank = 0;
        Millis ts = 1000000;
        int n = 1 + static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) {
            int kind = static_cast<int>(rng() % 5);
            if (kind == 0) {
                raw += "\n";  // blank, not counted
                continue;
            }
            ++non_blank;
            if (kind == 1) {
                raw += "garbage line\n";
            } else {
                ts += static_cast<Millis>(rng() % 9000);
                raw += "[" + std::to_string(ts / 1000) + "." +
                       std::to_string(ts % 1000 / 100) + std::to_string(ts % 100 / 10) +
                       std::to_string(ts % 10) + "] WORD" + std::to_string(i) + "\n";
            }
        }
        auto result = parse_caption_stream(raw, "ch");
        CHECK(result.lines.size() + result.rejects.size() == non_blank);

        // round trip: format + reparse is the identity on accepted lines
        std::string again;
        for (const auto& line : result.lines) again += format_caption_line(line) + "\n";
        auto reparsed = parse_caption_stream(again, "ch");
        REQUIRE(reparsed.lines.size() == result.lines.size());
        for (std::size_t i = 0; i < result.lines.size(); ++i) {
            CHECK(reparsed.lines[i].ts_ms == result.lines[i].ts_ms);
            CHECK(reparsed.lines[i].text == result.lines[i].text);
        }
    }
}

namespace {

Guide make_guide() {
    return {
        {"cnn", 0, 1000, "CNN World Sports", Genre::sports, true},
        {"cnn", 1000, 2000, "Movie", Genre::entertainment, false},
        {"cnn", 3000, 4000, "CNN News", Genre::general, true},
    };
}

}  // namespace

TEST_CASE("resolve_provider honors guide intervals and news flag") {
    auto guide = make_guide();
    ChannelMap channels{{"cnn", "CNN"}};

    auto p = resolve_provider("cnn", 500, guide, channels);
    REQUIRE(p.has_value());
    CHECK(p->network == "CNN");
    CHECK(p->genre == Genre::sports);
    CHECK(p->id() == "CNN:sports");

    CHECK(!resolve_provider("cnn", 1500, guide, channels).has_value());  // non-news
    CHECK(!resolve_provider("cnn", 2500, guide, channels).has_value());  // gap
    // half-open intervals: boundary belongs to the later program
    CHECK(!resolve_provider("cnn", 1000, guide, channels).has_value());
    CHECK(resolve_provider("cnn", 0, guide, channels).has_value());

    CHECK_THROWS_AS(resolve_provider("nope", 0, guide, channels), UnmappedChannelError);
}

TEST_CASE("partition_by_provider drops non-news and preserves order") {
    auto guide = make_guide();
    ChannelMap channels{{"cnn", "CNN"}};
    std::vector<CaptionLine> lines = {
        {100, "cnn", "A"}, {1100, "cnn", "B"}, {300, "cnn", "C"},
        {1200, "cnn", "D"}, {500, "cnn", "E"}, {1500, "cnn", "F"},
    };
    auto result = partition_by_provider(lines, guide, channels);
    REQUIRE(result.by_provider.size() == 1);
    const auto& sports = result.by_provider.begin()->second;
    REQUIRE(sports.size() == 3);
    CHECK(sports[0].text == "A");
    CHECK(sports[1].text == "C");
    CHECK(sports[2].text == "E");
}

TEST_CASE("all lines non-news gives empty map") {
    Guide guide = {{"cnn", 0, 10000, "Movie", Genre::general, false}};
    ChannelMap channels{{"cnn", "CNN"}};
    std::vector<CaptionLine> lines = {{100, "cnn", "A"}, {200, "cnn", "B"}};
    CHECK(partition_by_provider(lines, guide, channels).by_provider.empty());
}

TEST_CASE("same network, different genres yields distinct providers") {
    Guide guide = {
        {"cnn1", 0, 1000, "CNN Sports", Genre::sports, true},
        {"cnn2", 0, 1000, "CNN Business", Genre::business, true},
    };
    ChannelMap channels{{"cnn1", "CNN"}, {"cnn2", "CNN"}};
    std::vector<CaptionLine> lines = {{100, "cnn1", "A"}, {100, "cnn2", "B"}};
    auto result = partition_by_provider(lines, guide, channels);
    CHECK(result.by_provider.size() == 2);
}

TEST_CASE("partition conserves resolvable lines exactly once") {
    auto guide = make_guide();
    ChannelMap channels{{"cnn", "CNN"}};
    std::mt19937 rng(11);
    std::vector<CaptionLine> lines;
    for (int i = 0; i < 200; ++i)
        lines.push_back({static_cast<Millis>(rng() % 5000), "cnn",
                         "T" + std::to_string(i)});
    auto result = partition_by_provider(lines, guide, channels);
    std::size_t assigned = 0;
    for (const auto& [p, ls] : result.by_provider) assigned += ls.size();
    std::size_t resolvable = 0;
    for (const auto& l : lines)
        if (resolve_provider(l.channel_id, l.ts_ms, guide, channels)) ++resolvable;
    CHECK(assigned == resolvable);
}
