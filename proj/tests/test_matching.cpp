#include "doctest.h"

#include <cmath>
#include <random>

#include "newsminer/matching.hpp"

using namespace newsminer;

namespace {

Story make_story(const std::string& id, std::initializer_list<const char*> entities,
                 Millis published = 0, Genre genre = Genre::general) {
    Story s;
    s.story_id = id;
    s.genre = genre;
    s.published_ms = published;
    for (const char* e : entities) s.body_entities[e] = 1;
    return s;
}

SentenceMatchInput make_sentence(std::initializer_list<const char*> entities,
                                 Millis ts = 0) {
    SentenceMatchInput input;
    input.ts_ms = ts;
    std::size_t i = 0;
    for (const char* e : entities) {
        EntityMention m;
        m.entity_id = e;
        m.span_begin = i;
        m.span_end = i + 1;
        m.salience = 0.5;
        input.mentions.push_back(std::move(m));
        ++i;
    }
    return input;
}

}  // namespace

TEST_CASE("features for disjoint entity sets are zero") {
    auto story = make_story("s", {"X", "Y"});
    auto f = extract_features(make_sentence({"A", "B"}), story);
    CHECK(f[0] == 0.0);  // shared
    CHECK(f[1] == 0.0);  // jaccard
    CHECK(f[5] == 0.0);  // title hit
}

TEST_CASE("identity case: identical singleton sets, same timestamp") {
    auto story = make_story("s", {"A"});
    auto f = extract_features(make_sentence({"A"}), story);
    CHECK(f[0] == 1.0);
    CHECK(f[1] == 1.0);
    CHECK(f[4] == 1.0);  // recency
}

TEST_CASE("jaccard and recency arithmetic") {
    auto story = make_story("s", {"B", "C"}, 0);
    auto f = extract_features(make_sentence({"A", "B"}, kDayMs), story);
    CHECK(f[1] == doctest::Approx(1.0 / 3.0));
    CHECK(f[4] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("story newer than the sentence counts as just published") {
    auto story = make_story("s", {"A"}, 10 * kDayMs);
    auto f = extract_features(make_sentence({"A"}, 0), story);
    CHECK(f[4] == 1.0);
}

namespace {

// separable corpus: positives share entities with the story, negatives do not
std::pair<std::vector<LabeledPair>, std::vector<Story>> separable_corpus(int n,
                                                                         unsigned seed) {
    std::vector<Story> stories;
    stories.push_back(make_story("pos", {"A", "B", "C"}));
    stories.push_back(make_story("neg", {"X", "Y", "Z"}));
    std::vector<LabeledPair> pairs;
    std::mt19937 rng(seed);
    for (int i = 0; i < n; ++i) {
        bool positive = i % 2 == 0;
        LabeledPair p;
        p.sentence = positive ? make_sentence({"A", "B"}, rng() % 1000)
                              : make_sentence({"Q", "R"}, rng() % 1000);
        p.story = &stories[0];
        p.same_story = positive;
        pairs.push_back(p);
    }
    return {pairs, stories};
}

}  // namespace

TEST_CASE("train_matcher reaches perfect precision on separable data") {
    auto [pairs, stories] = separable_corpus(200, 17);
    auto model = train_matcher(pairs, Genre::general, 0.9, 42);
    CHECK(!model.precision_warning);
    CHECK(model.holdout_precision >= 0.9);
    CHECK(model.threshold < 0.99);
}

TEST_CASE("flipped labels negate the decision behavior") {
    auto [pairs, stories] = separable_corpus(100, 23);
    auto model = train_matcher(pairs, Genre::general, 0.9, 42);
    for (auto& p : pairs) p.same_story = !p.same_story;
    auto flipped = train_matcher(pairs, Genre::general, 0.9, 42);
    auto pos = extract_features(make_sentence({"A", "B"}), stories[0]);
    auto neg = extract_features(make_sentence({"Q"}), stories[0]);
    CHECK(match_score(model, pos) > match_score(model, neg));
    CHECK(match_score(flipped, pos) < match_score(flipped, neg));
}

TEST_CASE("single-class training data is an error") {
    auto [pairs, stories] = separable_corpus(10, 3);
    for (auto& p : pairs) p.same_story = true;
    CHECK_THROWS_AS(train_matcher(pairs, Genre::general), std::runtime_error);
}

TEST_CASE("classify drops stories older than three days") {
    auto [pairs, stories] = separable_corpus(200, 11);
    // a strict target pushes the threshold above every negative's score
    auto model = train_matcher(pairs, Genre::general, 0.999, 42);

    Millis now = 100 * kDayMs;
    std::vector<Story> pool = {make_story("old", {"A", "B", "C"}, now - 4 * kDayMs)};
    CHECK(classify(make_sentence({"A", "B"}, now), pool, model, now).empty());

    CHECK(classify(make_sentence({"A", "B"}, now), {}, model, now).empty());

    std::vector<Story> fresh = {make_story("hit", {"A", "B", "C"}, now - kDayMs / 2),
                                make_story("miss", {"X", "Y"}, now - kDayMs / 2)};
    auto results = classify(make_sentence({"A", "B"}, now), fresh, model, now);
    REQUIRE(results.size() == 1);
    CHECK(results[0].first == "hit");
}

TEST_CASE("threshold monotonicity: raising it never adds matches") {
    auto [pairs, stories] = separable_corpus(200, 31);
    auto model = train_matcher(pairs, Genre::general, 0.9, 42);
    std::vector<Story> pool = {make_story("a", {"A", "B"}), make_story("b", {"A"}),
                               make_story("c", {"Q"})};
    auto base = classify(make_sentence({"A", "B"}), pool, model, 0);
    MatchModel stricter = model;
    stricter.threshold = std::min(0.999, model.threshold + 0.1);
    auto fewer = classify(make_sentence({"A", "B"}), pool, stricter, 0);
    for (const auto& [id, score] : fewer) {
        bool present = false;
        for (const auto& [bid, bscore] : base) present |= bid == id;
        CHECK(present);
    }
    CHECK(fewer.size() <= base.size());
}

TEST_CASE("qualify groups matches inside the window") {
    std::vector<SentenceStoryMatch> matches = {
        {"p", "s", 0, 1, 1.0}, {"p", "s", 60000, 2, 1.0}, {"p", "s", 120000, 3, 1.0}};
    auto qms = qualify(matches, 600000, 2);
    REQUIRE(qms.size() == 1);
    CHECK(qms[0].first_ms == 0);
    CHECK(qms[0].last_ms == 120000);
    CHECK(qms[0].evidence_count == 3);
}

TEST_CASE("an isolated match below min_evidence is dropped") {
    std::vector<SentenceStoryMatch> matches = {{"p", "s", 0, 1, 1.0}};
    CHECK(qualify(matches, 600000, 2).empty());
}

TEST_CASE("window boundary produces two groups") {
    std::vector<SentenceStoryMatch> matches = {{"p", "s", 0, 1, 1.0},
                                               {"p", "s", 660000, 2, 1.0}};
    auto qms = qualify(matches, 600000, 1);
    REQUIRE(qms.size() == 2);
    CHECK(qms[0].first_ms == 0);
    CHECK(qms[1].first_ms == 660000);
}

TEST_CASE("repeats of one sentence do not qualify") {
    std::vector<SentenceStoryMatch> matches = {{"p", "s", 0, 7, 1.0},
                                               {"p", "s", 1000, 7, 1.0}};
    CHECK(qualify(matches, 600000, 2).empty());
}

TEST_CASE("qualify is invariant under input permutation") {
    std::mt19937 rng(41);
    std::vector<SentenceStoryMatch> matches;
    for (int i = 0; i < 30; ++i)
        matches.push_back({"p" + std::to_string(rng() % 3), "s" + std::to_string(rng() % 3),
                           static_cast<Millis>(rng() % 3600000), static_cast<std::size_t>(i),
                           1.0});
    auto sorted = qualify(matches, 600000, 2);
    std::shuffle(matches.begin(), matches.end(), rng);
    auto shuffled = qualify(matches, 600000, 2);
    REQUIRE(sorted.size() == shuffled.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        CHECK(sorted[i].provider_id == shuffled[i].provider_id);
        CHECK(sorted[i].story_id == shuffled[i].story_id);
        CHECK(sorted[i].first_ms == shuffled[i].first_ms);
        CHECK(sorted[i].evidence_count == shuffled[i].evidence_count);
    }
}
