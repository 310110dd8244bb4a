#ifndef NEWSMINER_MATCHING_HPP
#define NEWSMINER_MATCHING_HPP

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "newsminer/annotation.hpp"
#include "newsminer/caption.hpp"

namespace newsminer {

constexpr Millis kDayMs = 86400000;
constexpr Millis kStoryLifetimeMs = 3 * kDayMs;

struct Story {
    std::string story_id;
    Genre genre = Genre::general;
    Millis published_ms = 0;
    std::string title;
    std::map<std::string, int> body_entities;  // entity_id -> count (title+body)
    std::set<std::string> title_entities;
};

// Feature order is fixed; models are not portable across reorderings.
constexpr std::size_t kFeatureCount = 6;
using FeatureVector = std::array<double, kFeatureCount>;
extern const std::array<const char*, kFeatureCount> kFeatureNames;

struct MatchModel {
    Genre genre = Genre::general;
    FeatureVector weights{};
    double bias = 0.0;
    double threshold = 0.5;
    bool precision_warning = false;  // target unattainable on held-out split
    double holdout_precision = 0.0;
};

struct SentenceMatchInput {
    Millis ts_ms = 0;
    std::vector<EntityMention> mentions;
};

struct LabeledPair {
    SentenceMatchInput sentence;
    const Story* story = nullptr;
    bool same_story = false;
};

struct QualifiedMatching {
    std::string provider_id;
    std::string story_id;
    Millis first_ms = 0;
    Millis last_ms = 0;
    int evidence_count = 0;
};

struct SentenceStoryMatch {
    std::string provider_id;
    std::string story_id;
    Millis ts_ms = 0;
    std::size_t sentence_ref = 0;
    double score = 0.0;
};

FeatureVector extract_features(const SentenceMatchInput& sentence, const Story& story);

// Logistic regression by batch gradient descent, deterministic under the
// seed; threshold is the smallest value reaching precision_target on a
// held-out 20% split, else 0.99 with precision_warning set.
MatchModel train_matcher(const std::vector<LabeledPair>& pairs, Genre genre,
                         double precision_target = 0.9, unsigned seed = 42);

double match_score(const MatchModel& model, const FeatureVector& features);

// Stories older than 3 days at now_ts are excluded before scoring.
std::vector<std::pair<std::string, double>> classify(const SentenceMatchInput& sentence,
                                                     const std::vector<Story>& pool,
                                                     const MatchModel& model,
                                                     Millis now_ms);

// Greedy left-to-right grouping per (provider, story); matches with a
// repeated sentence_ref count once.
std::vector<QualifiedMatching> qualify(std::vector<SentenceStoryMatch> matches,
                                       Millis window_ms = 600000, int min_evidence = 2);

std::vector<Story> load_stories(const std::string& path, const Gazetteer& gazetteer);

}  // namespace newsminer

#endif
