#include "newsminer/matching.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace newsminer {

const std::array<const char*, kFeatureCount> kFeatureNames = {
    "shared_entity_count", "jaccard",         "max_shared_salience",
    "sentence_coverage",   "recency",         "title_hit",
};

FeatureVector extract_features(const SentenceMatchInput& sentence, const Story& story) {
    std::set<std::string> sentence_entities;
    std::map<std::string, double> best_salience;
    for (const auto& m : sentence.mentions) {
        sentence_entities.insert(m.entity_id);
        auto& s = best_salience[m.entity_id];
        s = std::max(s, m.salience);
    }

    int shared = 0;
    double max_salience = 0.0;
    bool title_hit = false;
    for (const auto& e : sentence_entities) {
        if (story.body_entities.count(e)) {
            ++shared;
            max_salience = std::max(max_salience, best_salience[e]);
            if (story.title_entities.count(e)) title_hit = true;
        }
    }
    std::size_t union_size = sentence_entities.size() + story.body_entities.size() - shared;
    double jaccard = union_size > 0 ? static_cast<double>(shared) / union_size : 0.0;
    double coverage = sentence_entities.empty()
                          ? 0.0
                          : static_cast<double>(shared) / sentence_entities.size();
    double recency = 1.0;
    if (sentence.ts_ms > story.published_ms) {
        double days = static_cast<double>(sentence.ts_ms - story.published_ms) / kDayMs;
        recency = std::clamp(std::exp(-days), 0.0, 1.0);
    }
    return {static_cast<double>(shared), jaccard, max_salience,
            coverage,                    recency, title_hit ? 1.0 : 0.0};
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double precision_at(const std::vector<std::pair<double, bool>>& scored, double threshold) {
    int tp = 0, fp = 0;
    for (const auto& [score, positive] : scored) {
        if (score < threshold) continue;
        if (positive)
            ++tp;
        else
            ++fp;
    }
    if (tp + fp == 0) return 0.0;
    return static_cast<double>(tp) / (tp + fp);
}

}  // namespace

MatchModel train_matcher(const std::vector<LabeledPair>& pairs, Genre genre,
                         double precision_target, unsigned seed) {
    std::size_t positives = 0;
    for (const auto& p : pairs)
        if (p.same_story) ++positives;
    if (positives < 2 || pairs.size() - positives < 2)
        throw std::runtime_error("train_matcher needs >= 2 examples per class");

    std::vector<FeatureVector> features(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        features[i] = extract_features(pairs[i].sentence, *pairs[i].story);

    // deterministic shuffled 80/20 split
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t train_n = pairs.size() - pairs.size() / 5;

    MatchModel model;
    model.genre = genre;

    const double lr = 0.5;
    const int max_epochs = 5000;
    for (int epoch = 0; epoch < max_epochs; ++epoch) {
        FeatureVector grad{};
        double grad_bias = 0.0;
        for (std::size_t k = 0; k < train_n; ++k) {
            std::size_t i = order[k];
            double z = model.bias;
            for (std::size_t f = 0; f < kFeatureCount; ++f)
                z += model.weights[f] * features[i][f];
            double err = sigmoid(z) - (pairs[i].same_story ? 1.0 : 0.0);
            for (std::size_t f = 0; f < kFeatureCount; ++f)
                grad[f] += err * features[i][f];
            grad_bias += err;
        }
        double norm = grad_bias * grad_bias;
        for (double g : grad) norm += g * g;
        norm = std::sqrt(norm) / train_n;
        for (std::size_t f = 0; f < kFeatureCount; ++f)
            model.weights[f] -= lr * grad[f] / train_n;
        model.bias -= lr * grad_bias / train_n;
        if (norm < 1e-6) break;
    }

    // threshold calibration on the held-out split
    std::vector<std::pair<double, bool>> holdout;
    for (std::size_t k = train_n; k < pairs.size(); ++k) {
        std::size_t i = order[k];
        holdout.emplace_back(match_score(model, features[i]), pairs[i].same_story);
    }

    std::vector<double> candidates;
    for (const auto& h : holdout) candidates.push_back(h.first);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    model.threshold = 0.99;
    model.precision_warning = true;
    for (double t : candidates) {
        double p = precision_at(holdout, t);
        if (p >= precision_target) {
            model.threshold = t;
            model.precision_warning = false;
            model.holdout_precision = p;
            break;
        }
    }
    if (model.precision_warning) model.holdout_precision = precision_at(holdout, 0.99);
    return model;
}

double match_score(const MatchModel& model, const FeatureVector& features) {
    double z = model.bias;
    for (std::size_t f = 0; f < kFeatureCount; ++f) z += model.weights[f] * features[f];
    return sigmoid(z);
}

std::vector<std::pair<std::string, double>> classify(const SentenceMatchInput& sentence,
                                                     const std::vector<Story>& pool,
                                                     const MatchModel& model,
                                                     Millis now_ms) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& story : pool) {
        if (story.genre != model.genre) continue;
        if (story.published_ms < now_ms - kStoryLifetimeMs) continue;
        double score = match_score(model, extract_features(sentence, story));
        if (score >= model.threshold) out.emplace_back(story.story_id, score);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

std::vector<QualifiedMatching> qualify(std::vector<SentenceStoryMatch> matches,
                                       Millis window_ms, int min_evidence) {
    std::sort(matches.begin(), matches.end(), [](const auto& a, const auto& b) {
        if (a.provider_id != b.provider_id) return a.provider_id < b.provider_id;
        if (a.story_id != b.story_id) return a.story_id < b.story_id;
        if (a.ts_ms != b.ts_ms) return a.ts_ms < b.ts_ms;
        return a.sentence_ref < b.sentence_ref;
    });

    std::vector<QualifiedMatching> out;
    std::size_t i = 0;
    while (i < matches.size()) {
        std::size_t j = i;
        while (j < matches.size() && matches[j].provider_id == matches[i].provider_id &&
               matches[j].story_id == matches[i].story_id)
            ++j;

        // greedy grouping within one (provider, story) run
        std::size_t k = i;
        while (k < j) {
            Millis group_start = matches[k].ts_ms;
            std::set<std::size_t> distinct_sentences;
            Millis last = group_start;
            std::size_t end = k;
            while (end < j && matches[end].ts_ms - group_start <= window_ms) {
                distinct_sentences.insert(matches[end].sentence_ref);
                last = matches[end].ts_ms;
                ++end;
            }
            if (static_cast<int>(distinct_sentences.size()) >= min_evidence) {
                out.push_back({matches[i].provider_id, matches[i].story_id, group_start,
                               last, static_cast<int>(distinct_sentences.size())});
            }
            k = end;
        }
        i = j;
    }
    return out;
}

std::vector<Story> load_stories(const std::string& path, const Gazetteer& gazetteer) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stories: " + path);
    std::vector<Story> stories;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        Story s;
        s.story_id = j.at("story_id").get<std::string>();
        s.genre = parse_genre(j.at("genre").get<std::string>());
        s.published_ms = j.at("published_ms").get<Millis>();
        s.title = j.at("title").get<std::string>();
        std::string body = j.value("body", "");

        auto count_entities = [&](const std::string& text, bool is_title) {
            auto tokens = tokenize(normalize(text));
            for (const auto& m : recognize_entities(tokens, gazetteer)) {
                ++s.body_entities[m.entity_id];
                if (is_title) s.title_entities.insert(m.entity_id);
            }
        };
        count_entities(s.title, true);
        count_entities(body, false);
        stories.push_back(std::move(s));
    }
    return stories;
}

}  // namespace newsminer
