#include "newsminer/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace newsminer {

ProminenceRecord prominence(const std::string& story_id, Genre genre,
                            const std::vector<QualifiedMatching>& qualified,
                            const std::set<std::string>& genre_providers) {
    if (genre_providers.empty()) throw std::runtime_error("empty provider set");
    std::set<std::string> covering;
    for (const auto& qm : qualified)
        if (qm.story_id == story_id && genre_providers.count(qm.provider_id))
            covering.insert(qm.provider_id);
    ProminenceRecord r;
    r.story_id = story_id;
    r.genre = genre;
    r.prominence = static_cast<double>(covering.size()) / genre_providers.size();
    return r;
}

std::vector<CoverageBin> coverage_curve(const std::string& provider_id,
                                        const std::vector<ProminenceRecord>& records,
                                        const std::vector<QualifiedMatching>& qualified,
                                        std::size_t bins) {
    std::set<std::string> covered;
    for (const auto& qm : qualified)
        if (qm.provider_id == provider_id) covered.insert(qm.story_id);

    std::vector<std::size_t> total(bins, 0), hit(bins, 0);
    for (const auto& r : records) {
        if (r.prominence <= 0.0) continue;  // bins partition (0, 1]
        auto b = static_cast<std::size_t>(std::ceil(r.prominence * bins)) - 1;
        b = std::min(b, bins - 1);
        ++total[b];
        if (covered.count(r.story_id)) ++hit[b];
    }
    std::vector<CoverageBin> out;
    for (std::size_t b = 0; b < bins; ++b) {
        if (total[b] == 0) continue;
        out.push_back({(b + 0.5) / bins, static_cast<double>(hit[b]) / total[b], total[b]});
    }
    return out;
}

std::map<int, std::size_t> prominence_histogram(
    Genre genre, const std::vector<ProminenceRecord>& records,
    const std::set<std::string>& genre_providers) {
    std::map<int, std::size_t> histogram;
    for (const auto& r : records) {
        if (r.genre != genre) continue;
        int covering = static_cast<int>(std::lround(r.prominence * genre_providers.size()));
        ++histogram[covering];
    }
    return histogram;
}

std::set<std::string> breaking(const std::string& story_id,
                               const std::vector<QualifiedMatching>& qualified,
                               Millis window_ms) {
    Millis t0 = 0;
    bool found = false;
    for (const auto& qm : qualified) {
        if (qm.story_id != story_id) continue;
        if (!found || qm.first_ms < t0) t0 = qm.first_ms;
        found = true;
    }
    if (!found) throw std::runtime_error("unmatched story: " + story_id);
    std::set<std::string> providers;
    for (const auto& qm : qualified)
        if (qm.story_id == story_id && qm.first_ms <= t0 + window_ms)
            providers.insert(qm.provider_id);
    return providers;
}

std::vector<BreakingStats> breaking_scatter(const std::vector<QualifiedMatching>& qualified,
                                            Millis window_ms) {
    std::set<std::string> stories;
    std::map<std::string, std::size_t> qm_count;
    for (const auto& qm : qualified) {
        stories.insert(qm.story_id);
        ++qm_count[qm.provider_id];
    }
    std::map<std::string, std::size_t> breaking_count;
    for (const auto& story : stories)
        for (const auto& p : breaking(story, qualified, window_ms)) ++breaking_count[p];

    std::vector<BreakingStats> out;
    for (const auto& [provider, total] : qm_count) {
        BreakingStats s;
        s.provider_id = provider;
        s.total_qms = total;
        s.breaking_stories = breaking_count.count(provider) ? breaking_count[provider] : 0;
        s.ratio = static_cast<double>(s.breaking_stories) / total;
        out.push_back(std::move(s));
    }
    return out;  // keyed map iteration is already sorted by provider id
}

double duration(const std::string& provider_id, const std::string& story_id,
                const std::vector<QualifiedMatching>& qualified) {
    Millis first = 0, last = 0;
    bool found = false;
    for (const auto& qm : qualified) {
        if (qm.provider_id != provider_id || qm.story_id != story_id) continue;
        if (!found) {
            first = qm.first_ms;
            last = qm.last_ms;
        } else {
            first = std::min(first, qm.first_ms);
            last = std::max(last, qm.last_ms);
        }
        found = true;
    }
    if (!found)
        throw std::runtime_error("no qualified matching for " + provider_id + "/" + story_id);
    double hours = static_cast<double>(last - first) / 3600000.0;
    return std::min(hours, 72.0);
}

std::optional<double> person_provider_sentiment(const std::string& entity_id,
                                                const std::string& provider_id,
                                                const std::vector<MentionRecord>& mentions,
                                                std::size_t min_support) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& m : mentions) {
        if (m.entity_id != entity_id || m.provider_id != provider_id) continue;
        sum += m.score;
        ++n;
    }
    if (n < min_support) return std::nullopt;
    return sum / n;
}

ProfessionRollup profession_rollup(const std::vector<MentionRecord>& mentions,
                                   const ProfessionMap& professions, std::size_t top_k) {
    struct Accum {
        long total = 0;
        double score_sum = 0;
        std::map<std::string, long> per_entity;
    };
    std::map<std::string, Accum> by_profession;
    long mapped = 0;
    for (const auto& m : mentions) {
        auto it = professions.find(m.entity_id);
        std::string prof = it != professions.end() ? it->second : "Other/Other";
        if (it != professions.end()) ++mapped;
        auto& a = by_profession[prof];
        ++a.total;
        a.score_sum += m.score;
        ++a.per_entity[m.entity_id];
    }

    ProfessionRollup rollup;
    rollup.mapped_fraction =
        mentions.empty() ? 0.0 : static_cast<double>(mapped) / mentions.size();
    for (const auto& [prof, a] : by_profession) {
        ProfessionStats s;
        s.profession = prof;
        s.total_mentions = a.total;
        s.mean_sentiment = a.score_sum / a.total;
        std::vector<std::pair<std::string, long>> entities(a.per_entity.begin(),
                                                           a.per_entity.end());
        std::stable_sort(entities.begin(), entities.end(), [](const auto& x, const auto& y) {
            if (x.second != y.second) return x.second > y.second;
            return x.first < y.first;
        });
        for (std::size_t i = 0; i < std::min(top_k, entities.size()); ++i)
            s.top_entities.emplace_back(entities[i].first,
                                        100.0 * entities[i].second / a.total);
        rollup.professions.push_back(std::move(s));
    }
    std::stable_sort(rollup.professions.begin(), rollup.professions.end(),
                     [](const auto& x, const auto& y) {
                         if (x.total_mentions != y.total_mentions)
                             return x.total_mentions > y.total_mentions;
                         return x.profession < y.profession;
                     });
    return rollup;
}

double jensen_shannon(const std::map<std::string, long>& a,
                      const std::map<std::string, long>& b,
                      const std::set<std::string>& vocabulary, double alpha) {
    if (vocabulary.empty()) return 0.0;
    long a_total = 0, b_total = 0;
    for (const auto& w : vocabulary) {
        auto ia = a.find(w);
        auto ib = b.find(w);
        if (ia != a.end()) a_total += ia->second;
        if (ib != b.end()) b_total += ib->second;
    }
    double a_denom = a_total + alpha * vocabulary.size();
    double b_denom = b_total + alpha * vocabulary.size();
    double jsd = 0.0;
    for (const auto& w : vocabulary) {
        auto ia = a.find(w);
        auto ib = b.find(w);
        double p = ((ia != a.end() ? ia->second : 0) + alpha) / a_denom;
        double q = ((ib != b.end() ? ib->second : 0) + alpha) / b_denom;
        double m = 0.5 * (p + q);
        jsd += 0.5 * p * std::log(p / m) + 0.5 * q * std::log(q / m);
    }
    return std::max(jsd, 0.0);
}

std::vector<VocabularyOutlier> vocabulary_outliers(const ProviderSentences& corpus,
                                                   std::size_t min_mentions, double alpha) {
    std::map<std::string, long> background;
    std::set<std::string> vocabulary;
    std::map<std::string, std::map<std::string, long>> entity_words;
    std::map<std::string, long> entity_mentions;

    for (const auto& [words, entities] : corpus.sentences) {
        for (const auto& w : words) {
            ++background[w];
            vocabulary.insert(w);
        }
        for (const auto& e : entities) {
            ++entity_mentions[e];
            for (const auto& w : words) ++entity_words[e][w];
        }
    }

    std::vector<VocabularyOutlier> out;
    for (const auto& [entity, count] : entity_mentions) {
        if (static_cast<std::size_t>(count) < min_mentions) continue;
        VocabularyOutlier o;
        o.entity_id = entity;
        o.mentions = count;
        o.jsd = jensen_shannon(entity_words[entity], background, vocabulary, alpha);
        out.push_back(std::move(o));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.jsd != y.jsd) return x.jsd > y.jsd;
        return x.entity_id < y.entity_id;
    });
    return out;
}

StyleVector style_vector(const std::string& owner,
                         const std::vector<AnnotatedSentence>& sentences) {
    std::map<std::string, long> counts;
    long total = 0;
    for (const auto& s : sentences) {
        for (const auto& t : s.tokens) {
            std::string category = t.dep.empty() ? t.pos : t.pos + "/" + t.dep;
            ++counts[category];
            ++total;
        }
    }
    if (total == 0) throw std::runtime_error("no tokens for owner: " + owner);
    StyleVector v;
    v.owner = owner;
    for (const auto& [cat, c] : counts)
        v.category_freqs[cat] = static_cast<double>(c) / total;
    return v;
}

}  // namespace newsminer
