#ifndef NEWSMINER_ANALYTICS_HPP
#define NEWSMINER_ANALYTICS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "newsminer/annotation.hpp"
#include "newsminer/matching.hpp"
#include "newsminer/scoring.hpp"

namespace newsminer {

struct ProminenceRecord {
    std::string story_id;
    Genre genre = Genre::general;
    double prominence = 0.0;  // covering providers / genre providers
};

struct StyleVector {
    std::string owner;  // provider id or genre name
    std::map<std::string, double> category_freqs;  // POS or POS/dep -> rel freq
};

struct MentionRecord {
    std::string entity_id;
    std::string provider_id;
    Millis ts_ms = 0;
    int score = 0;  // containing sentence's sentiment score
};

struct CoverageBin {
    double bin_center = 0.0;
    double p_cover = 0.0;
    std::size_t stories = 0;
};

struct BreakingStats {
    std::string provider_id;
    std::size_t total_qms = 0;
    std::size_t breaking_stories = 0;
    double ratio = 0.0;
};

struct ProfessionStats {
    std::string profession;
    long total_mentions = 0;
    double mean_sentiment = 0.0;
    // top entities with percentage share of the profession's mentions
    std::vector<std::pair<std::string, double>> top_entities;
};

struct ProfessionRollup {
    std::vector<ProfessionStats> professions;  // sorted by mentions descending
    double mapped_fraction = 0.0;  // share of mentions with a known profession
};

struct VocabularyOutlier {
    std::string entity_id;
    double jsd = 0.0;
    long mentions = 0;
};

ProminenceRecord prominence(const std::string& story_id, Genre genre,
                            const std::vector<QualifiedMatching>& qualified,
                            const std::set<std::string>& genre_providers);

std::vector<CoverageBin> coverage_curve(const std::string& provider_id,
                                        const std::vector<ProminenceRecord>& records,
                                        const std::vector<QualifiedMatching>& qualified,
                                        std::size_t bins = 10);

// histogram keyed by number of covering providers
std::map<int, std::size_t> prominence_histogram(
    Genre genre, const std::vector<ProminenceRecord>& records,
    const std::set<std::string>& genre_providers);

// providers with a QM starting within window_ms of the story's first QM
std::set<std::string> breaking(const std::string& story_id,
                               const std::vector<QualifiedMatching>& qualified,
                               Millis window_ms = 3600000);

std::vector<BreakingStats> breaking_scatter(const std::vector<QualifiedMatching>& qualified,
                                            Millis window_ms = 3600000);

// hours between the provider's first and last matching, capped at 72
double duration(const std::string& provider_id, const std::string& story_id,
                const std::vector<QualifiedMatching>& qualified);

// mean sentence score; empty below min_support
std::optional<double> person_provider_sentiment(const std::string& entity_id,
                                                const std::string& provider_id,
                                                const std::vector<MentionRecord>& mentions,
                                                std::size_t min_support = 5);

ProfessionRollup profession_rollup(const std::vector<MentionRecord>& mentions,
                                   const ProfessionMap& professions,
                                   std::size_t top_k = 3);

// Jensen-Shannon divergence (natural log) between two add-alpha smoothed
// distributions over a shared vocabulary.
double jensen_shannon(const std::map<std::string, long>& a,
                      const std::map<std::string, long>& b,
                      const std::set<std::string>& vocabulary, double alpha);

struct ProviderSentences {
    // per sentence: word tokens (lowercased, stopwords removed) + mentioned entities
    std::vector<std::pair<std::vector<std::string>, std::set<std::string>>> sentences;
};

std::vector<VocabularyOutlier> vocabulary_outliers(const ProviderSentences& corpus,
                                                   std::size_t min_mentions = 20,
                                                   double alpha = 0.5);

StyleVector style_vector(const std::string& owner,
                         const std::vector<AnnotatedSentence>& sentences);

}  // namespace newsminer

#endif
