#ifndef NEWSMINER_SCORING_HPP
#define NEWSMINER_SCORING_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "newsminer/annotation.hpp"

namespace newsminer {

struct SentimentResult {
    int pos_strength = 1;   // 1..5
    int neg_strength = -1;  // -5..-1
    int score = 0;          // pos_strength + neg_strength, in [-4, 4]
    int pos_word_count = 0;
    int neg_word_count = 0;
};

struct ValenceLexicon {
    std::map<std::string, int> valence;  // word -> strength in [-5,-1] U [1,5]
    std::set<std::string> negators;
    std::map<std::string, int> boosters;  // word -> delta added to magnitude

    static ValenceLexicon load(const std::string& valence_path,
                               const std::string& negators_path = "",
                               const std::string& boosters_path = "");
};

struct ReadabilityStats {
    double words_per_sentence = 0.0;
    double complex_word_ratio = 0.0;
    double fog_index = 0.0;  // 0.4 * (wps + 100 * ratio)
};

struct SentimentSummary {
    std::string provider_id;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    double mean = 0;
    long total_pos_words = 0;
    long total_neg_words = 0;
    std::size_t sentence_count = 0;
};

// Dual-scale lexicon scoring: pos_strength is the max positive hit,
// neg_strength the min negative hit; a negator within 2 tokens before a
// hit flips its sign, boosters shift magnitude (clamped to 1..5).
SentimentResult score_sentiment(const std::vector<Token>& tokens,
                                const ValenceLexicon& lexicon);

// Maximal vowel groups (aeiouy), minus a terminal silent 'e'; a
// consonant+"le" ending keeps its 'e'. Minimum 1.
int count_syllables(const std::string& word);

ReadabilityStats readability(const std::vector<std::vector<Token>>& sentences);

// Box-plot stats of per-sentence scores plus word-count totals.
SentimentSummary sentiment_distribution(const std::string& provider_id,
                                        const std::vector<SentimentResult>& scored);

}  // namespace newsminer

#endif
