#include "newsminer/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace newsminer {

ValenceLexicon ValenceLexicon::load(const std::string& valence_path,
                                    const std::string& negators_path,
                                    const std::string& boosters_path) {
    ValenceLexicon lex;
    std::ifstream in(valence_path);
    if (!in) throw std::runtime_error("cannot open valence lexicon: " + valence_path);
    std::string line;
    auto tab_split = [](const std::string& l) -> std::pair<std::string, std::string> {
        auto tab = l.find('\t');
        if (tab == std::string::npos) throw std::runtime_error("expected TSV line: " + l);
        return {l.substr(0, tab), l.substr(tab + 1)};
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto [word, val] = tab_split(line);
        int v = std::stoi(val);
        if (v == 0 || v < -5 || v > 5)
            throw std::runtime_error("valence out of range for " + word);
        lex.valence[word] = v;
    }
    if (!negators_path.empty()) {
        std::ifstream nin(negators_path);
        if (!nin) throw std::runtime_error("cannot open negators: " + negators_path);
        while (std::getline(nin, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && line[0] != '#') lex.negators.insert(line);
        }
    }
    if (!boosters_path.empty()) {
        std::ifstream bin(boosters_path);
        if (!bin) throw std::runtime_error("cannot open boosters: " + boosters_path);
        while (std::getline(bin, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            auto [word, val] = tab_split(line);
            lex.boosters[word] = std::stoi(val);
        }
    }
    return lex;
}

SentimentResult score_sentiment(const std::vector<Token>& tokens,
                                const ValenceLexicon& lexicon) {
    SentimentResult r;
    int best_pos = 0;  // 0 = no hit yet
    int worst_neg = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto it = lexicon.valence.find(tokens[i].lower);
        if (it == lexicon.valence.end()) continue;
        int v = it->second;

        // boosters shift magnitude within the 2-token window before the hit
        for (std::size_t k = (i >= 2 ? i - 2 : 0); k < i; ++k) {
            auto bit = lexicon.boosters.find(tokens[k].lower);
            if (bit == lexicon.boosters.end()) continue;
            int mag = std::clamp(std::abs(v) + bit->second, 1, 5);
            v = v > 0 ? mag : -mag;
        }
        // a negator within 2 tokens before the hit flips its sign
        for (std::size_t k = (i >= 2 ? i - 2 : 0); k < i; ++k) {
            if (lexicon.negators.count(tokens[k].lower)) {
                v = -v;
                break;
            }
        }
        if (v > 0) {
            best_pos = std::max(best_pos, v);
            ++r.pos_word_count;
        } else {
            worst_neg = std::min(worst_neg, v);
            ++r.neg_word_count;
        }
    }
    r.pos_strength = best_pos > 0 ? best_pos : 1;
    r.neg_strength = worst_neg < 0 ? worst_neg : -1;
    r.score = r.pos_strength + r.neg_strength;
    return r;
}

int count_syllables(const std::string& word) {
    auto is_vowel = [](char c) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    int groups = 0;
    bool in_group = false;
    for (char c : word) {
        if (is_vowel(c)) {
            if (!in_group) ++groups;
            in_group = true;
        } else {
            in_group = false;
        }
    }
    if (groups > 1) {
        std::size_t n = word.size();
        char last = static_cast<char>(std::tolower(static_cast<unsigned char>(word[n - 1])));
        if (last == 'e') {
            // consonant + "le" keeps its 'e' ("table"); otherwise terminal
            // silent 'e' drops one group
            bool cons_le = n >= 3 &&
                           std::tolower(static_cast<unsigned char>(word[n - 2])) == 'l' &&
                           !is_vowel(word[n - 3]);
            if (!cons_le) --groups;
        }
    }
    return std::max(groups, 1);
}

namespace {

bool is_word_token(const Token& t) {
    for (char c : t.surface)
        if (std::isalnum(static_cast<unsigned char>(c))) return true;
    return false;
}

bool is_alpha_token(const Token& t) {
    for (char c : t.surface)
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '\'' && c != '-')
            return false;
    return !t.surface.empty();
}

// linear-interpolation quantile over a sorted sample
double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    double idx = p * (sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = idx - lo;
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

ReadabilityStats readability(const std::vector<std::vector<Token>>& sentences) {
    if (sentences.empty()) throw std::runtime_error("no sentences");
    long words = 0;
    long complex_words = 0;
    for (const auto& toks : sentences) {
        for (const auto& t : toks) {
            if (!is_word_token(t)) continue;
            ++words;
            if (is_alpha_token(t) && count_syllables(t.surface) >= 3) ++complex_words;
        }
    }
    ReadabilityStats stats;
    stats.words_per_sentence = static_cast<double>(words) / sentences.size();
    stats.complex_word_ratio = words > 0 ? static_cast<double>(complex_words) / words : 0.0;
    stats.fog_index = 0.4 * (stats.words_per_sentence + 100.0 * stats.complex_word_ratio);
    return stats;
}

SentimentSummary sentiment_distribution(const std::string& provider_id,
                                        const std::vector<SentimentResult>& scored) {
    SentimentSummary s;
    s.provider_id = provider_id;
    s.sentence_count = scored.size();
    if (scored.empty()) return s;
    std::vector<double> values;
    values.reserve(scored.size());
    double sum = 0;
    for (const auto& r : scored) {
        values.push_back(r.score);
        sum += r.score;
        s.total_pos_words += r.pos_word_count;
        s.total_neg_words += r.neg_word_count;
    }
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    s.q1 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.q3 = quantile(values, 0.75);
    s.mean = sum / values.size();
    return s;
}

}  // namespace newsminer
