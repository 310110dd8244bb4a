#ifndef NEWSMINER_ANNOTATION_HPP
#define NEWSMINER_ANNOTATION_HPP

#include <map>
#include <string>
#include <vector>

#include "newsminer/segmentation.hpp"

namespace newsminer {

struct Token {
    std::string surface;
    std::string lower;
    std::string pos;  // Penn-style tag or "UNK"
    std::string dep;  // dependency label; empty unless externally supplied
};

struct EntityMention {
    std::string entity_id;
    std::size_t span_begin = 0;  // token index range [begin, end)
    std::size_t span_end = 0;
    double salience = 0.0;
};

struct AnnotatedSentence {
    Sentence sentence;
    std::vector<Token> tokens;
    std::vector<EntityMention> mentions;
};

class TagLexicon {
  public:
    static TagLexicon load(const std::string& lexicon_path, const std::string& suffix_path);

    void add_word(const std::string& word, const std::string& tag) { words_[word] = tag; }
    void add_suffix(const std::string& suffix, const std::string& tag) {
        suffixes_.emplace_back(suffix, tag);
    }

    std::string tag(const Token& token) const;

  private:
    std::map<std::string, std::string> words_;
    // checked longest-suffix first
    std::vector<std::pair<std::string, std::string>> suffixes_;
};

class Gazetteer {
  public:
    static Gazetteer load(const std::string& path);

    // preferred resolves alias collisions; a collision with no preferred
    // entry yields no match for that alias.
    void add_alias(const std::string& alias, const std::string& entity_id,
                   bool preferred = false);

    // entity_id for a case-folded alias, or empty when absent/ambiguous
    std::string resolve(const std::string& alias_lower) const;
    std::size_t max_alias_tokens() const { return max_alias_tokens_; }

  private:
    struct Entry {
        std::string entity_id;
        bool preferred = false;
        bool ambiguous = false;
    };
    std::map<std::string, Entry> aliases_;
    std::size_t max_alias_tokens_ = 1;
};

std::vector<Token> tokenize(const std::string& text);

void tag_pos(std::vector<Token>& tokens, const TagLexicon& lexicon);

// Greedy longest-match (then leftmost) over case-folded token n-grams.
std::vector<EntityMention> recognize_entities(const std::vector<Token>& tokens,
                                              const Gazetteer& gazetteer);

// One `surface \t pos \t dep` line per token, blank line between
// sentences, aligned to the given sentence order.
std::vector<AnnotatedSentence> ingest_external_annotations(
    const std::string& path, const std::vector<Sentence>& sentences);

using ProfessionMap = std::map<std::string, std::string>;  // entity_id -> area/activity
ProfessionMap load_professions(const std::string& path);

}  // namespace newsminer

#endif
