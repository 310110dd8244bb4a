#include "newsminer/annotation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace newsminer {

namespace {

std::string to_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool is_terminal_punct(const std::string& s) {
    return s.size() == 1 && (s[0] == '.' || s[0] == '?' || s[0] == '!');
}

bool is_numeric(const std::string& s) {
    bool digit = false;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)))
            digit = true;
        else if (c != '.' && c != ',' && c != '-' && c != '%' && c != '$')
            return false;
    }
    return digit;
}

std::vector<std::string> split_tsv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        auto tab = line.find('\t', pos);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    std::istringstream in(text);
    std::string word;
    while (in >> word) {
        // detach terminal punctuation; apostrophes and hyphens stay inside
        std::string tail;
        while (word.size() > 1 && (word.back() == '.' || word.back() == '?' ||
                                   word.back() == '!')) {
            tail.insert(tail.begin(), word.back());
            word.pop_back();
        }
        Token t;
        t.surface = word;
        t.lower = to_lower(word);
        tokens.push_back(std::move(t));
        for (char p : tail) {
            Token punct;
            punct.surface = std::string(1, p);
            punct.lower = punct.surface;
            tokens.push_back(std::move(punct));
        }
    }
    return tokens;
}

TagLexicon TagLexicon::load(const std::string& lexicon_path, const std::string& suffix_path) {
    TagLexicon lex;
    std::ifstream in(lexicon_path);
    if (!in) throw std::runtime_error("cannot open tag lexicon: " + lexicon_path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto f = split_tsv(line);
        if (f.size() != 2) throw std::runtime_error("bad tag lexicon line: " + line);
        lex.add_word(to_lower(f[0]), f[1]);
    }
    if (!suffix_path.empty()) {
        std::ifstream sin(suffix_path);
        if (!sin) throw std::runtime_error("cannot open suffix rules: " + suffix_path);
        while (std::getline(sin, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            auto f = split_tsv(line);
            if (f.size() != 2) throw std::runtime_error("bad suffix rule line: " + line);
            lex.add_suffix(to_lower(f[0]), f[1]);
        }
        // longest suffix wins
        std::stable_sort(lex.suffixes_.begin(), lex.suffixes_.end(),
                         [](const auto& a, const auto& b) {
                             return a.first.size() > b.first.size();
                         });
    }
    return lex;
}

std::string TagLexicon::tag(const Token& token) const {
    if (is_terminal_punct(token.surface)) return ".";
    if (is_numeric(token.surface)) return "CD";
    auto it = words_.find(token.lower);
    if (it != words_.end()) return it->second;
    for (const auto& [suffix, t] : suffixes_) {
        if (token.lower.size() > suffix.size() &&
            token.lower.compare(token.lower.size() - suffix.size(), suffix.size(),
                                suffix) == 0)
            return t;
    }
    unsigned char first = static_cast<unsigned char>(token.surface.front());
    if (std::isupper(first)) return "NNP";
    if (std::islower(first)) return "NN";
    return "UNK";
}

void tag_pos(std::vector<Token>& tokens, const TagLexicon& lexicon) {
    for (auto& t : tokens) t.pos = lexicon.tag(t);
}

Gazetteer Gazetteer::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gazetteer: " + path);
    Gazetteer gaz;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto f = split_tsv(line);
        if (f.size() < 2) throw std::runtime_error("bad gazetteer line: " + line);
        bool preferred = f.size() >= 3 && f[2] == "1";
        gaz.add_alias(f[0], f[1], preferred);
    }
    return gaz;
}

void Gazetteer::add_alias(const std::string& alias, const std::string& entity_id,
                          bool preferred) {
    std::string key = to_lower(alias);
    std::size_t tokens = 1 + std::count(key.begin(), key.end(), ' ');
    max_alias_tokens_ = std::max(max_alias_tokens_, tokens);
    auto it = aliases_.find(key);
    if (it == aliases_.end()) {
        aliases_[key] = {entity_id, preferred, false};
    } else if (it->second.entity_id != entity_id) {
        if (preferred)
            it->second = {entity_id, true, false};
        else if (!it->second.preferred)
            it->second.ambiguous = true;  // collision with no preferred entry
    }
}

std::string Gazetteer::resolve(const std::string& alias_lower) const {
    auto it = aliases_.find(alias_lower);
    if (it == aliases_.end() || it->second.ambiguous) return {};
    return it->second.entity_id;
}

std::vector<EntityMention> recognize_entities(const std::vector<Token>& tokens,
                                              const Gazetteer& gazetteer) {
    const std::size_t n = tokens.size();
    std::vector<EntityMention> mentions;
    std::vector<bool> used(n, false);

    // longest first, then leftmost
    for (std::size_t len = std::min(gazetteer.max_alias_tokens(), n); len >= 1; --len) {
        for (std::size_t start = 0; start + len <= n; ++start) {
            bool overlap = false;
            for (std::size_t k = start; k < start + len; ++k)
                if (used[k]) overlap = true;
            if (overlap) continue;
            std::string key;
            for (std::size_t k = start; k < start + len; ++k) {
                if (k > start) key.push_back(' ');
                key += tokens[k].lower;
            }
            std::string entity = gazetteer.resolve(key);
            if (entity.empty()) continue;
            for (std::size_t k = start; k < start + len; ++k) used[k] = true;
            EntityMention m;
            m.entity_id = entity;
            m.span_begin = start;
            m.span_end = start + len;
            mentions.push_back(std::move(m));
        }
        if (len == 1) break;
    }

    std::sort(mentions.begin(), mentions.end(),
              [](const EntityMention& a, const EntityMention& b) {
                  return a.span_begin < b.span_begin;
              });

    // salience: earlier and repeated mentions rank higher
    std::map<std::string, int> entity_counts;
    for (const auto& m : mentions) ++entity_counts[m.entity_id];
    for (auto& m : mentions) {
        double positional = 0.5 * (1.0 - static_cast<double>(m.span_begin) / n);
        double repetition = 0.5 * std::min(1.0, entity_counts[m.entity_id] / 2.0);
        m.salience = positional + repetition;
    }
    return mentions;
}

std::vector<AnnotatedSentence> ingest_external_annotations(
    const std::string& path, const std::vector<Sentence>& sentences) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open annotations: " + path);

    std::vector<std::vector<Token>> groups;
    std::vector<Token> cur;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (!cur.empty()) groups.push_back(std::move(cur));
            cur.clear();
            continue;
        }
        auto f = split_tsv(line);
        if (f.size() != 3) throw std::runtime_error("bad annotation line: " + line);
        Token t;
        t.surface = f[0];
        t.lower = to_lower(f[0]);
        t.pos = f[1];
        t.dep = f[2];
        cur.push_back(std::move(t));
    }
    if (!cur.empty()) groups.push_back(std::move(cur));

    if (groups.size() != sentences.size())
        throw std::runtime_error("annotation file has " + std::to_string(groups.size()) +
                                 " sentences, corpus has " +
                                 std::to_string(sentences.size()));

    std::vector<AnnotatedSentence> out;
    out.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        std::size_t expected = tokenize(sentences[i].text).size();
        if (groups[i].size() != expected)
            throw std::runtime_error("token count mismatch at sentence " +
                                     std::to_string(i) + ": expected " +
                                     std::to_string(expected) + ", got " +
                                     std::to_string(groups[i].size()));
        out.push_back({sentences[i], std::move(groups[i]), {}});
    }
    return out;
}

ProfessionMap load_professions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open professions: " + path);
    ProfessionMap map;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto f = split_tsv(line);
        if (f.size() != 2) throw std::runtime_error("bad professions line: " + line);
        map[f[0]] = f[1];
    }
    return map;
}

}  // namespace newsminer
