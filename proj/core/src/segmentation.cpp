#include "newsminer/segmentation.hpp"

#include <cctype>
#include <sstream>

namespace newsminer {

std::string normalize(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = true;  // leading whitespace dropped
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
        } else {
            if (in_space && !out.empty()) out.push_back(' ');
            in_space = false;
            out.push_back(c);
        }
    }
    return out;
}

namespace {

struct TokenEvent {
    std::string text;
    std::size_t line_idx;
    bool boundary_before = false;  // speaker marker or time gap
};

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

std::vector<Sentence> segment(const std::vector<CaptionLine>& lines,
                              const std::string& provider_id,
                              const SegmentationRules& rules) {
    // Flatten to a token stream, marking marker/gap boundaries, with the
    // marker characters stripped.
    std::vector<TokenEvent> events;
    bool pending_boundary = false;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        if (li > 0 && lines[li].ts_ms - lines[li - 1].ts_ms > rules.max_gap_ms)
            pending_boundary = true;
        for (auto& tok : split_ws(lines[li].text)) {
            std::string t = tok;
            bool marker = false;
            while (t.rfind(rules.speaker_marker, 0) == 0) {
                marker = true;
                t = t.substr(rules.speaker_marker.size());
            }
            if (marker) pending_boundary = true;
            if (t.empty()) continue;  // bare marker token
            events.push_back({t, li, pending_boundary});
            pending_boundary = false;
        }
    }

    std::vector<Sentence> sentences;
    Sentence cur;
    std::size_t cur_tokens = 0;
    auto flush = [&]() {
        if (cur_tokens > 0) sentences.push_back(cur);
        cur = Sentence{};
        cur_tokens = 0;
    };

    auto is_terminal = [&](const std::string& t) {
        return !t.empty() &&
               rules.terminal_punctuation.find(t.back()) != std::string::npos;
    };

    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& ev = events[i];
        if (ev.boundary_before) flush();
        if (cur_tokens == 0) {
            cur.provider_id = provider_id;
            cur.start_ms = lines[ev.line_idx].ts_ms;
            cur.first_line = ev.line_idx;
        } else {
            cur.text.push_back(' ');
        }
        cur.text += ev.text;
        cur.end_ms = lines[ev.line_idx].ts_ms;
        cur.last_line = ev.line_idx;
        ++cur_tokens;

        if (cur_tokens >= rules.max_sentence_tokens) {
            flush();
            continue;
        }
        if (is_terminal(ev.text)) {
            // A period before a lowercase continuation is treated as an
            // abbreviation, not a sentence end.
            bool abbreviation =
                ev.text.back() == '.' && i + 1 < events.size() &&
                !events[i + 1].boundary_before &&
                std::islower(static_cast<unsigned char>(events[i + 1].text.front()));
            if (!abbreviation) flush();
        }
    }
    flush();
    return sentences;
}

}  // namespace newsminer
