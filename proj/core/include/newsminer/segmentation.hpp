#ifndef NEWSMINER_SEGMENTATION_HPP
#define NEWSMINER_SEGMENTATION_HPP

#include <string>
#include <vector>

#include "newsminer/caption.hpp"

namespace newsminer {

struct Sentence {
    std::string provider_id;
    Millis start_ms = 0;
    Millis end_ms = 0;
    std::string text;
    std::size_t first_line = 0;  // indices into the caption stream
    std::size_t last_line = 0;
};

struct SegmentationRules {
    std::string speaker_marker = ">>";
    std::string terminal_punctuation = ".?!";
    Millis max_gap_ms = 5000;
    std::size_t max_sentence_tokens = 100;
};

// Collapses whitespace runs to single spaces and trims; case preserved.
std::string normalize(const std::string& text);

// Sentence boundaries: speaker marker, terminal punctuation (a period
// followed by a lowercase continuation does not split), inter-line gap
// above max_gap_ms, and a forced split at max_sentence_tokens.
std::vector<Sentence> segment(const std::vector<CaptionLine>& lines,
                              const std::string& provider_id,
                              const SegmentationRules& rules = {});

}  // namespace newsminer

#endif
