#ifndef NEWSMINER_CAPTION_HPP
#define NEWSMINER_CAPTION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace newsminer {

// Timestamps are integer milliseconds everywhere; caption files carry
// seconds with three fractional digits.
using Millis = std::int64_t;

enum class Genre { general, sports, business, entertainment };

std::string to_string(Genre g);
Genre parse_genre(const std::string& s);

struct Provider {
    std::string network;
    Genre genre = Genre::general;

    std::string id() const { return network + ":" + to_string(genre); }

    bool operator==(const Provider& o) const {
        return network == o.network && genre == o.genre;
    }
    bool operator<(const Provider& o) const {
        if (network != o.network) return network < o.network;
        return static_cast<int>(genre) < static_cast<int>(o.genre);
    }
};

struct CaptionLine {
    Millis ts_ms = 0;
    std::string channel_id;
    std::string text;
};

struct RejectedLine {
    std::size_t line_number;  // 1-based position in the input
    std::string content;
    std::string reason;
};

struct ParseResult {
    std::vector<CaptionLine> lines;
    std::vector<RejectedLine> rejects;
    // 1-based line numbers where the timestamp went backwards; lines are
    // kept in input order, never reordered.
    std::vector<std::size_t> out_of_order;
};

struct GuideEntry {
    std::string channel_id;
    Millis start_ms = 0;  // half-open [start, end)
    Millis end_ms = 0;
    std::string program_name;
    Genre genre = Genre::general;
    bool is_news = false;
};

using ChannelMap = std::map<std::string, std::string>;  // channel_id -> network
using Guide = std::vector<GuideEntry>;

class UnmappedChannelError : public std::runtime_error {
  public:
    explicit UnmappedChannelError(const std::string& channel)
        : std::runtime_error("unmapped channel: " + channel), channel_(channel) {}
    const std::string& channel() const { return channel_; }

  private:
    std::string channel_;
};

ParseResult parse_caption_stream(const std::string& raw, const std::string& channel_id);

// Re-emits a line in the `[sec.ms3]  TEXT` form used by caption files.
std::string format_caption_line(const CaptionLine& line);

// Guide lookup at one instant. Returns nothing for gaps and non-news
// programs; throws UnmappedChannelError for channels absent from the map.
std::optional<Provider> resolve_provider(const std::string& channel_id, Millis ts_ms,
                                         const Guide& guide, const ChannelMap& channels);

struct PartitionResult {
    std::map<Provider, std::vector<CaptionLine>> by_provider;
    std::vector<std::string> unmapped_channels;  // skipped, deduplicated
};

PartitionResult partition_by_provider(const std::vector<CaptionLine>& lines,
                                      const Guide& guide, const ChannelMap& channels);

ChannelMap load_channel_map(const std::string& path);
Guide load_guide(const std::string& path);

}  // namespace newsminer

#endif
