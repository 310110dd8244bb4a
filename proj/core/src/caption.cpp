#include "newsminer/caption.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace newsminer {

std::string to_string(Genre g) {
    switch (g) {
        case Genre::general: return "general";
        case Genre::sports: return "sports";
        case Genre::business: return "business";
        case Genre::entertainment: return "entertainment";
    }
    return "general";
}

Genre parse_genre(const std::string& s) {
    if (s == "general") return Genre::general;
    if (s == "sports") return Genre::sports;
    if (s == "business") return Genre::business;
    if (s == "entertainment") return Genre::entertainment;
    throw std::runtime_error("unknown genre: " + s);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Parses "<sec>.<millis>" into integer milliseconds. Fractional part is
// taken at millisecond precision (right-padded / truncated).
bool parse_ts(const std::string& s, Millis& out) {
    auto dot = s.find('.');
    std::string sec = dot == std::string::npos ? s : s.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (sec.empty() && frac.empty()) return false;
    if (sec.empty()) sec = "0";
    for (char c : sec)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    for (char c : frac)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    std::int64_t seconds = 0;
    auto [p, ec] = std::from_chars(sec.data(), sec.data() + sec.size(), seconds);
    if (ec != std::errc() || p != sec.data() + sec.size()) return false;
    while (frac.size() < 3) frac.push_back('0');
    frac.resize(3);
    std::int64_t ms = 0;
    std::from_chars(frac.data(), frac.data() + 3, ms);
    out = seconds * 1000 + ms;
    return true;
}

}  // namespace

ParseResult parse_caption_stream(const std::string& raw, const std::string& channel_id) {
    ParseResult result;
    std::istringstream in(raw);
    std::string line;
    std::size_t line_no = 0;
    Millis prev_ts = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;  // blank lines are not counted

        auto reject = [&](const std::string& reason) {
            result.rejects.push_back({line_no, line, reason});
        };

        if (line.front() != '[') {
            reject("missing '[' timestamp prefix");
            continue;
        }
        auto close = line.find(']');
        if (close == std::string::npos) {
            reject("unterminated timestamp");
            continue;
        }
        Millis ts = 0;
        if (!parse_ts(line.substr(1, close - 1), ts)) {
            reject("timestamp not a non-negative decimal");
            continue;
        }
        std::string text = trim(line.substr(close + 1));
        if (text.empty()) {
            reject("empty payload");
            continue;
        }
        if (prev_ts >= 0 && ts < prev_ts) result.out_of_order.push_back(line_no);
        prev_ts = ts;
        result.lines.push_back({ts, channel_id, text});
    }
    return result;
}

std::string format_caption_line(const CaptionLine& line) {
    std::ostringstream os;
    os << '[' << line.ts_ms / 1000 << '.';
    Millis ms = line.ts_ms % 1000;
    os << char('0' + ms / 100) << char('0' + (ms / 10) % 10) << char('0' + ms % 10);
    os << "]\t" << line.text;
    return os.str();
}

std::optional<Provider> resolve_provider(const std::string& channel_id, Millis ts_ms,
                                         const Guide& guide, const ChannelMap& channels) {
    auto it = channels.find(channel_id);
    if (it == channels.end()) throw UnmappedChannelError(channel_id);
    for (const auto& e : guide) {
        if (e.channel_id != channel_id) continue;
        if (ts_ms >= e.start_ms && ts_ms < e.end_ms) {
            if (!e.is_news) return std::nullopt;
            return Provider{it->second, e.genre};
        }
    }
    return std::nullopt;
}

PartitionResult partition_by_provider(const std::vector<CaptionLine>& lines,
                                      const Guide& guide, const ChannelMap& channels) {
    PartitionResult out;
    for (const auto& line : lines) {
        try {
            auto provider = resolve_provider(line.channel_id, line.ts_ms, guide, channels);
            if (provider) out.by_provider[*provider].push_back(line);
        } catch (const UnmappedChannelError& e) {
            if (std::find(out.unmapped_channels.begin(), out.unmapped_channels.end(),
                          e.channel()) == out.unmapped_channels.end())
                out.unmapped_channels.push_back(e.channel());
        }
    }
    return out;
}

namespace {

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

ChannelMap load_channel_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open channel map: " + path);
    ChannelMap map;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto f = split_tsv(line);
        if (f.size() != 2) throw std::runtime_error("bad channel map line: " + line);
        map[f[0]] = f[1];
    }
    return map;
}

Guide load_guide(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open guide: " + path);
    Guide guide;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto f = split_tsv(line);
        if (f.size() != 6) throw std::runtime_error("bad guide line: " + line);
        GuideEntry e;
        e.channel_id = f[0];
        e.start_ms = std::stoll(f[1]);
        e.end_ms = std::stoll(f[2]);
        e.program_name = f[3];
        e.genre = parse_genre(f[4]);
        e.is_news = f[5] == "1";
        if (e.start_ms >= e.end_ms) throw std::runtime_error("guide entry start >= end: " + line);
        guide.push_back(e);
    }
    return guide;
}

}  // namespace newsminer
