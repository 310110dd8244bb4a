#include "newsminer/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace newsminer {

std::string stage_name(Stage s) {
    switch (s) {
        case Stage::ingest: return "ingest";
        case Stage::segment: return "segment";
        case Stage::annotate: return "annotate";
        case Stage::score: return "score";
        case Stage::match: return "match";
        case Stage::analyze: return "analyze";
    }
    return "";
}

std::optional<Stage> parse_stage(const std::string& name) {
    for (Stage s : kStageOrder)
        if (stage_name(s) == name) return s;
    return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

}  // namespace

ConfigResult validate_config(const std::string& path) {
    ConfigResult result;
    std::ifstream in(path);
    if (!in) {
        result.errors.push_back("cannot open config file: " + path);
        return result;
    }
    auto& cfg = result.config;
    auto& errors = result.errors;

    std::map<std::string, std::string*> string_keys = {
        {"captions_dir", &cfg.captions_dir},
        {"guide", &cfg.guide},
        {"channel_map", &cfg.channel_map},
        {"gazetteer", &cfg.gazetteer},
        {"professions", &cfg.professions},
        {"tag_lexicon", &cfg.tag_lexicon},
        {"suffix_rules", &cfg.suffix_rules},
        {"valence", &cfg.valence},
        {"negators", &cfg.negators},
        {"boosters", &cfg.boosters},
        {"stopwords", &cfg.stopwords},
        {"stories", &cfg.stories},
        {"labels", &cfg.labels},
        {"external_annotations", &cfg.external_annotations},
        {"out_dir", &cfg.out_dir},
        {"segment.speaker_marker", &cfg.segmentation.speaker_marker},
        {"segment.terminal_punctuation", &cfg.segmentation.terminal_punctuation},
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));

        auto parse_int = [&](auto& target, long long min_v, long long max_v) {
            try {
                long long v = std::stoll(value);
                if (v < min_v || v > max_v) {
                    errors.push_back(key + " = " + value + " out of range [" +
                                     std::to_string(min_v) + ", " + std::to_string(max_v) +
                                     "]");
                    return;
                }
                target = static_cast<std::remove_reference_t<decltype(target)>>(v);
            } catch (...) {
                errors.push_back(key + " = " + value + " is not an integer");
            }
        };
        auto parse_double = [&](double& target, double min_v, double max_v) {
            try {
                double v = std::stod(value);
                if (v < min_v || v > max_v) {
                    errors.push_back(key + " = " + value + " out of range");
                    return;
                }
                target = v;
            } catch (...) {
                errors.push_back(key + " = " + value + " is not a number");
            }
        };

        if (auto it = string_keys.find(key); it != string_keys.end()) {
            *it->second = value;
        } else if (key == "segment.max_gap_ms") {
            parse_int(cfg.segmentation.max_gap_ms, 1, 1LL << 40);
        } else if (key == "segment.max_sentence_tokens") {
            parse_int(cfg.segmentation.max_sentence_tokens, 2, 100000);
        } else if (key == "match.window_ms") {
            parse_int(cfg.match_window_ms, 1, 1LL << 40);
        } else if (key == "match.min_evidence") {
            parse_int(cfg.match_min_evidence, 1, 1000000);
        } else if (key == "match.precision_target") {
            parse_double(cfg.match_precision_target, 0.0, 1.0);
        } else if (key == "analytics.breaking_window_ms") {
            parse_int(cfg.breaking_window_ms, 1, 1LL << 40);
        } else if (key == "analytics.min_support") {
            parse_int(cfg.analytics_min_support, 1, 1000000);
        } else if (key == "analytics.min_mentions") {
            parse_int(cfg.analytics_min_mentions, 1, 1000000);
        } else if (key == "analytics.alpha") {
            parse_double(cfg.analytics_alpha, 1e-12, 1e6);
        } else if (key == "cluster.ranks") {
            int p = 0, q = 0, r = 0;
            char c1 = 0, c2 = 0;
            std::istringstream rs(value);
            if (rs >> p >> c1 >> q >> c2 >> r && c1 == ',' && c2 == ',' && p >= 1 &&
                q >= 1 && r >= 1) {
                cfg.tucker_rank_p = p;
                cfg.tucker_rank_q = q;
                cfg.tucker_rank_r = r;
            } else {
                errors.push_back("cluster.ranks = " + value + " must be p,q,r with each >= 1");
            }
        } else if (key == "seed") {
            parse_int(cfg.seed, 0, 0xffffffffLL);
        } else {
            errors.push_back("unknown key: " + key);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// artifact I/O

namespace {

ordered_json sentence_json(const Sentence& s) {
    return ordered_json{{"provider", s.provider_id},
                        {"start_ms", s.start_ms},
                        {"end_ms", s.end_ms},
                        {"text", s.text}};
}

Sentence sentence_from_json(const ordered_json& j) {
    Sentence s;
    s.provider_id = j.at("provider").get<std::string>();
    s.start_ms = j.at("start_ms").get<Millis>();
    s.end_ms = j.at("end_ms").get<Millis>();
    s.text = j.at("text").get<std::string>();
    return s;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read: " + path);
    return in;
}

}  // namespace

void write_corpus(const std::string& path, const PartitionResult& partition) {
    auto out = open_out(path);
    for (const auto& [provider, lines] : partition.by_provider) {
        for (const auto& line : lines) {
            ordered_json j{{"provider", provider.id()},
                           {"ts_ms", line.ts_ms},
                           {"channel", line.channel_id},
                           {"text", line.text}};
            out << j.dump() << '\n';
        }
    }
}

std::map<std::string, std::vector<CaptionLine>> read_corpus(const std::string& path) {
    auto in = open_in(path);
    std::map<std::string, std::vector<CaptionLine>> by_provider;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = ordered_json::parse(line);
        CaptionLine cl;
        cl.ts_ms = j.at("ts_ms").get<Millis>();
        cl.channel_id = j.at("channel").get<std::string>();
        cl.text = j.at("text").get<std::string>();
        by_provider[j.at("provider").get<std::string>()].push_back(std::move(cl));
    }
    return by_provider;
}

void write_sentences(const std::string& path, const std::vector<Sentence>& sentences) {
    auto out = open_out(path);
    for (const auto& s : sentences) out << sentence_json(s).dump() << '\n';
}

std::vector<Sentence> read_sentences(const std::string& path) {
    auto in = open_in(path);
    std::vector<Sentence> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(sentence_from_json(ordered_json::parse(line)));
    }
    return out;
}

void write_annotated(const std::string& path, const std::vector<ScoredSentence>& rows,
                     bool with_sentiment) {
    auto out = open_out(path);
    for (const auto& r : rows) {
        ordered_json j = sentence_json(r.sentence);
        ordered_json tokens = ordered_json::array();
        for (const auto& t : r.tokens) {
            ordered_json tj{{"surface", t.surface}, {"pos", t.pos}};
            if (!t.dep.empty()) tj["dep"] = t.dep;
            tokens.push_back(std::move(tj));
        }
        j["tokens"] = std::move(tokens);
        ordered_json mentions = ordered_json::array();
        for (const auto& m : r.mentions) {
            mentions.push_back(ordered_json{{"entity", m.entity_id},
                                            {"span", {m.span_begin, m.span_end}},
                                            {"salience", m.salience}});
        }
        j["mentions"] = std::move(mentions);
        if (with_sentiment) {
            j["sentiment"] = ordered_json{{"pos", r.sentiment.pos_strength},
                                          {"neg", r.sentiment.neg_strength},
                                          {"score", r.sentiment.score},
                                          {"pos_words", r.sentiment.pos_word_count},
                                          {"neg_words", r.sentiment.neg_word_count}};
        }
        out << j.dump() << '\n';
    }
}

std::vector<ScoredSentence> read_annotated(const std::string& path) {
    auto in = open_in(path);
    std::vector<ScoredSentence> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = ordered_json::parse(line);
        ScoredSentence r;
        r.sentence = sentence_from_json(j);
        for (const auto& tj : j.at("tokens")) {
            Token t;
            t.surface = tj.at("surface").get<std::string>();
            t.lower = t.surface;
            std::transform(t.lower.begin(), t.lower.end(), t.lower.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            t.pos = tj.at("pos").get<std::string>();
            if (tj.contains("dep")) t.dep = tj.at("dep").get<std::string>();
            r.tokens.push_back(std::move(t));
        }
        for (const auto& mj : j.at("mentions")) {
            EntityMention m;
            m.entity_id = mj.at("entity").get<std::string>();
            m.span_begin = mj.at("span")[0].get<std::size_t>();
            m.span_end = mj.at("span")[1].get<std::size_t>();
            m.salience = mj.at("salience").get<double>();
            r.mentions.push_back(std::move(m));
        }
        if (j.contains("sentiment")) {
            const auto& sj = j.at("sentiment");
            r.sentiment.pos_strength = sj.at("pos").get<int>();
            r.sentiment.neg_strength = sj.at("neg").get<int>();
            r.sentiment.score = sj.at("score").get<int>();
            r.sentiment.pos_word_count = sj.at("pos_words").get<int>();
            r.sentiment.neg_word_count = sj.at("neg_words").get<int>();
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_qualified(const std::string& path, const std::vector<QualifiedMatching>& qms) {
    auto out = open_out(path);
    for (const auto& qm : qms) {
        ordered_json j{{"provider", qm.provider_id},
                       {"story_id", qm.story_id},
                       {"first_ms", qm.first_ms},
                       {"last_ms", qm.last_ms},
                       {"evidence", qm.evidence_count}};
        out << j.dump() << '\n';
    }
}

std::vector<QualifiedMatching> read_qualified(const std::string& path) {
    auto in = open_in(path);
    std::vector<QualifiedMatching> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = ordered_json::parse(line);
        QualifiedMatching qm;
        qm.provider_id = j.at("provider").get<std::string>();
        qm.story_id = j.at("story_id").get<std::string>();
        qm.first_ms = j.at("first_ms").get<Millis>();
        qm.last_ms = j.at("last_ms").get<Millis>();
        qm.evidence_count = j.at("evidence").get<int>();
        out.push_back(std::move(qm));
    }
    return out;
}

std::set<std::string> load_stopwords(const std::string& path) {
    std::set<std::string> out;
    if (path.empty()) return out;
    auto in = open_in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] != '#') out.insert(line);
    }
    return out;
}

// ---------------------------------------------------------------------------
// stages

namespace {

Genre provider_genre(const std::string& provider_id) {
    auto colon = provider_id.rfind(':');
    if (colon == std::string::npos)
        throw std::runtime_error("malformed provider id: " + provider_id);
    return parse_genre(provider_id.substr(colon + 1));
}

void require_artifact(const fs::path& path, Stage needed) {
    if (!fs::exists(path))
        throw StageOrderError("missing artifact " + path.string() + "; run stage '" +
                              stage_name(needed) + "' first");
}

void stage_ingest(const PipelineConfig& cfg, const fs::path& out_dir) {
    auto channels = load_channel_map(cfg.channel_map);
    auto guide = load_guide(cfg.guide);

    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(cfg.captions_dir))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());

    std::vector<CaptionLine> all_lines;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream buf;
        buf << in.rdbuf();
        auto parsed = parse_caption_stream(buf.str(), f.stem().string());
        all_lines.insert(all_lines.end(), parsed.lines.begin(), parsed.lines.end());
    }
    auto partition = partition_by_provider(all_lines, guide, channels);
    write_corpus((out_dir / "corpus.jsonl").string(), partition);
}

void stage_segment(const PipelineConfig& cfg, const fs::path& out_dir) {
    require_artifact(out_dir / "corpus.jsonl", Stage::ingest);
    auto corpus = read_corpus((out_dir / "corpus.jsonl").string());
    std::vector<Sentence> sentences;
    for (const auto& [provider_id, lines] : corpus) {
        auto segmented = segment(lines, provider_id, cfg.segmentation);
        sentences.insert(sentences.end(), segmented.begin(), segmented.end());
    }
    write_sentences((out_dir / "sentences.jsonl").string(), sentences);
}

void stage_annotate(const PipelineConfig& cfg, const fs::path& out_dir) {
    require_artifact(out_dir / "sentences.jsonl", Stage::segment);
    auto sentences = read_sentences((out_dir / "sentences.jsonl").string());
    auto gazetteer = Gazetteer::load(cfg.gazetteer);

    std::vector<ScoredSentence> rows;
    if (!cfg.external_annotations.empty()) {
        for (auto& a : ingest_external_annotations(cfg.external_annotations, sentences)) {
            ScoredSentence r;
            r.sentence = std::move(a.sentence);
            r.tokens = std::move(a.tokens);
            r.mentions = recognize_entities(r.tokens, gazetteer);
            rows.push_back(std::move(r));
        }
    } else {
        auto lexicon = TagLexicon::load(cfg.tag_lexicon, cfg.suffix_rules);
        for (const auto& s : sentences) {
            ScoredSentence r;
            r.sentence = s;
            r.tokens = tokenize(s.text);
            tag_pos(r.tokens, lexicon);
            r.mentions = recognize_entities(r.tokens, gazetteer);
            rows.push_back(std::move(r));
        }
    }
    write_annotated((out_dir / "annotated.jsonl").string(), rows, false);
}

void stage_score(const PipelineConfig& cfg, const fs::path& out_dir) {
    require_artifact(out_dir / "annotated.jsonl", Stage::annotate);
    auto rows = read_annotated((out_dir / "annotated.jsonl").string());
    auto lexicon = ValenceLexicon::load(cfg.valence, cfg.negators, cfg.boosters);
    for (auto& r : rows) r.sentiment = score_sentiment(r.tokens, lexicon);
    write_annotated((out_dir / "scored.jsonl").string(), rows, true);
}

void stage_match(const PipelineConfig& cfg, const fs::path& out_dir) {
    require_artifact(out_dir / "scored.jsonl", Stage::score);
    auto rows = read_annotated((out_dir / "scored.jsonl").string());
    auto gazetteer = Gazetteer::load(cfg.gazetteer);
    auto stories = load_stories(cfg.stories, gazetteer);
    std::map<std::string, const Story*> story_by_id;
    for (const auto& s : stories) story_by_id[s.story_id] = &s;

    // labels.tsv: sentence_ref \t story_id \t label
    std::map<Genre, std::vector<LabeledPair>> labeled;
    {
        std::ifstream in(cfg.labels);
        if (!in) throw std::runtime_error("cannot open labels: " + cfg.labels);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::size_t sentence_ref;
            std::string story_id, label;
            if (!(ls >> sentence_ref >> story_id >> label))
                throw std::runtime_error("bad label line: " + line);
            if (sentence_ref >= rows.size())
                throw std::runtime_error("label sentence_ref out of range: " + line);
            auto sit = story_by_id.find(story_id);
            if (sit == story_by_id.end())
                throw std::runtime_error("label references unknown story: " + story_id);
            const auto& row = rows[sentence_ref];
            LabeledPair p;
            p.sentence = {row.sentence.start_ms, row.mentions};
            p.story = sit->second;
            p.same_story = label == "same";
            labeled[provider_genre(row.sentence.provider_id)].push_back(std::move(p));
        }
    }

    std::map<Genre, MatchModel> models;
    for (const auto& [genre, pairs] : labeled)
        models[genre] =
            train_matcher(pairs, genre, cfg.match_precision_target, cfg.seed);

    std::vector<SentenceStoryMatch> matches;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.mentions.empty()) continue;
        auto mit = models.find(provider_genre(row.sentence.provider_id));
        if (mit == models.end()) continue;
        SentenceMatchInput input{row.sentence.start_ms, row.mentions};
        for (const auto& [story_id, score] :
             classify(input, stories, mit->second, row.sentence.start_ms)) {
            matches.push_back(
                {row.sentence.provider_id, story_id, row.sentence.start_ms, i, score});
        }
    }

    {
        auto out = open_out((out_dir / "matches.jsonl").string());
        for (const auto& m : matches) {
            ordered_json j{{"provider", m.provider_id},
                           {"story_id", m.story_id},
                           {"ts_ms", m.ts_ms},
                           {"sentence_ref", m.sentence_ref},
                           {"score", m.score}};
            out << j.dump() << '\n';
        }
    }
    auto qms = qualify(matches, cfg.match_window_ms, cfg.match_min_evidence);
    write_qualified((out_dir / "qualified.jsonl").string(), qms);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

void stage_analyze(const PipelineConfig& cfg, const fs::path& out_dir) {
    require_artifact(out_dir / "scored.jsonl", Stage::score);
    require_artifact(out_dir / "qualified.jsonl", Stage::match);
    auto rows = read_annotated((out_dir / "scored.jsonl").string());
    auto qualified = read_qualified((out_dir / "qualified.jsonl").string());
    auto stopwords = load_stopwords(cfg.stopwords);

    std::map<Genre, std::set<std::string>> genre_providers;
    std::map<std::string, std::vector<AnnotatedSentence>> by_provider;
    std::map<Genre, std::vector<AnnotatedSentence>> by_genre;
    std::vector<MentionRecord> mentions;
    for (const auto& r : rows) {
        Genre g = provider_genre(r.sentence.provider_id);
        genre_providers[g].insert(r.sentence.provider_id);
        AnnotatedSentence a{r.sentence, r.tokens, r.mentions};
        by_provider[r.sentence.provider_id].push_back(a);
        by_genre[g].push_back(a);
        for (const auto& m : r.mentions)
            mentions.push_back({m.entity_id, r.sentence.provider_id,
                                r.sentence.start_ms, r.sentiment.score});
    }

    // fig2_style.tsv: owner, category, frequency
    {
        auto out = open_out((out_dir / "fig2_style.tsv").string());
        out << "owner\tcategory\tfrequency\n";
        for (const auto& [provider, sentences] : by_provider) {
            auto v = style_vector(provider, sentences);
            for (const auto& [cat, freq] : v.category_freqs)
                out << provider << '\t' << cat << '\t' << fmt(freq) << '\n';
        }
        for (const auto& [genre, sentences] : by_genre) {
            auto v = style_vector(to_string(genre), sentences);
            for (const auto& [cat, freq] : v.category_freqs)
                out << to_string(genre) << '\t' << cat << '\t' << fmt(freq) << '\n';
        }
    }

    // readability.tsv: provider, words_per_sentence, complex_ratio, fog
    {
        auto out = open_out((out_dir / "readability.tsv").string());
        out << "owner\twords_per_sentence\tcomplex_word_ratio\tfog_index\n";
        for (const auto& [provider, sentences] : by_provider) {
            std::vector<std::vector<Token>> token_lists;
            for (const auto& s : sentences) token_lists.push_back(s.tokens);
            auto stats = readability(token_lists);
            out << provider << '\t' << fmt(stats.words_per_sentence) << '\t'
                << fmt(stats.complex_word_ratio) << '\t' << fmt(stats.fog_index) << '\n';
        }
    }

    // fig3_sentiment.tsv: per-provider score distribution, sorted by mean
    {
        std::vector<SentimentSummary> summaries;
        std::map<std::string, std::vector<SentimentResult>> scores;
        for (const auto& r : rows)
            scores[r.sentence.provider_id].push_back(r.sentiment);
        for (const auto& [provider, s] : scores)
            summaries.push_back(sentiment_distribution(provider, s));
        std::stable_sort(summaries.begin(), summaries.end(),
                         [](const auto& a, const auto& b) {
                             if (a.mean != b.mean) return a.mean < b.mean;
                             return a.provider_id < b.provider_id;
                         });
        auto out = open_out((out_dir / "fig3_sentiment.tsv").string());
        out << "provider\tmin\tq1\tmedian\tq3\tmax\tmean\tpos_words\tneg_words\n";
        for (const auto& s : summaries)
            out << s.provider_id << '\t' << fmt(s.min) << '\t' << fmt(s.q1) << '\t'
                << fmt(s.median) << '\t' << fmt(s.q3) << '\t' << fmt(s.max) << '\t'
                << fmt(s.mean) << '\t' << s.total_pos_words << '\t' << s.total_neg_words
                << '\n';
    }

    // prominence per story, per genre
    std::map<std::string, Genre> story_genre;
    for (const auto& qm : qualified) story_genre[qm.story_id] = provider_genre(qm.provider_id);
    std::map<Genre, std::vector<ProminenceRecord>> prom_by_genre;
    for (const auto& [story, genre] : story_genre)
        prom_by_genre[genre].push_back(
            prominence(story, genre, qualified, genre_providers[genre]));

    // coverage_curve.tsv
    {
        auto out = open_out((out_dir / "coverage_curve.tsv").string());
        out << "provider\tbin_center\tp_cover\tstories\n";
        for (const auto& [genre, providers] : genre_providers) {
            auto pit = prom_by_genre.find(genre);
            if (pit == prom_by_genre.end()) continue;
            for (const auto& provider : providers)
                for (const auto& bin : coverage_curve(provider, pit->second, qualified))
                    out << provider << '\t' << fmt(bin.bin_center) << '\t'
                        << fmt(bin.p_cover) << '\t' << bin.stories << '\n';
        }
    }

    // breaking.tsv
    {
        auto out = open_out((out_dir / "breaking.tsv").string());
        out << "provider\ttotal_qms\tbreaking_stories\tratio\n";
        for (const auto& s : breaking_scatter(qualified, cfg.breaking_window_ms))
            out << s.provider_id << '\t' << s.total_qms << '\t' << s.breaking_stories
                << '\t' << fmt(s.ratio) << '\n';
    }

    // duration.tsv
    {
        std::set<std::pair<std::string, std::string>> keys;
        for (const auto& qm : qualified) keys.insert({qm.provider_id, qm.story_id});
        auto out = open_out((out_dir / "duration.tsv").string());
        out << "provider\tstory_id\thours\n";
        for (const auto& [provider, story] : keys)
            out << provider << '\t' << story << '\t'
                << fmt(duration(provider, story, qualified)) << '\n';
    }

    // table5_sentiment.tsv: provider x entity mean score above min support
    {
        std::set<std::pair<std::string, std::string>> keys;
        for (const auto& m : mentions) keys.insert({m.provider_id, m.entity_id});
        auto out = open_out((out_dir / "table5_sentiment.tsv").string());
        out << "provider\tentity\tmean_score\n";
        for (const auto& [provider, entity] : keys) {
            auto mean = person_provider_sentiment(entity, provider, mentions,
                                                  cfg.analytics_min_support);
            out << provider << '\t' << entity << '\t' << (mean ? fmt(*mean) : "") << '\n';
        }
    }

    // table6_outliers.tsv: top-5 vocabulary outliers per provider
    {
        auto out = open_out((out_dir / "table6_outliers.tsv").string());
        out << "provider\trank\tentity\tjsd\tmentions\n";
        for (const auto& [provider, sentences] : by_provider) {
            ProviderSentences corpus;
            for (const auto& s : sentences) {
                std::vector<std::string> words;
                for (const auto& t : s.tokens)
                    if (!stopwords.count(t.lower) && t.pos != ".") words.push_back(t.lower);
                std::set<std::string> entities;
                for (const auto& m : s.mentions) entities.insert(m.entity_id);
                corpus.sentences.push_back({std::move(words), std::move(entities)});
            }
            auto outliers = vocabulary_outliers(corpus, cfg.analytics_min_mentions,
                                                cfg.analytics_alpha);
            for (std::size_t i = 0; i < std::min<std::size_t>(5, outliers.size()); ++i)
                out << provider << '\t' << i + 1 << '\t' << outliers[i].entity_id << '\t'
                    << fmt(outliers[i].jsd) << '\t' << outliers[i].mentions << '\n';
        }
    }

    // table2_professions.tsv
    if (!cfg.professions.empty()) {
        auto professions = load_professions(cfg.professions);
        auto rollup = profession_rollup(mentions, professions);
        auto out = open_out((out_dir / "table2_professions.tsv").string());
        out << "# mapped_fraction\t" << fmt(rollup.mapped_fraction) << '\n';
        out << "profession\tmentions\tmean_sentiment\ttop_entities\n";
        for (const auto& p : rollup.professions) {
            out << p.profession << '\t' << p.total_mentions << '\t'
                << fmt(p.mean_sentiment) << '\t';
            for (std::size_t i = 0; i < p.top_entities.size(); ++i) {
                if (i) out << ',';
                out << p.top_entities[i].first << '(' << fmt(p.top_entities[i].second)
                    << "%)";
            }
            out << '\n';
        }
    }
}

}  // namespace

void run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages) {
    // stages must be a prefix-closed subset of the canonical order
    std::set<Stage> requested(stages.begin(), stages.end());
    fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    for (Stage s : kStageOrder) {
        if (!requested.count(s)) continue;
        switch (s) {
            case Stage::ingest: stage_ingest(config, out_dir); break;
            case Stage::segment: stage_segment(config, out_dir); break;
            case Stage::annotate: stage_annotate(config, out_dir); break;
            case Stage::score: stage_score(config, out_dir); break;
            case Stage::match: stage_match(config, out_dir); break;
            case Stage::analyze: stage_analyze(config, out_dir); break;
        }
    }
}

}  // namespace newsminer
