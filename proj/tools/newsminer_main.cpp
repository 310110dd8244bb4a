// newsminer: closed-caption news mining pipeline driver.
//
// Stage subcommands (ingest, segment, annotate, score, match, analyze)
// read and write JSON-lines artifacts; `--toy` runs the bundled corpus
// end to end; `cluster` exposes the numeric kit on text matrices.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "newsminer/analytics.hpp"
#include "newsminer/annotation.hpp"
#include "newsminer/caption.hpp"
#include "newsminer/factor.hpp"
#include "newsminer/matching.hpp"
#include "newsminer/pipeline.hpp"
#include "newsminer/scoring.hpp"
#include "newsminer/segmentation.hpp"

namespace fs = std::filesystem;
using namespace newsminer;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

Genre genre_of_provider(const std::string& provider_id) {
    auto colon = provider_id.rfind(':');
    if (colon == std::string::npos)
        throw std::runtime_error("malformed provider id: " + provider_id);
    return parse_genre(provider_id.substr(colon + 1));
}

// model serialization for `match train` / `match run`
void save_models(const std::string& path, const std::map<Genre, MatchModel>& models) {
    ordered_json out = ordered_json::array();
    for (const auto& [genre, m] : models) {
        ordered_json weights = ordered_json::array();
        for (double w : m.weights) weights.push_back(w);
        out.push_back(ordered_json{{"genre", to_string(genre)},
                                   {"weights", weights},
                                   {"bias", m.bias},
                                   {"threshold", m.threshold},
                                   {"holdout_precision", m.holdout_precision},
                                   {"precision_warning", m.precision_warning}});
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write: " + path);
    f << out.dump(2) << "\n";
}

std::map<Genre, MatchModel> load_models(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read: " + path);
    auto j = ordered_json::parse(f);
    std::map<Genre, MatchModel> models;
    for (const auto& mj : j) {
        MatchModel m;
        m.genre = parse_genre(mj.at("genre").get<std::string>());
        for (std::size_t i = 0; i < kFeatureCount; ++i)
            m.weights[i] = mj.at("weights")[i].get<double>();
        m.bias = mj.at("bias").get<double>();
        m.threshold = mj.at("threshold").get<double>();
        models[m.genre] = m;
    }
    return models;
}

// text matrix: `dims R C` header, then `row col value` triples
Eigen::MatrixXd load_matrix(const std::string& path, std::vector<std::string>* row_labels) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read: " + path);
    std::string word;
    in >> word;
    if (word != "dims") throw std::runtime_error("matrix file must start with 'dims'");
    int rows, cols;
    in >> rows >> cols;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
    if (row_labels)
        for (int i = 0; i < rows; ++i) row_labels->push_back("row" + std::to_string(i));
    int r, c;
    double v;
    while (in >> r >> c >> v) {
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw std::runtime_error("matrix index out of bounds");
        m(r, c) = v;
    }
    return m;
}

// text tensor: `dims I J K` header, then `i j k value` quads
Tensor3 load_tensor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read: " + path);
    std::string word;
    in >> word;
    if (word != "dims") throw std::runtime_error("tensor file must start with 'dims'");
    Tensor3 t;
    in >> t.dims[0] >> t.dims[1] >> t.dims[2];
    t.values.assign(
        static_cast<std::size_t>(t.dims[0]) * t.dims[1] * t.dims[2], 0.0);
    int i, j, k;
    double v;
    while (in >> i >> j >> k >> v) {
        if (i < 0 || i >= t.dims[0] || j < 0 || j >= t.dims[1] || k < 0 || k >= t.dims[2])
            throw std::runtime_error("tensor index out of bounds");
        t.at(i, j, k) = v;
    }
    return t;
}

struct MatchFlags {
    std::string scored, stories, labels, gazetteer, model, matches, out;
    Millis window_ms = 600000;
    int min_evidence = 2;
    double precision_target = 0.9;
    unsigned seed = 42;
};

std::map<Genre, std::vector<LabeledPair>> read_labeled_pairs(
    const std::vector<ScoredSentence>& rows, const std::vector<Story>& stories,
    const std::string& labels_path) {
    std::map<std::string, const Story*> story_by_id;
    for (const auto& s : stories) story_by_id[s.story_id] = &s;
    std::map<Genre, std::vector<LabeledPair>> labeled;
    std::ifstream in(labels_path);
    if (!in) throw std::runtime_error("cannot open labels: " + labels_path);
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
        labeled[genre_of_provider(row.sentence.provider_id)].push_back(std::move(p));
    }
    return labeled;
}

int run_match(const std::string& mode, const MatchFlags& flags) {
    if (mode == "qualify") {
        std::ifstream in(flags.matches);
        if (!in) throw std::runtime_error("cannot read: " + flags.matches);
        std::vector<SentenceStoryMatch> matches;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = ordered_json::parse(line);
            matches.push_back({j.at("provider").get<std::string>(),
                               j.at("story_id").get<std::string>(),
                               j.at("ts_ms").get<Millis>(),
                               j.at("sentence_ref").get<std::size_t>(),
                               j.at("score").get<double>()});
        }
        write_qualified(flags.out, qualify(matches, flags.window_ms, flags.min_evidence));
        return kOk;
    }

    auto rows = read_annotated(flags.scored);
    auto gazetteer = Gazetteer::load(flags.gazetteer);
    auto stories = load_stories(flags.stories, gazetteer);

    if (mode == "train") {
        auto labeled = read_labeled_pairs(rows, stories, flags.labels);
        std::map<Genre, MatchModel> models;
        for (const auto& [genre, pairs] : labeled) {
            models[genre] = train_matcher(pairs, genre, flags.precision_target, flags.seed);
            if (models[genre].precision_warning)
                std::cerr << "warning: precision target " << flags.precision_target
                          << " unattainable for genre " << to_string(genre)
                          << "; threshold forced to 0.99\n";
        }
        save_models(flags.out, models);
        return kOk;
    }

    // mode == "run"
    auto models = load_models(flags.model);
    std::ofstream out(flags.out);
    if (!out) throw std::runtime_error("cannot write: " + flags.out);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.mentions.empty()) continue;
        auto mit = models.find(genre_of_provider(row.sentence.provider_id));
        if (mit == models.end()) continue;
        SentenceMatchInput input{row.sentence.start_ms, row.mentions};
        for (const auto& [story_id, score] :
             classify(input, stories, mit->second, row.sentence.start_ms)) {
            ordered_json j{{"provider", row.sentence.provider_id},
                           {"story_id", story_id},
                           {"ts_ms", row.sentence.start_ms},
                           {"sentence_ref", i},
                           {"score", score}};
            out << j.dump() << '\n';
        }
    }
    return kOk;
}

int run_cluster(const std::string& mode, const std::string& in_path,
                const std::string& out_path, const std::string& linkage_name,
                const std::string& ranks, int k, double sparsity, bool tfidf,
                const std::string& projection_mode, int comp_i, int comp_j) {
    if (mode == "hac") {
        std::vector<std::string> labels;
        auto m = load_matrix(in_path, &labels);
        std::vector<Eigen::VectorXd> vectors;
        for (Eigen::Index r = 0; r < m.rows(); ++r) vectors.push_back(m.row(r));
        Linkage linkage = Linkage::average;
        if (linkage_name == "complete") linkage = Linkage::complete;
        else if (linkage_name == "single") linkage = Linkage::single;
        else if (linkage_name != "average")
            throw std::runtime_error("unknown linkage: " + linkage_name);
        auto d = hac(labels, vectors, linkage);
        ordered_json j;
        j["leaf_labels"] = d.leaf_labels;
        ordered_json merges = ordered_json::array();
        for (const auto& m_ : d.merges)
            merges.push_back(ordered_json{{"a", m_.node_a},
                                          {"b", m_.node_b},
                                          {"distance", m_.distance},
                                          {"id", m_.new_node_id}});
        j["merges"] = merges;
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
        return kOk;
    }
    if (mode == "bicluster") {
        auto m = load_matrix(in_path, nullptr);
        if (tfidf) m = tfidf_transform(m);
        auto factors = bicluster(m, k, sparsity);
        std::ofstream out(out_path);
        out << "factor\tcohesiveness\ttop_rows\ttop_cols\n";
        for (std::size_t f = 0; f < factors.size(); ++f) {
            out << f << '\t' << fmt(factors[f].cohesiveness) << '\t';
            for (std::size_t i = 0; i < factors[f].top_rows.size(); ++i)
                out << (i ? "," : "") << factors[f].top_rows[i];
            out << '\t';
            for (std::size_t i = 0; i < factors[f].top_cols.size(); ++i)
                out << (i ? "," : "") << factors[f].top_cols[i];
            out << '\n';
        }
        return kOk;
    }
    // mode == "tucker"
    auto t = load_tensor(in_path);
    int p = 3, q = 2, r = 3;
    {
        std::istringstream rs(ranks);
        char c1, c2;
        if (!(rs >> p >> c1 >> q >> c2 >> r) || c1 != ',' || c2 != ',')
            throw std::runtime_error("--ranks must be p,q,r");
    }
    auto model = tucker3(t, p, q, r);
    {
        std::ofstream out(out_path);
        out << fmt(model.fit) << "\n";
    }
    if (!projection_mode.empty()) {
        std::vector<std::string> labels;
        TuckerMode mode_sel = projection_mode == "providers" ? TuckerMode::providers
                                                             : TuckerMode::newsmakers;
        Eigen::Index n = mode_sel == TuckerMode::providers ? model.factor_c.rows()
                                                           : model.factor_a.rows();
        for (Eigen::Index i = 0; i < n; ++i) labels.push_back("item" + std::to_string(i));
        auto coords = project(model, mode_sel, comp_i, comp_j, labels);
        fs::path proj_path = fs::path(out_path).parent_path() / "projection.tsv";
        std::ofstream out(proj_path);
        out << "label\tx\ty\n";
        for (const auto& [label, xy] : coords)
            out << label << '\t' << fmt(xy[0]) << '\t' << fmt(xy[1]) << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"newsminer: closed-caption news mining pipeline"};
    app.require_subcommand(0, 1);

    std::string config_path;
    unsigned seed = 42;
    bool seed_set = false;
    bool toy = false;
    std::string toy_dir = "data/toy";
    std::string out_dir;
    app.add_option("--config", config_path, "pipeline configuration file");
    app.add_option("--seed", seed, "global RNG seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_flag("--toy", toy, "run the bundled toy corpus end to end");
    app.add_option("--toy-dir", toy_dir, "location of the bundled toy corpus");
    app.add_option("--out", out_dir, "output directory (pipeline runs)");

    // ---- ingest
    auto* ingest = app.add_subcommand("ingest", "parse caption files into corpus.jsonl");
    std::string captions_dir, guide_path, channels_path, out_path;
    ingest->add_option("--captions", captions_dir, "directory of caption files")->required();
    ingest->add_option("--guide", guide_path, "guide.tsv")->required();
    ingest->add_option("--channels", channels_path, "channel_map.tsv")->required();
    ingest->add_option("--out", out_path, "output corpus.jsonl")->required();

    // ---- segment
    auto* segment_cmd = app.add_subcommand("segment", "segment corpus into sentences");
    std::string in_path, rules_path;
    segment_cmd->add_option("--in", in_path, "corpus.jsonl")->required();
    segment_cmd->add_option("--rules", rules_path, "segmentation rules config");
    segment_cmd->add_option("--out", out_path, "sentences.jsonl")->required();

    // ---- annotate
    auto* annotate = app.add_subcommand("annotate", "tokenize, tag, resolve entities");
    std::string gazetteer_path, tag_lexicon_path, suffix_path, external_path;
    annotate->add_option("--in", in_path, "sentences.jsonl")->required();
    annotate->add_option("--gazetteer", gazetteer_path, "gazetteer.tsv")->required();
    annotate->add_option("--tag-lexicon", tag_lexicon_path, "tag_lexicon.tsv");
    annotate->add_option("--suffix-rules", suffix_path, "suffix_rules.tsv");
    annotate->add_option("--external", external_path, "externally produced annotations");
    annotate->add_option("--out", out_path, "annotated.jsonl")->required();

    // ---- score
    auto* score_cmd = app.add_subcommand("score", "sentence sentiment scoring");
    std::string lexicon_dir;
    score_cmd->add_option("--in", in_path, "annotated.jsonl")->required();
    score_cmd->add_option("--lexicon", lexicon_dir,
                          "directory with valence.tsv / negators.txt / boosters.tsv")
        ->required();
    score_cmd->add_option("--out", out_path, "scored.jsonl")->required();

    // ---- match train|run|qualify
    auto* match_cmd = app.add_subcommand("match", "sentence-to-story matching");
    MatchFlags mf;
    std::string match_mode;
    match_cmd->add_option("mode", match_mode, "train | run | qualify")->required();
    match_cmd->add_option("--in", mf.scored, "scored.jsonl (train/run)");
    match_cmd->add_option("--stories", mf.stories, "stories.jsonl");
    match_cmd->add_option("--labels", mf.labels, "labels.tsv (train)");
    match_cmd->add_option("--gazetteer", mf.gazetteer, "gazetteer.tsv");
    match_cmd->add_option("--model", mf.model, "model file (run)");
    match_cmd->add_option("--matches", mf.matches, "matches.jsonl (qualify)");
    match_cmd->add_option("--out", mf.out, "output file")->required();
    match_cmd->add_option("--window-ms", mf.window_ms, "qualified-matching window");
    match_cmd->add_option("--min-evidence", mf.min_evidence, "min distinct sentences");
    match_cmd->add_option("--precision-target", mf.precision_target, "held-out precision");

    // ---- analyze
    auto* analyze = app.add_subcommand("analyze", "emit report TSVs from artifacts");
    std::string analyze_dir;
    analyze->add_option("--dir", analyze_dir, "artifact directory (scored + qualified)")
        ->required();

    // ---- cluster hac|bicluster|tucker
    auto* cluster_cmd = app.add_subcommand("cluster", "numeric kit on text matrices");
    std::string cluster_mode, linkage_name = "average", ranks = "3,2,3";
    std::string projection_mode;
    int bk = 2, comp_i = 0, comp_j = 1;
    double sparsity = 0.0;
    bool tfidf = false;
    cluster_cmd->add_option("mode", cluster_mode, "hac | bicluster | tucker")->required();
    cluster_cmd->add_option("--in", in_path, "matrix/tensor text file")->required();
    cluster_cmd->add_option("--out", out_path, "output file")->required();
    cluster_cmd->add_option("--linkage", linkage_name, "average | complete | single");
    cluster_cmd->add_option("--ranks", ranks, "tucker ranks p,q,r");
    cluster_cmd->add_option("--k", bk, "bicluster factor count");
    cluster_cmd->add_option("--sparsity", sparsity, "bicluster L1 shrinkage");
    cluster_cmd->add_flag("--tfidf", tfidf, "apply TF-IDF before biclustering");
    cluster_cmd->add_option("--project", projection_mode, "newsmakers | providers");
    cluster_cmd->add_option("--component-i", comp_i, "first projection component");
    cluster_cmd->add_option("--component-j", comp_j, "second projection component");

    // ---- run (explicit stage list)
    auto* run_cmd = app.add_subcommand("run", "run pipeline stages from a config");
    std::string stages_arg = "ingest,segment,annotate,score,match,analyze";
    run_cmd->add_option("--stages", stages_arg, "comma-separated prefix-closed stage list");

    CLI11_PARSE(app, argc, argv);

    try {
        if (toy) {
            PipelineConfig cfg;
            fs::path base(toy_dir);
            cfg.captions_dir = (base / "captions").string();
            cfg.guide = (base / "guide.tsv").string();
            cfg.channel_map = (base / "channel_map.tsv").string();
            cfg.gazetteer = (base / "gazetteer.tsv").string();
            cfg.professions = (base / "professions.tsv").string();
            cfg.tag_lexicon = (base / "tag_lexicon.tsv").string();
            cfg.suffix_rules = (base / "suffix_rules.tsv").string();
            cfg.valence = (base / "valence.tsv").string();
            cfg.negators = (base / "negators.txt").string();
            cfg.boosters = (base / "boosters.tsv").string();
            cfg.stopwords = (base / "stopwords.txt").string();
            cfg.stories = (base / "stories.jsonl").string();
            cfg.labels = (base / "labels.tsv").string();
            cfg.out_dir = out_dir.empty() ? "toy_out" : out_dir;
            cfg.analytics_min_support = 2;
            cfg.analytics_min_mentions = 3;
            if (seed_set) cfg.seed = seed;
            std::vector<Stage> stages(kStageOrder.begin(), kStageOrder.end());
            run_pipeline(cfg, stages);
            std::cout << "toy pipeline complete; artifacts in " << cfg.out_dir << "\n";
            return kOk;
        }

        if (app.got_subcommand(run_cmd)) {
            if (config_path.empty()) {
                std::cerr << "run requires --config\n";
                return kConfigError;
            }
            auto result = validate_config(config_path);
            if (!result.errors.empty()) {
                for (const auto& e : result.errors) std::cerr << "config: " << e << "\n";
                return kConfigError;
            }
            if (seed_set) result.config.seed = seed;
            if (!out_dir.empty()) result.config.out_dir = out_dir;
            std::vector<Stage> stages;
            std::istringstream ss(stages_arg);
            std::string name;
            while (std::getline(ss, name, ',')) {
                auto s = parse_stage(name);
                if (!s) {
                    std::cerr << "unknown stage: " << name << "\n";
                    return kConfigError;
                }
                stages.push_back(*s);
            }
            run_pipeline(result.config, stages);
            return kOk;
        }

        if (app.got_subcommand(ingest)) {
            auto channels = load_channel_map(channels_path);
            auto guide = load_guide(guide_path);
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(captions_dir))
                if (e.is_regular_file()) files.push_back(e.path());
            std::sort(files.begin(), files.end());
            std::vector<CaptionLine> all;
            for (const auto& f : files) {
                std::ifstream in(f);
                std::stringstream buf;
                buf << in.rdbuf();
                auto parsed = parse_caption_stream(buf.str(), f.stem().string());
                for (const auto& r : parsed.rejects)
                    std::cerr << f.filename().string() << ":" << r.line_number
                              << ": rejected: " << r.reason << "\n";
                all.insert(all.end(), parsed.lines.begin(), parsed.lines.end());
            }
            write_corpus(out_path, partition_by_provider(all, guide, channels));
            return kOk;
        }

        if (app.got_subcommand(segment_cmd)) {
            SegmentationRules rules;
            if (!rules_path.empty()) {
                auto result = validate_config(rules_path);
                if (!result.errors.empty()) {
                    for (const auto& e : result.errors) std::cerr << "config: " << e << "\n";
                    return kConfigError;
                }
                rules = result.config.segmentation;
            }
            auto corpus = read_corpus(in_path);
            std::vector<Sentence> sentences;
            for (const auto& [provider, lines] : corpus) {
                auto part = segment(lines, provider, rules);
                sentences.insert(sentences.end(), part.begin(), part.end());
            }
            write_sentences(out_path, sentences);
            return kOk;
        }

        if (app.got_subcommand(annotate)) {
            auto sentences = read_sentences(in_path);
            auto gazetteer = Gazetteer::load(gazetteer_path);
            std::vector<ScoredSentence> rows;
            if (!external_path.empty()) {
                for (auto& a : ingest_external_annotations(external_path, sentences)) {
                    ScoredSentence r;
                    r.sentence = std::move(a.sentence);
                    r.tokens = std::move(a.tokens);
                    r.mentions = recognize_entities(r.tokens, gazetteer);
                    rows.push_back(std::move(r));
                }
            } else {
                if (tag_lexicon_path.empty()) {
                    std::cerr << "annotate needs --tag-lexicon or --external\n";
                    return kConfigError;
                }
                auto lexicon = TagLexicon::load(tag_lexicon_path, suffix_path);
                for (const auto& s : sentences) {
                    ScoredSentence r;
                    r.sentence = s;
                    r.tokens = tokenize(s.text);
                    tag_pos(r.tokens, lexicon);
                    r.mentions = recognize_entities(r.tokens, gazetteer);
                    rows.push_back(std::move(r));
                }
            }
            write_annotated(out_path, rows, false);
            return kOk;
        }

        if (app.got_subcommand(score_cmd)) {
            auto rows = read_annotated(in_path);
            fs::path dir(lexicon_dir);
            auto negators = fs::exists(dir / "negators.txt") ? (dir / "negators.txt").string() : "";
            auto boosters = fs::exists(dir / "boosters.tsv") ? (dir / "boosters.tsv").string() : "";
            auto lexicon = ValenceLexicon::load((dir / "valence.tsv").string(), negators,
                                                boosters);
            for (auto& r : rows) r.sentiment = score_sentiment(r.tokens, lexicon);
            write_annotated(out_path, rows, true);
            return kOk;
        }

        if (app.got_subcommand(match_cmd)) {
            if (seed_set) mf.seed = seed;
            if (match_mode != "train" && match_mode != "run" && match_mode != "qualify") {
                std::cerr << "match mode must be train, run or qualify\n";
                return kConfigError;
            }
            return run_match(match_mode, mf);
        }

        if (app.got_subcommand(analyze)) {
            PipelineConfig cfg;
            if (!config_path.empty()) {
                auto result = validate_config(config_path);
                if (!result.errors.empty()) {
                    for (const auto& e : result.errors) std::cerr << "config: " << e << "\n";
                    return kConfigError;
                }
                cfg = result.config;
            }
            cfg.out_dir = analyze_dir;
            run_pipeline(cfg, {Stage::analyze});
            return kOk;
        }

        if (app.got_subcommand(cluster_cmd)) {
            if (cluster_mode != "hac" && cluster_mode != "bicluster" &&
                cluster_mode != "tucker") {
                std::cerr << "cluster mode must be hac, bicluster or tucker\n";
                return kConfigError;
            }
            return run_cluster(cluster_mode, in_path, out_path, linkage_name, ranks, bk,
                               sparsity, tfidf, projection_mode, comp_i, comp_j);
        }

        std::cerr << app.help();
        return kConfigError;
    } catch (const StageOrderError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kStageOrderError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
}
