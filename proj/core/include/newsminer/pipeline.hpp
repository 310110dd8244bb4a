#ifndef NEWSMINER_PIPELINE_HPP
#define NEWSMINER_PIPELINE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "newsminer/analytics.hpp"
#include "newsminer/annotation.hpp"
#include "newsminer/caption.hpp"
#include "newsminer/matching.hpp"
#include "newsminer/scoring.hpp"
#include "newsminer/segmentation.hpp"

namespace newsminer {

enum class Stage { ingest, segment, annotate, score, match, analyze };

constexpr std::array<Stage, 6> kStageOrder = {Stage::ingest,  Stage::segment,
                                              Stage::annotate, Stage::score,
                                              Stage::match,   Stage::analyze};

std::string stage_name(Stage s);
std::optional<Stage> parse_stage(const std::string& name);

struct PipelineConfig {
    // input paths
    std::string captions_dir;
    std::string guide;
    std::string channel_map;
    std::string gazetteer;
    std::string professions;
    std::string tag_lexicon;
    std::string suffix_rules;
    std::string valence;
    std::string negators;
    std::string boosters;
    std::string stopwords;
    std::string stories;
    std::string labels;
    std::string external_annotations;  // optional; empty = baseline tagger

    std::string out_dir = "out";

    // stage parameters
    SegmentationRules segmentation;
    Millis match_window_ms = 600000;
    int match_min_evidence = 2;
    double match_precision_target = 0.9;
    Millis breaking_window_ms = 3600000;
    std::size_t analytics_min_support = 5;
    std::size_t analytics_min_mentions = 20;
    double analytics_alpha = 0.5;
    int tucker_rank_p = 3, tucker_rank_q = 2, tucker_rank_r = 3;
    unsigned seed = 42;
};

struct ConfigResult {
    PipelineConfig config;
    std::vector<std::string> errors;  // aggregated, not fail-fast
};

// Parses a `key = value` file; unknown keys and out-of-range values are
// all collected before returning.
ConfigResult validate_config(const std::string& path);

// Exit codes for the CLI: 0 ok, 2 config error, 3 data error,
// 4 stage-order error.
enum ExitCode { kOk = 0, kConfigError = 2, kDataError = 3, kStageOrderError = 4 };

class StageOrderError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Runs a prefix-closed subset of ingest -> ... -> analyze, each stage
// reading its predecessor's artifact file from config.out_dir.
void run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages);

// JSON-lines artifact records
struct ScoredSentence {
    Sentence sentence;
    std::vector<Token> tokens;
    std::vector<EntityMention> mentions;
    SentimentResult sentiment;
};

void write_corpus(const std::string& path, const PartitionResult& partition);
std::map<std::string, std::vector<CaptionLine>> read_corpus(const std::string& path);

void write_sentences(const std::string& path, const std::vector<Sentence>& sentences);
std::vector<Sentence> read_sentences(const std::string& path);

void write_annotated(const std::string& path, const std::vector<ScoredSentence>& rows,
                     bool with_sentiment);
std::vector<ScoredSentence> read_annotated(const std::string& path);

void write_qualified(const std::string& path, const std::vector<QualifiedMatching>& qms);
std::vector<QualifiedMatching> read_qualified(const std::string& path);

std::set<std::string> load_stopwords(const std::string& path);

}  // namespace newsminer

#endif
