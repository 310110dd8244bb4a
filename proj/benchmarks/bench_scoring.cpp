#include <benchmark/benchmark.h>

#include <random>

#include "newsminer/annotation.hpp"
#include "newsminer/scoring.hpp"

using namespace newsminer;

namespace {

ValenceLexicon small_lexicon() {
    ValenceLexicon lex;
    lex.valence = {{"good", 2}, {"great", 3}, {"bad", -2}, {"awful", -4}, {"win", 2}};
    lex.negators = {"not", "never"};
    lex.boosters = {{"very", 1}, {"slightly", -1}};
    return lex;
}

std::vector<Token> synth_tokens(std::size_t n, unsigned seed) {
    static const char* words[] = {"the", "game",  "was",  "very", "good", "not",
                                  "bad", "crowd", "went", "home", "win",  "awful"};
    std::mt19937 rng(seed);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) text += ' ';
        text += words[rng() % std::size(words)];
    }
    return tokenize(text);
}

}  // namespace

static void BM_ScoreSentiment(benchmark::State& state) {
    auto lex = small_lexicon();
    auto tokens = synth_tokens(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        auto r = score_sentiment(tokens, lex);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScoreSentiment)->Arg(20)->Arg(200);

static void BM_CountSyllables(benchmark::State& state) {
    std::vector<std::string> words = {"education", "table", "cat", "beautiful",
                                      "orange",    "rhythm", "api", "newsworthy"};
    for (auto _ : state) {
        int total = 0;
        for (const auto& w : words) total += count_syllables(w);
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_CountSyllables);
