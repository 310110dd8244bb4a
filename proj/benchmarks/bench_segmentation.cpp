#include <benchmark/benchmark.h>

#include <random>

#include "newsminer/segmentation.hpp"

using namespace newsminer;

namespace {

std::vector<CaptionLine> synth_stream(std::size_t n_lines, unsigned seed) {
    static const char* words[] = {"the",  "mayor",  "said",    "tonight", "fire",
                                  "crews", "were",   "on",      "scene",   "early.",
                                  ">>",    "police", "report",  "a",       "crash",
                                  "near",  "the",    "bridge.", "more",    "ahead"};
    std::mt19937 rng(seed);
    std::vector<CaptionLine> lines;
    Millis t = 0;
    for (std::size_t i = 0; i < n_lines; ++i) {
        std::string text;
        int k = 4 + static_cast<int>(rng() % 6);
        for (int w = 0; w < k; ++w) {
            if (w) text += ' ';
            text += words[rng() % std::size(words)];
        }
        t += 1000 + static_cast<Millis>(rng() % 6000);
        lines.push_back({t, "ch", text});
    }
    return lines;
}

}  // namespace

static void BM_Segment(benchmark::State& state) {
    auto lines = synth_stream(static_cast<std::size_t>(state.range(0)), 11);
    for (auto _ : state) {
        auto sentences = segment(lines, "net:general");
        benchmark::DoNotOptimize(sentences);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Segment)->Arg(1000)->Arg(10000);

static void BM_Normalize(benchmark::State& state) {
    std::string text(static_cast<std::size_t>(state.range(0)), ' ');
    for (std::size_t i = 0; i < text.size(); i += 3) text[i] = 'a';
    for (auto _ : state) {
        auto out = normalize(text);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_Normalize)->Arg(256)->Arg(4096);
