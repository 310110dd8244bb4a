#include <benchmark/benchmark.h>

#include <random>

#include "newsminer/factor.hpp"

using namespace newsminer;

static void BM_Hac(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::mt19937 rng(3);
    std::normal_distribution<double> dist;
    std::vector<std::string> labels;
    std::vector<Eigen::VectorXd> vectors;
    for (int i = 0; i < n; ++i) {
        labels.push_back("p" + std::to_string(i));
        Eigen::VectorXd v(8);
        for (int j = 0; j < 8; ++j) v(j) = dist(rng);
        vectors.push_back(v);
    }
    for (auto _ : state) {
        auto d = hac(labels, vectors);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_Hac)->Arg(32)->Arg(128);

static void BM_Tucker3(benchmark::State& state) {
    Tensor3 t;
    t.dims = {20, 10, 12};
    t.values.resize(20 * 10 * 12);
    std::mt19937 rng(9);
    std::normal_distribution<double> dist;
    for (auto& v : t.values) v = dist(rng);
    for (auto _ : state) {
        auto model = tucker3(t, 3, 2, 3);
        benchmark::DoNotOptimize(model);
    }
}
BENCHMARK(BM_Tucker3);

static void BM_Bicluster(benchmark::State& state) {
    std::mt19937 rng(17);
    std::normal_distribution<double> dist;
    Eigen::MatrixXd m(40, 60);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = dist(rng);
    for (auto _ : state) {
        auto factors = bicluster(m, 3, 0.1);
        benchmark::DoNotOptimize(factors);
    }
}
BENCHMARK(BM_Bicluster);

BENCHMARK_MAIN();
