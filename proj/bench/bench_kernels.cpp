/*
 * Copyright 2026 The lexsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference vs OpenMP kernels. Run with e.g.
//   OMP_NUM_THREADS=4 ./bench_kernels --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "lexsim/cascade.hpp"
#include "lexsim/model.hpp"
#include "lexsim/trainer.hpp"

using namespace lexsim;

namespace {

const EncodedCorpus &bench_corpus() {
    static const EncodedCorpus corpus = [] {
        std::mt19937_64 rng(1);
        std::uniform_int_distribution<int> word(0, 499);
        std::vector<Sentence> sentences;
        for (int s = 0; s < 20000; ++s) {
            Sentence sentence;
            const char topic = s % 2 ? 'a' : 'b';
            for (int i = 0; i < 12; ++i) sentence.push_back(topic + std::to_string(word(rng)));
            sentences.push_back(std::move(sentence));
        }
        return encode_corpus(memory_source(sentences), 1);
    }();
    return corpus;
}

TrainingConfig bench_config(Algorithm algo, std::size_t workers) {
    TrainingConfig config;
    config.algorithm = algo;
    config.dim = 100;
    config.epochs = 1;
    config.min_count = 1;
    config.workers = workers;
    config.table_size = 1'000'000;
    return config;
}

void report_tokens(benchmark::State &state) {
    const auto tokens = static_cast<double>(bench_corpus().tokens.size());
    state.counters["tokens/s"] =
        benchmark::Counter(tokens * static_cast<double>(state.iterations()), benchmark::Counter::kIsRate);
}

void BM_TrainReference(benchmark::State &state) {
    const auto config = bench_config(static_cast<Algorithm>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(train_parameters_reference(bench_corpus(), config));
    report_tokens(state);
}

void BM_TrainParallel(benchmark::State &state) {
    const auto config = bench_config(static_cast<Algorithm>(state.range(0)),
                                     static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(train_parameters(bench_corpus(), config));
    report_tokens(state);
}

std::shared_ptr<const EmbeddingModel> bench_model() {
    static const auto model = [] {
        std::mt19937_64 rng(2);
        std::normal_distribution<float> n(0.0f, 1.0f);
        const std::size_t v = 50000, dim = 100;
        std::vector<std::string> words;
        for (std::size_t i = 0; i < v; ++i) words.push_back("w" + std::to_string(i));
        std::vector<float> vectors(v * dim);
        for (auto &x : vectors) x = n(rng);
        auto m = std::make_shared<const EmbeddingModel>(Vocabulary::from_words(words), vectors, dim);
        m->norms();
        return m;
    }();
    return model;
}

void BM_NearestReference(benchmark::State &state) {
    const auto model = bench_model();
    for (auto _ : state) benchmark::DoNotOptimize(nearest_reference(*model, "w7", 10));
}

void BM_NearestParallel(benchmark::State &state) {
    const auto model = bench_model();
    for (auto _ : state) benchmark::DoNotOptimize(nearest(*model, "w7", 10));
}

const std::vector<WordPair> &bench_pairs() {
    static const auto pairs = [] {
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<int> word(0, 59999);
        std::vector<WordPair> out;
        for (int i = 0; i < 100000; ++i) {
            out.emplace_back("w" + std::to_string(word(rng)), "w" + std::to_string(word(rng)));
        }
        return out;
    }();
    return pairs;
}

void BM_BatchReference(benchmark::State &state) {
    const SimilarityCascade cascade({bench_model()}, {.lcs_enabled = true});
    for (auto _ : state) benchmark::DoNotOptimize(batch_similarity_reference(cascade, bench_pairs()));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(bench_pairs().size()));
}

void BM_BatchParallel(benchmark::State &state) {
    const SimilarityCascade cascade({bench_model()}, {.lcs_enabled = true});
    for (auto _ : state) benchmark::DoNotOptimize(batch_similarity(cascade, bench_pairs()));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(bench_pairs().size()));
}

}  // namespace

BENCHMARK(BM_TrainReference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainParallel)
    ->ArgsProduct({{0, 1}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_NearestReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
