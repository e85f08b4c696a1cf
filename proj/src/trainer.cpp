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

#include "lexsim/trainer.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "lexsim/error.hpp"
#include "sentence_kernel.hpp"

namespace lexsim {

namespace {

inline float dot(const float *a, const float *b, std::size_t n) {
    float sum = 0.0f;
#pragma omp simd reduction(+ : sum)
    for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

// y += a * x
inline void axpy(float a, const float *x, float *y, std::size_t n) {
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

// Applies one (hidden, output row) pair: accumulates the hidden gradient into
// `grad` using the pre-update output row, then moves the output row.
inline double apply_pair(const float *hidden, float *out, float *grad, std::size_t dim,
                         Label label, double alpha) {
    const double s = dot(hidden, out, dim);
    const double y = label == Label::positive ? 1.0 : 0.0;
    const double loss = label == Label::positive ? -log_logistic(s) : -log_logistic(-s);
    const auto g = static_cast<float>(logistic(s) - y);
    axpy(g, out, grad, dim);
    axpy(static_cast<float>(-alpha) * g, hidden, out, dim);
    return loss;
}

}  // namespace

std::string to_string(Algorithm algo) {
    return algo == Algorithm::cbow ? "cbow" : "skipgram";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "cbow") return Algorithm::cbow;
    if (name == "sg" || name == "skipgram") return Algorithm::skipgram;
    throw ValidationError("unknown algorithm '" + std::string(name) + "' (expected cbow or sg)");
}

void TrainingConfig::validate() const {
    auto fail = [](const std::string &msg) { throw ValidationError(msg); };
    if (dim < 1) fail("dim must be >= 1");
    if (window < 1) fail("window must be >= 1");
    if (min_count < 1) fail("min_count must be >= 1");
    if (negatives < 1) fail("negatives must be >= 1");
    if (epochs < 1) fail("epochs must be >= 1");
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) fail("alpha0 must be > 0");
    if (!(alpha_min >= 0.0) || alpha_min > alpha0) fail("alpha_min must be in [0, alpha0]");
    if (!(sample >= 0.0) || !std::isfinite(sample)) fail("sample must be >= 0");
    if (workers < 1) fail("workers must be >= 1");
    if (!(table_power > 0.0 && table_power <= 1.0)) fail("table_power must be in (0, 1]");
    if (table_size < 1) fail("table_size must be >= 1");
}

Rng make_worker_rng(std::uint64_t seed, std::size_t worker) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(worker),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(worker) >> 32)};
    return Rng(seq);
}

Parameters::Parameters(std::size_t vocab_size, std::size_t dim)
    : vocab_size_(vocab_size), dim_(dim), input_(vocab_size * dim, 0.0f),
      output_(vocab_size * dim, 0.0f) {}

bool Parameters::all_finite() const {
    auto finite = [](float x) { return std::isfinite(x); };
    return std::all_of(input_.begin(), input_.end(), finite) &&
           std::all_of(output_.begin(), output_.end(), finite);
}

Parameters init_parameters(std::size_t vocab_size, std::size_t dim, std::uint64_t seed) {
    if (vocab_size < 1) throw ValidationError("vocab_size must be >= 1");
    if (dim < 1) throw ValidationError("dim must be >= 1");
    Parameters params(vocab_size, dim);
    Rng rng = make_worker_rng(seed, std::numeric_limits<std::uint32_t>::max());
    const double bound = 0.5 / static_cast<double>(dim);
    std::uniform_real_distribution<double> uniform(-bound, bound);
    for (auto &x : params.input()) x = static_cast<float>(uniform(rng));
    return params;
}

double logistic(double s) {
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

double log_logistic(double s) {
    if (s >= 0.0) return -std::log1p(std::exp(-s));
    return s - std::log1p(std::exp(s));
}

PairGradient pair_loss_and_grads(std::span<const double> center, std::span<const double> output,
                                 Label label) {
    if (center.size() != output.size()) throw ValidationError("vector size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < center.size(); ++i) s += center[i] * output[i];
    const double y = label == Label::positive ? 1.0 : 0.0;
    PairGradient out;
    out.loss = label == Label::positive ? -log_logistic(s) : -log_logistic(-s);
    const double g = logistic(s) - y;
    out.center.resize(center.size());
    out.output.resize(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) {
        out.center[i] = g * output[i];
        out.output[i] = g * center[i];
    }
    return out;
}

void sample_negatives(const NegativeSamplingTable &table, WordId target, std::size_t count,
                      Rng &rng, std::vector<WordId> &out) {
    out.clear();
    if (table.support() == 0 || (table.support() == 1 && table[0] == target)) return;
    out.reserve(count);
    while (out.size() < count) {
        const WordId id = table.draw(rng);
        if (id != target) out.push_back(id);
    }
}

double cbow_update(std::span<const WordId> context, WordId target,
                   std::span<const WordId> negatives, Parameters &params, double alpha,
                   StepWorkspace &ws) {
    if (context.empty()) throw ValidationError("cbow_update needs a non-empty context");
    const std::size_t dim = params.dim();
    ws.hidden.assign(dim, 0.0f);
    ws.grad.assign(dim, 0.0f);
    for (WordId c : context) axpy(1.0f, params.input_row(c).data(), ws.hidden.data(), dim);
    const float inv_n = 1.0f / static_cast<float>(context.size());
    for (auto &h : ws.hidden) h *= inv_n;

    double loss = apply_pair(ws.hidden.data(), params.output_row(target).data(), ws.grad.data(),
                             dim, Label::positive, alpha);
    for (WordId neg : negatives) {
        loss += apply_pair(ws.hidden.data(), params.output_row(neg).data(), ws.grad.data(), dim,
                           Label::negative, alpha);
    }
    const float scale = static_cast<float>(-alpha) * inv_n;
    for (WordId c : context) axpy(scale, ws.grad.data(), params.input_row(c).data(), dim);
    return loss;
}

double skipgram_update(WordId center, WordId context, std::span<const WordId> negatives,
                       Parameters &params, double alpha, StepWorkspace &ws) {
    const std::size_t dim = params.dim();
    ws.grad.assign(dim, 0.0f);
    float *predictor = params.input_row(center).data();

    double loss = apply_pair(predictor, params.output_row(context).data(), ws.grad.data(), dim,
                             Label::positive, alpha);
    for (WordId neg : negatives) {
        loss += apply_pair(predictor, params.output_row(neg).data(), ws.grad.data(), dim,
                           Label::negative, alpha);
    }
    axpy(static_cast<float>(-alpha), ws.grad.data(), predictor, dim);
    return loss;
}

double cbow_step(std::span<const WordId> context, WordId target, Parameters &params,
                 const NegativeSamplingTable &table, std::size_t negatives, double alpha, Rng &rng,
                 StepWorkspace &ws) {
    sample_negatives(table, target, negatives, rng, ws.negatives);
    return cbow_update(context, target, ws.negatives, params, alpha, ws);
}

double cbow_step(std::span<const WordId> context, WordId target, Parameters &params,
                 const NegativeSamplingTable &table, std::size_t negatives, double alpha,
                 Rng &rng) {
    StepWorkspace ws;
    return cbow_step(context, target, params, table, negatives, alpha, rng, ws);
}

double skipgram_step(WordId center, WordId context, Parameters &params,
                     const NegativeSamplingTable &table, std::size_t negatives, double alpha,
                     Rng &rng, StepWorkspace &ws) {
    sample_negatives(table, context, negatives, rng, ws.negatives);
    return skipgram_update(center, context, ws.negatives, params, alpha, ws);
}

double skipgram_step(WordId center, WordId context, Parameters &params,
                     const NegativeSamplingTable &table, std::size_t negatives, double alpha,
                     Rng &rng) {
    StepWorkspace ws;
    return skipgram_step(center, context, params, table, negatives, alpha, rng, ws);
}

double lr_schedule(std::uint64_t words_processed, std::uint64_t total_words, double alpha0,
                   double alpha_min) {
    if (total_words == 0) return alpha0;
    const double progress =
        std::min(1.0, static_cast<double>(words_processed) / static_cast<double>(total_words));
    return std::max(alpha_min, alpha0 - (alpha0 - alpha_min) * progress);
}

EncodedCorpus encode_corpus(const SentenceSource &sentences, std::uint64_t min_count) {
    if (min_count == 0) throw ValidationError("min_count must be >= 1");

    // Provisional ids in first-seen order, remapped once the vocabulary exists.
    std::unordered_map<std::string, WordId, TransparentStringHash, std::equal_to<>> provisional;
    std::vector<const std::string *> names;
    std::vector<std::uint64_t> counts;
    std::vector<WordId> tokens;
    std::vector<std::size_t> offsets{0};

    sentences([&](const Sentence &sentence) {
        for (const auto &word : sentence) {
            auto it = provisional.find(word);
            if (it == provisional.end()) {
                if (names.size() == std::numeric_limits<WordId>::max()) {
                    throw ValidationError("too many distinct words for 32-bit ids");
                }
                it = provisional.emplace(word, static_cast<WordId>(names.size())).first;
                names.push_back(&it->first);
                counts.push_back(0);
            }
            ++counts[it->second];
            tokens.push_back(it->second);
        }
        offsets.push_back(tokens.size());
    });

    std::vector<std::pair<std::string, std::uint64_t>> pairs;
    pairs.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) pairs.emplace_back(*names[i], counts[i]);

    EncodedCorpus corpus;
    corpus.vocab = Vocabulary::build(std::move(pairs), min_count, tokens.size());

    constexpr WordId kDropped = std::numeric_limits<WordId>::max();
    std::vector<WordId> remap(names.size(), kDropped);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (auto id = corpus.vocab.find(*names[i])) remap[i] = *id;
    }

    corpus.tokens.reserve(corpus.vocab.total_tokens());
    for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
        const auto before = corpus.tokens.size();
        for (std::size_t t = offsets[s]; t < offsets[s + 1]; ++t) {
            if (remap[tokens[t]] != kDropped) corpus.tokens.push_back(remap[tokens[t]]);
        }
        if (corpus.tokens.size() > before) corpus.offsets.push_back(corpus.tokens.size());
    }
    return corpus;
}

TrainedParameters train_parameters(const EncodedCorpus &corpus, const TrainingConfig &config,
                                   const TrainOptions &options) {
    config.validate();
    if (corpus.vocab.empty() || corpus.tokens.empty()) throw EmptyVocabularyError();

    const auto start = std::chrono::steady_clock::now();
    const auto table = detail::make_table(corpus.vocab, config);
    Parameters params = init_parameters(corpus.vocab.size(), config.dim, config.seed);
    const detail::SentenceKernel kernel(config, corpus.vocab, table, params);

    const std::uint64_t total_words = corpus.tokens.size() * config.epochs;
    const std::size_t n_sentences = corpus.sentence_count();
    const std::size_t workers = std::min(config.workers, std::max<std::size_t>(1, n_sentences));

    // Shared progress counter; relaxed ordering is enough for a learning-rate
    // schedule.
    std::atomic<std::uint64_t> processed{0};
    double loss_sum = 0.0;
    std::uint64_t updates = 0;

    // Hogwild: workers read and write `params` rows without synchronization.
#pragma omp parallel num_threads(static_cast<int>(workers)) reduction(+ : loss_sum, updates)
    {
        const auto worker = static_cast<std::size_t>(omp_get_thread_num());
        const auto n_workers = static_cast<std::size_t>(omp_get_num_threads());

        // Contiguous shards balanced by token count.
        auto shard_start = [&](std::size_t w) -> std::size_t {
            if (w >= n_workers) return n_sentences;
            const std::size_t target = corpus.tokens.size() * w / n_workers;
            return static_cast<std::size_t>(
                std::lower_bound(corpus.offsets.begin(), corpus.offsets.end() - 1, target) -
                corpus.offsets.begin());
        };
        const std::size_t first = shard_start(worker);
        const std::size_t last = shard_start(worker + 1);

        Rng rng = make_worker_rng(config.seed, worker);
        detail::SentenceScratch scratch;
        std::uint64_t next_report = options.progress_every;

        for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
            for (std::size_t s = first; s < last; ++s) {
                const std::span<const WordId> sentence(corpus.tokens.data() + corpus.offsets[s],
                                                       corpus.offsets[s + 1] - corpus.offsets[s]);
                const auto before = processed.fetch_add(sentence.size(), std::memory_order_relaxed);
                const double alpha =
                    lr_schedule(before, total_words, config.alpha0, config.alpha_min);
                kernel.run(sentence, alpha, rng, scratch);

                if (worker == 0 && options.on_progress && before >= next_report) {
                    const double secs = std::chrono::duration<double>(
                                            std::chrono::steady_clock::now() - start)
                                            .count();
                    options.on_progress({before, total_words, alpha,
                                         secs > 0 ? static_cast<double>(before) / secs : 0.0});
                    next_report = before + options.progress_every;
                }
            }
        }
        loss_sum += scratch.loss;
        updates += scratch.updates;
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    TrainStats stats;
    stats.raw_tokens = corpus.vocab.raw_tokens();
    stats.retained_tokens = corpus.tokens.size();
    stats.words_processed = processed.load();
    stats.workers = workers;
    stats.seconds = secs;
    stats.words_per_second = secs > 0 ? static_cast<double>(stats.words_processed) / secs : 0.0;
    stats.mean_step_loss = updates > 0 ? loss_sum / static_cast<double>(updates) : 0.0;
    if (options.on_progress) {
        options.on_progress({stats.words_processed, total_words,
                             lr_schedule(total_words, total_words, config.alpha0, config.alpha_min),
                             stats.words_per_second});
    }
    return {std::move(params), stats};
}

TrainResult train(const EncodedCorpus &corpus, const TrainingConfig &config,
                  const TrainOptions &options) {
    auto trained = train_parameters(corpus, config, options);
    return {EmbeddingModel(corpus.vocab, std::move(trained.params.input()), config.dim),
            trained.stats};
}

TrainResult train(const SentenceSource &sentences, const TrainingConfig &config,
                  const TrainOptions &options) {
    config.validate();
    return train(encode_corpus(sentences, config.min_count), config, options);
}

TrainResult train(const CorpusConfig &corpus, const TrainingConfig &config,
                  const TrainOptions &options) {
    return train(file_source(corpus), config, options);
}

}  // namespace lexsim
