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

// Serial training driver. No OpenMP, no atomics: one RNG, sentences in
// corpus order, epoch after epoch.

#include <chrono>

#include "lexsim/error.hpp"
#include "lexsim/trainer.hpp"
#include "sentence_kernel.hpp"

namespace lexsim {

TrainedParameters train_parameters_reference(const EncodedCorpus &corpus,
                                             const TrainingConfig &config) {
    config.validate();
    if (corpus.vocab.empty() || corpus.tokens.empty()) throw EmptyVocabularyError();

    const auto start = std::chrono::steady_clock::now();
    const auto table = detail::make_table(corpus.vocab, config);
    Parameters params = init_parameters(corpus.vocab.size(), config.dim, config.seed);
    const detail::SentenceKernel kernel(config, corpus.vocab, table, params);

    const std::uint64_t total_words = corpus.tokens.size() * config.epochs;
    std::uint64_t processed = 0;
    Rng rng = make_worker_rng(config.seed, 0);
    detail::SentenceScratch scratch;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t s = 0; s < corpus.sentence_count(); ++s) {
            const std::span<const WordId> sentence(corpus.tokens.data() + corpus.offsets[s],
                                                   corpus.offsets[s + 1] - corpus.offsets[s]);
            const double alpha =
                lr_schedule(processed, total_words, config.alpha0, config.alpha_min);
            processed += sentence.size();
            kernel.run(sentence, alpha, rng, scratch);
        }
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    TrainStats stats;
    stats.raw_tokens = corpus.vocab.raw_tokens();
    stats.retained_tokens = corpus.tokens.size();
    stats.words_processed = processed;
    stats.workers = 1;
    stats.seconds = secs;
    stats.words_per_second = secs > 0 ? static_cast<double>(processed) / secs : 0.0;
    stats.mean_step_loss =
        scratch.updates > 0 ? scratch.loss / static_cast<double>(scratch.updates) : 0.0;
    return {std::move(params), stats};
}

TrainResult train_reference(const EncodedCorpus &corpus, const TrainingConfig &config) {
    auto trained = train_parameters_reference(corpus, config);
    return {EmbeddingModel(corpus.vocab, std::move(trained.params.input()), config.dim),
            trained.stats};
}

}  // namespace lexsim
